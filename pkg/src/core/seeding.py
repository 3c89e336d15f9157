import hashlib


def stable_hash(*parts) -> int:
    """64-bit seed derived from the string forms of ``parts``.

    Unlike ``hash()``, the value is identical across processes and platforms.
    Floats are rendered with two decimals so severities hash the same however
    they were parsed.
    """
    rendered = "|".join(f"{p:.2f}" if isinstance(p, float) else str(p) for p in parts)
    digest = hashlib.sha256(rendered.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
