"""Deployment economics: explanation cost multipliers and stability tiers.

An LOO explanation costs n + 1 model calls, so relative to one BERT-base call
it costs (n_bar + 1) * c_M, c_M being the model's per-call cost.
"""
from dataclasses import dataclass

from core.errors import ConfigurationError

TIERS = ("regulatory", "balanced", "speed_first")
DEFAULT_THRESHOLDS = (0.10, 0.20)


def explanation_cost(mean_word_count: float, per_call_cost: float) -> float:
    if not mean_word_count > 0:
        raise ValueError(f"mean word count must be positive, got {mean_word_count}")
    if not per_call_cost > 0:
        raise ValueError(f"per-call cost must be positive, got {per_call_cost}")
    return (mean_word_count + 1) * per_call_cost


@dataclass(frozen=True)
class CostProfile:
    model: str
    mean_word_count: float
    per_call_cost: float

    @property
    def cost_multiplier(self) -> float:
        return explanation_cost(self.mean_word_count, self.per_call_cost)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "mean_word_count": self.mean_word_count,
            "per_call_cost": self.per_call_cost,
            "cost_multiplier": self.cost_multiplier,
        }


@dataclass(frozen=True)
class TierAssignment:
    tier: str
    basis: float
    thresholds: tuple[float, float]

    def to_dict(self) -> dict:
        return {"tier": self.tier, "basis": self.basis, "thresholds": list(self.thresholds)}


def validate_thresholds(thresholds) -> tuple[float, float]:
    values = tuple(float(t) for t in thresholds)
    if len(values) != 2 or not 0.0 < values[0] < values[1] < 1.0:
        raise ConfigurationError(f"tier thresholds must be two strictly increasing values in (0, 1), got {thresholds}")
    return values


def assign_tier(avg_flip_rate: float, thresholds=DEFAULT_THRESHOLDS) -> TierAssignment:
    lower, upper = validate_thresholds(thresholds)
    if not 0.0 <= avg_flip_rate <= 1.0:
        raise ValueError(f"flip rate must lie in [0, 1], got {avg_flip_rate}")
    if avg_flip_rate < lower:
        tier = "regulatory"
    elif avg_flip_rate < upper:
        tier = "balanced"
    else:
        tier = "speed_first"
    return TierAssignment(tier, avg_flip_rate, (lower, upper))
