"""Run configuration: a pydantic schema loaded from YAML or JSON."""
import json
import logging
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from core.errors import ConfigurationError
from explain import SurrogateParams
from perturb import OP_TYPES, SEVERITIES

logger = logging.getLogger(__name__)


class DatasetEntry(BaseModel):
    name: str
    path: Path
    format: Literal["jsonl", "csv"] = "jsonl"
    delimiter: str = ","
    sample_size: int = Field(200, ge=1)

    @field_validator("name")
    @classmethod
    def _plain_name(cls, value: str) -> str:
        if not value or "/" in value:
            raise ValueError(f"dataset name must be non-empty and free of '/', got {value!r}")
        return value


class ModelEntry(BaseModel):
    name: str
    kind: Literal["classifier_endpoint", "completion_endpoint", "builtin_toy"]
    labels: list[str] = Field(min_length=2)
    base_url: str | None = None
    prompt_template: str | None = None
    label_surface_forms: dict[str, str] | None = None
    per_call_cost: float = Field(1.0, gt=0)
    auth_env: str | None = None
    lexicon: dict[str, float] | None = None
    lexicon_path: Path | None = None
    family: str | None = None
    scale_b: float | None = None
    timeout_s: float = Field(30.0, gt=0)

    @model_validator(mode="after")
    def _complete_adapter(self):
        if self.kind == "completion_endpoint":
            if not self.prompt_template or "{x}" not in self.prompt_template:
                raise ValueError(f"model {self.name}: completion endpoints need a prompt_template with a {{x}} slot")
            missing = [label for label in self.labels if not (self.label_surface_forms or {}).get(label)]
            if missing:
                raise ValueError(f"model {self.name}: no label surface form for {missing}")
        if self.kind == "builtin_toy" and self.lexicon is None and self.lexicon_path is None:
            raise ValueError(f"model {self.name}: builtin_toy models need a lexicon or lexicon_path")
        if self.kind != "builtin_toy" and not self.base_url:
            raise ValueError(f"model {self.name}: endpoint models need a base_url")
        return self


class PerturbationSettings(BaseModel):
    operators: list[str] = Field(default_factory=lambda: list(OP_TYPES))
    severities: list[float] = Field(default_factory=lambda: list(SEVERITIES))
    lexicon_path: Path | None = None
    shuffle_window: int = Field(3, ge=2)

    @field_validator("operators")
    @classmethod
    def _known_operators(cls, value: list[str]) -> list[str]:
        unknown = [op for op in value if op not in OP_TYPES]
        if unknown:
            raise ValueError(f"unknown operators {unknown}; expected a subset of {OP_TYPES}")
        return value

    @field_validator("severities")
    @classmethod
    def _known_severities(cls, value: list[float]) -> list[float]:
        unknown = [s for s in value if s not in SEVERITIES]
        if unknown:
            raise ValueError(f"severities {unknown} are not in {SEVERITIES}")
        return value

    def cells(self) -> list[tuple[str, float]]:
        return [(op, s) for op in self.operators for s in self.severities]


class MTSettings(BaseModel):
    kind: Literal["none", "identity", "dictionary", "http"] = "none"
    base_url: str | None = None
    forward_table: Path | None = None
    backward_table: Path | None = None
    auth_env: str | None = None
    timeout_s: float = Field(30.0, gt=0)

    @model_validator(mode="after")
    def _complete(self):
        if self.kind == "http" and not self.base_url:
            raise ValueError("mt.kind=http needs a base_url")
        if self.kind == "dictionary" and (self.forward_table is None or self.backward_table is None):
            raise ValueError("mt.kind=dictionary needs forward_table and backward_table")
        return self


class ExplainerSettings(BaseModel):
    method: Literal["loo", "surrogate"] = "loo"
    num_samples: int = Field(200, ge=3)
    mask_probability: float = Field(0.5, gt=0, le=1)
    kernel_width: float = Field(0.75, gt=0)
    topk: int = Field(5, ge=1)

    def surrogate_params(self) -> SurrogateParams:
        return SurrogateParams(self.num_samples, self.mask_probability, self.kernel_width)


class BootstrapSettings(BaseModel):
    iterations: int = Field(10_000, ge=1)
    level: float = Field(0.95, gt=0, lt=1)


class CostSettings(BaseModel):
    tier_thresholds: tuple[float, float] = (0.10, 0.20)

    @field_validator("tier_thresholds")
    @classmethod
    def _increasing(cls, value: tuple[float, float]) -> tuple[float, float]:
        if not 0.0 < value[0] < value[1] < 1.0:
            raise ValueError(f"tier thresholds must be strictly increasing in (0, 1), got {value}")
        return value


class RunConfig(BaseModel):
    run_name: str = "run"
    global_seed: int = 0
    output_dir: Path = Path("runs")
    datasets: list[DatasetEntry] = Field(min_length=1)
    models: list[ModelEntry] = Field(min_length=1)
    perturbation: PerturbationSettings = Field(default_factory=PerturbationSettings)
    mt: MTSettings = Field(default_factory=MTSettings)
    explainer: ExplainerSettings = Field(default_factory=ExplainerSettings)
    bootstrap: BootstrapSettings = Field(default_factory=BootstrapSettings)
    cost: CostSettings = Field(default_factory=CostSettings)
    concurrency: int = Field(4, ge=1)

    @model_validator(mode="after")
    def _unique_names(self):
        for kind, names in (("dataset", [d.name for d in self.datasets]), ("model", [m.name for m in self.models])):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            if duplicates:
                raise ValueError(f"duplicate {kind} names: {duplicates}")
        return self

    @property
    def run_dir(self) -> Path:
        return self.output_dir / self.run_name

    def echo(self) -> dict:
        return self.model_dump(mode="json")

    def resolve_paths(self, base: Path) -> "RunConfig":
        def resolve(path: Path | None) -> Path | None:
            if path is None or path.is_absolute():
                return path
            return (base / path).resolve()

        self.output_dir = resolve(self.output_dir)
        for dataset in self.datasets:
            dataset.path = resolve(dataset.path)
        for model in self.models:
            model.lexicon_path = resolve(model.lexicon_path)
        self.perturbation.lexicon_path = resolve(self.perturbation.lexicon_path)
        self.mt.forward_table = resolve(self.mt.forward_table)
        self.mt.backward_table = resolve(self.mt.backward_table)
        return self


def parse_config(data: dict, base: Path | None = None) -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid run config:\n{e}") from e
    return config.resolve_paths(base) if base is not None else config


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist")
    with open(path, "r", encoding="utf-8") as f:
        if path.suffix.lower() == ".json":
            data = json.load(f)
        else:
            data = yaml.safe_load(f)
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must contain a mapping at top level")
    logger.info(f"Loaded run config from {path}")
    return parse_config(data, path.parent.resolve())
