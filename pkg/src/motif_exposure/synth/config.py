import json
import tomllib
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from motif_exposure.etc.consts import ANALYSIS_CONFIG
from motif_exposure.etc.enums import Assumption, DesignKind, EstimatorKind, MetricKind, ScoreKind
from motif_exposure.etc.errors import ConfigurationParsingException, ArtifactNotFoundException, \
    SchemaException
from motif_exposure.model.motif import MotifSchema, default_schema


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', use_enum_values=False)


class NetworkSpec(_Section):
    """
    Either a Watts-Strogatz graph or an edge list on disk.
    """
    kind: Literal['watts-strogatz', 'edge-list'] = 'watts-strogatz'
    n: int = Field(4096, ge=3)
    k: int = Field(10, ge=2)
    beta: float = Field(0.5, ge=0.0, le=1.0)
    path: Path | None = None
    attrs: Path | None = None

    @model_validator(mode='after')
    def check_source(self) -> 'NetworkSpec':
        if self.kind == 'edge-list' and self.path is None:
            raise ValueError('an edge-list network needs a path')
        if self.kind == 'watts-strogatz':
            if self.k % 2:
                raise ValueError(f'k must be even, got {self.k}')
            if self.k >= self.n:
                raise ValueError(f'k={self.k} must be below n={self.n}')
        return self


class DesignSpec(_Section):
    kind: DesignKind = DesignKind.BERNOULLI
    p: float = Field(ANALYSIS_CONFIG.treatment_probability, gt=0.0, lt=1.0)
    levels: int = Field(9, ge=1, description='Bisection levels, 2**levels clusters')


class TreeSpec(_Section):
    enabled: bool = True
    score: ScoreKind = ScoreKind.TSTAT
    gamma: float = Field(1.96, ge=0.0)
    kappa: int = Field(100, ge=2)
    max_depth: int | None = Field(None, ge=0)


class KnnSpec(_Section):
    enabled: bool = True
    metric: MetricKind = MetricKind.IDENTICAL
    k_grid: list[float] = Field(default_factory=lambda: list(ANALYSIS_CONFIG.k_grid_fractions))
    assumption: Assumption = Assumption.NON_NEGATIVE

    @field_validator('k_grid')
    @classmethod
    def check_grid(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError('the K grid is empty')
        if any(not 0.0 < f <= 1.0 for f in value):
            raise ValueError('K grid entries are fractions of N in (0, 1]')
        return value


class HarnessConfig(_Section):
    """
    One synthetic experiment: network, design, outcome model and the analyses to run.
    """
    network: NetworkSpec = Field(default_factory=NetworkSpec)
    design: DesignSpec = Field(default_factory=DesignSpec)
    schema_codes: list[str] = Field(default_factory=lambda: default_schema().codes, alias='schema')
    replicates: int = Field(ANALYSIS_CONFIG.replicates, ge=1)
    bootstrap: int = Field(ANALYSIS_CONFIG.bootstrap_replicates, ge=2)
    noise_sigma: float = Field(0.25, ge=0.0)
    q: float = Field(0.5, ge=0.0, lt=1.0)
    epsilon: float = Field(ANALYSIS_CONFIG.epsilon, ge=0.0)
    delta: float = Field(ANALYSIS_CONFIG.delta, ge=0.0, lt=1.0)
    estimator: EstimatorKind = EstimatorKind.HAJEK
    tree: TreeSpec = Field(default_factory=TreeSpec)
    knn: KnnSpec = Field(default_factory=KnnSpec)
    seeds: list[int] = Field(default_factory=lambda: [0])

    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    @field_validator('schema_codes')
    @classmethod
    def check_schema(cls, value: list[str]) -> list[str]:
        try:
            schema = MotifSchema.parse(value)
        except SchemaException as e:
            raise ValueError(e.message) from e
        if '2-1' not in schema.codes:
            raise ValueError('the harness schema needs the 2-1 dimension')
        return schema.codes

    @property
    def schema(self) -> MotifSchema:
        return MotifSchema.parse(self.schema_codes)

    def snapshot(self) -> dict:
        return self.model_dump(mode='json', by_alias=True)


PRESETS: dict[str, dict] = {
    'ws-bernoulli': {},
    'ws-cluster': {
        'design': {'kind': 'cluster', 'levels': 9},
    },
    'external': {
        'network': {'kind': 'edge-list'},
        'design': {'kind': 'cluster', 'levels': 9},
        'tree': {'enabled': False},
    },
}


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _validate(payload: dict) -> HarnessConfig:
    try:
        return HarnessConfig.model_validate(payload)
    except ValidationError as e:
        fields = ', '.join(
            '.'.join(str(part) for part in error['loc']) or '<root>'
            for error in e.errors()
        )
        raise ConfigurationParsingException(f'Invalid harness configuration in: {fields}') from e


def preset_config(name: str, overrides: dict = None) -> HarnessConfig:
    """
    A named preset with optional overrides merged on top.
    """
    if name not in PRESETS:
        raise ConfigurationParsingException(
            f'Unknown preset {name}, expected one of {", ".join(sorted(PRESETS))}'
        )

    return _validate(_merge(PRESETS[name], overrides or {}))


def load_harness_config(path: str | Path, preset: str = None) -> HarnessConfig:
    """
    Load a harness configuration from a JSON or TOML file.
    :param path: The file, format chosen by suffix
    :param preset: Optional preset the file is merged on top of
    :return: The validated configuration
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFoundException(f'Harness configuration not found at {path}')

    try:
        if path.suffix == '.toml':
            with open(path, 'rb') as file:
                payload = tomllib.load(file)
        else:
            with open(path, 'r', encoding='utf-8') as file:
                payload = json.load(file)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigurationParsingException(
            f'Cannot parse harness configuration {path}: {e}'
        ) from e

    if preset:
        return preset_config(preset, payload)

    return _validate(payload)


def override_config(config: HarnessConfig, overrides: dict) -> HarnessConfig:
    """
    A copy of a configuration with overrides merged on top, validated again.
    """
    return _validate(_merge(config.snapshot(), overrides))
