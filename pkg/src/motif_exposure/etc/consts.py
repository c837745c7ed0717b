import logging
import tempfile
from pathlib import Path
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


CONFIG_PATH = Path(__file__).resolve().parent.parent.parent.parent / 'conf'


class AnalysisConfig(BaseSettings):
    """
    Configuration settings for the motif exposure analysis toolkit.
    """
    model_config = SettingsConfigDict(
        env_prefix='MOTIF_',
        env_file=CONFIG_PATH / '.env',
        env_file_encoding='utf-8',
        secrets_dir='/run/secrets',
    )

    application_name: str = Field(
        'motif-exposure',
        description='Name of the application'
    )
    logging_level: str = Field(
        'INFO',
        description='Logging level for the application'
    )

    treatment_probability: float = Field(
        0.5,
        gt=0.0,
        lt=1.0,
        description='Default treatment probability for Bernoulli and cluster designs',
    )
    replicates: int = Field(
        500,
        ge=1,
        description='Assignment replicates used for Monte Carlo exposure probabilities',
    )
    bootstrap_replicates: int = Field(
        500,
        ge=2,
        description='Bootstrap resamples used for standard errors',
    )
    epsilon: float = Field(
        0.0,
        ge=0.0,
        description='Probability threshold under which a unit counts as violating positivity',
    )
    delta: float = Field(
        0.01,
        ge=0.0,
        lt=1.0,
        description='Tolerated fraction of units violating positivity',
    )

    max_exact_degree: int = Field(
        200,
        ge=2,
        description='Nodes above this degree have their motifs counted on a neighbor sample',
    )
    neighbor_sample_size: int = Field(
        100,
        ge=2,
        description='Number of neighbors sampled for nodes above the exact degree cap',
    )

    quantile_threshold_cutoff: int = Field(
        20000,
        description='Above this many units the tree scans quantile thresholds '
                    'instead of every observed value',
    )
    threshold_quantiles: int = Field(
        256,
        ge=2,
        description='Number of quantile thresholds scanned per dimension in quantile mode',
    )
    honest_fraction: float = Field(
        0.5,
        gt=0.0,
        lt=1.0,
        description='Share of units placed in the training set of the honest tree',
    )
    k_grid_fractions: tuple[float, ...] = Field(
        (0.01, 0.02, 0.05, 0.10, 0.20, 0.50),
        description='Default K grid for nearest-neighbor sweeps, as fractions of N',
    )

    threads: int = Field(
        1,
        ge=1,
        description='Upper bound on worker threads',
    )
    store_driver: str = Field(
        'memory',
        description='Replicate store driver, either memory or disk',
    )
    spill_dir: Path = Field(
        Path(tempfile.gettempdir()) / 'motif-exposure',
        description='Directory holding memory-mapped replicate stores for the disk driver',
    )

    bootstrap_failure_tolerance: float = Field(
        0.10,
        ge=0.0,
        lt=1.0,
        description='Largest tolerated fraction of failed bootstrap resamples',
    )
    focal_max_attempts: int = Field(
        200,
        ge=1,
        description='Rejection attempts per focal unit when re-randomizing ego networks',
    )


ANALYSIS_CONFIG = AnalysisConfig()        # type: ignore

LOGGER = logging.getLogger(ANALYSIS_CONFIG.application_name)
LOGGER.setLevel(ANALYSIS_CONFIG.logging_level.upper())

if not LOGGER.hasHandlers():
    console_handler = logging.StreamHandler()
    console_handler.setLevel(ANALYSIS_CONFIG.logging_level.upper())

    formatter = logging.Formatter(
        fmt='[%(asctime)s] [%(process)d] [%(levelname)s]: %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S %z'
    )
    console_handler.setFormatter(formatter)

    LOGGER.addHandler(console_handler)

LOGGER.debug('Analysis configuration loaded: %s', ANALYSIS_CONFIG.model_dump_json(indent=2))
