from .config import HarnessConfig, NetworkSpec, DesignSpec, TreeSpec, KnnSpec, PRESETS, \
    preset_config, load_harness_config, override_config
from .harness import replication_seeds, build_network, run_replication, run_harness, \
    summary_frame, write_summary_csv, matched_sweep_frame
from .outcomes import DEFAULT_NOISE_SIGMA, generate_watts_strogatz, interference_weights, \
    attach_outcome_model, realize_outcomes, ground_truth
