from .metric import fit_metric
from .sweep import SWEEP_COLUMNS, knn_condition, default_k_grid, ReferenceRanks, sweep_k, \
    select_estimate, sweep_frame, write_sweep_csv, read_sweep_csv
