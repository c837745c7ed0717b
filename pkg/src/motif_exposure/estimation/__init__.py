from .weighting import weighted_mean, weighted_point, drop_unreachable
from .bootstrap import resample_indices, bootstrap_draws, bootstrap_se, draws_se, \
    percentile_interval
from .gate import estimate_condition, gate_difference, naive_difference
from .inference import build_focal_set, focal_statistic, exact_p_value
from .fractional import fractional_q_conditions, fractional_q_report
