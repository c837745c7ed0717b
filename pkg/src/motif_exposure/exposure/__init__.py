from .conditions import ConditionRegistry
from .replicates import ReplicateCache, build_replicate_cache
from .probability import estimate_membership_prob, check_positivity, write_probability_table
