from .design import bernoulli_assignment, cluster_assignment, assign, draw_replicate, \
    draw_replicates, replicate_seed
from .partition import recursive_kl_partition, cut_size
from .io import write_assignment, read_assignment, write_partition, read_partition
