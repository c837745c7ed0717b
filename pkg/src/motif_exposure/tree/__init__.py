from .fit import honest_split, candidate_thresholds, SplitSearch, fit_tree, tree_positivity
from .effect import GATE_DEGENERATE, tree_gate_effect
from .render import write_tree_json, read_tree_json, to_dot, write_tree_dot, render_ascii, \
    leaf_table
