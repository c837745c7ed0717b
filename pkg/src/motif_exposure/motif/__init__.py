from .census import MotifCensus, ego_view
from .counting import count_causal_motifs, as_treatment
from .representation import build_representation_matrix, reference_representations, \
    reference_uniforms, draw_uniforms, write_representations, read_representations
