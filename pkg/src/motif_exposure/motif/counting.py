from itertools import combinations

import numpy as np

from motif_exposure.etc.enums import DimensionKind, Shape
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.model.assignment import AssignmentVector
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifCounts, MotifSchema, SamplingConfig
from .census import ego_view


def as_treatment(z: AssignmentVector | np.ndarray, node_count: int) -> np.ndarray:
    """
    The 0/1 treatment array of an assignment, checked against the graph size.
    """
    array = z.z if isinstance(z, AssignmentVector) else np.asarray(z)
    if len(array) != node_count:
        raise ArgumentException(
            f'Assignment has {len(array)} entries, graph has {node_count} nodes'
        )

    return array.astype(np.int64)


def count_causal_motifs(g: Graph,
                        i: int,
                        z: AssignmentVector | np.ndarray,
                        schema: MotifSchema,
                        sampling: SamplingConfig = None,
                        ) -> MotifCounts:
    """
    Count motifs and causal motifs around one ego by direct enumeration.

    Dyads are always counted, triads when the schema has a triad or 4-star
    dimension, 4-stars when it has a 4-star dimension. Egos above the degree cap
    are counted on their sampled neighbors.
    :param g: The graph
    :param i: The ego node index
    :param z: The assignment
    :param schema: The representation schema
    :param sampling: Neighbor sampling for high-degree egos
    :return: The ego's motif counts
    """
    i = g.check_node(i)
    z = as_treatment(z, g.node_count)
    sampling = sampling or SamplingConfig()

    view, sampled = ego_view(g, i, sampling)
    shapes = schema.shapes() | {Shape.DYAD}
    if shapes & {Shape.OPEN_STAR}:
        shapes |= {Shape.OPEN_TRIAD, Shape.CLOSED_TRIAD}
    if shapes & {Shape.OPEN_TRIAD, Shape.CLOSED_TRIAD}:
        shapes |= {Shape.OPEN_TRIAD, Shape.CLOSED_TRIAD}

    totals = {shape: 0 for shape in shapes}
    causal = {(shape, t): 0 for shape in shapes for t in range(shape.arity + 1)}

    totals[Shape.DYAD] = len(view)
    treated = int(z[view].sum())
    causal[(Shape.DYAD, 1)] = treated
    causal[(Shape.DYAD, 0)] = len(view) - treated

    if Shape.CLOSED_TRIAD in shapes:
        for a, b in combinations(view.tolist(), 2):
            shape = Shape.CLOSED_TRIAD if g.has_edge(a, b) else Shape.OPEN_TRIAD
            totals[shape] += 1
            causal[(shape, int(z[a] + z[b]))] += 1

    if Shape.OPEN_STAR in shapes:
        for a, b, c in combinations(view.tolist(), 3):
            if g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c):
                continue
            totals[Shape.OPEN_STAR] += 1
            causal[(Shape.OPEN_STAR, int(z[a] + z[b] + z[c]))] += 1

    attr_totals, attr_causal = {}, {}
    for dim in schema.dims:
        if dim.kind != DimensionKind.ATTRIBUTE:
            continue
        key = (dim.attr_column, dim.attr_value)
        matching = view[g.attribute(dim.attr_column)[view] == dim.attr_value]
        matching_treated = int(z[matching].sum())
        attr_totals[key] = len(matching)
        attr_causal[(*key, 1)] = matching_treated
        attr_causal[(*key, 0)] = len(matching) - matching_treated

    return MotifCounts(
        i,
        totals,
        causal,
        attr_totals=attr_totals,
        attr_causal=attr_causal,
        sampled=sampled,
    )
