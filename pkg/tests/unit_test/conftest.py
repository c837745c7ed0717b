import numpy as np
import pytest

from motif_exposure.exposure.replicates import ReplicateCache, build_replicate_cache
from motif_exposure.model.assignment import AssignmentVector, RandomizationDesign
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema, RepresentationMatrix
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.representation import build_representation_matrix
from motif_exposure.randomization.design import assign
from motif_exposure.synth.outcomes import attach_outcome_model, generate_watts_strogatz, \
    realize_outcomes


class Experiment:
    """
    A small Bernoulli experiment on a Watts-Strogatz graph with its replicate cache.
    """
    def __init__(self,
                 g: Graph,
                 design: RandomizationDesign,
                 assignment: AssignmentVector,
                 y: np.ndarray,
                 census: MotifCensus,
                 reps: RepresentationMatrix,
                 cache: ReplicateCache,
                 ):
        self.g = g
        self.design = design
        self.assignment = assignment
        self.y = y
        self.census = census
        self.reps = reps
        self.cache = cache

    @property
    def schema(self) -> MotifSchema:
        return self.reps.schema

    @property
    def node_count(self) -> int:
        return self.g.node_count


@pytest.fixture
def path_graph() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def triangle_graph() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star_graph() -> Graph:
    return Graph.from_edges([(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])


@pytest.fixture
def ws_graph() -> Graph:
    return generate_watts_strogatz(200, 6, 0.3, seed=11)


@pytest.fixture
def experiment() -> Experiment:
    g = generate_watts_strogatz(300, 6, 0.3, seed=5)
    schema = MotifSchema.parse('Z,2-1,3c-0,3c-2')
    design = RandomizationDesign.bernoulli(0.5)
    assignment = assign(design, g.node_count, seed=17)
    y = realize_outcomes(attach_outcome_model(g, seed=23), assignment)

    census = MotifCensus(g, schema)
    reps = build_representation_matrix(g, assignment, schema, seed=29, census=census)
    cache = build_replicate_cache(g, design, schema, 60, master_seed=31, census=census)

    return Experiment(g, design, assignment, y, census, reps, cache)
