import networkx as nx
import numpy as np
import pytest

from motif_exposure.etc.errors import ArgumentException
from motif_exposure.graph.core import to_networkx
from motif_exposure.synth import attach_outcome_model, generate_watts_strogatz, ground_truth, \
    interference_weights, realize_outcomes


class TestWattsStrogatz:
    def test_ring_lattice(self):
        g = generate_watts_strogatz(100, 6, 0.0, seed=0)

        assert (g.degrees == 6).all()
        assert g.edge_count == 300

    def test_rewired_edge_count(self):
        g = generate_watts_strogatz(500, 8, 0.5, seed=1)

        assert g.edge_count == 2000

    @pytest.mark.slow
    def test_random_graph_loses_clustering(self):
        g = generate_watts_strogatz(2000, 10, 1.0, seed=2)

        assert nx.average_clustering(to_networkx(g)) < 0.05

    @pytest.mark.parametrize('n, k, beta', [
        (10, 3, 0.1),
        (10, 0, 0.1),
        (10, 10, 0.1),
        (10, 4, 1.5),
    ])
    def test_validation(self, n, k, beta):
        with pytest.raises(ArgumentException):
            generate_watts_strogatz(n, k, beta, seed=0)


class TestInterferenceWeights:
    def test_triangle(self, triangle_graph):
        weights = interference_weights(triangle_graph, np.zeros(3))

        assert weights.toarray()[0].tolist() == pytest.approx([0.0, 0.5, 0.5])

    def test_covariate_tilts_weights(self, triangle_graph):
        weights = interference_weights(triangle_graph, np.array([0, 1, 0]))

        assert weights.toarray()[0].tolist() == pytest.approx([0.0, 2 / 3, 1 / 3])

    def test_star_has_no_weights(self, star_graph):
        assert interference_weights(star_graph, np.zeros(6)).nnz == 0

    def test_rows_stochastic_or_empty(self, ws_graph):
        covariate = np.random.default_rng(0).integers(0, 2, ws_graph.node_count)
        totals = np.asarray(interference_weights(ws_graph, covariate).sum(axis=1)).ravel()

        assert np.all(np.isclose(totals, 1.0) | np.isclose(totals, 0.0))


class TestOutcomeModel:
    def test_formula(self, triangle_graph):
        model = attach_outcome_model(triangle_graph, 0.0, X=np.array([1, 0, 0]))
        y = realize_outcomes(model, np.array([1, 0, 1]))

        # covariate-weighted: w_10 = w_20 = 2/3
        assert y.tolist() == pytest.approx([5.0, 2.0, 8 / 3])

    def test_noise_is_deterministic(self, ws_graph):
        model = attach_outcome_model(ws_graph, 0.5, seed=4)
        z = np.random.default_rng(1).integers(0, 2, ws_graph.node_count)

        first = realize_outcomes(model, z)
        assert np.array_equal(first, realize_outcomes(model, z))
        assert not np.array_equal(first, realize_outcomes(model, z, call=1))
        assert not np.array_equal(first, realize_outcomes(model, z, noise=False))

    def test_covariate_draw(self, ws_graph):
        model = attach_outcome_model(ws_graph, seed=9)

        assert set(np.unique(model.X)) <= {0, 1}
        assert np.array_equal(model.X, attach_outcome_model(ws_graph, seed=9).X)

    def test_ground_truth(self, triangle_graph, star_graph):
        triangle = ground_truth(attach_outcome_model(triangle_graph, X=np.zeros(3)))
        star = ground_truth(attach_outcome_model(star_graph, X=np.zeros(6)))

        assert triangle.mu1 == pytest.approx(3.0)
        assert triangle.mu0 == pytest.approx(1.0)
        assert triangle.tau == pytest.approx(2.0)
        assert star.tau == pytest.approx(1.0)

    def test_treating_more_units_never_lowers_outcomes(self, ws_graph):
        model = attach_outcome_model(ws_graph, 0.5, seed=6)
        rng = np.random.default_rng(3)

        for call in range(20):
            z = rng.integers(0, 2, ws_graph.node_count)
            flipped = z.copy()
            flipped[rng.choice(np.flatnonzero(z == 0), size=5, replace=False)] = 1

            before = realize_outcomes(model, z, call=call)
            after = realize_outcomes(model, flipped, call=call)

            assert (after - before >= -1e-12).all()
            assert (after[flipped != z] > before[flipped != z]).all()

    def test_validation(self, triangle_graph):
        with pytest.raises(ArgumentException):
            attach_outcome_model(triangle_graph, -1.0)

        with pytest.raises(ArgumentException):
            attach_outcome_model(triangle_graph, X=np.zeros(4))
