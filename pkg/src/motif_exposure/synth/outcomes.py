import networkx as nx
import numpy as np
import scipy.sparse as sp

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.graph.core import edge_common_neighbors, from_networkx
from motif_exposure.model.assignment import AssignmentVector
from motif_exposure.model.graph import Graph
from motif_exposure.model.synth import PotentialOutcomeModel, GroundTruth
from motif_exposure.motif.counting import as_treatment


DEFAULT_NOISE_SIGMA = 0.25


def generate_watts_strogatz(n: int, k: int, beta: float, seed: int) -> Graph:
    """
    Watts-Strogatz small world graph with exactly n * k / 2 edges.
    :param n: Number of nodes
    :param k: Even ring degree, below n
    :param beta: Rewiring probability in [0, 1]
    :param seed: Seed of the rewiring
    :return: The graph
    """
    if k < 2 or k % 2:
        raise ArgumentException(f'Ring degree k must be even and at least 2, got {k}')
    if k >= n:
        raise ArgumentException(f'Ring degree k={k} must be below the node count n={n}')
    if not 0.0 <= beta <= 1.0:
        raise ArgumentException(f'Rewiring probability must lie in [0, 1], got {beta}')

    nx_graph = nx.watts_strogatz_graph(n, k, beta, seed=seed)
    LOGGER.debug('Watts-Strogatz graph: n=%d, k=%d, beta=%.3f, seed=%d', n, k, beta, seed)

    return from_networkx(nx_graph)


def interference_weights(g: Graph, X: np.ndarray) -> sp.csr_matrix:  # pylint: disable=invalid-name
    """
    w_ij proportional to (X_j + 1) times the number of friends i and j share,
    normalised per row. Rows without any shared friend stay zero.
    """
    raw = (np.asarray(X, dtype=np.float64)[g.indices] + 1.0) * edge_common_neighbors(g)
    weights = sp.csr_matrix(
        (raw, g.indices.copy(), g.indptr.copy()),
        shape=(g.node_count, g.node_count),
    )

    totals = np.asarray(weights.sum(axis=1)).ravel()
    scale = np.divide(1.0, totals, out=np.zeros_like(totals), where=totals > 0)
    weights = sp.csr_matrix(sp.diags(scale) @ weights)
    weights.eliminate_zeros()

    return weights


def attach_outcome_model(g: Graph,
                         noise_sigma: float = DEFAULT_NOISE_SIGMA,
                         seed: int = 0,
                         X: np.ndarray = None,      # pylint: disable=invalid-name
                         ) -> PotentialOutcomeModel:
    """
    Potential outcome model with a Bernoulli(0.5) covariate and common-friend
    interference weights.
    :param g: The graph
    :param noise_sigma: Standard deviation of the additive noise
    :param seed: Seed of the covariate and the noise
    :param X: Covariate to use instead of a random draw
    :return: The model
    """
    if noise_sigma < 0:
        raise ArgumentException(f'noise_sigma must be non-negative, got {noise_sigma}')

    if X is None:
        draws = np.random.default_rng(seed).random(g.node_count)
        X = (draws < 0.5).astype(np.int8)     # pylint: disable=invalid-name
    elif len(X) != g.node_count:
        raise ArgumentException(f'Covariate has {len(X)} entries, graph has {g.node_count} nodes')

    W = interference_weights(g, X)      # pylint: disable=invalid-name
    isolated = int((np.asarray(W.sum(axis=1)).ravel() == 0).sum())
    LOGGER.debug('%d nodes have no interference weights', isolated)

    return PotentialOutcomeModel(g, np.asarray(X), W, noise_sigma, seed)


def realize_outcomes(model: PotentialOutcomeModel,
                     z: AssignmentVector | np.ndarray,
                     noise: bool = True,
                     call: int = 0,
                     ) -> np.ndarray:
    """
    Evaluate the outcome model under an assignment.
    :param model: The model
    :param z: The assignment
    :param noise: Add noise seeded by (model seed, call)
    :param call: Index of the evaluation in the noise stream
    :return: Outcome vector
    """
    z = as_treatment(z, model.node_count).astype(np.float64)
    y = (1.0 + model.X) * (1.0 + z + model.W @ z)

    if noise and model.noise_sigma > 0:
        rng = np.random.default_rng(np.random.SeedSequence([int(model.seed), int(call)]))
        y = y + rng.normal(0.0, model.noise_sigma, size=model.node_count)

    return y


def ground_truth(model: PotentialOutcomeModel) -> GroundTruth:
    """
    Noise-free means under global treatment and global control.
    """
    n = model.node_count

    return GroundTruth(
        realize_outcomes(model, np.ones(n, dtype=np.int8), noise=False).mean(),
        realize_outcomes(model, np.zeros(n, dtype=np.int8), noise=False).mean(),
    )
