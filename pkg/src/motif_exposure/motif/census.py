import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import DimensionKind, Shape
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.etc.utils import counter_rng
from motif_exposure.graph.core import triangles, four_cliques
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema, SamplingConfig


def ego_view(g: Graph, i: int, sampling: SamplingConfig) -> tuple[np.ndarray, bool]:
    """
    The neighbors an ego's motifs are counted on.

    Egos above the exact degree cap see a fixed uniform sample of their
    neighbors, drawn from (sampling.seed, i).
    :return: Sorted neighbor indices and whether they are a sample
    """
    row = g.neighbors(i)
    if len(row) <= sampling.max_exact_degree or sampling.sample_size >= len(row):
        return row, False

    rng = counter_rng(sampling.seed, i)

    return np.sort(rng.choice(row, sampling.sample_size, replace=False)), True


def choose(n: np.ndarray, k: int) -> np.ndarray:
    """
    Elementwise binomial coefficient for small k, zero when n < k.
    """
    n = np.asarray(n, dtype=np.float64)
    result = np.ones_like(n)
    for step in range(k):
        result = result * (n - step) / (step + 1)

    return np.where(n >= k, result, 0.0)


class MotifCensus:
    """
    Structure-only motif tables of a graph for one schema and sampling setup.

    Built once, then turned into causal motif counts for any assignment by
    vectorised recounting over the fixed motif instances.

    Open 4-stars are never enumerated. For each ego they are counted per number
    of treated members by inclusion-exclusion over neighbor triples, view edges,
    two-paths and triangles among the ego's neighbors.
    """
    def __init__(self,
                 g: Graph,
                 schema: MotifSchema,
                 sampling: SamplingConfig = None,
                 ):
        """
        Build the census.
        :param g: The graph
        :param schema: The representation schema, decides which shapes are tabulated
        :param sampling: Neighbor sampling for high-degree egos
        """
        self.graph = g
        self.schema = schema
        self.sampling = sampling or SamplingConfig()
        self.node_count = g.node_count

        self._build_views()

        shapes = schema.shapes()
        self.needs_triads = bool(shapes & {Shape.OPEN_TRIAD, Shape.CLOSED_TRIAD, Shape.OPEN_STAR})
        self.needs_stars = Shape.OPEN_STAR in shapes

        tris = triangles(g) if self.needs_triads else np.empty((0, 3), dtype=np.int64)
        self._build_rotations(tris)
        if self.needs_stars:
            self._build_clique_rotations(four_cliques(g, tris))

        self.attr_masks = {
            (dim.attr_column, dim.attr_value): g.attribute(dim.attr_column) == dim.attr_value
            for dim in schema.dims if dim.kind == DimensionKind.ATTRIBUTE
        }
        self.attr_totals = {
            key: np.bincount(self.view_ego, weights=mask[self.view_nbrs],
                             minlength=self.node_count)
            for key, mask in self.attr_masks.items()
        }

        LOGGER.debug(
            'Motif census built for %d nodes: %d sampled egos, %d triad rotations',
            self.node_count,
            int(self.sampled.sum()),
            len(self.rot_ego),
        )

    def _build_views(self):
        g = self.graph
        degrees = g.degrees
        self.sampled = np.zeros(self.node_count, dtype=bool)

        heavy = np.flatnonzero(
            (degrees > self.sampling.max_exact_degree) & (degrees > self.sampling.sample_size)
        )
        if len(heavy) == 0:
            self.view_ptr = g.indptr
            self.view_nbrs = g.indices
        else:
            rows = []
            for i in range(self.node_count):
                row, sampled = ego_view(g, i, self.sampling)
                rows.append(row)
                self.sampled[i] = sampled
            lengths = np.array([len(row) for row in rows], dtype=np.int64)
            self.view_ptr = np.concatenate([[0], np.cumsum(lengths)])
            self.view_nbrs = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
            LOGGER.warning(
                '%d egos above degree %d are counted on %d sampled neighbors',
                len(heavy),
                self.sampling.max_exact_degree,
                self.sampling.sample_size,
            )

        self.view_degree = np.diff(self.view_ptr).astype(np.float64)
        self.view_ego = np.repeat(np.arange(self.node_count, dtype=np.int64),
                                  np.diff(self.view_ptr))
        self._view_keys = self.view_ego * self.node_count + self.view_nbrs

    def _view_position(self, ego: np.ndarray, nbr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        keys = ego * self.node_count + nbr
        pos = np.searchsorted(self._view_keys, keys)
        pos_clipped = np.minimum(pos, max(len(self._view_keys) - 1, 0))
        found = (pos < len(self._view_keys)) & (self._view_keys[pos_clipped] == keys) \
            if len(self._view_keys) else np.zeros(len(keys), dtype=bool)

        return pos_clipped, found

    def _build_rotations(self, tris: np.ndarray):
        a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
        ego = np.concatenate([a, b, c])
        first = np.concatenate([b, a, a])
        second = np.concatenate([c, c, b])

        pos_j, found_j = self._view_position(ego, first)
        pos_k, found_k = self._view_position(ego, second)
        keep = found_j & found_k

        self.rot_ego = ego[keep]
        self.rot_j = first[keep]
        self.rot_k = second[keep]
        self.rot_pos_j = pos_j[keep]
        self.rot_pos_k = pos_k[keep]

        view_size = len(self.view_nbrs)
        self.view_edge_degree = (np.bincount(self.rot_pos_j, minlength=view_size)
                                 + np.bincount(self.rot_pos_k, minlength=view_size))

    def _build_clique_rotations(self, quads: np.ndarray):
        egos, others = [], []
        for position in range(4):
            rest = [col for col in range(4) if col != position]
            egos.append(quads[:, position])
            others.append(quads[:, rest])
        ego = np.concatenate(egos)
        other = np.concatenate(others) if others else np.empty((0, 3), dtype=np.int64)

        keep = np.ones(len(ego), dtype=bool)
        for col in range(3):
            _, found = self._view_position(ego, other[:, col])
            keep &= found

        self.clique_ego = ego[keep]
        self.clique_others = other[keep]

    def _dyads(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        treated = np.bincount(self.view_ego, weights=z[self.view_nbrs], minlength=self.node_count)

        return treated, self.view_degree - treated

    def _closed_triads(self, z: np.ndarray) -> list[np.ndarray]:
        treated = z[self.rot_j] + z[self.rot_k]

        return [
            np.bincount(self.rot_ego[treated == s], minlength=self.node_count).astype(np.float64)
            for s in range(3)
        ]

    def _open_stars(self,
                    z: np.ndarray,
                    dt: np.ndarray,
                    dc: np.ndarray,
                    closed: list[np.ndarray],
                    ) -> list[np.ndarray]:
        view_size = len(self.view_nbrs)
        k1 = (np.bincount(self.rot_pos_j, weights=z[self.rot_k], minlength=view_size)
              + np.bincount(self.rot_pos_k, weights=z[self.rot_j], minlength=view_size))
        k0 = self.view_edge_degree - k1
        paths = [choose(k0, 2), k1 * k0, choose(k1, 2)]
        center_treated = z[self.view_nbrs] == 1

        clique_treated = z[self.clique_others].sum(axis=1) if len(self.clique_others) \
            else np.empty(0, dtype=np.int64)

        stars = []
        for t in range(4):
            combos = choose(dt, t) * choose(dc, 3 - t)

            edges = np.zeros(self.node_count)
            if t >= 1:
                edges += closed[t - 1] * (dt - (t - 1))
            if t <= 2:
                edges += closed[t] * (dc - (2 - t))

            contribution = np.zeros(view_size)
            if t <= 2:
                contribution += np.where(~center_treated, paths[t], 0.0)
            if t >= 1:
                contribution += np.where(center_treated, paths[t - 1], 0.0)
            two_paths = np.bincount(self.view_ego, weights=contribution, minlength=self.node_count)

            cliques = np.bincount(self.clique_ego[clique_treated == t],
                                  minlength=self.node_count).astype(np.float64)

            stars.append(combos - edges + two_paths - cliques)

        return stars

    def dimension_counts(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        Numerator and denominator counts of every motif dimension under an assignment.
        :param z: Length-N 0/1 vector
        :return: Two N x (M-1) arrays, causal counts and motif counts
        """
        z = np.asarray(z, dtype=np.int64)
        if len(z) != self.node_count:
            raise ArgumentException(
                f'Assignment has {len(z)} entries, graph has {self.node_count} nodes'
            )

        dt, dc = self._dyads(z)
        degree = self.view_degree

        closed = open_ = stars = None
        if self.needs_triads:
            closed = self._closed_triads(z)
            open_ = [
                choose(dc, 2) - closed[0],
                dt * dc - closed[1],
                choose(dt, 2) - closed[2],
            ]
            if self.needs_stars:
                stars = self._open_stars(z, dt, dc, closed)

        dims = self.schema.dims[1:]
        numerator = np.empty((self.node_count, len(dims)))
        denominator = np.empty((self.node_count, len(dims)))

        for m, dim in enumerate(dims):
            t = dim.treated_count
            if dim.kind == DimensionKind.ATTRIBUTE:
                key = (dim.attr_column, dim.attr_value)
                mask = self.attr_masks[key]
                total = self.attr_totals[key]
                treated = np.bincount(self.view_ego, weights=(mask * z)[self.view_nbrs],
                                      minlength=self.node_count)
                numerator[:, m] = treated if t == 1 else total - treated
                denominator[:, m] = total
            elif dim.shape == Shape.DYAD:
                numerator[:, m] = dt if t == 1 else dc
                denominator[:, m] = degree
            elif dim.shape == Shape.CLOSED_TRIAD:
                numerator[:, m] = closed[t]
                denominator[:, m] = closed[0] + closed[1] + closed[2]
            elif dim.shape == Shape.OPEN_TRIAD:
                numerator[:, m] = open_[t]
                denominator[:, m] = open_[0] + open_[1] + open_[2]
            else:
                numerator[:, m] = stars[t]
                denominator[:, m] = stars[0] + stars[1] + stars[2] + stars[3]

        return numerator, denominator

    def representation(self, z: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
        """
        Representation matrix under an assignment and smoothing draws.
        :param z: Length-N 0/1 vector
        :param uniforms: N x (M-1) draws
        :return: N x M matrix
        """
        numerator, denominator = self.dimension_counts(z)

        R = np.empty((self.node_count, self.schema.M))      # pylint: disable=invalid-name
        R[:, 0] = z
        R[:, 1:] = (numerator + uniforms) / (denominator + 1.0)

        return R
