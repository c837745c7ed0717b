from functools import cached_property

import numpy as np
import pandas as pd
import scipy.sparse as sp

from motif_exposure.etc.errors import NodeIndexException, InputValidationException, \
    SchemaException


class Graph:
    """
    Immutable simple undirected graph over dense node indices 0..N-1.
    """
    def __init__(self,
                 indptr: np.ndarray,
                 indices: np.ndarray,
                 *,
                 attrs: pd.DataFrame = None,
                 id_map: list[str] = None,
                 dropped_records: int = 0,
                 ):
        """
        Immutable simple undirected graph in compressed sparse row form.
        Use Graph.from_edges to build one from an edge array.
        :param indptr: Row pointer array of length N+1
        :param indices: Concatenated neighbor lists, each sorted ascending
        :param attrs: Per-node attribute table, one row per node in index order
        :param id_map: External id of every node, in index order
        :param dropped_records: Number of duplicate edges and self-loops dropped on construction
        """
        self._indptr = np.asarray(indptr, dtype=np.int64)
        self._indices = np.asarray(indices, dtype=np.int64)
        self._indptr.flags.writeable = False
        self._indices.flags.writeable = False

        node_count = len(self._indptr) - 1

        if attrs is None:
            attrs = pd.DataFrame(index=pd.RangeIndex(node_count))
        if len(attrs) != node_count:
            raise InputValidationException(
                f'Attribute table has {len(attrs)} rows for {node_count} nodes'
            )
        self._attrs = attrs.reset_index(drop=True)

        self._id_map = list(id_map) if id_map is not None else [str(i) for i in range(node_count)]
        if len(self._id_map) != node_count:
            raise InputValidationException(
                f'Id map has {len(self._id_map)} entries for {node_count} nodes'
            )

        self.dropped_records = dropped_records

    @classmethod
    def from_edges(cls,
                   edges,
                   node_count: int = None,
                   *,
                   attrs: pd.DataFrame = None,
                   id_map: list[str] = None,
                   ) -> 'Graph':
        """
        Build a graph from dense-index edge pairs, dropping self-loops and duplicates.
        :param edges: Iterable of (u, v) pairs or an (E, 2) integer array
        :param node_count: Number of nodes, defaults to the largest index plus one
        :param attrs: Optional attribute table
        :param id_map: Optional external ids
        :return: The constructed graph, with dropped_records set
        """
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)

        if node_count is None:
            node_count = int(edges.max()) + 1 if edges.size else 0
        if edges.size and (edges.min() < 0 or edges.max() >= node_count):
            raise NodeIndexException(
                f'Edge endpoint outside 0..{node_count - 1}'
            )

        kept = edges[edges[:, 0] != edges[:, 1]]
        low = np.minimum(kept[:, 0], kept[:, 1])
        high = np.maximum(kept[:, 0], kept[:, 1])
        pairs = np.unique(np.stack([low, high], axis=1), axis=0) if len(kept) \
            else np.empty((0, 2), dtype=np.int64)
        dropped = len(edges) - len(pairs)

        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        adjacency = sp.csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)),
            shape=(node_count, node_count),
        )
        adjacency.sort_indices()

        return cls(
            adjacency.indptr,
            adjacency.indices,
            attrs=attrs,
            id_map=id_map,
            dropped_records=dropped,
        )

    @property
    def node_count(self) -> int:
        return len(self._indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self._indices) // 2

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def attrs(self) -> pd.DataFrame:
        return self._attrs

    @property
    def id_map(self) -> list[str]:
        return self._id_map

    @cached_property
    def index_of(self) -> dict[str, int]:
        """
        Mapping from external id to dense index.
        """
        return {node_id: i for i, node_id in enumerate(self._id_map)}

    @cached_property
    def degrees(self) -> np.ndarray:
        degrees = np.diff(self._indptr)
        degrees.flags.writeable = False

        return degrees

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """
        Symmetric 0/1 adjacency matrix.
        """
        return sp.csr_matrix(
            (np.ones(len(self._indices), dtype=np.float64), self._indices, self._indptr),
            shape=(self.node_count, self.node_count),
        )

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """
        Sorted key row * N + column for every stored adjacency entry.
        """
        rows = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)

        return rows * self.node_count + self._indices

    def check_node(self, i: int) -> int:
        """
        Validate a node index.
        :param i: The node index
        :return: The index as a Python int
        """
        if not 0 <= int(i) < self.node_count:
            raise NodeIndexException(
                f'Node index {i} outside 0..{self.node_count - 1}'
            )

        return int(i)

    def neighbors(self, i: int) -> np.ndarray:
        i = self.check_node(i)

        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    def degree(self, i: int) -> int:
        i = self.check_node(i)

        return int(self._indptr[i + 1] - self._indptr[i])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        pos = np.searchsorted(row, v)

        return bool(pos < len(row) and row[pos] == v)

    def edge_positions(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        Positions in the indices array of the adjacency entries (u, v).
        Every pair must be an edge.
        """
        keys = np.asarray(u, dtype=np.int64) * self.node_count + np.asarray(v, dtype=np.int64)

        return np.searchsorted(self.edge_keys, keys)

    def edges(self) -> np.ndarray:
        """
        Every edge once as (u, v) with u < v, in row order.
        """
        rows = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        upper = rows < self._indices

        return np.stack([rows[upper], self._indices[upper]], axis=1)

    def attribute(self, column: str) -> np.ndarray:
        """
        Values of an attribute column as a float array.
        :param column: The column name
        :return: Array of length node_count
        """
        if column not in self._attrs.columns:
            raise SchemaException(
                f'Attribute column {column} not present in the graph'
            )

        return self._attrs[column].to_numpy(dtype=np.float64)

    def with_attributes(self, attrs: pd.DataFrame) -> 'Graph':
        """
        A graph sharing this adjacency with a different attribute table.
        """
        return Graph(
            self._indptr,
            self._indices,
            attrs=attrs,
            id_map=self._id_map,
            dropped_records=self.dropped_records,
        )

    def __repr__(self):
        return f'Graph(node_count={self.node_count}, edge_count={self.edge_count})'


class EgoNetwork:
    def __init__(self,
                 center: int,
                 hop: int,
                 members: np.ndarray,
                 induced_edges: np.ndarray,
                 ):
        """
        The n-hop ego network of a unit: its n-hop neighbor set and the
        vertex-induced subgraph on it.
        :param center: The ego node index
        :param hop: The hop count n
        :param members: Sorted member node indices, including the center
        :param induced_edges: (E, 2) array of member pairs (u < v) joined in the graph
        """
        self.center = center
        self.hop = hop
        self.members = members
        self.induced_edges = induced_edges

    @property
    def member_set(self) -> set[int]:
        return {int(i) for i in self.members}

    @property
    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.induced_edges}
