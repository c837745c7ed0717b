import numpy as np

from motif_exposure.etc.enums import DesignKind
from motif_exposure.etc.errors import ArgumentException


class AssignmentVector:
    def __init__(self,
                 z: np.ndarray,
                 design_tag: str,
                 seed: int,
                 ):
        """
        One realised treatment assignment.
        :param z: Length-N vector of 0/1 treatments
        :param design_tag: Provenance label of the design that produced it
        :param seed: The seed the vector was drawn with
        """
        z = np.asarray(z)
        if z.ndim != 1 or not np.isin(z, (0, 1)).all():
            raise ArgumentException('Assignment entries must be 0 or 1')

        self.z = z.astype(np.int8)
        self.design_tag = design_tag
        self.seed = seed

    def __len__(self):
        return len(self.z)

    def to_dict(self) -> dict:
        """
        Sidecar metadata of the assignment, without the vector itself.
        """
        return {
            'designTag': self.design_tag,
            'seed': self.seed,
            'nodeCount': len(self.z),
            'treatedCount': int(self.z.sum()),
        }


class ClusterPartition:
    def __init__(self,
                 cluster_of: np.ndarray,
                 cluster_count: int = None,
                 ):
        """
        Assignment of every node to one cluster.
        :param cluster_of: Length-N vector of cluster ids in 0..cluster_count-1
        :param cluster_count: Number of clusters, defaults to max id plus one
        """
        self.cluster_of = np.asarray(cluster_of, dtype=np.int64)
        self.cluster_count = int(cluster_count) if cluster_count is not None \
            else int(self.cluster_of.max()) + 1

        if self.cluster_of.min(initial=0) < 0 \
                or self.cluster_of.max(initial=0) >= self.cluster_count:
            raise ArgumentException('Cluster ids must lie in 0..cluster_count-1')

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.cluster_of, minlength=self.cluster_count)

    def members(self) -> list[np.ndarray]:
        """
        Node indices of every cluster, in cluster id order.
        """
        order = np.argsort(self.cluster_of, kind='stable')
        bounds = np.cumsum(self.sizes)[:-1]

        return np.split(order, bounds)

    def restricted_to(self, units: np.ndarray) -> 'ClusterPartition':
        """
        The partition induced on a subset of units, with clusters relabelled densely.
        """
        labels, cluster_of = np.unique(self.cluster_of[units], return_inverse=True)

        return ClusterPartition(cluster_of, len(labels))


class RandomizationDesign:
    def __init__(self,
                 kind: DesignKind,
                 p: float = 0.5,
                 *,
                 partition: ClusterPartition = None,
                 ):
        """
        The probability law used to assign treatments.
        :param kind: Bernoulli or graph-cluster randomization
        :param p: Treatment probability, strictly between 0 and 1
        :param partition: The cluster partition, required for graph-cluster designs
        """
        if not 0.0 < p < 1.0:
            raise ArgumentException(f'Treatment probability must be in (0, 1), got {p}')
        if kind == DesignKind.CLUSTER and partition is None:
            raise ArgumentException('Graph-cluster designs need a cluster partition')

        self.kind = kind
        self.p = p
        self.partition = partition

    @classmethod
    def bernoulli(cls, p: float = 0.5) -> 'RandomizationDesign':
        return cls(DesignKind.BERNOULLI, p)

    @classmethod
    def cluster(cls, partition: ClusterPartition, p: float = 0.5) -> 'RandomizationDesign':
        return cls(DesignKind.CLUSTER, p, partition=partition)

    @property
    def tag(self) -> str:
        if self.kind == DesignKind.CLUSTER:
            return f'cluster(p={self.p},clusters={self.partition.cluster_count})'

        return f'bernoulli(p={self.p})'

    def to_dict(self) -> dict:
        payload = {
            'kind': self.kind.value,
            'p': self.p,
        }
        if self.partition is not None:
            payload['clusterCount'] = self.partition.cluster_count

        return payload
