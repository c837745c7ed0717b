import numpy as np

from motif_exposure.etc.consts import ANALYSIS_CONFIG
from motif_exposure.etc.errors import ConfigurationParsingException


class ReplicateStore:
    """
    Storage for the representations of B assignment replicates, a B x N x M array.
    """
    def __init__(self,
                 replicates: int,
                 node_count: int,
                 dims: int,
                 ):
        """
        Storage for the representations of B assignment replicates.
        :param replicates: Number of replicates B
        :param node_count: Number of units N
        :param dims: Representation dimensions M
        """
        self.shape = (replicates, node_count, dims)

    @property
    def array(self) -> np.ndarray:
        """
        The full B x N x M array, read-only.
        """
        raise NotImplementedError

    def write(self, b: int, representation: np.ndarray):
        """
        Store the representation of replicate b.
        :param b: Replicate index
        :param representation: N x M matrix
        """
        raise NotImplementedError

    def read(self, b: int) -> np.ndarray:
        """
        The representation of replicate b.
        """
        return self.array[b]

    def close(self):
        """
        Release the storage.
        """
        raise NotImplementedError


def create_store(replicates: int,
                 node_count: int,
                 dims: int,
                 driver: str = None,
                 ) -> ReplicateStore:
    """
    Create a replicate store with the driver set by configuration.
    :param replicates: Number of replicates B
    :param node_count: Number of units N
    :param dims: Representation dimensions M
    :param driver: Driver name overriding the configuration, memory or disk
    :return: An empty store
    """
    driver = driver or ANALYSIS_CONFIG.store_driver

    if driver == 'memory':
        from .memory import MemoryReplicateStore

        return MemoryReplicateStore(replicates, node_count, dims)
    elif driver == 'disk':
        from .disk import DiskReplicateStore

        return DiskReplicateStore(replicates, node_count, dims)
    else:
        raise ConfigurationParsingException(
            f'Unsupported replicate store driver: {driver}'
        )
