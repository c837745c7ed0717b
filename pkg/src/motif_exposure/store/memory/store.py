import numpy as np

from ..store import ReplicateStore


class MemoryReplicateStore(ReplicateStore):
    """
    Replicate store holding every representation in one in-memory array.
    """
    def __init__(self,
                 replicates: int,
                 node_count: int,
                 dims: int,
                 ):
        super().__init__(replicates, node_count, dims)

        self._array = np.zeros(self.shape, dtype=np.float64)

    @property
    def array(self) -> np.ndarray:
        view = self._array.view()
        view.flags.writeable = False

        return view

    def write(self, b: int, representation: np.ndarray):
        self._array[b] = representation

    def close(self):
        self._array = np.zeros((0, *self.shape[1:]))
