import uuid
from pathlib import Path

import numpy as np

from motif_exposure.etc.consts import ANALYSIS_CONFIG, LOGGER
from ..store import ReplicateStore


class DiskReplicateStore(ReplicateStore):
    """
    Replicate store spilled to a memory-mapped .npy file under the spill directory.
    """
    def __init__(self,
                 replicates: int,
                 node_count: int,
                 dims: int,
                 *,
                 spill_dir: Path = None,
                 ):
        super().__init__(replicates, node_count, dims)

        spill_dir = Path(spill_dir or ANALYSIS_CONFIG.spill_dir)
        spill_dir.mkdir(parents=True, exist_ok=True)
        self.path = spill_dir / f'replicates-{uuid.uuid4().hex}.npy'

        LOGGER.debug('Spilling replicate store of shape %s to %s', self.shape, self.path)

        self._array = np.lib.format.open_memmap(
            self.path,
            mode='w+',
            dtype=np.float64,
            shape=self.shape,
        )

    @property
    def array(self) -> np.ndarray:
        view = self._array.view()
        view.flags.writeable = False

        return view

    def write(self, b: int, representation: np.ndarray):
        self._array[b] = representation

    def close(self):
        if self._array is not None:
            self._array.flush()
            del self._array
            self._array = None
            self.path.unlink(missing_ok=True)
            LOGGER.debug('Removed replicate store %s', self.path)
