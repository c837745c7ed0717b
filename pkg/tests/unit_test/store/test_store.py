import numpy as np
import pytest

from motif_exposure.etc.errors import ConfigurationParsingException
from motif_exposure.store import create_store
from motif_exposure.store.disk import DiskReplicateStore
from motif_exposure.store.memory import MemoryReplicateStore


class TestMemoryReplicateStore:
    def test_write_and_read(self):
        store = create_store(3, 4, 2, driver='memory')
        store.write(1, np.full((4, 2), 0.5))

        assert isinstance(store, MemoryReplicateStore)
        assert store.array.shape == (3, 4, 2)
        assert (store.read(1) == 0.5).all()
        assert (store.read(0) == 0.0).all()

    def test_read_only_view(self):
        store = create_store(1, 2, 2, driver='memory')

        with pytest.raises(ValueError):
            store.array[0, 0, 0] = 1.0


class TestDiskReplicateStore:
    def test_spills_and_removes(self, tmp_path):
        store = DiskReplicateStore(2, 5, 3, spill_dir=tmp_path)
        store.write(0, np.ones((5, 3)))

        assert store.path.exists()
        assert (store.read(0) == 1.0).all()

        store.close()

        assert not store.path.exists()

    def test_close_twice(self, tmp_path):
        store = DiskReplicateStore(1, 1, 1, spill_dir=tmp_path)
        store.close()
        store.close()


class TestCreateStore:
    def test_unknown_driver(self):
        with pytest.raises(ConfigurationParsingException):
            create_store(1, 1, 1, driver='sqlite')
