from .store import MemoryReplicateStore
