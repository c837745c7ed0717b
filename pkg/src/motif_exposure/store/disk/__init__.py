from .store import DiskReplicateStore
