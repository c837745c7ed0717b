from .store import ReplicateStore, create_store
