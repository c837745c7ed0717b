import hashlib
import sys
from concurrent.futures import ThreadPoolExecutor
from functools import wraps
from pathlib import Path
from typing import Callable, Iterable, TypeVar

import numpy as np

from motif_exposure.etc.consts import LOGGER, ANALYSIS_CONFIG
from motif_exposure.etc.errors import MotifExposureException, EXIT_INTERNAL


T = TypeVar('T')
R = TypeVar('R')

SEED_MASK = (1 << 63) - 1


def exception_handler(f):
    """
    Wrap a CLI command so that exceptions become process exit codes.

    Toolkit exceptions exit with their own code, everything else exits
    with the internal error code. The wrapped function returns 0 on success.
    """
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            result = f(*args, **kwargs)
            return 0 if result is None else result
        except MotifExposureException as e:
            LOGGER.exception('Motif Exposure Exception: %s', e.message)
            print(f'error: {e.message}', file=sys.stderr)

            return e.exit_code
        except Exception as e:      # pylint: disable=broad-exception-caught
            LOGGER.exception('Internal Error')
            print(f'internal error: {e}', file=sys.stderr)

            return EXIT_INTERNAL

    return wrapper


def derive_seed(master_seed: int, *labels: str | int) -> int:
    """
    Derive a subsystem seed from the master seed and a list of labels.
    :param master_seed: The single seed all randomness flows from
    :param labels: Labels naming the consumer, e.g. ('analysis', 'bootstrap')
    :return: A non-negative 63-bit integer seed
    """
    key = ':'.join([str(master_seed), *[str(label) for label in labels]])
    digest = hashlib.sha256(key.encode('utf-8')).digest()

    return int.from_bytes(digest[:8], 'big') & SEED_MASK


def counter_seed(seed: int, *counters: int) -> int:
    """
    Counter-based seed for an indexed consumer, e.g. replicate b.

    The result depends only on (seed, counters), so indexed work can be
    generated in any order or concurrently.
    """
    state = np.random.SeedSequence([int(seed), *[int(c) for c in counters]]).generate_state(
        2, dtype=np.uint32
    )

    return ((int(state[0]) << 32) | int(state[1])) & SEED_MASK


def counter_rng(seed: int, *counters: int) -> np.random.Generator:
    """
    Generator seeded with counter_seed(seed, *counters).
    """
    return np.random.default_rng(counter_seed(seed, *counters))


def parallel_map(fn: Callable[[T], R],
                 items: Iterable[T],
                 threads: int | None = None,
                 ) -> list[R]:
    """
    Map a function over items with a bounded thread pool.
    :param fn: The function to apply, must be pure over its argument
    :param items: The items to map over
    :param threads: Upper bound on worker threads, defaults to configuration
    :return: Results in the order of the input items
    """
    items = list(items)
    threads = threads or ANALYSIS_CONFIG.threads

    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
        return list(executor.map(fn, items))


def file_digest(path: str | Path) -> str:
    """
    Compute the SHA-256 digest of a file.
    :param path: The file to digest
    :return: The hex digest
    """
    sha = hashlib.sha256()

    with open(path, 'rb') as file:
        for chunk in iter(lambda: file.read(1 << 20), b''):
            sha.update(chunk)

    return sha.hexdigest()
