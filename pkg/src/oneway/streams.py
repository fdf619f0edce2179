"""Deterministic random streams.

Every stochastic routine in the package draws from a counter-based generator
(Philox) keyed by ``(master seed, stream index)``. Distinct indices give
independent streams, so batches of Monte Carlo work can run in any order, or
in parallel, and still reproduce bit-identical results for a fixed seed.
"""

from __future__ import annotations

import os

import numpy as np

_MASK64 = (1 << 64) - 1

# Number of simulated runs folded into one stream; see `batch_means` users.
BATCH_SIZE = 1 << 16


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for stream ``index`` under ``seed``."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def batch_sizes(total: int, batch: int = BATCH_SIZE) -> list[int]:
    """Split ``total`` draws into fixed-size batches (last one ragged)."""
    if total < 0:
        raise ValueError("total must be non-negative")
    out = [batch] * (total // batch)
    if total % batch:
        out.append(total % batch)
    return out


def worker_count() -> int:
    """Worker cap for parallel sections: ONEWAY_THREADS, else machine parallelism."""
    env = os.environ.get("ONEWAY_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"ONEWAY_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ValueError("ONEWAY_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1
