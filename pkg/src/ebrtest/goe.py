"""Monte Carlo sampling of scaled GOE largest eigenvalues.

This is the independent check on the Tracy-Widom table: draw real
symmetric Gaussian matrices, take the largest eigenvalue, apply the same
scaling as the test, and compare the empirical distribution against the
table CDF.

Two samplers of the same law:

* ``dense``       -- literally S = (Z + Z^T)/2 with Z iid N(0, 1), then a
                     full symmetric eigensolve.  O(k^3) per draw.
* ``tridiagonal`` -- the classical tridiagonal reduction of the beta = 1
                     Gaussian ensemble: diagonal iid N(0, 1), off-diagonal
                     chi-distributed with k-1, ..., 1 degrees of freedom
                     scaled by 1/sqrt(2).  Identical eigenvalue law, O(k^2)
                     per draw, which makes the k = 1000 oracle tractable.

Streams are keyed per draw, so results are independent of worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.linalg import eigh_tridiagonal
from threadpoolctl import threadpool_limits

from .ebr import symmetrize, tw_scale
from .rngstream import stream
from .spectral import largest_eigenvalue

METHODS = ("dense", "tridiagonal")


def _one_dense(k: int, master_seed: int, index: int) -> float:
    rng = stream(master_seed, "goe-dense", k, index)
    Z = rng.standard_normal((k, k))
    return tw_scale(largest_eigenvalue(symmetrize(Z)), k)


def _one_tridiagonal(k: int, master_seed: int, index: int) -> float:
    rng = stream(master_seed, "goe-tridiagonal", k, index)
    diag = rng.standard_normal(k)
    off = np.sqrt(rng.chisquare(np.arange(k - 1, 0, -1)) / 2.0)
    lam = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(k - 1, k - 1))
    return tw_scale(float(lam[0]), k)


def _chunk(args: tuple[str, int, int, int, int]) -> np.ndarray:
    method, k, master_seed, start, stop = args
    one = _one_dense if method == "dense" else _one_tridiagonal
    with threadpool_limits(limits=1):
        return np.array([one(k, master_seed, i) for i in range(start, stop)])


def sample_scaled_largest(
    k: int,
    reps: int,
    master_seed: int,
    workers: int = 1,
    method: str = "dense",
) -> np.ndarray:
    """Draw ``reps`` scaled largest eigenvalues of k x k GOE matrices."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if k < 2 or reps < 1:
        raise ValueError(f"need k >= 2 and reps >= 1, got k={k}, reps={reps}")
    if workers <= 1:
        return _chunk((method, k, master_seed, 0, reps))
    bounds = np.linspace(0, reps, workers * 4 + 1, dtype=int)
    tasks = [
        (method, k, master_seed, int(a), int(b))
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk, tasks))
    return np.concatenate(parts)


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a CDF callable."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.asarray([cdf(v) for v in x])
    upper = np.abs(np.arange(1, n + 1) / n - f)
    lower = np.abs(np.arange(0, n) / n - f)
    return float(np.maximum(upper, lower).max())
