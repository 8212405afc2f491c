"""Shared brute-force oracles for the test suite.

Everything here recomputes quantities from first principles (double sums,
exhaustive enumeration, prefix-sum regressograms) so the incremental and
dynamic-programming paths are checked against independent arithmetic.
"""

from __future__ import annotations

import itertools

import numpy as np

from kcpd.kernels import KernelSpec, eval_kernel


def brute_segment_cost(X: np.ndarray, spec: KernelSpec, start: int, end: int) -> float:
    """Segment cost by the O(len^2) double sum over single kernel evaluations."""
    idx = range(start, end)
    diag = sum(eval_kernel(spec, X[i], X[i]) for i in idx)
    quad = sum(eval_kernel(spec, X[i], X[j]) for i in idx for j in idx)
    return diag - quad / (end - start)


def brute_total_cost(X: np.ndarray, spec: KernelSpec, breakpoints) -> float:
    bounds = (0, *breakpoints, len(X))
    return sum(brute_segment_cost(X, spec, a, b) for a, b in zip(bounds[:-1], bounds[1:]))


def enumerate_best(X: np.ndarray, spec: KernelSpec, D: int, grid=None):
    """Exhaustive minimum over all D-segment partitions (optionally grid-restricted).

    Returns (cost, breakpoints) with ties broken toward the lexicographically
    smallest breakpoint tuple, matching the solver's leftmost-split rule.
    """
    n = len(X)
    candidates = range(1, n) if grid is None else grid
    cost_table = {}

    def seg_cost(a, b):
        if (a, b) not in cost_table:
            cost_table[(a, b)] = brute_segment_cost(X, spec, a, b)
        return cost_table[(a, b)]

    best = (np.inf, None)
    for bps in itertools.combinations(candidates, D - 1):
        bounds = (0, *bps, n)
        c = sum(seg_cost(a, b) for a, b in zip(bounds[:-1], bounds[1:]))
        if c < best[0] - 1e-12:
            best = (c, bps)
    return best


def regressogram_costs(x: np.ndarray, d_max: int) -> dict[int, float]:
    """Independent 1-D piecewise-mean least squares: best SSE per segment count.

    Prefix-sum segment costs and a plain O(d_max n^2) recursion, sharing no
    code with the package.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    S = np.concatenate([[0.0], np.cumsum(x)])
    SS = np.concatenate([[0.0], np.cumsum(x * x)])

    def sse(a, b):
        s = S[b] - S[a]
        return SS[b] - SS[a] - s * s / (b - a)

    L = np.full((d_max + 1, n + 1), np.inf)
    for e in range(1, n + 1):
        L[1, e] = sse(0, e)
    for D in range(2, d_max + 1):
        for e in range(D, n + 1):
            L[D, e] = min(L[D - 1, s] + sse(s, e) for s in range(D - 1, e))
    return {D: float(L[D, n]) for D in range(1, d_max + 1)}


def random_simplex(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    raw = rng.random((n, d)) + 1e-3
    return raw / raw.sum(axis=1, keepdims=True)


def spec_for(kind: str, bandwidth: float = 1.3, scale: float = 1.0) -> KernelSpec:
    if kind in ("gaussian", "laplace"):
        return KernelSpec(kind, bandwidth=bandwidth, scale=scale)
    return KernelSpec(kind, scale=scale)


def random_series(rng: np.random.Generator, kind: str, n: int, d: int = 2) -> np.ndarray:
    if kind == "intersection":
        return random_simplex(rng, n, max(d, 2))
    return rng.normal(size=(n, d))
