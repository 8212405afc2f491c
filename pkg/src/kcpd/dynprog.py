"""Exact dynamic programming over segment costs.

For every candidate segment count D in 1..d_max, finds the segmentation with
D contiguous segments minimizing the total kernel least-squares cost, via

    L(D, e) = min_{s} [ L(D-1, s) + cost(s, e) ]

swept over right endpoints with incremental costs from
:class:`~kcpd.cost.CostEngine`. Exactness matters: the model-selection layer
and the test oracles both assume the true minimizer per D, so no pruning or
heuristic shortcuts are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_breakpoints, check_series
from .cost import CostEngine
from .kernels import KernelSpec

#: Default cap on the number of segments explored when none is given.
DEFAULT_D_MAX = 50


@dataclass(frozen=True)
class Segmentation:
    """A partition of [0, n) into contiguous segments.

    ``breakpoints`` are the strictly increasing interior boundaries, each in
    (0, n); D segments have D - 1 breakpoints.
    """

    n: int
    breakpoints: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "breakpoints", check_breakpoints(self.breakpoints, self.n))

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints) + 1

    def segments(self) -> list[tuple[int, int]]:
        """Half-open (start, end) index pairs covering [0, n)."""
        bounds = (0, *self.breakpoints, self.n)
        return list(zip(bounds[:-1], bounds[1:]))

    def labels(self) -> np.ndarray:
        """Segment id per time index, shape (n,)."""
        out = np.zeros(self.n, dtype=int)
        for k, (s, e) in enumerate(self.segments()):
            out[s:e] = k
        return out

    def fractions(self) -> np.ndarray:
        """Breakpoints on the unit time scale (index / n)."""
        return np.asarray(self.breakpoints, dtype=float) / self.n


@dataclass(frozen=True)
class DpSolution:
    """Optimal cost and segmentation for every D in 1..d_max.

    ``best_cost[D]`` is the total un-normalized cost of the best D-segment
    partition; it is non-increasing in D and reaches 0 at D = n. ``warning``
    records input adjustments (e.g. a capped d_max).
    """

    n: int
    d_max: int
    best_cost: dict[int, float]
    best_seg: dict[int, Segmentation]
    warning: str | None = field(default=None, compare=False)


def solve(X, spec: KernelSpec, d_max: int | None = None, dense: bool = False) -> DpSolution:
    """Optimal segmentations of a series for every segment count up to d_max.

    Parameters
    ----------
    X : array-like, shape (n, d) or (n,)
        Ordered observations.
    spec : KernelSpec
        Resolved kernel (a symbolic "median" bandwidth raises).
    d_max : int, optional
        Largest segment count; defaults to min(n, 50). Values above n are
        capped with a warning recorded on the solution.
    dense : bool
        Cache the full Gram matrix (n <= 4096) instead of recomputing rows.

    Ties among optimal split points are broken toward the smallest start of
    the last segment, so results are deterministic.
    """
    X = check_series(X)
    n = X.shape[0]
    if d_max is None:
        d_max = min(n, DEFAULT_D_MAX)
    d_max, warning = _cap_d_max(d_max, n, "series length")

    engine = CostEngine(X, spec, dense=dense)
    L = np.full((d_max + 1, n + 1), np.inf)
    P = np.zeros((d_max + 1, n + 1), dtype=np.int64)
    for t in range(n):
        costs = engine.advance(t)
        e = t + 1
        L[1, e] = costs[0]
        top = min(d_max, e)
        if top >= 2:
            cand = L[1:top, :e] + costs[None, :e]
            js = np.argmin(cand, axis=1)
            L[2 : top + 1, e] = cand[np.arange(top - 1), js]
            P[2 : top + 1, e] = js
    return _extract(L, P, n, d_max, warning)


def solve_restricted(
    X,
    spec: KernelSpec,
    d_max: int,
    grid,
    dense: bool = False,
) -> DpSolution:
    """Same recursion with breakpoints constrained to a candidate grid.

    ``grid`` is a strictly increasing sequence of indices in (0, n); the
    candidate collection is exactly the segmentations whose breakpoints are a
    subset of the grid. With the full grid 1..n-1 the output is identical to
    :func:`solve`. d_max above |grid| + 1 is capped with a warning.
    """
    X = check_series(X)
    n = X.shape[0]
    grid = check_breakpoints(grid, n)
    d_max, warning = _cap_d_max(d_max, len(grid) + 1, "grid size + 1")

    pos = np.array([0, *grid, n], dtype=int)
    m = len(pos)
    pos_index = {int(p): i for i, p in enumerate(pos)}
    C = np.full((m, m), np.inf)

    engine = CostEngine(X, spec, dense=dense)
    for t in range(n):
        costs = engine.advance(t)
        j = pos_index.get(t + 1)
        if j is not None and j > 0:
            C[:j, j] = costs[pos[:j]]

    L = np.full((d_max + 1, m), np.inf)
    P = np.zeros((d_max + 1, m), dtype=np.int64)
    for j in range(1, m):
        L[1, j] = C[0, j]
        top = min(d_max, j)
        if top >= 2:
            cand = L[1:top, :j] + C[:j, j][None, :]
            js = np.argmin(cand, axis=1)
            L[2 : top + 1, j] = cand[np.arange(top - 1), js]
            P[2 : top + 1, j] = js
    sol = _extract(L, P, m - 1, d_max, warning)
    best_seg = {
        D: Segmentation(n, tuple(int(pos[i]) for i in seg.breakpoints))
        for D, seg in sol.best_seg.items()
    }
    return DpSolution(n=n, d_max=d_max, best_cost=sol.best_cost, best_seg=best_seg, warning=warning)


def _cap_d_max(d_max: int, limit: int, what: str) -> tuple[int, str | None]:
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    if d_max > limit:
        return limit, f"d_max {d_max} exceeds {what} {limit}; capped"
    return d_max, None


def _extract(L, P, last: int, d_max: int, warning: str | None) -> DpSolution:
    best_cost: dict[int, float] = {}
    best_seg: dict[int, Segmentation] = {}
    for D in range(1, d_max + 1):
        cur = last
        bps = []
        for d in range(D, 1, -1):
            cur = int(P[d, cur])
            bps.append(cur)
        best_cost[D] = float(L[D, last])
        best_seg[D] = Segmentation(last, tuple(reversed(bps)))
    return DpSolution(n=last, d_max=d_max, best_cost=best_cost, best_seg=best_seg, warning=warning)
