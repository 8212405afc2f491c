"""Least-squares cost of contiguous segments in kernel feature space.

The cost of segment [s, e) is

    sum_{i in [s,e)} k(X_i, X_i)  -  (1 / (e - s)) sum_{i,j in [s,e)} k(X_i, X_j)

i.e. the squared residual of the segment around its feature-space mean,
expanded by the kernel trick. Costs are un-normalized totals; callers divide
by n where a per-point risk is needed.
"""

from __future__ import annotations

import numpy as np

from .kernels import GramView, KernelSpec


class CostEngine:
    """Incrementally maintains the costs of all segments ending at a moving right endpoint.

    One engine is single-owner and strictly sequential: `advance(t)` must be
    called with t = 0, 1, 2, ... and extends the right endpoint to t + 1,
    returning cost(s, t+1) for every start s <= t in O(t) kernel evaluations.
    Multiple engines over the same (immutable) series may run concurrently.
    """

    def __init__(self, X, spec: KernelSpec, dense: bool = False):
        self._gram = GramView(spec, X, dense=dense)
        n = self._gram.n
        self._diag = self._gram.diag
        self._diag_csum = np.concatenate([[0.0], np.cumsum(self._diag)])
        # quad[s] = sum_{i,j in [s, t)} k(X_i, X_j) for the current endpoint t
        self._quad = np.zeros(n)
        self._t = 0

    @property
    def n(self) -> int:
        return self._gram.n

    @property
    def spec(self) -> KernelSpec:
        return self._gram.spec

    @property
    def t(self) -> int:
        """Current right endpoint: costs up to segments ending at t are known."""
        return self._t

    def advance(self, t: int) -> np.ndarray:
        """Absorb point ``t`` and return cost(s, t+1) for s = 0 .. t.

        Raises ValueError if called out of order (t must equal the number of
        points absorbed so far).
        """
        if t != self._t:
            raise ValueError(f"out-of-order advance: expected t = {self._t}, got {t}")
        if t >= self.n:
            raise ValueError(f"t = {t} beyond series length {self.n}")
        row = self._gram.row(t)
        diag_t = self._gram.diag[t]
        # suffix[s] = sum_{l in [s, t)} k(X_l, X_t); one pass serves every start
        suffix = np.empty(t + 1)
        suffix[t] = 0.0
        if t > 0:
            suffix[:t] = np.cumsum(row[:t][::-1])[::-1]
        self._quad[: t + 1] += 2.0 * suffix + diag_t
        self._t = t + 1
        lengths = np.arange(t + 1, 0, -1, dtype=float)
        # summed right-to-left so the new singleton's cost is exactly zero:
        # diag_sums[t] == diag[t] == quad[t]
        diag_sums = np.cumsum(self._diag[t::-1])[::-1]
        return diag_sums - self._quad[: t + 1] / lengths

    def segment_cost(self, start: int, end: int) -> float:
        """Cost of a single segment [start, end), independent of the sweep state."""
        if not 0 <= start < end <= self.n:
            raise ValueError(f"invalid segment [{start}, {end}) for series of length {self.n}")
        if end - start == 1:
            return 0.0
        if self._gram._dense is not None:
            quad = float(self._gram._dense[start:end, start:end].sum())
        else:
            quad = float(
                sum(self._gram.row(i)[start:end].sum() for i in range(start, end))
            )
        diag_sum = self._diag_csum[end] - self._diag_csum[start]
        return diag_sum - quad / (end - start)
