"""Input validation helpers shared by the estimator, the CLI, and the core modules."""

from __future__ import annotations

import numpy as np

SIMPLEX_ATOL = 1e-9


def check_series(X, simplex: bool = False, min_samples: int = 1) -> np.ndarray:
    """Coerce ``X`` to a 2-D float array of observations (rows) and validate it.

    1-D input is treated as a single-feature series. All entries must be
    finite. With ``simplex=True`` every row must be a histogram: entries in
    [0, 1] and summing to 1 within ``SIMPLEX_ATOL``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D array of observations, got ndim={X.ndim}")
    n, d = X.shape
    if n < min_samples:
        raise ValueError(f"series has {n} observations, need at least {min_samples}")
    if d < 1:
        raise ValueError("observations must have at least one dimension")
    if not np.isfinite(X).all():
        bad = np.argwhere(~np.isfinite(X))[0]
        raise ValueError(f"non-finite value at row {bad[0]}, column {bad[1]}")
    if simplex:
        check_simplex_rows(X)
    return X


def check_simplex_rows(X: np.ndarray) -> None:
    """Validate that every row of ``X`` lies on the probability simplex."""
    if (X < 0.0).any() or (X > 1.0).any():
        bad = int(np.argwhere((X < 0.0) | (X > 1.0))[0][0])
        raise ValueError(f"histogram row {bad} has entries outside [0, 1]")
    sums = X.sum(axis=1)
    off = np.abs(sums - 1.0) > SIMPLEX_ATOL
    if off.any():
        bad = int(np.argmax(off))
        raise ValueError(
            f"histogram row {bad} sums to {sums[bad]!r}, expected 1 within {SIMPLEX_ATOL}"
        )


def check_breakpoints(breakpoints, n: int) -> tuple[int, ...]:
    """Validate breakpoint indices: strictly increasing integers in (0, n)."""
    bps = tuple(int(b) for b in breakpoints)
    for a, b in zip(bps, bps[1:]):
        if a >= b:
            raise ValueError(f"breakpoints must be strictly increasing, got {bps}")
    if bps and (bps[0] <= 0 or bps[-1] >= n):
        raise ValueError(f"breakpoints must lie strictly inside (0, {n}), got {bps}")
    return bps
