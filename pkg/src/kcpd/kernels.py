"""Kernel evaluation, lazy Gram access, and bandwidth heuristics.

Observations are rows of a 2-D float array. Four positive-definite kernels
are supported:

* ``linear``        k(x, y) = <x, y>
* ``gaussian``      k(x, y) = exp(-||x - y||^2 / bw)
* ``laplace``       k(x, y) = exp(-||x - y|| / bw)
* ``intersection``  k(p, q) = sum_i min(p_i, q_i), for histogram rows

For the two RBF-type kernels the ``bandwidth`` parameter is the *denominator*
of the exponent, i.e. the value of 2 h^2 for bandwidth h. The symbolic value
``MEDIAN_HEURISTIC`` ("median") requests the classical data-driven choice,
the median of all pairwise squared Euclidean distances; call
:meth:`KernelSpec.resolve` against a series to obtain the numeric value.

Every kernel value is multiplied by ``scale`` (default 1), which rescales the
feature-space geometry without changing any argmin downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._validation import check_series

MEDIAN_HEURISTIC = "median"
KERNEL_KINDS = ("linear", "gaussian", "laplace", "intersection")
_RBF_KINDS = ("gaussian", "laplace")

#: Largest series length for which a dense Gram matrix may be cached.
DENSE_GRAM_LIMIT = 4096

#: Pair enumeration cap for the median heuristic; longer series are strided.
MEDIAN_MAX_POINTS = 2000


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to use and its hyperparameters.

    Parameters
    ----------
    kind : str
        One of ``linear``, ``gaussian``, ``laplace``, ``intersection``.
    bandwidth : float or "median", optional
        Value of 2 h^2 (gaussian/laplace only). Required for those kinds,
        forbidden otherwise.
    scale : float
        Positive multiplier applied to every kernel value.
    """

    kind: str
    bandwidth: float | str | None = None
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}, expected one of {KERNEL_KINDS}")
        if self.kind in _RBF_KINDS:
            if self.bandwidth is None:
                raise ValueError(f"{self.kind} kernel requires a bandwidth")
            if isinstance(self.bandwidth, str):
                if self.bandwidth != MEDIAN_HEURISTIC:
                    raise ValueError(f"unknown symbolic bandwidth {self.bandwidth!r}")
            elif not self.bandwidth > 0:
                raise ValueError(f"bandwidth must be positive, got {self.bandwidth!r}")
        elif self.bandwidth is not None:
            raise ValueError(f"{self.kind} kernel takes no bandwidth")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale!r}")

    @property
    def resolved(self) -> bool:
        """True once the bandwidth is numeric (or not needed)."""
        return not isinstance(self.bandwidth, str)

    def resolve(self, X) -> "KernelSpec":
        """Return a copy with a "median" bandwidth replaced by its value on ``X``."""
        if self.resolved:
            return self
        return replace(self, bandwidth=median_heuristic(X))


def _require_resolved(spec: KernelSpec) -> None:
    if not spec.resolved:
        raise ValueError(
            "bandwidth is the symbolic value 'median'; call KernelSpec.resolve(series) first"
        )


def gram_row(spec: KernelSpec, X: np.ndarray, t: int) -> np.ndarray:
    """Row ``t`` of the Gram matrix: k(X_i, X_t) for every i."""
    _require_resolved(spec)
    x = X[t]
    if spec.kind == "linear":
        row = X @ x
    elif spec.kind == "intersection":
        row = np.minimum(X, x).sum(axis=1)
    else:
        d2 = ((X - x) ** 2).sum(axis=1)
        if spec.kind == "gaussian":
            row = np.exp(-d2 / spec.bandwidth)
        else:
            row = np.exp(-np.sqrt(d2) / spec.bandwidth)
    return spec.scale * row


def gram_diag(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Diagonal of the Gram matrix: k(X_i, X_i) for every i."""
    _require_resolved(spec)
    n = X.shape[0]
    if spec.kind == "linear":
        diag = (X * X).sum(axis=1)
    elif spec.kind == "intersection":
        diag = X.sum(axis=1)
    else:
        diag = np.ones(n)
    return spec.scale * diag


def _sq_dists(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Pairwise squared distances by direct differencing, chunked over X rows.

    Matches the one-row computation of :func:`gram_row` exactly; the faster
    inner-product expansion loses relative accuracy for near-identical points,
    which the Laplace kernel's square root then amplifies.
    """
    n, d = X.shape
    m = Y.shape[0]
    out = np.empty((n, m))
    chunk = max(1, int(2e6 / max(1, m * d)))
    for i in range(0, n, chunk):
        out[i : i + chunk] = ((X[i : i + chunk, None, :] - Y[None, :, :]) ** 2).sum(axis=2)
    return out


def gram_cross(spec: KernelSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Cross Gram matrix k(X_i, Y_j), shape (len(X), len(Y))."""
    _require_resolved(spec)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    if spec.kind == "linear":
        out = X @ Y.T
    elif spec.kind == "intersection":
        # broadcasting allocates n*m*d floats; chunk the right factor
        n, d = X.shape
        chunk = max(1, int(2e7 / max(1, n * d)))
        parts = [
            np.minimum(X[:, None, :], Y[None, j : j + chunk, :]).sum(axis=2)
            for j in range(0, Y.shape[0], chunk)
        ]
        out = np.concatenate(parts, axis=1)
    else:
        d2 = _sq_dists(X, Y)
        if spec.kind == "gaussian":
            out = np.exp(-d2 / spec.bandwidth)
        else:
            out = np.exp(-np.sqrt(d2) / spec.bandwidth)
    return spec.scale * out


def gram_matrix(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Full Gram matrix of a series. Memory is O(n^2); prefer GramView for large n."""
    return gram_cross(spec, X, X)


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate scale * k(x, y) for a single pair of observations."""
    _require_resolved(spec)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"observations must be 1-D and of equal dimension, got {x.shape} and {y.shape}")
    if spec.kind == "intersection":
        check_series(np.stack([x, y]), simplex=True)
    pair = np.stack([x, y])
    return float(gram_row(spec, pair, 1)[0])


def median_heuristic(X, max_points: int = MEDIAN_MAX_POINTS) -> float:
    """Median of the pairwise squared Euclidean distances (the value of 2 h^2).

    The median over all pairs i < j, with the usual average-of-middle-two
    convention for an even pair count. Beyond ``max_points`` observations the
    pairs are enumerated over a deterministic subsample: every ceil(n/max)-th
    point, first ``max_points`` kept.

    Raises
    ------
    ValueError
        If fewer than two observations are given, or the median distance is
        zero (degenerate bandwidth, e.g. all points identical).
    """
    X = check_series(X, min_samples=2)
    n = X.shape[0]
    if n > max_points:
        stride = math.ceil(n / max_points)
        X = X[::stride][:max_points]
        n = X.shape[0]
    sq = (X * X).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    iu = np.triu_indices(n, k=1)
    med = float(np.median(d2[iu]))
    if med <= 0.0:
        raise ValueError(
            "median pairwise distance is zero; the median-heuristic bandwidth is degenerate"
        )
    return med


def boundedness_check(spec: KernelSpec, X) -> float:
    """Observed bound M^2 = max_i k(X_i, X_i).

    Doubles as a conservative variance bound: the per-point feature variance
    never exceeds M^2, so this value is a safe fallback where an edge-window
    variance estimate is unavailable.
    """
    X = check_series(X, simplex=spec.kind == "intersection")
    return float(gram_diag(spec, X).max())


class GramView:
    """Read-only, on-demand view of the Gram matrix of one series.

    Rows are recomputed per call so memory stays O(n); pass ``dense=True``
    (n <= DENSE_GRAM_LIMIT) to cache the full matrix for repeated analyses.
    Instances are immutable after construction and safe for concurrent reads.
    """

    def __init__(self, spec: KernelSpec, X, dense: bool = False):
        _require_resolved(spec)
        X = check_series(X, simplex=spec.kind == "intersection")
        X = np.array(X, copy=True)
        X.setflags(write=False)
        self.spec = spec
        self._X = X
        self.n = X.shape[0]
        self._diag = gram_diag(spec, X)
        self._diag.setflags(write=False)
        self._dense: np.ndarray | None = None
        if dense:
            if self.n > DENSE_GRAM_LIMIT:
                raise ValueError(
                    f"dense Gram cache limited to n <= {DENSE_GRAM_LIMIT}, got n = {self.n}"
                )
            self._dense = gram_matrix(spec, X)
            self._dense.setflags(write=False)

    @property
    def diag(self) -> np.ndarray:
        return self._diag

    def row(self, t: int) -> np.ndarray:
        """k(X_i, X_t) for all i; O(n) work unless the dense cache is active."""
        if self._dense is not None:
            return self._dense[t]
        return gram_row(self.spec, self._X, t)

    def matrix(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        return gram_matrix(self.spec, self._X)
