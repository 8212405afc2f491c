"""Scikit-learn style front end for the full detection pipeline."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ._validation import check_series
from .dynprog import solve, solve_restricted
from .kernels import KernelSpec, boundedness_check
from .selection import (
    DEFAULT_EDGE_FRACTIONS,
    DegenerateVarianceError,
    PenaltySpec,
    estimate_vmax,
    select,
)


class KernelChangePointDetector(BaseEstimator):
    """Detects multiple change-points in the distribution of a sequence.

    The series is mapped into the feature space of a positive-definite kernel,
    where a change in distribution becomes a change in mean. For every
    candidate segment count D up to ``d_max``, dynamic programming finds the
    exact least-squares piecewise-constant fit; a penalty increasing in D then
    picks the number of segments, so changes in any moment of the
    distribution (not only mean or variance) are detectable without knowing
    their number in advance.

    Parameters
    ----------
    kernel : {"gaussian", "linear", "laplace", "intersection"}, default="gaussian"
        Kernel defining the feature space. The intersection kernel requires
        histogram inputs and ``simplex=True``.
    bandwidth : float or "median", default="median"
        Value of 2 h^2 for the gaussian/laplace kernels; "median" picks the
        median pairwise squared distance of the fitted series. Ignored for
        the other kernels.
    scale : float, default=1.0
        Multiplier on every kernel value; does not affect the selected
        breakpoints.
    d_max : int or None, default=None
        Largest candidate segment count; None means min(n, 50).
    penalty : {"kernel_log", "birge_massart", "linear_dim"}, default="kernel_log"
        Penalty shape; see :mod:`kcpd.selection`.
    C : float, default=2.0
        Leading constant of the kernel_log penalty.
    c1, c2 : float, defaults 2.0 and 5.0
        Constants of the birge_massart penalty.
    A : float or None, default=None
        Constant of the linear_dim penalty; None falls back to the resolved
        variance bound.
    v_max : "auto", "bound" or float, default="auto"
        Per-point feature-variance bound. "auto" estimates it from the edge
        windows (falling back to the kernel bound when both windows are
        flat); "bound" uses max_i k(X_i, X_i) directly.
    edge_fractions : pair of floats, default=(0.05, 0.95)
        Time fractions delimiting the presumed change-free edge windows used
        by the "auto" variance estimate.
    grid : sequence of int or None, default=None
        Optional restricted set of candidate breakpoint indices.
    simplex : bool, default=False
        Validate observations as histogram rows (entries in [0, 1], each row
        summing to 1).
    dense_gram : bool, default=False
        Cache the full Gram matrix during fitting (n <= 4096).

    Attributes
    ----------
    breakpoints_ : ndarray of int
        Detected change-point indices (start of each new segment).
    fractions_ : ndarray of float
        The same breakpoints divided by n.
    n_segments_ : int
        Selected number of segments.
    labels_ : ndarray of int, shape (n,)
        Segment id per time index.
    report_ : SelectionReport
        Criterion, penalty and empirical-risk curves over D.
    solution_ : DpSolution
        Optimal cost and segmentation per candidate D.
    bandwidth_ : float or None
        Numeric bandwidth actually used (after "median" resolution).
    v_max_ : float
        Variance bound actually used.
    v_max_source_ : str
        One of "auto", "bound", "fixed", "bound_fallback".

    Examples
    --------
    >>> import numpy as np
    >>> from kcpd import KernelChangePointDetector
    >>> x = np.concatenate([np.zeros(50), np.full(50, 5.0)])
    >>> det = KernelChangePointDetector(kernel="linear")
    >>> det.fit(x).breakpoints_
    array([50])
    """

    def __init__(
        self,
        kernel: str = "gaussian",
        bandwidth: float | str = "median",
        scale: float = 1.0,
        d_max: int | None = None,
        penalty: str = "kernel_log",
        C: float = 2.0,
        c1: float = 2.0,
        c2: float = 5.0,
        A: float | None = None,
        v_max: float | str = "auto",
        edge_fractions: tuple[float, float] = DEFAULT_EDGE_FRACTIONS,
        grid=None,
        simplex: bool = False,
        dense_gram: bool = False,
    ):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.scale = scale
        self.d_max = d_max
        self.penalty = penalty
        self.C = C
        self.c1 = c1
        self.c2 = c2
        self.A = A
        self.v_max = v_max
        self.edge_fractions = edge_fractions
        self.grid = grid
        self.simplex = simplex
        self.dense_gram = dense_gram

    def _kernel_spec(self) -> KernelSpec:
        bw = self.bandwidth if self.kernel in ("gaussian", "laplace") else None
        return KernelSpec(kind=self.kernel, bandwidth=bw, scale=self.scale)

    def _resolve_vmax(self, X, spec: KernelSpec) -> tuple[float, str]:
        if isinstance(self.v_max, numbers.Real):
            if not self.v_max > 0:
                raise ValueError(f"v_max must be positive, got {self.v_max!r}")
            return float(self.v_max), "fixed"
        if self.v_max == "bound":
            return boundedness_check(spec, X), "bound"
        if self.v_max == "auto":
            lo, hi = self.edge_fractions
            try:
                return estimate_vmax(X, spec, lo, hi), "auto"
            except DegenerateVarianceError:
                return boundedness_check(spec, X), "bound_fallback"
        raise ValueError(f"v_max must be 'auto', 'bound' or a positive number, got {self.v_max!r}")

    def _penalty_spec(self, v: float) -> PenaltySpec:
        if self.penalty == "kernel_log":
            return PenaltySpec(form="kernel_log", C=self.C, v_max=v)
        if self.penalty == "birge_massart":
            return PenaltySpec(form="birge_massart", c1=self.c1, c2=self.c2, v_max=v)
        if self.penalty == "linear_dim":
            return PenaltySpec(form="linear_dim", A=self.A if self.A is not None else v)
        raise ValueError(f"unknown penalty {self.penalty!r}")

    def fit(self, X, y=None):
        """Run the full pipeline on a series and store the chosen segmentation."""
        if self.kernel == "intersection" and not self.simplex:
            raise ValueError("the intersection kernel requires histogram rows; pass simplex=True")
        X = check_series(X, simplex=self.simplex, min_samples=2)
        spec = self._kernel_spec().resolve(X)
        v, source = self._resolve_vmax(X, spec)
        if self.grid is not None:
            d_max = self.d_max if self.d_max is not None else len(tuple(self.grid)) + 1
            solution = solve_restricted(X, spec, d_max, self.grid, dense=self.dense_gram)
        else:
            solution = solve(X, spec, self.d_max, dense=self.dense_gram)
        report = select(solution, self._penalty_spec(v))

        self.n_samples_ = X.shape[0]
        self.n_features_in_ = X.shape[1]
        self.kernel_spec_ = spec
        self.bandwidth_ = spec.bandwidth
        self.v_max_ = v
        self.v_max_source_ = source
        self.solution_ = solution
        self.report_ = report
        self.n_segments_ = report.d_hat
        self.breakpoints_ = np.asarray(report.segmentation.breakpoints, dtype=int)
        self.fractions_ = report.segmentation.fractions()
        self.labels_ = report.segmentation.labels()
        return self

    def predict(self, X=None) -> np.ndarray:
        """Segment label per time index of the fitted series.

        Detection is transductive: labels refer to the series seen by
        ``fit``. When ``X`` is given its length must match that series.
        """
        if not hasattr(self, "labels_"):
            raise NotFittedError("call fit before predict")
        if X is not None:
            X = check_series(X)
            if X.shape[0] != self.n_samples_:
                raise ValueError(
                    f"predict expects the fitted series ({self.n_samples_} rows), got {X.shape[0]}"
                )
        return self.labels_

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict()
