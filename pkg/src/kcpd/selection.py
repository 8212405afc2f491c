"""Penalties and the data-driven choice of the number of segments.

Three penalty forms are supported, all expressed per point (divide totals by n):

* ``kernel_log``      C * v_max * D/n * (1 + log(n/D))
* ``birge_massart``   v_max * D/n * (c1 * log(n/D) + c2)
* ``linear_dim``      2 * D * A / n   (restricted candidate grids)

``v_max`` bounds the per-point variance in feature space. It can be estimated
from presumed-stationary edge windows of the series (:func:`estimate_vmax`),
or bounded by the observed kernel diagonal maximum (see
:func:`~kcpd.kernels.boundedness_check`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_series
from .dynprog import DpSolution, Segmentation
from .kernels import KernelSpec, gram_diag, gram_matrix

PENALTY_FORMS = ("kernel_log", "birge_massart", "linear_dim")

#: Edge-window fractions used when none are given: the first 5% and last 5%
#: of the time range are presumed change-point free.
DEFAULT_EDGE_FRACTIONS = (0.05, 0.95)


class DegenerateVarianceError(ValueError):
    """Both edge windows show zero feature-space variance.

    The edge-window estimate is unusable; fall back to the observed kernel
    bound M^2 (``boundedness_check``), which is always a valid v_max.
    """


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty form plus exactly the constants that form requires.

    kernel_log needs ``C`` and ``v_max``; birge_massart needs ``c1``, ``c2``
    and ``v_max``; linear_dim needs only ``A``.
    """

    form: str
    v_max: float | None = None
    C: float | None = None
    c1: float | None = None
    c2: float | None = None
    A: float | None = None

    def __post_init__(self) -> None:
        if self.form not in PENALTY_FORMS:
            raise ValueError(f"unknown penalty form {self.form!r}, expected one of {PENALTY_FORMS}")
        required = {
            "kernel_log": ("C", "v_max"),
            "birge_massart": ("c1", "c2", "v_max"),
            "linear_dim": ("A",),
        }[self.form]
        for name in ("C", "c1", "c2", "A", "v_max"):
            value = getattr(self, name)
            if name in required:
                if value is None:
                    raise ValueError(f"{self.form} penalty requires {name}")
                if not value > 0:
                    raise ValueError(f"{name} must be positive, got {value!r}")
            elif value is not None:
                raise ValueError(f"{self.form} penalty does not take {name}")

    @property
    def v_max_used(self) -> float:
        """The variance-bound constant entering the formula (A for linear_dim)."""
        return self.A if self.form == "linear_dim" else self.v_max


@dataclass(frozen=True)
class SelectionReport:
    """Criterion curves and the chosen number of segments.

    Maps are keyed by D over the computed range; ties in the criterion are
    broken toward the smallest D.
    """

    d_hat: int
    emp_risk: dict[int, float]
    penalty: dict[int, float]
    criterion: dict[int, float]
    v_max_used: float
    segmentation: Segmentation


def penalty(spec: PenaltySpec, n: int, D: int) -> float:
    """Penalty value for a D-segment model on n points."""
    if not 1 <= D <= n:
        raise ValueError(f"D must be in [1, {n}], got {D}")
    if spec.form == "kernel_log":
        return spec.C * spec.v_max * D / n * (1.0 + math.log(n / D))
    if spec.form == "birge_massart":
        return spec.v_max * D / n * (spec.c1 * math.log(n / D) + spec.c2)
    return 2.0 * D * spec.A / n


def estimate_vmax(
    X,
    spec: KernelSpec,
    lower_frac: float = DEFAULT_EDGE_FRACTIONS[0],
    upper_frac: float = DEFAULT_EDGE_FRACTIONS[1],
) -> float:
    """Edge-window estimate of the per-point feature-space variance bound.

    Assumes no change occurs before ``lower_frac`` or after ``upper_frac`` of
    the time range, so each edge window is stationary. For each window W the
    empirical covariance trace is computed with the plug-in (1/|W|)
    normalization,

        tr = (1/|W|) sum_{i in W} k(X_i, X_i) - (1/|W|^2) sum_{i,j in W} k(X_i, X_j),

    and the larger of the two traces is returned. A window with no variance
    is skipped in favor of the other; if both are degenerate a
    :class:`DegenerateVarianceError` is raised.
    """
    if not 0.0 < lower_frac < upper_frac < 1.0:
        raise ValueError(f"need 0 < lower_frac < upper_frac < 1, got {lower_frac}, {upper_frac}")
    X = check_series(X, simplex=spec.kind == "intersection")
    n = X.shape[0]
    windows = [(0, int(math.floor(n * lower_frac))), (int(math.ceil(n * upper_frac)), n)]
    traces = []
    for a, b in windows:
        if b - a < 2:
            raise ValueError(
                f"edge window [{a}, {b}) has fewer than 2 points; "
                "increase the window fractions or pass v_max explicitly"
            )
        W = X[a:b]
        diag_mean = float(gram_diag(spec, W).mean())
        tr = diag_mean - float(gram_matrix(spec, W).mean())
        if tr > 1e-12 * max(1.0, abs(diag_mean)):
            traces.append(tr)
    if not traces:
        raise DegenerateVarianceError(
            "both edge windows have zero empirical variance; "
            "fall back to the kernel bound M^2 (boundedness_check) as v_max"
        )
    return max(traces)


def select(solution: DpSolution, pen_spec: PenaltySpec, n: int | None = None) -> SelectionReport:
    """Pick the number of segments minimizing empirical risk plus penalty.

    The criterion at each D is best_cost(D)/n + penalty(D); the smallest
    minimizing D wins. The full curves are kept on the report for inspection
    or plotting.
    """
    if n is None:
        n = solution.n
    emp: dict[int, float] = {}
    pen: dict[int, float] = {}
    crit: dict[int, float] = {}
    d_hat = None
    best = math.inf
    for D in sorted(solution.best_cost):
        emp[D] = solution.best_cost[D] / n
        pen[D] = penalty(pen_spec, n, D)
        crit[D] = emp[D] + pen[D]
        if crit[D] < best:
            best = crit[D]
            d_hat = D
    return SelectionReport(
        d_hat=d_hat,
        emp_risk=emp,
        penalty=pen,
        criterion=crit,
        v_max_used=pen_spec.v_max_used,
        segmentation=solution.best_seg[d_hat],
    )


def expected_quadratic_term(v, seg: Segmentation) -> float:
    """Expected squared norm of per-point noise projected onto a segmentation.

    For per-point variances v_i, the expectation equals the sum over segments
    of the within-segment average variance. Used as the analytic side of the
    Monte-Carlo concentration checks.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != seg.n:
        raise ValueError(f"v must be 1-D of length {seg.n}")
    if (v < 0).any():
        raise ValueError("variances must be nonnegative")
    return float(sum(v[s:e].mean() for s, e in seg.segments()))
