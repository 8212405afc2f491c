"""Evaluation metrics: one-sided breakpoint distances and Monte-Carlo risk.

Breakpoints are compared on the unit time scale (index / n), so distances are
directly comparable across series lengths. Risk is the average squared
feature-space distance between the fitted piecewise mean embedding and the
true per-point mean embedding; the latter is only reachable through sampling,
so it is estimated by Monte Carlo with fresh reference draws from the
generating distributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import check_series
from .dynprog import Segmentation
from .kernels import DENSE_GRAM_LIMIT, KernelSpec, gram_cross, gram_matrix
from .simulate import Scenario, sample_mw

MIN_REFERENCE_SAMPLES = 1000


@dataclass(frozen=True)
class HausdorffReport:
    """One-sided distances between two breakpoint sets, in time fractions."""

    est_to_true: float
    true_to_est: float


@dataclass(frozen=True)
class RiskEstimate:
    """Monte-Carlo estimate of the per-point feature-space risk.

    The estimator is unbiased, so ``risk`` may dip slightly below zero; it
    should stay above -2 * std_error.
    """

    risk: float
    mc_samples: int
    std_error: float


@dataclass(frozen=True)
class RiskRatioReport:
    ratio: float
    std_error: float
    n_replications: int


def hausdorff(est, truth) -> HausdorffReport:
    """One-sided distances between estimated and true breakpoint fractions.

    ``est_to_true`` is the largest distance from an estimated point to the
    nearest true point; ``true_to_est`` is the transpose. Both sets must be
    non-empty: a detection run with no breakpoints is a distinguished outcome
    the caller must report separately, not fold into these distances.
    """
    est = np.atleast_1d(np.asarray(est, dtype=float))
    truth = np.atleast_1d(np.asarray(truth, dtype=float))
    if est.size == 0 or truth.size == 0:
        raise ValueError(
            "breakpoint sets must be non-empty; handle the no-breakpoint outcome separately"
        )
    d = np.abs(est[:, None] - truth[None, :])
    return HausdorffReport(
        est_to_true=float(d.min(axis=1).max()),
        true_to_est=float(d.min(axis=0).max()),
    )


class RiskEvaluator:
    """Estimates the risk of many segmentations of one series at shared cost.

    The expensive parts of the Monte-Carlo estimate (reference draws from the
    true distributions and their kernel statistics against the series) do not
    depend on the segmentation being scored, so they are computed once here;
    :meth:`risk` then prices any segmentation cheaply. Reference draws are
    split into independent batches, and the spread of the per-batch estimates
    yields the standard error.

    Parameters
    ----------
    X : array-like, shape (n, d)
        The observed series the segmentations refer to.
    spec : KernelSpec
        Resolved kernel.
    scenario : Scenario
        Ground truth supplying the generating distribution at every index.
    n_ref : int
        Total reference draws per distinct distribution (>= 1000); rounded
        down to a multiple of ``n_batches``.
    observation_map : callable, optional
        Applied to raw 1-D mixture draws to produce observation rows, when
        the series itself was generated through such a map (e.g. the
        histogram embedding used with the intersection kernel).
    """

    def __init__(
        self,
        X,
        spec: KernelSpec,
        scenario: Scenario,
        n_ref: int = 5000,
        seed: int = 0,
        n_batches: int = 10,
        observation_map: Callable[[np.ndarray], np.ndarray] | None = None,
    ):
        if n_ref < MIN_REFERENCE_SAMPLES:
            raise ValueError(f"n_ref must be >= {MIN_REFERENCE_SAMPLES}, got {n_ref}")
        if n_batches < 2:
            raise ValueError("need at least 2 batches for a standard error")
        X = check_series(X, simplex=spec.kind == "intersection")
        n = X.shape[0]
        if n != scenario.n:
            raise ValueError(f"series length {n} does not match scenario n {scenario.n}")
        if n > DENSE_GRAM_LIMIT:
            raise ValueError(f"risk evaluation holds a dense Gram matrix; n <= {DENSE_GRAM_LIMIT}")

        self.n = n
        self.spec = spec
        self._ids = scenario.ids_per_index()
        self._batch = n_ref // n_batches
        self._n_batches = n_batches
        self.mc_samples = self._batch * n_batches

        # 2-D prefix sums of the series Gram matrix give any segment's
        # squared mean-embedding norm in O(1)
        K = gram_matrix(spec, X)
        Q2 = np.zeros((n + 1, n + 1))
        Q2[1:, 1:] = K.cumsum(axis=0).cumsum(axis=1)
        self._Q2 = Q2

        rng = np.random.default_rng(seed)
        unique_ids = sorted(set(self._ids.tolist()))
        self._id_index = {q: i for i, q in enumerate(unique_ids)}
        m = self._batch
        # usq[q, b]: unbiased (off-diagonal U-statistic) estimate of the true
        # embedding's squared norm for distribution q, from batch b
        self._usq = np.empty((len(unique_ids), n_batches))
        # cross[j, q, b]: mean kernel value between series point j and batch b
        self._cross = np.empty((n, len(unique_ids), n_batches))
        for q in unique_ids:
            qi = self._id_index[q]
            draws = sample_mw(q, self.mc_samples, rng)
            Z = draws[:, None] if observation_map is None else observation_map(draws)
            for b in range(n_batches):
                Zb = Z[b * m : (b + 1) * m]
                G = gram_matrix(spec, Zb)
                self._usq[qi, b] = (G.sum() - np.trace(G)) / (m * (m - 1))
                self._cross[:, qi, b] = gram_cross(spec, X, Zb).mean(axis=1)

    def _mean_norm_sq(self, s: int, e: int) -> float:
        quad = self._Q2[e, e] - self._Q2[s, e] - self._Q2[e, s] + self._Q2[s, s]
        return quad / (e - s) ** 2

    def risk(self, seg: Segmentation) -> RiskEstimate:
        """Estimated average squared embedding error of a segmentation's fit."""
        if seg.n != self.n:
            raise ValueError(f"segmentation is over {seg.n} points, series has {self.n}")
        risk_b = np.zeros(self._n_batches)
        for s, e in seg.segments():
            mean_sq = self._mean_norm_sq(s, e)
            seg_cross = self._cross[s:e].mean(axis=0)  # (n_ids, B)
            ids_here, counts = np.unique(self._ids[s:e], return_counts=True)
            for q, cnt in zip(ids_here, counts):
                qi = self._id_index[q]
                risk_b += cnt * (mean_sq - 2.0 * seg_cross[qi] + self._usq[qi])
        risk_b /= self.n
        return RiskEstimate(
            risk=float(risk_b.mean()),
            mc_samples=self.mc_samples,
            std_error=float(risk_b.std(ddof=1) / np.sqrt(self._n_batches)),
        )


def mc_risk(
    seg: Segmentation,
    X,
    spec: KernelSpec,
    scenario: Scenario,
    n_ref: int = 5000,
    seed: int = 0,
    observation_map: Callable[[np.ndarray], np.ndarray] | None = None,
) -> RiskEstimate:
    """One-off risk estimate; build a RiskEvaluator to score many segmentations."""
    ev = RiskEvaluator(
        X, spec, scenario, n_ref=n_ref, seed=seed, observation_map=observation_map
    )
    return ev.risk(seg)


def risk_ratio(selected_risks, oracle_risks) -> RiskRatioReport:
    """Mean over replications of selected-model risk over best-model risk.

    ``oracle_risks`` holds, per replication, the smallest risk among the
    candidate segmentations (one per segment count); a ratio near 1 means the
    penalized choice tracks the best available model.
    """
    sel = np.asarray(selected_risks, dtype=float)
    ora = np.asarray(oracle_risks, dtype=float)
    if sel.shape != ora.shape or sel.ndim != 1:
        raise ValueError("selected and oracle risks must be 1-D of equal length")
    if sel.size < 2:
        raise ValueError("need at least 2 replications")
    if (ora <= 0).any():
        raise ValueError("oracle risk is zero or negative (degenerate noiseless case)")
    r = sel / ora
    return RiskRatioReport(
        ratio=float(r.mean()),
        std_error=float(r.std(ddof=1) / np.sqrt(r.size)),
        n_replications=int(r.size),
    )
