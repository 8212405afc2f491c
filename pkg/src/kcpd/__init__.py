"""Kernel change-point detection with penalized model selection.

Detects multiple change-points in the full probability distribution of a
sequence: observations are embedded in the feature space of a
positive-definite kernel, dynamic programming finds the exact least-squares
segmentation for every candidate segment count, and a penalty increasing in
the segment count picks their number from data.
"""

from .cost import CostEngine
from .dynprog import DpSolution, Segmentation, solve, solve_restricted
from .estimator import KernelChangePointDetector
from .kernels import (
    MEDIAN_HEURISTIC,
    GramView,
    KernelSpec,
    boundedness_check,
    eval_kernel,
    gram_matrix,
    median_heuristic,
)
from .metrics import (
    HausdorffReport,
    RiskEstimate,
    RiskEvaluator,
    RiskRatioReport,
    hausdorff,
    mc_risk,
    risk_ratio,
)
from .selection import (
    DegenerateVarianceError,
    PenaltySpec,
    SelectionReport,
    estimate_vmax,
    expected_quadratic_term,
    penalty,
    select,
)
from .simulate import Scenario, generate, mixture_moments, sample_mw

__version__ = "0.1.0"

__all__ = [
    "CostEngine",
    "DegenerateVarianceError",
    "DpSolution",
    "GramView",
    "HausdorffReport",
    "KernelChangePointDetector",
    "KernelSpec",
    "MEDIAN_HEURISTIC",
    "PenaltySpec",
    "RiskEstimate",
    "RiskEvaluator",
    "RiskRatioReport",
    "Scenario",
    "SelectionReport",
    "Segmentation",
    "boundedness_check",
    "estimate_vmax",
    "eval_kernel",
    "expected_quadratic_term",
    "generate",
    "gram_matrix",
    "hausdorff",
    "mc_risk",
    "median_heuristic",
    "mixture_moments",
    "penalty",
    "risk_ratio",
    "sample_mw",
    "select",
    "solve",
    "solve_restricted",
]
