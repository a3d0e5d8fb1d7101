"""Homotopic averaged subgradient method for the hard-margin linear SVM."""

from homsvm.dataset import (
    Dataset,
    paper_dataset,
    random_separable,
    read_csv,
    scaled_dataset,
    write_csv,
)
from homsvm.losses import LossContext
from homsvm.schedule import SchedulePlan, StageParams, make_plan
from homsvm.solver import SolverConfig, SolveTrace, homotopic_solve, logistic_gd
from homsvm.oracle import (
    OracleSolution,
    estimate_lambda_prime,
    exact_hard_margin,
    exact_regularized,
)
from homsvm.metrics import BoundContext, angle_gap, l2_error, margin_gap, theorem_bound

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "paper_dataset",
    "random_separable",
    "read_csv",
    "scaled_dataset",
    "write_csv",
    "LossContext",
    "SchedulePlan",
    "StageParams",
    "make_plan",
    "SolverConfig",
    "SolveTrace",
    "homotopic_solve",
    "logistic_gd",
    "OracleSolution",
    "estimate_lambda_prime",
    "exact_hard_margin",
    "exact_regularized",
    "BoundContext",
    "angle_gap",
    "l2_error",
    "margin_gap",
    "theorem_bound",
]
