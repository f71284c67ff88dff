"""Jointly sparse recovery from multiple measurement vectors by zero-point
attracting projection, with a simultaneous OMP baseline and brute-force
references for small problems."""

__version__ = "0.1.0"

from .estimators import SimultaneousOMP, ZapMMV
from .exceptions import (
    DegenerateSupportError,
    DimensionError,
    DivergenceError,
    NonFiniteError,
    OracleGuardError,
    ParameterError,
    SingularGramError,
    ZapError,
)
from .linalg import Projector, build_projector, matmul, project, read_matrix, write_matrix
from .metrics import TrialOutcome, aggregate, relative_error, support_detection
from .oracle import UniquenessReport, exhaustive_solve, spark, uniqueness_check
from .penalty import (
    PenaltyParams,
    approx_penalty,
    exact_l20,
    f_alpha_scalar,
    f_alpha_subderiv,
    penalty_gradient,
    row_l2_norms,
)
from .problems import MmvProblem, generate
from .solver import SolveResult, StopReason, ZapConfig, zap_solve, zap_step
from .somp import SompResult, somp_solve
