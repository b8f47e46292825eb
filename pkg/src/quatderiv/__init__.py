"""Quaternion matrix calculus with GHR derivatives."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    EvalError,
    HermitianError,
    QuatDerivError,
    RankError,
    ShapeError,
    SingularError,
    StructureError,
)
from .quaternion import BASIS, I, J, K, ONE, Quaternion, UnitAxis
from .qmatrix import QMatrix
from .ghr import DiffConfig, GhrJacobian, ghr_left, ghr_left_conj, ghr_right, jacobian
from .tables import REGISTRY, verify_entry, verify_table
from .differentials import DIFFERENTIALS, dpinv
from .rules import DifferentiableMap, chain_rule, identify_jacobians, product_rule
from .optimizers import (
    DescentConfig,
    FilterState,
    LsqProblem,
    lsq_solve,
    max_change_direction,
    qapa_step,
    qlms_step,
    stationary_check,
    steepest_descent,
    wl_qlms_step,
)
