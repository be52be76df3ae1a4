"""Newton-Mandelbrot and Murase-Mandelbrot sets, extended Newton methods."""

from .complex_power import BranchSpec, branch_pow, int_pow, principal_arg
from .escape import (
    GridSpec,
    MembershipMap,
    OrbitOutcome,
    classify_orbit,
    compare_maps,
    connected_components,
    power_relation_check,
    scan_grid,
)
from .estimators import ExtendedNewtonSolver, MembershipEstimator
from .exceptions import DomainError, EstimationError, PoleError, SingularStepError
from .newton import (
    IterationTrace,
    MethodParams,
    division_point_check,
    estimate_order,
    method1_step,
    method2_step,
    method3_step,
    method4_step,
    modified_derivative,
    solve,
)
from .polynomial import Polynomial
from .recurrences import (
    GeneralP,
    MMFormula1,
    MMFormula2,
    MMFormula3,
    PlainPower,
    general_p_step,
    mm1_step,
    mm2_step,
    mm3_step,
    murase_first_step,
    murase_second_step,
    murase_third_step,
)

__version__ = "0.1.0"
