"""Extended Newton iterations on polynomials.

Four step rules are provided:

* ``method1_step``   ``x'^q = x^q - lam * x^r * f(x) / f^(i)(x)``
* ``method2_step``   the same with the modified derivative ``[f^(i)(x)]_m``
* ``method3_step``   Tsuchikura-Horiguchi, ``x'^q = x^q - q x^(q-1) f(x)/f'(x)``
* ``method4_step``   Murase-Newton, ``x' = x - lam * f(x)/f'(x)``

With ``q = lam = i = 1`` and ``r = 0`` every rule is the Newton-Raphson step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complex_power import polar_pow
from .exceptions import DomainError, EstimationError, SingularStepError
from .polynomial import Polynomial

RESIDUAL_TOL = 1e-12
STEP_TOL = 1e-13
MAX_ITER = 200

METHODS = ("method1", "method2", "method3", "method4")
#: short names accepted by the CLI
METHOD_ALIASES = {"newton": "method4", "m1": "method1", "m2": "method2",
                  "th": "method3", "m3": "method3", "mn": "method4", "m4": "method4"}


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) or (isinstance(x, complex) and x.imag == 0)


def _pow(x, e: float):
    """``x**e``: exact for integer ``e``, principal branch otherwise."""
    if float(e).is_integer():
        e = int(e)
        if e < 0 and x == 0:
            raise DomainError(f"0 raised to negative power {e}")
        return x**e
    if x == 0:
        raise DomainError(f"0 raised to non-integer power {e!r}")
    if _is_real(x) and x.real > 0:
        return x.real**e
    return polar_pow(x, e)


def _root(w, q: float, x_prev):
    """Invert ``x -> x**q`` at ``w``.

    Real data stays real when a real root exists: the sign of ``x_prev``
    picks between the two real roots for even ``q``.  Otherwise the
    principal branch is used.
    """
    if q == 1:
        return w
    if _is_real(w) and _is_real(x_prev):
        w = float(w.real if isinstance(w, complex) else w)
        if float(q).is_integer():
            qi = int(q)
            if qi % 2:
                return math.copysign(abs(w) ** (1.0 / qi), w)
            if w >= 0:
                return math.copysign(w ** (1.0 / qi), float(x_prev.real if isinstance(x_prev, complex) else x_prev) or 1.0)
        elif w > 0:
            return w ** (1.0 / q)
    if w == 0:
        return 0.0 * w
    return polar_pow(w, 1.0 / q)


def exact_m(poly: Polynomial):
    """The ``m`` for which :func:`modified_derivative` equals the true derivative."""
    return poly.degree * poly.coeffs[0]


def modified_derivative(poly: Polynomial, i: int, m, x):
    """``[f^(i)(x)]_m``: the ``i``-th derivative with its leading factor replaced.

    The leading derivative coefficient ``p!/(p-i)! * a_0`` becomes
    ``(p-1)!/(p-i)! * m``.  For ``i = p - 1`` this is exactly
    ``(p-1)! * (m x + a_1)``; applied to ``z^(p+1) - z^p + c`` with
    ``i = p`` it gives ``p! * (m z - 1)``.  ``m = p * a_0`` (see
    :func:`exact_m`) recovers ``f^(i)``.
    """
    p = poly.degree
    if not 1 <= i <= p:
        raise DomainError(f"derivative order must be in 1..{p}, got {i}")
    b = poly.derivative_coeffs(i)
    b[0] = m * (math.factorial(p - 1) // math.factorial(p - i))
    return Polynomial._horner(b, x)


def _check_nonzero(**kw):
    for k, v in kw.items():
        if v == 0:
            raise DomainError(f"{k} must be nonzero")


def _quotient(fx, d):
    if d == 0:
        raise SingularStepError("derivative vanished at the current iterate")
    return fx / d


def method1_step(x, poly: Polynomial, q=1.0, lam=1.0, r=0.0, i: int = 1):
    """One step of extended Newton method 1 (true ``i``-th derivative)."""
    _check_nonzero(q=q, lam=lam)
    if not 1 <= i <= poly.degree:
        raise DomainError(f"derivative order must be in 1..{poly.degree}, got {i}")
    ratio = _quotient(poly(x), poly.derivative(x, i))
    return _root(_pow(x, q) - lam * _pow(x, r) * ratio, q, x)


def method2_step(x, poly: Polynomial, q=1.0, lam=1.0, r=0.0, i: int = 1, m=None):
    """One step of extended Newton method 2 (modified derivative).

    ``m=None`` uses :func:`exact_m`, reducing to method 1.
    """
    _check_nonzero(q=q, lam=lam)
    if m is None:
        m = exact_m(poly)
    ratio = _quotient(poly(x), modified_derivative(poly, i, m, x))
    return _root(_pow(x, q) - lam * _pow(x, r) * ratio, q, x)


def method3_update(x, poly: Polynomial, q=1.0):
    """The value of ``x_(k+1)^q`` under method 3, before root extraction."""
    _check_nonzero(q=q)
    ratio = _quotient(poly(x), poly.derivative(x, 1))
    return _pow(x, q) - q * _pow(x, q - 1) * ratio


def method3_step(x, poly: Polynomial, q=1.0):
    """One Tsuchikura-Horiguchi step."""
    return _root(method3_update(x, poly, q), q, x)


def method4_step(x, poly: Polynomial, lam=1.0):
    """One Murase-Newton step ``x - lam * f(x) / f'(x)``."""
    _check_nonzero(lam=lam)
    return x - lam * _quotient(poly(x), poly.derivative(x, 1))


def newton_step(x, poly: Polynomial):
    return method4_step(x, poly, 1.0)


def division_point_check(x_k, x_next, lam, poly: Polynomial) -> float:
    """Deviation of ``((lam-1)/lam) x_k + x_next/lam`` from the Newton step.

    For ``lam > 1`` the Newton iterate divides the segment internally, for
    ``0 < lam < 1`` externally; either way the deviation should vanish up
    to rounding.
    """
    _check_nonzero(lam=lam)
    combo = (lam - 1) / lam * x_k + x_next / lam
    return abs(combo - newton_step(x_k, poly))


@dataclass(frozen=True)
class MethodParams:
    variant: str = "method4"
    q: float = 1.0
    lam: float = 1.0
    r: float = 0.0
    i: int = 1
    m: Optional[float] = None

    def __post_init__(self):
        v = METHOD_ALIASES.get(self.variant, self.variant)
        if v not in METHODS:
            raise DomainError(f"unknown method {self.variant!r}")
        object.__setattr__(self, "variant", v)
        _check_nonzero(q=self.q, lam=self.lam)

    def step(self, x, poly: Polynomial):
        if self.variant == "method1":
            return method1_step(x, poly, self.q, self.lam, self.r, self.i)
        if self.variant == "method2":
            return method2_step(x, poly, self.q, self.lam, self.r, self.i, self.m)
        if self.variant == "method3":
            return method3_step(x, poly, self.q)
        return method4_step(x, poly, self.lam)


NEWTON = MethodParams()


@dataclass
class IterationTrace:
    """Iterates of one solver run and how it ended.

    ``status`` is ``"converged"``, ``"diverged"`` or ``"stalled"``.  For a
    converged run ``steps`` counts steps to the accepted iterate and
    ``steps_to_residual`` the steps until the residual first met tolerance.
    """

    iterates: list
    status: str
    residuals: list = field(default_factory=list)
    root: object = None
    steps: int = 0
    steps_to_residual: Optional[int] = None
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def errors(self, root) -> list:
        return [abs(x - root) for x in self.iterates]


def solve(x0, poly: Polynomial, params: MethodParams = NEWTON, max_iter: int = MAX_ITER,
          residual_tol: float = RESIDUAL_TOL, step_tol: float = STEP_TOL,
          divergence_limit: float = 1e100) -> IterationTrace:
    """Iterate ``params.step`` from ``x0``.

    Converged means ``|f(x_k)| <= residual_tol`` and
    ``|x_k - x_(k-1)| <= step_tol``.  A singular step ends the run as
    ``stalled``; a non-finite or huge iterate as ``diverged``.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    x = x0
    iterates = [x]
    residuals = [abs(poly(x))]
    hit = 0 if residuals[0] <= residual_tol else None
    for k in range(1, max_iter + 1):
        try:
            x_next = params.step(x, poly)
        except (SingularStepError, DomainError) as exc:
            return IterationTrace(iterates, "stalled", residuals, steps=k - 1,
                                  steps_to_residual=hit, message=f"step {k}: {exc}")
        if not np.isfinite(x_next) or abs(x_next) > divergence_limit:
            iterates.append(x_next)
            residuals.append(float("nan"))
            return IterationTrace(iterates, "diverged", residuals, steps=k,
                                  message=f"iterate {k} left the finite range")
        res = abs(poly(x_next))
        iterates.append(x_next)
        residuals.append(res)
        if hit is None and res <= residual_tol:
            hit = k
        if res <= residual_tol and abs(x_next - x) <= step_tol:
            return IterationTrace(iterates, "converged", residuals, root=x_next, steps=k,
                                  steps_to_residual=hit)
        x = x_next
    return IterationTrace(iterates, "diverged", residuals, steps=max_iter, steps_to_residual=hit,
                          message=f"no convergence within {max_iter} steps")


_FLOOR = 100 * np.finfo(float).eps


def _usable_errors(trace: IterationTrace, root) -> list:
    errs = trace.errors(root)
    usable = []
    for e in errs:
        if e < _FLOOR or (usable and e >= usable[-1]):
            break
        usable.append(e)
    return usable


def estimate_order(trace: IterationTrace, root) -> float:
    """Empirical convergence order: median of ``ln(e_(k+1)/e_k) / ln(e_k/e_(k-1))``.

    Only the monotone-decreasing prefix of the errors above ``100 * eps`` is
    used.
    """
    if not trace.converged or len(trace.iterates) < 4:
        raise EstimationError("need a converged trace with at least 4 iterates")
    e = _usable_errors(trace, root)
    ratios = [math.log(e[k + 1] / e[k]) / math.log(e[k] / e[k - 1]) for k in range(1, len(e) - 1)]
    if not ratios:
        raise EstimationError("too few usable error terms")
    return float(np.median(ratios))


def error_ratio(trace: IterationTrace, root) -> float:
    """Median of ``e_(k+1) / e_k`` over the usable prefix (linear rate)."""
    e = _usable_errors(trace, root)
    if len(e) < 2:
        raise EstimationError("too few usable error terms")
    return float(np.median([e[k + 1] / e[k] for k in range(len(e) - 1)]))
