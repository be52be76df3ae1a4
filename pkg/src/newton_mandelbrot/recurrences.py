"""Step maps ``z_k -> z_(k+1)`` for the Murase-type recurrence families.

The scalar ``*_step`` functions raise :class:`PoleError` on a vanishing
denominator.  The recurrence spec classes wrap the same formulas as array
kernels returning ``(z_next, pole_mask)`` for the escape-time engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .complex_power import BranchSpec, branch_pow, int_pow
from .exceptions import DomainError, PoleError
from .polynomial import Polynomial


# -- real Murase methods for x^3 - x^2 + c = 0 -------------------------------

def murase_general_step(x: float, c: float, m: float) -> float:
    """Nonnegative root of ``x_(k+1)^2 = (c + (1 - m) x_k^3) / (1 - m x_k)``.

    ``m = 0, 1, 2`` give Murase's first, second and third methods.
    """
    den = 1.0 - m * x
    if den == 0:
        raise PoleError(f"pole at x = {x!r} (1 - m x = 0)")
    radicand = (c + (1.0 - m) * x**3) / den
    if radicand < 0:
        raise DomainError(f"negative radicand {radicand!r} at x = {x!r}")
    return math.sqrt(radicand)


def murase_first_step(x: float, c: float) -> float:
    """``sqrt(x^3 + c)``."""
    return murase_general_step(x, c, 0.0)


def murase_second_step(x: float, c: float) -> float:
    """``sqrt(c / (1 - x))``."""
    return murase_general_step(x, c, 1.0)


def murase_third_step(x: float, c: float) -> float:
    """``sqrt((c - x^3) / (1 - 2x))``."""
    return murase_general_step(x, c, 2.0)


MURASE_METHODS = {1: murase_first_step, 2: murase_second_step, 3: murase_third_step}


def murase_fixed_point(method: int, c: float, x0: float = 0.0, max_iter: int = 10_000,
                       tol: float = 1e-14) -> float:
    """Iterate one of the real Murase methods until successive iterates agree.

    The third method only settles where its fixed point attracts, i.e. for a
    root below 2/5 or above 2/3; elsewhere it raises DomainError.
    """
    step = MURASE_METHODS[method]
    x = x0
    for _ in range(max_iter):
        x_next = step(x, c)
        if abs(x_next - x) <= tol * max(1.0, abs(x_next)):
            return x_next
        x = x_next
    raise DomainError(f"Murase method {method} did not settle for c = {c!r}")


# -- complex recurrences: array kernels ---------------------------------------

def _safe_div(num, den):
    pole = den == 0
    return num / np.where(pole, 1.0, den), pole


def _root(w, p, branch):
    if p == 1:
        return w
    return branch_pow(w, BranchSpec(1.0 / p, branch))


def _mm1(z, c, p, m, branch):
    w, pole = _safe_div((m - 1.0) * int_pow(z, p + 1) - c, m * z - 1.0)
    return _root(w, p, branch), pole


def _mm2(z, c, p, branch):
    return _root(int_pow(z, p + 1) + c, p, branch)


def _mm3(z, c, m, n, branch):
    return branch_pow(branch_pow(z, BranchSpec(m)) + c, BranchSpec(n, branch))


def _general(z, poly: Polynomial, m, branch, shift=0.0):
    a = poly.coeffs
    p = poly.degree
    num = (m - a[0]) * int_pow(z, p)
    # remaining terms a_2 z^(p-2) + ... + (a_p + shift), Horner style
    tail = 0j
    for coef in a[2:-1]:
        tail = tail * z + coef
    tail = tail * z + (a[-1] + shift) if p > 2 else a[-1] + shift
    w, pole = _safe_div(num - tail, m * z + a[1])
    return _root(w, p - 1, branch), pole


def _scalar(result):
    w, pole = result
    if np.any(pole):
        raise PoleError("step hit a zero denominator")
    return complex(w)


# -- complex recurrences: scalar steps ----------------------------------------

def mm1_step(z, c, p: int, m: float, root_branch: int = 0) -> complex:
    """``z_(k+1)^p = ((m-1) z_k^(p+1) - c) / (m z_k - 1)``, root on ``root_branch``."""
    _check_p(p)
    return _scalar(_mm1(complex(z), complex(c), p, m, root_branch))


def mm2_step(z, c, p: int, root_branch: int = 0) -> complex:
    """``z_(k+1) = (z_k^(p+1) + c)^(1/p)``."""
    _check_p(p)
    return complex(_mm2(complex(z), complex(c), p, root_branch))


def mm3_step(z, c, m: float, n: float, branch: int = 0) -> complex:
    """``z_(k+1) = (z_k^m + c)^n`` with the outer power on sheet ``branch``.

    The inner power always uses the principal sheet.
    """
    _check_positive(m=m, n=n)
    return complex(_mm3(complex(z), complex(c), m, n, branch))


def general_p_step(z, poly: Polynomial, m: float, root_branch: int = 0) -> complex:
    """Recurrence obtained from ``f(x) = 0`` for a degree ``p >= 2`` polynomial.

    ``z_(k+1)^(p-1) = ((m - a_0) z^p - a_2 z^(p-2) - ... - a_p) / (m z + a_1)``
    """
    if poly.degree < 2:
        raise DomainError("general recurrence needs degree >= 2")
    return _scalar(_general(complex(z), poly, m, root_branch))


def _check_p(p):
    if int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")


def _check_positive(**kw):
    for k, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{k} must be > 0, got {v!r}")


# -- recurrence specs ---------------------------------------------------------

class Recurrence:
    """Base for the complex recurrence families iterated from ``z_0 = 0``."""

    family = ""

    def kernel(self, z, c):
        """Array step returning ``(z_next, pole_mask)``."""
        raise NotImplementedError

    @property
    def real_coefficients(self) -> bool:
        """Whether the map commutes with complex conjugation."""
        return True

    def default_escape_radius(self, c):
        return 4.0

    def to_text(self) -> str:
        parts = [self.family]
        for f in fields(self):
            v = getattr(self, f.name)
            parts.append(f"{f.name}={v if isinstance(v, Polynomial) else repr(v)}")
        return " ".join(parts)


@dataclass(frozen=True)
class MMFormula1(Recurrence):
    """Newton-Mandelbrot recurrence; ``p = 1, m = 0`` is ``z^2 + c``."""

    p: int = 1
    m: float = 0.0
    branch: int = 0
    family = "mm1"

    def __post_init__(self):
        _check_p(self.p)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "branch", 0 if self.p == 1 else int(self.branch))

    def kernel(self, z, c):
        return _mm1(z, c, self.p, self.m, self.branch)

    @property
    def real_coefficients(self):
        return self.branch == 0


@dataclass(frozen=True)
class MMFormula2(Recurrence):
    """``z_(k+1) = (z_k^(p+1) + c)^(1/p)``."""

    p: int = 1
    branch: int = 0
    family = "mm2"

    def __post_init__(self):
        _check_p(self.p)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "branch", 0 if self.p == 1 else int(self.branch))

    def kernel(self, z, c):
        return _mm2(z, c, self.p, self.branch), False

    @property
    def real_coefficients(self):
        return self.branch == 0


@dataclass(frozen=True)
class MMFormula3(Recurrence):
    """Murase-Mandelbrot recurrence ``z_(k+1) = (z_k^m + c)^n``."""

    m: float = 2.0
    n: float = 1.0
    branch: int = 0
    family = "mm3"

    def __post_init__(self):
        _check_positive(m=self.m, n=self.n)
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "n", float(self.n))
        b = BranchSpec(self.n, self.branch).branch_index
        object.__setattr__(self, "branch", b)

    def kernel(self, z, c):
        return _mm3(z, c, self.m, self.n, self.branch), False

    @property
    def real_coefficients(self):
        return self.branch == 0

    def default_escape_radius(self, c):
        if self.n == 1 and self.m.is_integer():
            return np.maximum(2.0, np.abs(c)) + 1.0
        return 4.0


@dataclass(frozen=True)
class PlainPower(Recurrence):
    """``z_(k+1) = z_k^d + c``."""

    d: int = 2
    family = "power"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))

    def kernel(self, z, c):
        return int_pow(z, self.d) + c, False

    def default_escape_radius(self, c):
        return np.maximum(2.0, np.abs(c)) + 1.0


@dataclass(frozen=True)
class GeneralP(Recurrence):
    """Recurrence from a polynomial ``f`` of degree ``>= 2`` and parameter ``m``.

    When scanned over a parameter plane, ``c`` is added to the constant
    coefficient, so ``GeneralP(z^2 - z, m)`` traces the same set as
    ``MMFormula1(1, m)``.
    """

    poly: Polynomial = None
    m: float = 0.0
    branch: int = 0
    family = "general"

    def __post_init__(self):
        poly = self.poly
        if not isinstance(poly, Polynomial):
            poly = Polynomial.parse(poly) if isinstance(poly, str) else Polynomial(poly)
            object.__setattr__(self, "poly", poly)
        if poly.degree < 2:
            raise DomainError("general recurrence needs degree >= 2")
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "branch", 0 if poly.degree == 2 else int(self.branch))

    def kernel(self, z, c):
        # the grid parameter shifts the constant term a_p
        return _general(z, self.poly, self.m, self.branch, c)

    @property
    def real_coefficients(self):
        return self.poly.is_real and self.branch == 0


FAMILIES = {cls.family: cls for cls in (MMFormula1, MMFormula2, MMFormula3, PlainPower, GeneralP)}


def _parse_number(text: str) -> float:
    from fractions import Fraction

    text = text.strip()
    if text.startswith("sqrt(") and text.endswith(")"):
        return math.sqrt(_parse_number(text[5:-1]))
    try:
        return float(text)
    except ValueError:
        return float(Fraction(text))


def parse_recurrence(text: str) -> Recurrence:
    """Parse ``"mm3 m=6 n=1/3 branch=2"``-style specs (see ``Recurrence.to_text``)."""
    tokens = text.split()
    if not tokens or tokens[0] not in FAMILIES:
        raise DomainError(f"unknown recurrence family in {text!r}; expected one of {sorted(FAMILIES)}")
    cls = FAMILIES[tokens[0]]
    names = {f.name for f in fields(cls)}
    kwargs = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep or key not in names:
            raise DomainError(f"bad parameter {tok!r} for {cls.family}; allowed: {sorted(names)}")
        if key == "poly":
            kwargs[key] = Polynomial.parse(value)
        elif key in ("p", "d", "branch"):
            v = _parse_number(value)
            if not v.is_integer():
                raise DomainError(f"{key} must be an integer, got {value!r}")
            kwargs[key] = int(v)
        else:
            try:
                kwargs[key] = _parse_number(value)
            except (ValueError, ZeroDivisionError):
                raise DomainError(f"bad number {value!r} for {key}") from None
    return cls(**kwargs)
