"""Complex arithmetic with explicit branch selection for fractional powers.

Every branch-cut decision in the package is made here.  The cut of the
principal argument lies along the negative real axis and negative reals
get argument ``+pi`` (also for a negative-zero imaginary part).

All functions accept Python scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

#: components above this magnitude mark a value as non-finite
OVERFLOW_LIMIT = 1e150

TWO_PI = 2.0 * math.pi


def _is_integral(x: float) -> bool:
    return float(x).is_integer()


@dataclass(frozen=True)
class BranchSpec:
    """A real exponent ``s > 0`` together with a sheet index ``n``.

    Integer exponents give single-valued powers, so their branch index is
    normalized to 0.
    """

    exponent: float
    branch_index: int = 0

    def __post_init__(self):
        s = float(self.exponent)
        if not math.isfinite(s) or s <= 0:
            raise DomainError(f"exponent must be finite and > 0, got {self.exponent!r}")
        if int(self.branch_index) != self.branch_index:
            raise DomainError(f"branch index must be an integer, got {self.branch_index!r}")
        object.__setattr__(self, "exponent", s)
        n = 0 if _is_integral(s) else int(self.branch_index)
        object.__setattr__(self, "branch_index", n)

    @property
    def is_integer(self) -> bool:
        return _is_integral(self.exponent)


def principal_arg(z) -> float:
    """Principal argument in ``(-pi, pi]``; raises DomainError at 0."""
    z = complex(z)
    if z == 0:
        raise DomainError("argument of 0 is undefined")
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


def _arg_array(z):
    a = np.arctan2(np.imag(z), np.real(z))
    return np.where(a == -np.pi, np.pi, a)


def int_pow(z, d: int):
    """``z**d`` by square-and-multiply, for integer ``d >= 1``."""
    if int(d) != d or d < 1:
        raise DomainError(f"integer power needs d >= 1, got {d!r}")
    d = int(d)
    result = None
    base = z
    while True:
        if d & 1:
            result = base if result is None else result * base
        d >>= 1
        if not d:
            break
        base = base * base
    return result


def polar_pow(z, s: float, n: int = 0):
    """``|z|**s * exp(i*s*(Arg z + 2*pi*n))`` for any real ``s``.

    Zero maps to zero.  No integer shortcut is taken; see :func:`branch_pow`.
    """
    scalar = np.ndim(z) == 0
    # 1-d even for scalars: numpy scalar ** differs in the last bit from the array loop
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.abs(z)
    phi = s * (_arg_array(z) + TWO_PI * n)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mag = r**s
        out = mag * np.cos(phi) + 1j * (mag * np.sin(phi))
    out = np.where(r == 0, 0j, out)
    return complex(out[0]) if scalar else out


def branch_pow(z, b: BranchSpec):
    """Evaluate the power on sheet ``b.branch_index``.

    Integer exponents use repeated multiplication, so ``branch_pow(z,
    BranchSpec(2))`` is exactly ``z*z``.  ``0**s`` is 0 for every ``s > 0``.
    Non-finite input propagates.
    """
    if b.is_integer:
        return int_pow(z if np.ndim(z) else complex(z), int(b.exponent))
    return polar_pow(z, b.exponent, b.branch_index)


def is_nonfinite(z):
    """True where a value is NaN/inf or has a component beyond ``OVERFLOW_LIMIT``."""
    re = np.abs(np.real(z))
    im = np.abs(np.imag(z))
    with np.errstate(invalid="ignore"):
        bad = ~(np.isfinite(re) & np.isfinite(im)) | (re > OVERFLOW_LIMIT) | (im > OVERFLOW_LIMIT)
    return bool(bad) if np.ndim(bad) == 0 else bad
