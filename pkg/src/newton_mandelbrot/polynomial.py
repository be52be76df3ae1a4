"""Dense polynomials with leading-first coefficients ``a_0, ..., a_p``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .exceptions import DomainError


def _clean(a):
    a = complex(a)
    return a.real if a.imag == 0 else a


@dataclass(frozen=True)
class Polynomial:
    """``a_0 x^p + a_1 x^(p-1) + ... + a_p`` with ``a_0 != 0`` and ``p >= 1``.

    Real coefficients are stored as floats, so evaluation at a real point
    stays real.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        cs = tuple(_clean(a) for a in coeffs)
        if len(cs) < 2:
            raise DomainError("polynomial needs degree >= 1")
        if cs[0] == 0:
            raise DomainError("leading coefficient a_0 must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse ``"1,0,-2"`` (leading coefficient first)."""
        try:
            return cls([complex(t.strip().replace("i", "j")) for t in text.split(",")])
        except ValueError as exc:
            raise DomainError(f"bad polynomial {text!r}: {exc}") from None

    @classmethod
    def murase(cls, p: int, c) -> "Polynomial":
        """``z^(p+1) - z^p + c``."""
        if p < 1:
            raise DomainError("p must be >= 1")
        return cls([1.0, -1.0] + [0.0] * (p - 1) + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        return all(isinstance(a, float) for a in self.coeffs)

    def derivative_coeffs(self, i: int) -> list:
        """Coefficients ``b_0..b_(p-i)`` of the ``i``-th derivative."""
        p = self.degree
        if not 0 <= i <= p:
            raise DomainError(f"derivative order must be in 0..{p}, got {i}")
        return [
            a * (math.factorial(p - j) // math.factorial(p - j - i))
            for j, a in enumerate(self.coeffs[: p - i + 1])
        ]

    @staticmethod
    def _horner(coeffs, x):
        acc = coeffs[0] * 1
        for a in coeffs[1:]:
            acc = acc * x + a
        return acc

    def __call__(self, x):
        return self._horner(self.coeffs, x)

    def derivative(self, x, i: int = 1):
        """Value of the ``i``-th derivative at ``x``."""
        return self._horner(self.derivative_coeffs(i), x)

    def __str__(self):
        return ",".join(repr(a) for a in self.coeffs)
