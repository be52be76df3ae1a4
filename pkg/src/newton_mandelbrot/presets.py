"""Named run configurations, one per reproduced figure or check.

Windows are framing choices: ``[-2.5, 1.5] x [-2, 2]`` unless noted.
"""

from __future__ import annotations

import math

from .config import RunConfig
from .escape import GridSpec
from .polynomial import Polynomial
from .recurrences import MMFormula1, MMFormula3, PlainPower

PRESET_VERSION = 1

_GRID = GridSpec()


def _render(name, spec, **kw):
    return RunConfig(command="render", preset=name, specs=(spec,), grid=_GRID, **kw)


def _compare(name, specs, **kw):
    return RunConfig(command="compare", preset=name, specs=tuple(specs), grid=_GRID, **kw)


PRESETS = {
    "mandelbrot": _render("mandelbrot", PlainPower(2), radius=2.0, iters=100),
    "nm-1-neg1": _render("nm-1-neg1", MMFormula1(1, -1.0)),
    "nm-1-0.1": _render("nm-1-0.1", MMFormula1(1, 0.1)),
    "nm-1-0.5": _render("nm-1-0.5", MMFormula1(1, 0.5)),
    "nm-1-1": _render("nm-1-1", MMFormula1(1, 1.0)),
    "nm-1-2": _render("nm-1-2", MMFormula1(1, 2.0)),
    "m3c2": _render("m3c2", MMFormula3(3, 2), iters=200),
    # --branch selects the sheet; 0, 1, 2 all give the Mandelbrot set
    "m6c1-3": _render("m6c1-3", MMFormula3(6, 1 / 3), iters=200),
    # even and odd branches give two different pictures
    "m3c1-2": _render("m3c1-2", MMFormula3(3, 0.5), iters=200),
    "m1c-sqrt2": _render("m1c-sqrt2", MMFormula3(1, math.sqrt(2))),
    "thm49-mn6": _compare("thm49-mn6", [MMFormula3(6, 1), MMFormula3(3, 2), MMFormula3(2, 3),
                                        MMFormula3(1, 6)]),
    "m6-third-roots": _compare("m6-third-roots",
                               [MMFormula3(2, 1)] + [MMFormula3(6, 1 / 3, b) for b in range(3)],
                               mode="reference"),
    "m3-half-branches": _compare("m3-half-branches",
                                 [MMFormula3(3, 0.5, 0), MMFormula3(3, 0.5, 1)],
                                 expect="disagree", threshold=0.05),
    # Murase's hearth 4 x^2 (14 - x) = 4 * 48, i.e. x^3 - 14 x^2 + 48 = 0
    "hearth": RunConfig(command="solve", preset="hearth", poly=Polynomial([1, -14, 0, 48]),
                        method="method4", x0=1.0, root=2.0),
}


def get_preset(name: str) -> RunConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
