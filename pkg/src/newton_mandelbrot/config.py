"""Run configurations shared by the CLI, the presets and config files."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .escape import DEFAULT_COMPARE_ITERS, DEFAULT_RENDER_ITERS, GridSpec
from .exceptions import DomainError
from .newton import MAX_ITER, MethodParams
from .polynomial import Polynomial
from .recurrences import Recurrence, parse_recurrence

COMMANDS = ("render", "compare", "solve", "orbit")


def parse_complex(text: str) -> complex:
    try:
        return complex(str(text).strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise DomainError(f"bad complex number {text!r}") from None


def parse_grid(text: str) -> tuple:
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 4:
        raise DomainError(f"grid needs re0,re1,im0,im1; got {text!r}")
    return tuple(parts)


def parse_size(text: str) -> tuple:
    w, sep, h = text.lower().partition("x")
    if not sep:
        raise DomainError(f"size must look like WxH, got {text!r}")
    return int(w), int(h)


def with_branch(spec: Recurrence, branch: Optional[int]) -> Recurrence:
    if branch is None or not any(f.name == "branch" for f in dataclasses.fields(spec)):
        return spec
    return dataclasses.replace(spec, branch=int(branch))


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs.  Unused fields keep their defaults."""

    command: str = "render"
    preset: str = ""
    specs: tuple = ()
    grid: GridSpec = field(default_factory=GridSpec)
    radius: Optional[float] = None
    iters: Optional[int] = None
    branch: Optional[int] = None
    workers: int = 1
    out: str = ""
    # compare
    mode: str = "pairwise"
    expect: str = "agree"
    threshold: float = 0.99
    # solve
    poly: Optional[Polynomial] = None
    method: str = "method4"
    q: float = 1.0
    lam: float = 1.0
    r: float = 0.0
    i: int = 1
    m: Optional[float] = None
    x0: complex = 0j
    root: Optional[complex] = None
    max_iter: int = MAX_ITER
    # orbit
    c: complex = 0j

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.radius is not None and not self.radius >= 2:
            raise DomainError(f"radius must be >= 2, got {self.radius!r}")
        if self.iters is not None and self.iters < 1:
            raise DomainError(f"iters must be >= 1, got {self.iters!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers!r}")
        if self.command in ("render", "orbit") and len(self.specs) != 1:
            raise DomainError(f"{self.command} needs exactly one recurrence spec")
        if self.command == "compare":
            if len(self.specs) < 2:
                raise DomainError("compare needs at least two recurrence specs")
            if self.mode not in ("pairwise", "reference"):
                raise DomainError(f"mode must be pairwise or reference, got {self.mode!r}")
            if self.expect not in ("agree", "disagree"):
                raise DomainError(f"expect must be agree or disagree, got {self.expect!r}")
            if not 0 <= self.threshold <= 1:
                raise DomainError("threshold must lie in [0, 1]")
        if self.command == "solve":
            if self.poly is None:
                raise DomainError("solve needs a polynomial")
            self.method_params()
            if self.max_iter < 1:
                raise DomainError("max_iter must be >= 1")
        return self

    def method_params(self) -> MethodParams:
        return MethodParams(self.method, self.q, self.lam, self.r, self.i, self.m)

    def recurrences(self) -> list:
        return [with_branch(s, self.branch) for s in self.specs]

    @property
    def n_iters(self) -> int:
        if self.iters is not None:
            return self.iters
        return DEFAULT_COMPARE_ITERS if self.command == "compare" else DEFAULT_RENDER_ITERS

    # -- flat text form ------------------------------------------------------

    def to_pairs(self) -> list:
        g = self.grid
        pairs = [("command", self.command)]
        if self.preset:
            pairs.append(("preset", self.preset))
        if self.command in ("render", "compare", "orbit"):
            pairs.append(("specs", "; ".join(s.to_text() for s in self.specs)))
            pairs.append(("radius", "default" if self.radius is None else repr(self.radius)))
            pairs.append(("iters", "default" if self.iters is None else repr(self.iters)))
            if self.branch is not None:
                pairs.append(("branch", repr(self.branch)))
        if self.command in ("render", "compare"):
            pairs.append(("grid", ",".join(repr(v) for v in (g.re_min, g.re_max, g.im_min, g.im_max))))
            pairs.append(("size", f"{g.width}x{g.height}"))
            pairs.append(("workers", repr(self.workers)))
        if self.command == "compare":
            pairs += [("mode", self.mode), ("expect", self.expect), ("threshold", repr(self.threshold))]
        if self.command == "solve":
            pairs += [("poly", str(self.poly)), ("method", self.method), ("q", repr(self.q)),
                      ("lam", repr(self.lam)), ("r", repr(self.r)), ("i", repr(self.i)),
                      ("m", "exact" if self.m is None else repr(self.m)), ("x0", repr(self.x0)),
                      ("root", "none" if self.root is None else repr(self.root)),
                      ("max_iter", repr(self.max_iter))]
        if self.command == "orbit":
            pairs.append(("c", repr(self.c)))
        if self.out:
            pairs.append(("out", self.out))
        return pairs

    @classmethod
    def from_dict(cls, d: dict, base: Optional["RunConfig"] = None) -> "RunConfig":
        """Build from string values (config file or CLI); unknown keys are errors."""
        base = base or cls()
        kw = {}
        grid = {}
        for key, value in d.items():
            if key in ("command", "preset", "out", "mode", "expect", "method"):
                kw[key] = value
            elif key == "specs":
                kw[key] = tuple(parse_recurrence(s) for s in value.split(";") if s.strip())
            elif key == "radius":
                kw[key] = None if value == "default" else float(value)
            elif key == "iters":
                kw[key] = None if value == "default" else int(value)
            elif key == "branch":
                kw[key] = None if value in ("", "none") else int(value)
            elif key in ("workers", "i", "max_iter"):
                kw[key] = int(value)
            elif key in ("threshold", "q", "lam", "r"):
                kw[key] = float(value)
            elif key == "m":
                kw[key] = None if value == "exact" else float(value)
            elif key in ("x0", "c"):
                kw[key] = parse_complex(value)
            elif key == "root":
                kw[key] = None if value == "none" else parse_complex(value)
            elif key == "poly":
                kw[key] = Polynomial.parse(value)
            elif key == "grid":
                grid.update(zip(("re_min", "re_max", "im_min", "im_max"), parse_grid(value)))
            elif key == "size":
                grid.update(zip(("width", "height"), parse_size(value)))
            else:
                raise DomainError(f"unknown config key {key!r}")
        if grid:
            kw["grid"] = dataclasses.replace(base.grid, **grid)
        return dataclasses.replace(base, **kw)

    def to_text(self) -> str:
        from .io import dump_kv

        return dump_kv(self.to_pairs())

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        from .io import parse_kv

        return cls.from_dict(parse_kv(text))
