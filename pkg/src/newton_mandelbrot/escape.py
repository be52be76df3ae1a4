"""Escape-time classification of parameter-plane orbits started at ``z_0 = 0``.

A grid is split into fixed bands of rows.  Each band is computed by the
same vectorized code whatever the worker count, so scans are byte-identical
for any ``workers`` value.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .complex_power import int_pow, is_nonfinite
from .exceptions import DomainError
from .recurrences import Recurrence

BOUNDED, ESCAPED, POLE, OVERFLOW = 0, 1, 2, 3
STATUS_NAMES = {BOUNDED: "bounded", ESCAPED: "escaped", POLE: "pole", OVERFLOW: "overflow"}

BLOCK_ROWS = 8
DEFAULT_RENDER_ITERS = 100
DEFAULT_COMPARE_ITERS = 200


@dataclass(frozen=True)
class GridSpec:
    """Rectangular window sampled at pixel centres; row 0 is the top (``im_max``)."""

    re_min: float = -2.5
    re_max: float = 1.5
    im_min: float = -2.0
    im_max: float = 2.0
    width: int = 256
    height: int = 256

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("grid needs re_min < re_max and im_min < im_max")
        if int(self.width) != self.width or int(self.height) != self.height \
                or self.width < 1 or self.height < 1:
            raise DomainError("grid width and height must be positive integers")
        for name in ("re_min", "re_max", "im_min", "im_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))

    @property
    def shape(self):
        return self.height, self.width

    def re_values(self):
        d = (self.re_max - self.re_min) / self.width
        return self.re_min + (np.arange(self.width) + 0.5) * d

    def im_values(self, rows=None):
        d = (self.im_max - self.im_min) / self.height
        j = np.arange(self.height) if rows is None else np.asarray(rows)
        return self.im_max - (j + 0.5) * d

    def points(self, j0: int = 0, j1: Optional[int] = None):
        """Parameter values ``c`` for rows ``j0..j1-1``, shape ``(rows, width)``."""
        j1 = self.height if j1 is None else j1
        im = self.im_values(np.arange(j0, j1))
        return self.re_values()[None, :] + 1j * im[:, None]


@dataclass
class OrbitOutcome:
    """Fate of one orbit.  ``at_iter`` is the index ``k`` of the offending ``z_k``."""

    status: str
    last_value: complex
    at_iter: Optional[int] = None
    reason: Optional[str] = None
    trace: Optional[list] = None

    @property
    def in_set(self) -> bool:
        return self.status == "bounded"


def _check_run(escape_radius, max_iter):
    if escape_radius is not None and not escape_radius >= 2:
        raise DomainError(f"escape radius must be >= 2, got {escape_radius!r}")
    if int(max_iter) != max_iter or max_iter < 1:
        raise DomainError(f"max_iter must be a positive integer, got {max_iter!r}")


def _radius(spec: Recurrence, c, escape_radius):
    if escape_radius is None:
        return np.broadcast_to(np.asarray(spec.default_escape_radius(c), dtype=float), c.shape)
    return np.full(c.shape, float(escape_radius))


def _iterate(c, spec: Recurrence, escape_radius, max_iter: int, trace: Optional[list] = None):
    """Run orbits for a flat array ``c``.

    Returns ``(status, at_iter, last)``; ``at_iter`` is ``max_iter`` for
    bounded orbits.  Iterates ``z_1 .. z_(max_iter-1)`` are examined.
    """
    c = np.asarray(c, dtype=complex).ravel()
    size = c.size
    status = np.full(size, BOUNDED, dtype=np.int8)
    at_iter = np.full(size, max_iter, dtype=np.int32)
    last = np.zeros(size, dtype=complex)
    radius = _radius(spec, c, escape_radius)

    idx = np.arange(size)
    z = np.zeros(size, dtype=complex)
    cc = c.copy()
    rr = radius.copy()
    if trace is not None:
        trace.append(complex(z[0]))
    with np.errstate(all="ignore"):
        for k in range(1, max_iter):
            if idx.size == 0:
                break
            z_new, pole = spec.kernel(z, cc)
            pole = np.broadcast_to(pole, z.shape)
            bad = is_nonfinite(z_new) & ~pole
            out = (np.abs(z_new) > rr) & ~pole & ~bad
            if trace is not None and not pole[0]:
                trace.append(complex(z_new[0]))
            for mask, code, value in ((pole, POLE, z), (bad, OVERFLOW, z_new), (out, ESCAPED, z_new)):
                if mask.any():
                    hit = idx[mask]
                    status[hit] = code
                    at_iter[hit] = k
                    last[hit] = value[mask]
            keep = ~(pole | bad | out)
            if not keep.all():
                idx, z, cc, rr = idx[keep], z_new[keep], cc[keep], rr[keep]
            else:
                z = z_new
    last[idx] = z
    return status, at_iter, last


def classify_orbit(c, spec: Recurrence, escape_radius: Optional[float] = None,
                   max_iter: int = DEFAULT_RENDER_ITERS, keep_trace: bool = False) -> OrbitOutcome:
    """Classify the orbit of ``z_0 = 0`` under ``spec`` at parameter ``c``."""
    _check_run(escape_radius, max_iter)
    trace = [] if keep_trace else None
    status, at_iter, last = _iterate(np.array([complex(c)]), spec, escape_radius, max_iter, trace)
    code = int(status[0])
    value = complex(last[0])
    if code == BOUNDED:
        return OrbitOutcome("bounded", value, trace=trace)
    if code == ESCAPED:
        return OrbitOutcome("escaped", value, int(at_iter[0]), trace=trace)
    return OrbitOutcome("invalid", value, int(at_iter[0]), STATUS_NAMES[code], trace=trace)


@dataclass
class MembershipMap:
    """Per-pixel orbit status and escape iteration on a grid."""

    grid: GridSpec
    status: np.ndarray
    iterations: np.ndarray
    recurrence: Recurrence
    escape_radius: Optional[float]
    max_iter: int
    extra: dict = field(default_factory=dict)

    @property
    def bounded(self) -> np.ndarray:
        return self.status == BOUNDED

    @property
    def bounded_fraction(self) -> float:
        return float(self.bounded.mean())

    def counts(self) -> dict:
        return {STATUS_NAMES[k]: int((self.status == k).sum()) for k in STATUS_NAMES}

    def to_image(self) -> np.ndarray:
        """Grayscale intensities: bounded pixels 255, others scaled escape iteration."""
        img = (self.iterations.astype(np.int64) * 255) // self.max_iter
        img[self.bounded] = 255
        return img.astype(np.uint8)

    def tobytes(self) -> bytes:
        return self.status.tobytes() + self.iterations.tobytes()


def _scan_block(args):
    grid, spec, escape_radius, max_iter, j0, j1 = args
    c = grid.points(j0, j1)
    status, at_iter, _ = _iterate(c, spec, escape_radius, max_iter)
    return status.reshape(c.shape), at_iter.reshape(c.shape)


def scan_grid(grid: GridSpec, spec: Recurrence, escape_radius: Optional[float] = None,
              max_iter: int = DEFAULT_RENDER_ITERS, workers: int = 1) -> MembershipMap:
    """Classify every pixel centre of ``grid``.

    ``workers > 1`` distributes row bands over processes; results do not
    depend on the worker count.
    """
    _check_run(escape_radius, max_iter)
    if int(workers) != workers or workers < 1:
        raise DomainError(f"workers must be a positive integer, got {workers!r}")
    jobs = [(grid, spec, escape_radius, max_iter, j0, min(j0 + BLOCK_ROWS, grid.height))
            for j0 in range(0, grid.height, BLOCK_ROWS)]
    if workers == 1:
        parts = [_scan_block(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_block, jobs))
    status = np.concatenate([s for s, _ in parts])
    iterations = np.concatenate([it for _, it in parts])
    return MembershipMap(grid, status, iterations, spec, escape_radius, max_iter)


def power_relation_check(c, m: int, n: int, k_max: int = 15, bound: float = 10.0) -> float:
    """Compare ``a_(k+1) = a_k^(mn) + c`` with ``b_(k+1) = (b_k^m + c)^n``.

    Returns ``max_k |b_k - a_k^n| / (1 + |a_k|^n)`` over the orbit prefix
    with ``|a_k| <= bound``.
    """
    for name, v in (("m", m), ("n", n)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    c = complex(c)
    a = b = 0j
    worst = 0.0
    with np.errstate(all="ignore"):
        for _ in range(k_max):
            a = int_pow(a, m * n) + c
            b = int_pow(int_pow(b, m) + c, n)
            if not abs(a) <= bound or is_nonfinite(b):
                break
            an = int_pow(a, n)
            worst = max(worst, abs(b - an) / (1.0 + abs(an)))
    return worst


@dataclass
class MapComparison:
    agree_fraction: float
    disagreement: np.ndarray
    boundary_adjacent: np.ndarray

    @property
    def n_disagree(self) -> int:
        return int(self.disagreement.sum())

    @property
    def boundary_fraction(self) -> float:
        """Share of disagreeing pixels that are boundary-adjacent (1.0 if none)."""
        n = self.n_disagree
        return 1.0 if n == 0 else float(self.boundary_adjacent.sum()) / n

    @property
    def all_boundary(self) -> bool:
        return bool(np.array_equal(self.disagreement, self.boundary_adjacent))


def _edge_mask(member: np.ndarray) -> np.ndarray:
    """Pixels with an 8-neighbour of different membership."""
    m = member.astype(np.uint8)
    hi = ndimage.maximum_filter(m, size=3, mode="nearest")
    lo = ndimage.minimum_filter(m, size=3, mode="nearest")
    return hi != lo


def compare_maps(map_a: MembershipMap, map_b: MembershipMap) -> MapComparison:
    """Pixel-wise membership comparison; invalid orbits count as outside."""
    if map_a.grid != map_b.grid:
        raise ValueError(f"grid mismatch: {map_a.grid} vs {map_b.grid}")
    a, b = map_a.bounded, map_b.bounded
    diff = a != b
    near = diff & (_edge_mask(a) | _edge_mask(b))
    return MapComparison(float(1.0 - diff.mean()), diff, near)


_FOUR = ndimage.generate_binary_structure(2, 1)


def component_sizes(mmap: MembershipMap) -> np.ndarray:
    """Sizes of the 4-connected components of the bounded region, largest first."""
    labels, count = ndimage.label(mmap.bounded, structure=_FOUR)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.bincount(labels.ravel())[1:])[::-1]


def connected_components(mmap: MembershipMap) -> int:
    """Number of 4-connected components of the bounded pixels."""
    return int(component_sizes(mmap).size)


def dominant_component_fraction(mmap: MembershipMap) -> float:
    sizes = component_sizes(mmap)
    return float(sizes[0] / sizes.sum()) if sizes.size else math.nan
