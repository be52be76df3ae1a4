"""``fractal`` command line: render, compare, solve, orbit.

Exit codes: 0 success, 2 usage error, 3 numerical failure (stall,
divergence, failed comparison), 4 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path

from .config import RunConfig
from .escape import classify_orbit, compare_maps, scan_grid
from .exceptions import DomainError, EstimationError
from .io import dump_kv, parse_kv, write_csv, write_pgm
from .newton import error_ratio, estimate_order, solve
from .presets import PRESETS, get_preset

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--preset", help=f"one of: {', '.join(PRESETS)}")
    p.add_argument("--config", help="key = value file applied after the preset")
    p.add_argument("--save-config", metavar="FILE", help="write the resolved config and exit")
    p.add_argument("--out", help="output path")


def _add_grid(p):
    p.add_argument("--spec", action="append",
                   help='recurrence, e.g. "mm3 m=3 n=2" or "mm1 p=1 m=0.5"; repeatable')
    p.add_argument("--grid", help="re0,re1,im0,im1")
    p.add_argument("--size", help="WxH")
    p.add_argument("--radius", help="escape radius (>= 2) or 'default'")
    p.add_argument("--iters", help="iteration budget")
    p.add_argument("--branch", help="branch index applied to every spec")
    p.add_argument("--workers", help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fractal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="write a membership map as a PGM image")
    _add_common(p)
    _add_grid(p)

    p = sub.add_parser("compare", help="pixel-wise comparison of two or more maps")
    _add_common(p)
    _add_grid(p)
    p.add_argument("--mode", choices=["pairwise", "reference"])
    p.add_argument("--expect", choices=["agree", "disagree"])
    p.add_argument("--threshold", help="minimum agreement (or disagreement) fraction")

    p = sub.add_parser("solve", help="run an extended Newton method on a polynomial")
    _add_common(p)
    p.add_argument("--hearth", action="store_true", help="Murase's hearth cubic x^3 - 14x^2 + 48")
    p.add_argument("--poly", help="coefficients a_0,...,a_p, leading first")
    p.add_argument("--method", help="method1..method4, or newton / th")
    for flag in ("q", "lam", "r", "i", "m", "x0", "root"):
        p.add_argument(f"--{flag}")
    p.add_argument("--max-iter", dest="max_iter")

    p = sub.add_parser("orbit", help="dump the orbit of one parameter value as CSV")
    _add_common(p)
    p.add_argument("--spec", action="append")
    p.add_argument("--c", help="parameter value, e.g. 1 or -0.5+0.2i")
    p.add_argument("--radius")
    p.add_argument("--iters")
    p.add_argument("--branch")
    return parser


_PASSTHROUGH = ("grid", "size", "radius", "iters", "branch", "workers", "out", "mode", "expect",
                "threshold", "poly", "method", "q", "lam", "r", "i", "m", "x0", "root", "max_iter",
                "c")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    preset = "hearth" if getattr(args, "hearth", False) else args.preset
    base = RunConfig(command=args.command)
    if preset:
        try:
            base = get_preset(preset)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if base.command != args.command:
            raise UsageError(f"preset {preset!r} is for '{base.command}', not '{args.command}'")
    try:
        if args.config:
            text = Path(args.config).read_text()
            values = parse_kv(text)
            values.pop("command", None)
            base = RunConfig.from_dict(values, base)
        flags = {k: getattr(args, k) for k in _PASSTHROUGH if getattr(args, k, None) is not None}
        if getattr(args, "spec", None):
            flags["specs"] = ";".join(args.spec)
        cfg = RunConfig.from_dict(flags, base)
        return cfg.validate()
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _default_out(cfg: RunConfig, suffix: str) -> str:
    return cfg.out or f"{cfg.preset or cfg.command}{suffix}"


def run_render(cfg: RunConfig, stdout) -> int:
    spec = cfg.recurrences()[0]
    t0 = time.perf_counter()
    mmap = scan_grid(cfg.grid, spec, cfg.radius, cfg.n_iters, cfg.workers)
    elapsed = time.perf_counter() - t0
    out = _default_out(cfg, ".pgm")
    write_pgm(out, mmap.to_image())
    counts = mmap.counts()
    print(f"wrote {out}  bounded_fraction={mmap.bounded_fraction:.6f} bounded={counts['bounded']} "
          f"escaped={counts['escaped']} invalid={counts['pole'] + counts['overflow']} "
          f"time={elapsed:.2f}s", file=stdout)
    return EXIT_OK


def compare_report(cfg: RunConfig) -> tuple:
    specs = cfg.recurrences()
    maps = [scan_grid(cfg.grid, s, cfg.radius, cfg.n_iters, cfg.workers) for s in specs]
    if cfg.mode == "reference":
        pairs = [(0, j) for j in range(1, len(maps))]
    else:
        pairs = list(itertools.combinations(range(len(maps)), 2))
    lines = [("preset", cfg.preset or "none"), ("iters", cfg.n_iters),
             ("radius", "default" if cfg.radius is None else cfg.radius)]
    for k, (s, mm) in enumerate(zip(specs, maps)):
        lines += [(f"map.{k}.spec", s.to_text()), (f"map.{k}.bounded_fraction", f"{mm.bounded_fraction:.6f}")]
    passed = True
    for a, b in pairs:
        cmp = compare_maps(maps[a], maps[b])
        if cfg.expect == "agree":
            ok = cmp.agree_fraction >= cfg.threshold and cmp.all_boundary
        else:
            ok = 1.0 - cmp.agree_fraction > cfg.threshold
        passed &= ok
        key = f"pair.{a}-{b}"
        lines += [(f"{key}.agree_fraction", f"{cmp.agree_fraction:.6f}"),
                  (f"{key}.disagree_pixels", cmp.n_disagree),
                  (f"{key}.boundary_fraction", f"{cmp.boundary_fraction:.6f}"),
                  (f"{key}.all_boundary", str(cmp.all_boundary).lower()),
                  (f"{key}.pass", str(ok).lower())]
    lines += [("expect", cfg.expect), ("threshold", cfg.threshold), ("pass", str(passed).lower())]
    return dump_kv(lines), passed


def run_compare(cfg: RunConfig, stdout) -> int:
    report, passed = compare_report(cfg)
    if cfg.out:
        Path(cfg.out).write_text(report)
    stdout.write(report)
    return EXIT_OK if passed else EXIT_NUMERIC


def _real_if_possible(z: complex):
    return z.real if z.imag == 0 else z


def run_solve(cfg: RunConfig, stdout) -> int:
    x0 = _real_if_possible(complex(cfg.x0))
    trace = solve(x0, cfg.poly, cfg.method_params(), max_iter=cfg.max_iter)
    rows = []
    for k, (x, res) in enumerate(zip(trace.iterates, trace.residuals)):
        xc = complex(x)
        rows.append([k, repr(xc.real), repr(xc.imag), repr(res)])
    if cfg.out:
        write_csv(cfg.out, ["k", "re", "im", "residual"], rows)
    else:
        write_csv(stdout, ["k", "re", "im", "residual"], rows)
    summary = [("status", trace.status), ("steps", trace.steps)]
    if trace.converged:
        summary += [("root", repr(_real_if_possible(complex(trace.root)))),
                    ("steps_to_residual", trace.steps_to_residual)]
    if trace.message:
        summary.append(("message", trace.message))
    if cfg.root is not None:
        root = _real_if_possible(complex(cfg.root))
        if trace.converged:
            summary.append(("root_error", repr(abs(trace.root - root))))
        try:
            summary.append(("order", f"{estimate_order(trace, root):.4f}"))
            summary.append(("error_ratio", f"{error_ratio(trace, root):.4f}"))
        except EstimationError as exc:
            summary.append(("order", f"n/a ({exc})"))
    for key, value in summary:
        print(f"# {key} = {value}", file=stdout)
    return EXIT_OK if trace.converged else EXIT_NUMERIC


def orbit_rows(cfg: RunConfig) -> tuple:
    spec = cfg.recurrences()[0]
    outcome = classify_orbit(cfg.c, spec, cfg.radius, cfg.n_iters, keep_trace=True)
    rows = [[k, repr(z.real), repr(z.imag), repr(abs(z)), ""] for k, z in enumerate(outcome.trace)]
    if outcome.status == "escaped":
        rows[-1][4] = "escaped"
    elif outcome.status == "invalid":
        if outcome.reason == "pole":
            rows.append([outcome.at_iter, "nan", "nan", "nan", "pole"])
        else:
            rows[-1][4] = outcome.reason
    return rows, outcome


def run_orbit(cfg: RunConfig, stdout) -> int:
    rows, outcome = orbit_rows(cfg)
    header = ["k", "re", "im", "abs", "event"]
    if cfg.out:
        write_csv(cfg.out, header, rows)
    else:
        write_csv(stdout, header, rows)
    return EXIT_OK


RUNNERS = {"render": run_render, "compare": run_compare, "solve": run_solve, "orbit": run_orbit}


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.save_config:
            Path(args.save_config).write_text(cfg.to_text())
            return EXIT_OK
        return RUNNERS[cfg.command](cfg, stdout)
    except UsageError as exc:
        print(f"fractal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fractal {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
