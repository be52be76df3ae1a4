import csv
import io
import math

import numpy as np
import pytest

from newton_mandelbrot.cli import main
from newton_mandelbrot.config import RunConfig
from newton_mandelbrot.io import parse_kv, read_pgm, write_pgm
from newton_mandelbrot.presets import PRESETS

RENDER_PRESETS = [k for k, v in PRESETS.items() if v.command == "render"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_pgm_round_trip(tmp_path):
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    write_pgm(tmp_path / "a.pgm", img)
    raw = (tmp_path / "a.pgm").read_bytes()
    assert raw.startswith(b"P5\n4 3\n255\n") and len(raw) == 11 + 12
    assert np.array_equal(read_pgm(tmp_path / "a.pgm"), img)


def test_render_mandelbrot(tmp_path):
    path = tmp_path / "m.pgm"
    code, text = run("render", "--preset", "mandelbrot", "--out", str(path))
    assert code == 0 and "bounded_fraction=" in text
    img = read_pgm(path)
    assert img.shape == (256, 256)
    frac = (img == 255).mean()
    assert abs(frac - 0.11) <= 0.02
    # pure-Python z^2 + c oracle over the same pixel centres gives 6334 bounded pixels
    assert (img == 255).sum() == 6334


def test_render_nm_1_2_is_white(tmp_path):
    path = tmp_path / "n.pgm"
    assert run("render", "--preset", "nm-1-2", "--out", str(path))[0] == 0
    assert (read_pgm(path) == 255).mean() >= 0.99


@pytest.mark.parametrize("name", RENDER_PRESETS)
def test_preset_config_round_trip(tmp_path, name):
    cfg = PRESETS[name]
    text = cfg.to_text()
    assert RunConfig.from_text(text) == cfg
    conf = tmp_path / "run.conf"
    conf.write_text("# saved preset\n" + text)
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    assert run("render", "--preset", name, "--size", "96x80", "--out", str(a))[0] == 0
    assert run("render", "--config", str(conf), "--size", "96x80", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name", [k for k, v in PRESETS.items() if v.command != "render"])
def test_other_presets_round_trip(name):
    cfg = PRESETS[name]
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_save_config(tmp_path):
    path = tmp_path / "s.conf"
    assert run("render", "--preset", "m3c1-2", "--branch", "1", "--save-config", str(path))[0] == 0
    kv = parse_kv(path.read_text())
    assert kv["branch"] == "1" and kv["specs"].startswith("mm3")


def test_branch_flag_changes_picture(tmp_path):
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    run("render", "--preset", "m3c1-2", "--size", "64x64", "--out", str(a))
    run("render", "--preset", "m3c1-2", "--size", "64x64", "--branch", "1", "--out", str(b))
    assert a.read_bytes() != b.read_bytes()


def test_custom_spec_and_grid(tmp_path):
    path = tmp_path / "c.pgm"
    code, _ = run("render", "--spec", "mm1 p=2 m=0.5", "--grid=-2,2,-2,2", "--size", "40x30",
                  "--iters", "20", "--out", str(path))
    assert code == 0 and read_pgm(path).shape == (30, 40)


def test_compare_m3_half_branches(tmp_path):
    report = tmp_path / "r.txt"
    code, text = run("compare", "--preset", "m3-half-branches", "--size", "128x128",
                     "--out", str(report))
    kv = parse_kv(report.read_text())
    assert code == 0 and kv["pass"] == "true"
    assert 1 - float(kv["pair.0-1.agree_fraction"]) > 0.05


def test_compare_failure_exit_code():
    code, text = run("compare", "--spec", "power d=2", "--spec", "power d=3", "--size", "64x64")
    assert code == 3 and "pass = false" in text


def test_solve_hearth():
    code, text = run("solve", "--hearth")
    assert code == 0
    kv = parse_kv("\n".join(line[2:] for line in text.splitlines() if line.startswith("# ")))
    assert abs(float(kv["root"]) - 2.0) <= 1e-10


def test_solve_th_one_step():
    code, text = run("solve", "--poly", "1,0,-2", "--method", "th", "--q", "2", "--x0", "3")
    rows = list(csv.DictReader(line for line in text.splitlines() if not line.startswith("#")))
    assert code == 0
    assert float(rows[1]["re"]) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert "steps_to_residual = 1" in text


def test_solve_double_root_order():
    code, text = run("solve", "--poly", "1,-2,1", "--x0", "2", "--root", "1")
    kv = parse_kv("\n".join(line[2:] for line in text.splitlines() if line.startswith("# ")))
    assert code == 0
    assert float(kv["order"]) == pytest.approx(1.0, abs=0.1)
    assert float(kv["error_ratio"]) == pytest.approx(0.5, abs=0.05)


def test_solve_stall_exit_code():
    code, text = run("solve", "--poly", "1,0,1", "--x0", "0")
    assert code == 3 and "stalled" in text


def _orbit(*args):
    code, text = run("orbit", *args)
    assert code == 0
    return list(csv.DictReader(io.StringIO(text)))


def test_orbit_escape():
    rows = _orbit("--spec", "power d=2", "--c", "1", "--radius", "2")
    assert [float(r["re"]) for r in rows] == [0, 1, 2, 5]
    assert rows[-1]["event"] == "escaped"


def test_orbit_period_two():
    rows = _orbit("--spec", "mm3 m=2 n=1", "--c", "-1", "--iters", "7")
    assert [float(r["re"]) for r in rows] == [0, -1, 0, -1, 0, -1, 0]


def test_orbit_pole():
    rows = _orbit("--spec", "mm1 p=1 m=1", "--c", "1")
    assert rows[-1]["k"] == "2" and rows[-1]["event"] == "pole"


def test_orbit_to_file(tmp_path):
    path = tmp_path / "o.csv"
    assert run("orbit", "--spec", "power d=2", "--c", "0.25", "--iters", "5", "--out", str(path))[0] == 0
    assert path.read_text().splitlines()[0] == "k,re,im,abs,event"


@pytest.mark.parametrize("argv", [
    ["render", "--spec", "mm3 m=0 n=1"],
    ["render", "--preset", "mandelbrot", "--radius", "1"],
    ["render", "--preset", "nope"],
    ["render", "--preset", "hearth"],
    ["compare", "--spec", "power d=2"],
    ["solve", "--poly", "0,1"],
    ["solve", "--poly", "1,0,-2", "--method", "halley"],
    ["render", "--size", "10"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["explode"])
    assert exc.value.code == 2


def test_io_error(tmp_path):
    code, _ = run("render", "--preset", "mandelbrot", "--size", "8x8",
                  "--out", str(tmp_path / "missing" / "x.pgm"))
    assert code == 4
    assert run("render", "--config", str(tmp_path / "none.conf"))[0] == 4


def test_config_rejects_unknown_key(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = red\n")
    assert run("render", "--preset", "mandelbrot", "--config", str(conf))[0] == 2


def test_parse_kv_comments():
    assert parse_kv("# top\n a = 1 # trailing\n\nb=x y\n") == {"a": "1", "b": "x y"}
    with pytest.raises(ValueError):
        parse_kv("novalue\n")
