import json
import math

import pytest

from latspec.cli import run


def run_capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_cf_eval(capsys):
    code, out = run_capture(capsys, ["cf", "eval", "--terms", "1,2,3"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["record"] == "7/10"


def test_cf_compare(capsys):
    a = '{"kind":"periodic","preperiod":[],"period":[1]}'
    b = '{"kind":"periodic","preperiod":[],"period":[2]}'
    code, out = run_capture(capsys, ["cf", "compare", "--seq", a, "--seq2", b])
    assert code == 0
    assert json.loads(out)["result"]["order"] == "greater"


def test_spectrum_value_mg2(capsys):
    code, out = run_capture(capsys, ["spectrum", "value", "--kind", "MG2", "--seq", '{"kind":"periodic","preperiod":[],"period":[1]}'])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["exact"] == "(5+√5)/10"
    assert res["decimal"].startswith("0.723606")
    assert res["record"] == {"p": 5, "q": 1, "d": 5, "r": 10}


def test_mg2_lower_part_csv(capsys):
    code, out = run_capture(capsys, ["--format", "csv", "mg2", "lower-part", "--t-max", "3"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "label,exact,decimal"
    assert "(3+√3)/6" in out and "(4+√6)/8" in out


def test_systole_plot_rows_sandwich(capsys):
    code, out = run_capture(
        capsys,
        ["--format", "csv", "systole", "plot", "--seq", '{"kind":"periodic","preperiod":[],"period":[1]}', "--t-range=-1:1", "--step", "0.25"],
    )
    assert code == 0
    rows = out.strip().splitlines()[1:]
    ts = []
    for row in rows:
        t, w, w2 = map(float, row.split(","))
        ts.append(t)
        assert w <= w2 <= w + 0.5 * math.log(2) + 1e-12
    assert ts == sorted(ts)


def test_hall_aperture(capsys):
    code, out = run_capture(capsys, ["hall", "aperture", "--set", "ternary", "--depth", "6"])
    assert code == 0
    assert json.loads(out)["result"]["supremum"]["record"] == "1/1"


def test_spectrum_tau(capsys):
    code, out = run_capture(capsys, ["spectrum", "tau", "--kind", "M", "--max-period", "2", "--max-entry", "2"])
    assert code == 0
    vals = json.loads(out)["result"]["values"]
    assert any(v["value"] == {"p": 0, "q": 1, "d": 5, "r": 1} for v in vals)


def test_invalid_input_exit_code(capsys):
    code = run(["cf", "eval", "--terms", "1,0,3"])
    assert code == 2


def test_certification_exit_code(capsys):
    # skewed-gradient refusal surfaces as exit 3 via hall-certify on a bad target
    code = run(["mg2", "hall-certify", "--target", "0.5"])
    assert code == 2  # out-of-segment target is invalid input


def test_mg2_hall_certify_cli(capsys):
    code, out = run_capture(capsys, ["mg2", "hall-certify", "--target", "0.97", "--tol", "1e-9"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["a0"] == 5 and res["a_minus_1"] == 5
    assert abs(res["residual"]) <= 1e-9


def test_hall_ray_cli(capsys):
    code, out = run_capture(capsys, ["hall", "ray", "--target", "12", "--tol", "1e-6"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["a0"] == 45


def test_lattice_reconstruct_and_meta(capsys):
    code, out = run_capture(capsys, ["lattice", "reconstruct", "--seq", '{"kind":"periodic","preperiod":[],"period":[2,1]}', "--depth", "4"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["config"]["command"] == "lattice"
    assert doc["meta"]["config"]["precision_bits"] == 128
    assert all(a in (1, 2) for a in doc["result"]["indices"])


def test_byte_identical_reruns(capsys):
    argv = ["spectrum", "value", "--kind", "M", "--seq", '{"kind":"periodic","preperiod":[],"period":[1,2]}']
    _, out1 = run_capture(capsys, argv)
    _, out2 = run_capture(capsys, argv)
    assert out1 == out2
