import csv
import io
import json

import pytest

from gamma2.cli import RunConfig, main, run


def _json(argv):
    text, ok = run(argv + ["--format", "json"])
    return json.loads(text), ok


def test_polys_table():
    out, ok = _json(["polys", "--k-max", "5"])
    assert ok
    assert [r["recursion"] for r in out["rows"]] == [
        ["1"],
        ["1"],
        ["1", "4"],
        ["1", "44", "16"],
        ["1", "408", "912", "64"],
        ["1", "3688", "30768", "15808", "256"],
    ]
    assert all(r["equal"] for r in out["rows"])


def test_polys_k0():
    out, _ = _json(["polys", "--k-max", "0"])
    assert [r["recursion"] for r in out["rows"]] == [["1"]]


def test_roots_ascending():
    out, _ = _json(["roots", "--k", "4", "--tol", "1/10000000000"])
    vals = [float(r["value"]) for r in out["roots"]]
    assert vals == sorted(vals)
    assert [round(v, 4) for v in vals] == [-13.7877, -0.4598, -0.0025]


def test_roots_exact_linear():
    out, _ = _json(["roots", "--k", "2"])
    assert out["roots"][0]["rational"] == "-1/4"


def test_series_dumps():
    out, _ = _json(["series", "lambda", "--trunc", "64"])
    assert out["coefficients"][0] == [4, "16/1"]
    out, _ = _json(["series", "theta3", "--trunc", "64"])
    assert out["coefficients"][:3] == [[0, "1/1"], [4, "2/1"], [16, "2/1"]]


def test_series_g_matches_theta2_squared():
    from gamma2.qforms import theta_bundle

    out, _ = _json(["series", "g", "--k", "0", "--trunc", "64"])
    t2sq = (theta_bundle(64).theta2 ** 2).truncate(64)
    assert out["coefficients"] == [[n, f"{c.numerator}/{c.denominator}"] for n, c in t2sq.items()]


def test_identities_exit_code(capsys):
    assert main(["identities", "--k-max", "3", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["identity"] == "thm_zeros" and rows[0]["lhs"] == "4/1"
    even = [r for r in rows if r["k"] == "1" and r["identity"].startswith("thm_even")]
    assert [r["lhs"] for r in even] == ["-8/1", "-8/1"]
    assert all(r["pass"] == "True" for r in rows)


def test_interlace_k15_rejected(capsys):
    assert main(["interlace", "--k", "15"]) == 2
    assert "requires k>15" in capsys.readouterr().err


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(precision_bits=32)
    with pytest.raises(ValueError):
        RunConfig(trunc=10)
    assert main(["polys", "--prec", "32"]) == 2


def test_scan_csv_columns_and_determinism(tmp_path):
    argv = ["scan", "--k", "5", "--grid", "30", "--n-max", "400", "--theta-lo", "0.4", "--theta-hi", "2.7"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--format", "csv", "--out", str(a)]) in (0, 1)
    main(argv + ["--format", "csv", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text(encoding="utf-8").splitlines()[0]
    assert header == "theta_rad,imF,sign,certified,tail_bound"


def test_scan_weight_7_transport():
    out, ok = _json(["scan", "--k", "3", "--grid", "64"])
    assert ok
    assert out["summary"]["zeros_found"] == 2
    assert all(z["matches_sturm_root"] for z in out["zeros"])


def test_scan_degenerate_grid():
    out, _ = _json(["scan", "--k", "5", "--grid", "2", "--n-max", "400"])
    assert out["summary"]["zeros_found"] <= 1
