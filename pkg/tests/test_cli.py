import csv
import io as _io
import json
import math

import numpy as np
import pytest

from qhkit import ComplexMeasure, DataTriple, Density, dirac, io
from qhkit.cli import VERDICT_EXIT, main, parse_grid, parse_range


@pytest.fixture
def files(tmp_path, ex54):
    def dump(name, doc):
        p = tmp_path / name
        p.write_text(io.dumps(doc), encoding="utf-8")
        return str(p)

    out = {
        "ex54": dump("ex54.json", io.data_to_json(ex54)),
        "z": dump("z.json", io.data_to_json(DataTriple(0, 1))),
        "triple": dump(
            "triple.json",
            io.data_to_json(DataTriple(0.5, 0.25, ComplexMeasure(dirac(1.0, 2.0).atoms, (Density.rational((1,), (4, 0, 1)),)))),
        ),
        "const": dump("const.json", {"schema": "qhkit/1", "type": "disk", "c": {"re": 2, "im": -1},
                                     "atom_at_1": 0, "atoms": [], "densities": []}),
        "bad": dump("bad.json", {"schema": "qhkit/1", "type": "data", "a": 0}),
    }
    p = tmp_path / "pts.csv"
    p.write_text("re,im\n0,-2\n1,0.5\n", encoding="utf-8")
    out["pts"] = str(p)
    p = tmp_path / "empty.csv"
    p.write_text("", encoding="utf-8")
    out["empty"] = str(p)
    p = tmp_path / "real.csv"
    p.write_text("1,0\n", encoding="utf-8")
    out["real"] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def rows(text):
    return list(csv.DictReader(_io.StringIO(text)))


def doc(text):
    d = json.loads(text)
    io.validate_document(d)
    return d


def test_eval_builtin_grid(capsys):
    code, out, _ = run(capsys, "eval", "--builtin", "const-i-sym", "--grid", "im:0.5")
    assert code == 0
    r = [x for x in rows(out) if float(x["re"]) == 1.0][0]
    assert (float(r["q_re"]), float(r["q_im"])) == (0.0, 1.0)
    assert len(rows(out)) == 21


def test_eval_data_points(capsys, files):
    code, out, _ = run(capsys, "eval", "--data", files["ex54"], "--points", files["pts"])
    assert code == 0
    r = rows(out)[0]
    assert abs(complex(float(r["q_re"]), float(r["q_im"]))) < 1e-8


def test_eval_empty_points(capsys, files):
    code, out, _ = run(capsys, "eval", "--data", files["ex54"], "--points", files["empty"])
    assert code == 0 and out == "re,im,q_re,q_im\n"


def test_eval_failure_names_point(capsys, files):
    code, _, err = run(capsys, "eval", "--builtin", "gauss", "--points", files["real"])
    assert code == 3 and "z = 1.0" in err


def test_malformed_inputs(capsys, files):
    assert run(capsys, "eval", "--builtin", "nope", "--grid", "im:1")[0] == 2
    assert run(capsys, "eval", "--data", files["bad"], "--grid", "im:1")[0] == 2
    assert run(capsys, "eval", "--builtin", "gauss", "--grid", "re:0:1:0.5")[0] == 2
    assert run(capsys, "eval", "--builtin", "gauss", "--grid", "im:1", "--bogus")[0] == 2
    assert run(capsys, "rational", "classify", "--upper", "1/(")[0] == 2


def test_env_and_flag_tolerances(capsys, monkeypatch, files):
    monkeypatch.setenv("QHKIT_ABS_TOL", "zero")
    assert run(capsys, "eval", "--data", files["ex54"], "--grid", "im:1")[0] == 2
    assert run(capsys, "eval", "--data", files["ex54"], "--grid", "im:1", "--abs-tol", "1e-9")[0] == 0


def test_extract(capsys, files):
    code, out, _ = run(capsys, "extract", "--builtin", "const-i-sym")
    d = doc(out)
    assert code == 0 and abs(d["a"]["re"]) < 1e-6 and abs(d["b"]["re"]) < 1e-6 and "residual" in d
    D = io.data_from_json(d)
    x = np.linspace(-15, 15, 31)
    assert np.allclose(D.measure.density(x), 1 / (1 + x * x), atol=1e-6)

    code, out, _ = run(capsys, "extract", "--data", files["triple"], "--atoms", "1.0")
    D = io.data_from_json(doc(out))
    assert code == 0 and abs(D.a - 0.5) < 1e-6 and abs(D.b - 0.25) < 1e-6
    assert abs(D.measure.atoms[0].w - 2) < 1e-6


def test_extract_exp_sym(capsys):
    code, out, _ = run(capsys, "extract", "--builtin", "exp-sym")
    D = io.data_from_json(doc(out))
    x = np.linspace(-15, 15, 61)
    assert code == 0 and abs(D.a - math.exp(-1)) < 1e-6
    assert np.allclose(D.measure.density(x), np.sin(x) / (1 + x * x), atol=1e-4)


def test_extract_failure_exit(capsys, files):
    # the atom at 1 is not declared, so the reconstruction misses
    code, _, err = run(capsys, "extract", "--data", files["triple"], "--window", "-5:5:0.1", "--tail", "none")
    assert code == 4 and "misses" in err


def test_check(capsys, files):
    assert run(capsys, "check", "membership", "--builtin", "recip-sq")[0] == 5
    code, out, _ = run(capsys, "check", "regularity", "--builtin", "gauss")
    assert code == 0 and doc(out)["verdict"] == "satisfied"
    assert run(capsys, "check", "zero-lower", "--data", files["ex54"])[0] == 0
    assert run(capsys, "check", "zero-lower", "--data", files["z"])[0] == 5
    assert run(capsys, "check", "zero-lower", "--builtin", "gauss")[0] == 2


def test_rational(capsys):
    code, out, _ = run(capsys, "rational", "classify", "--upper", "1/z^2", "--lower", "1/z^2")
    d = doc(out)
    assert code == 5 and d["verdict"] == "rejected" and "double real zero" in d["reason"]
    code, out, _ = run(capsys, "rational", "decompose", "--upper", "z + 1/z", "--lower", "z + 1/z")
    d = doc(out)
    assert code == 0 and d["b"] == {"re": 1.0, "im": 0.0} and d["common"] == "1/z"
    code, out, _ = run(capsys, "rational", "to-data", "--upper", "-1/z", "--lower", "-1/z")
    d = doc(out)
    assert code == 0 and d["measure"]["atoms"][0]["t"] == 0
    assert d["measure"]["atoms"][0]["w"]["re"] == pytest.approx(math.pi)


def test_disk(capsys, files):
    code, out, _ = run(capsys, "disk", "to", "--data", files["z"])
    d = doc(out)
    assert code == 0 and d["c"] == {"re": 0.0, "im": -1.0} and d["atom_at_1"]["re"] == 2
    code, out, _ = run(capsys, "disk", "verify", "--data", files["ex54"])
    assert code == 0 and doc(out)["residual"] <= 1e-8
    code, out, _ = run(capsys, "disk", "from", "--disk", files["const"])
    d = doc(out)
    assert code == 0 and d["a"] == {"re": 2.0, "im": -1.0} and d["measure"] == {"atoms": [], "densities": []}


def test_sumrule(capsys):
    code, out, _ = run(capsys, "sumrule", "--upper", "-1/z")
    assert code == 0 and doc(out)["verdict"] == "identity-holds"
    code, out, _ = run(capsys, "sumrule", "--builtin", "tan-mi", "--eps", "0.2,0.1")
    assert code in (5, 6) and doc(out)["table"]


def test_plot(capsys, files):
    code, out, _ = run(capsys, "plot", "--builtin", "const-i-sym", "--what", "jump", "--y", "0.01")
    assert code == 0 and all(abs(float(r["jump_re"]) - 1) < 1e-12 for r in rows(out))
    code, out, _ = run(capsys, "plot", "--data", files["ex54"], "--what", "value", "--y", "0.01", "--range", "-5:5:0.1")
    assert code == 0 and len(rows(out)) == 101
    code, out, _ = run(capsys, "plot", "--builtin", "exp-sym", "--what", "jump", "--y", "0.001",
                       "--range", "1.5707963267948966:1.5707963267948966:1")
    assert float(rows(out)[0]["jump_re"]) == pytest.approx(1, abs=2e-3)


def test_csv_is_bit_stable(capsys, files):
    a = run(capsys, "eval", "--data", files["ex54"], "--grid", "im:0.3")[1]
    b = run(capsys, "eval", "--data", files["ex54"], "--grid", "im:0.3")[1]
    assert a == b and "\r" not in a


def test_exit_codes_are_a_function_of_verdicts():
    assert set(VERDICT_EXIT.values()) <= {0, 5, 6}
    ok = {v for v, c in VERDICT_EXIT.items() if c == 0}
    bad = {v for v, c in VERDICT_EXIT.items() if c != 0}
    assert not ok & bad


def test_grid_and_range_parsing():
    assert len(parse_range("-5:5:0.1")) == 101
    g = parse_grid("im:-0.5,re:0:1:0.5")
    assert np.allclose(g, [-0.5j, 0.5 - 0.5j, 1 - 0.5j])
