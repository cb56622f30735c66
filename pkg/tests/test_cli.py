import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hypersobolev.cli import run
from hypersobolev.corpus import bundled_path
from hypersobolev.io import load


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


def lines(text):
    return [json.loads(line) for line in text.splitlines()]


S3 = bundled_path("s3.json")
CLASSES = bundled_path("s3_classes.json")


def test_validate_good_and_broken():
    code, text = call("validate", CLASSES)
    assert code == 0
    report = json.loads(text)
    assert report["pass"] and all(a["residual"] == 0 for a in report["axioms"].values())
    code, text = call("validate", bundled_path("broken_prob.json"))
    assert code == 1
    report = json.loads(text)
    assert report["axioms"]["probability"]["residual"] == pytest.approx(1e-3, abs=1e-15)
    assert [k for k, a in report["axioms"].items() if not a["pass"]] == ["probability"]


def test_validate_csv():
    code, text = call("validate", CLASSES, "--format", "csv")
    assert code == 0
    assert text.splitlines()[0] == "axiom,pass,residual"
    assert len(text.splitlines()) == 7


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        run(["validate", str(CLASSES), "--bogus"])
    assert info.value.code == 64
    assert call("make", "cyclic")[0] == 64


def test_structural_errors_exit_2(tmp_path):
    assert call("validate", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("validate", bad)[0] == 2
    doc = json.loads(CLASSES.read_text())
    del doc["identity"]
    bad.write_text(json.dumps(doc))
    assert call("validate", bad)[0] == 2
    assert call("cosets", S3, "--k", "e,(99)")[0] == 2
    assert call("cosets", S3, "--k", "e,(123)")[0] == 2
    assert call("embed-report", S3, "--k", "e,(12)", "--s", "-1")[0] == 2


def test_check_failures_exit_1():
    # broken input downstream and a non-Gelfand pair
    assert call("cosets", bundled_path("broken_assoc.json"))[0] == 1
    assert call("dual", S3)[0] == 1
    assert call("haar", bundled_path("broken_haar.json"))[0] == 1


def test_haar_command():
    code, text = call("haar", CLASSES)
    assert code == 0
    out = json.loads(text)
    assert out["exact"] == {"E": "1", "T": "3", "C": "2"}
    assert out["residual"] <= 1e-10


def test_make_round_trip(tmp_path):
    target = tmp_path / "h3.json"
    assert call("make", "hamming", 3, "-o", target)[0] == 0
    assert target.read_text() == bundled_path("hamming3.json").read_text()
    code, text = call("make", "cyclic", 5)
    assert code == 0 and json.loads(text)["labels"] == ["0", "1", "2", "3", "4"]
    code, text = call("make", "classes", bundled_path("s3_table.json"))
    assert code == 0
    assert len(json.loads(text)["labels"]) == 3
    code, text = call("make", "group", bundled_path("s3_table.json"))
    assert code == 0 and text == S3.read_text()


def test_make_rejects_non_group(tmp_path):
    table = tmp_path / "t.json"
    table.write_text(json.dumps({"labels": ["a", "b"], "table": [["a", "b"], ["b", "b"]]}))
    assert call("make", "group", table)[0] == 2


def test_cosets_command():
    code, text = call("cosets", S3, "--k", "e,(12)")
    assert code == 0
    out = json.loads(text)
    assert out["blocks"] == [["e", "(12)"], ["(13)", "(23)", "(123)", "(132)"]]
    assert out["representatives"] == ["e", "(13)"]
    assert out["gelfand_pair"] is True
    assert out["quotient"]["convolution"]["(13)|(13)"] == {"e": "1/2", "(13)": "1/2"}
    # space separated labels work too
    assert call("cosets", S3, "--k", "e", "(12)")[1] == text
    code, text = call("cosets", S3)
    assert code == 0 and json.loads(text)["gelfand_pair"] is False


def test_dual_command():
    code, text = call("dual", S3, "--k", "e,(12)")
    assert code == 0
    out = json.loads(text)
    np.testing.assert_allclose(out["plancherel"], [1 / 6, 1 / 3], atol=1e-12)
    np.testing.assert_allclose(np.array(out["characters"])[..., 0], [[1, 1], [1, -0.5]], atol=1e-10)
    code, text = call("dual", CLASSES, "--format", "csv")
    rows = text.splitlines()
    assert code == 0 and len(rows) == 4 and rows[0].startswith("index,plancherel,E.re")


def test_fourier_and_inverse(tmp_path):
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"C": 1}))
    code, text = call("fourier", CLASSES, "--f", fn)
    assert code == 0
    coeffs = json.loads(text)["coefficients"]
    np.testing.assert_allclose(np.array(coeffs)[:, 0], [2, 2, -1], atol=1e-12)
    cf = tmp_path / "c.json"
    cf.write_text(text)
    code, text = call("ifourier", CLASSES, "--f", cf)
    assert code == 0
    back = json.loads(text)
    np.testing.assert_allclose([back[k][0] for k in "ETC"], [0, 0, 1], atol=1e-12)


def test_fourier_bi_invariance(tmp_path):
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"(13)": 1}))
    assert call("fourier", S3, "--k", "e,(12)", "--f", fn)[0] == 1
    code, text = call("fourier", S3, "--k", "e,(12)", "--f", fn, "--project")
    assert code == 0
    np.testing.assert_allclose(np.array(json.loads(text)["coefficients"])[:, 0], [1, -0.5], atol=1e-12)


def test_plancherel_command(tmp_path):
    code, text = call("plancherel", bundled_path("hamming4.json"), "--trials", 20, "--seed", 3)
    assert code == 0
    rows = lines(text)
    assert len(rows) == 21 and rows[-1]["summary"]["failures"] == 0
    assert all(r["residual"] <= 1e-10 for r in rows[:-1])
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"e": [1, 2], "(12)": [1, 2]}))
    code, text = call("plancherel", S3, "--k", "e,(12)", "--f", fn)
    assert code == 0 and len(lines(text)) == 2


def test_sobolev_command(tmp_path):
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"0": 1}))
    gamma = tmp_path / "g.json"
    gamma.write_text(json.dumps([0, 1, 2]))
    for cmd in ("sobolev", "sobolev-norm"):
        code, text = call(cmd, bundled_path("cyclic3.json"), "--gamma", gamma, "--s", 1, "--f", fn)
        assert code == 0
        assert json.loads(text)["norm"] == pytest.approx(math.sqrt(8 / 3), abs=1e-12)
    code, text = call("sobolev", bundled_path("cyclic3.json"), "--gamma", "index", "--s", 2, "--f", fn)
    assert json.loads(text)["norm"] == pytest.approx(math.sqrt(10), abs=1e-12)
    gamma.write_text(json.dumps([0, 1]))
    assert call("sobolev", bundled_path("cyclic3.json"), "--gamma", gamma, "--s", 1, "--f", fn)[0] == 2


def test_embed_report_property_run():
    code, text = call("embed-report", S3, "--k", "e,(12)", "--gamma", "index", "--s", 1,
                      "--trials", 1000, "--seed", 7)
    assert code == 0
    rows = lines(text)
    trials, summary = rows[:-1], rows[-1]["summary"]
    assert len(trials) == 1000 and all(r["pass"] for r in trials)
    assert set(trials[0]) == {"trial", "pass", "l2", "supnorm", "modulus"}
    assert set(trials[0]["l2"]) == {"lhs", "rhs", "constant", "margin", "pass"}
    assert summary["violations"] == {"l2": 0, "supnorm": 0, "modulus": 0}


def test_embed_report_sigma_and_csv():
    code, text = call("embed-report", bundled_path("hamming3.json"), "--gamma", "spectral-gap", "--s", 2,
                      "--sigma", 1, "--trials", 10, "--format", "csv")
    assert code == 0
    rows = text.splitlines()
    assert len(rows) == 11 and "monotone.pass" in rows[0]
    assert call("embed-report", S3, "--k", "e,(12)", "--s", 1, "--sigma", 2)[0] == 2


def test_gamma_block_option():
    code, text = call("embed-report", S3, "--k", "e,(12)", "--gamma", "spectral-gap", "--gamma-block", "(23)",
                      "--s", 1, "--trials", 1)
    assert code == 0
    assert lines(text)[-1]["summary"]["gamma"] == pytest.approx([0, 1.5])


def test_embed_report_is_deterministic():
    argv = ("embed-report", S3, "--k", "e,(12)", "--gamma", "index", "--s", 2, "--sigma", 1,
            "--trials", 50, "--seed", 7)
    assert call(*argv)[1] == call(*argv)[1]
    assert call(*argv)[1] != call(*argv[:-1], 8)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hypersobolev", "validate", str(CLASSES)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
    assert load(CLASSES).n == 3
