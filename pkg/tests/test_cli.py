import json
import subprocess
import sys

import pytest

from conftest import CUBIC, CUBIC_PARAM, XY_CONIC, PYTH
from dioparam.cli import main
from dioparam.parser import parse_poly
from dioparam.pipeline import STR
from dioparam.poly import UV, XYZ


def run_json(capsys, *argv):
    status = main([*argv, "--json"])
    return status, json.loads(capsys.readouterr().out)


def test_parametrize_xy_conic(capsys):
    status, out = run_json(capsys, "parametrize", XY_CONIC)
    assert status == 0
    assert out["d"] == 1 and out["d_tightened"] == 1
    assert [m["offsets"] for m in out["family"]] == [[0, 0, 0]]
    forms = [parse_poly(g, STR) for g in out["family"][0]["forms"]]
    S, T, R = (parse_poly(v, STR) for v in STR)
    # (u^2 w, v^2 w, u v w) up to the order fixed by the base point
    assert sorted(map(str, forms)) == sorted(map(str, [T * T * R, S * S * R, S * T * R]))


def test_report_fields_and_reparse(capsys):
    status, out = run_json(capsys, "verify", PYTH, "--box", "20")
    assert status == 0
    for key in ("input", "degree", "parametrization", "certificates", "d", "d_tightened", "family", "singular_points", "verification"):
        assert key in out
    assert set(out["parametrization"]) >= {"h1", "h2", "h3", "provenance"}
    assert set(out["certificates"]) == {"eq2", "eq3"}
    for k in ("h1", "h2", "h3"):
        parse_poly(out["parametrization"][k], UV)
    for cert in out["certificates"].values():
        assert cert["verified"]
        for c in cert["cofactors"]:
            parse_poly(c, UV)
    for m in out["family"]:
        for g in m["forms"]:
            parse_poly(g, STR)
    parse_poly(out["normalized"], XYZ)
    assert out["verification"]["success"] is True


def test_deterministic_output(capsys):
    a = run_json(capsys, "parametrize", CUBIC, "--param", *CUBIC_PARAM)[1]
    b = run_json(capsys, "parametrize", CUBIC, "--param", *CUBIC_PARAM)[1]
    assert a == b
    v1 = run_json(capsys, "verify", PYTH, "--box", "10", "--seed", "4")[1]
    v2 = run_json(capsys, "verify", PYTH, "--box", "10", "--seed", "4")[1]
    v1["verification"].pop("wall_time"), v2["verification"].pop("wall_time")
    assert v1 == v2


def test_cubic_flags_bad_point(capsys):
    status, out = run_json(capsys, "parametrize", CUBIC, "--param", *CUBIC_PARAM)
    assert status == 0
    (s,) = out["singular_points"]
    assert s["point"] == [0, 0, 1] and s["classification"] == "bad"


def test_analyze(capsys):
    status, out = run_json(capsys, "analyze", CUBIC)
    assert status == 0
    assert out["degree"] == 3 and out["irreducibility"]["status"] is True
    assert [s["point"] for s in out["singular_points"]] == [[0, 0, 1]]


def test_certify_intval(capsys):
    status, out = run_json(capsys, "certify-intval", XY_CONIC, "--g", "u^2*w", "v^2*w", "u*v*w")
    assert status == 0 and out["external_triple"]["passed"]
    status, out = run_json(capsys, "certify-intval", XY_CONIC, "--g", "u^2*w/2", "v^2*w", "u*v*w")
    assert status == 2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["parametrize", "X*Y - "], "syntax-error"),
        (["parametrize", "X^-1*Y"], "negative-exponent"),
        (["parametrize", "X*W"], "unknown-variable"),
        (["parametrize", "X^2 + Y^2 + Z^2", "--height-bound", "10"], "point-not-found"),
        (["parametrize", "X^2 - Y^2"], "reducible"),
        (["parametrize", "X^4 + Y^4 - Z^4"], "irreducibility-unchecked"),
        (["parametrize", CUBIC], "parametrization-required"),
        (["verify", XY_CONIC, "--box", "100000"], "box-too-large"),
    ],
)
def test_usage_errors_exit_1(capsys, argv, code):
    status, out = run_json(capsys, *argv)
    assert status == 1
    assert out["error"]["code"] == code


def test_modulus_limit(capsys):
    status, out = run_json(capsys, "parametrize", CUBIC, "--param", *CUBIC_PARAM, "--max-d", "5")
    assert status == 1 and out["error"]["code"] == "modulus-too-large"


def test_rejected_param_in_verify_exits_2(capsys):
    status, out = run_json(capsys, "verify", PYTH, "--box", "5", "--param", "U^2 - V^2", "2*U*V", "U^2 + 2*V^2")
    assert status == 2
    assert out["error"]["code"] == "not-on-curve"


def test_bad_arguments_exit_1(capsys):
    assert main(["verify", PYTH]) == 1
    assert main(["nonsense"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dioparam", "parametrize", XY_CONIC], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "d = 1" in proc.stdout
