import io
import json
import subprocess
import sys

import pytest

from kgroups.abelian import FgAbelianGroup
from kgroups.calculator import StructureReport
from kgroups.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_snf_text():
    code, out, _ = call("snf", "--matrix", "2,4;6,8")
    assert code == 0
    assert out.strip() == "diag(2,4)"


def test_snf_json():
    code, out, _ = call("snf", "--matrix", "2,4;6,8", "--json")
    data = json.loads(out)
    assert data["diagonal"] == [2, 4]
    assert data["s"] == [[2, 0], [0, 4]]


def test_surface_p2_text():
    code, out, _ = call("surface", "--family", "p2", "--k", "5")
    assert code == 0
    assert "quotient of pi1(X_gal^aff): (Z/5)^24" in out
    assert "H1(X_gal): (Z/5)^23" in out
    assert "C^aff assumed trivial" in out


def test_surface_json_round_trip():
    code, out, _ = call("surface", "--family", "cxp1", "--g", "1", "--d", "2", "--k", "4", "--json")
    assert code == 0
    report = StructureReport.from_json(json.loads(out))
    assert report.h1_galois == FgAbelianGroup([2] * 14, 30)
    assert report.to_json() == json.loads(out)


def test_surface_known_trivial_caff():
    code, out, _ = call("surface", "--family", "quadric", "--a", "6", "--b", "9", "--known-trivial-caff")
    assert code == 0
    assert "\n  pi1(X_gal):" in out
    assert "quotient of" not in out
    assert "asserted trivial" in out


def test_usage_errors():
    assert call("surface", "--family", "p2", "--k", "3")[0] == 2
    assert call("surface", "--family", "p2")[0] == 2
    assert call("verify-snd", "--n", "4", "--d", "1")[0] == 2
    assert call("bogus")[0] == 2
    assert call("snf", "--matrix", "1,2;3")[0] == 2
    assert call("kappa", "--d", "6", "--t", "4", "--m", "2")[0] == 2


def test_cap_exceeded_exits_1():
    code, _, err = call("kgroup", "--group", "S4", "--n", "4", "--cap", "500")
    assert code == 1
    assert "error" in err


def test_kgroup_and_recover():
    code, out, _ = call("kgroup", "--group", "Q8", "--n", "3", "--brute-force", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["order"] == data["brute_force_order"] == 128
    assert data["nilpotency_class"] == 2
    code, out, _ = call("recover", "--gens", "(1 2),(1 2 3)", "--n", "3")
    assert code == 0
    assert "isomorphic to G: True" in out


def test_verify_snd():
    code, out, _ = call("verify-snd", "--n", "5", "--d", "1")
    assert code == 0
    assert out.strip() == "all identity: 0 failures / 119 relators"
    with pytest.warns(UserWarning):
        code, out, _ = call("verify-snd", "--n", "3", "--d", "1", "--force", "--json")
    assert code == 0 and json.loads(out)["relator_count"] == 8


def test_ktilde_and_kappa():
    code, out, _ = call("ktilde", "--torsion", "2,2", "--n", "3")
    assert code == 0
    assert "H2 layer: Z/2" in out and "order: 32" in out
    code, out, _ = call("kappa", "--d", "3", "--t", "3", "--m", "4")
    assert code == 0
    assert out.strip() == "ker kappa_4: (Z/3)^3 (order 27)"


def test_out_file(tmp_path):
    target = tmp_path / "snf.json"
    code, out, _ = call("snf", "--matrix", "4", "--json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["diagonal"] == [4]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kgroups.cli", "snf", "--matrix", "2,4;6,8"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "diag(2,4)"
