import json
import subprocess
import sys

import pytest

from smoothings.cli import (
    EXIT_HYPOTHESIS,
    EXIT_NEEDS_ASSERTION,
    EXIT_OK,
    EXIT_PARSE,
    main,
)
from smoothings.complex_core import format_facets, rp2, sphere_boundary
from smoothings.profile import profile_sphere_product


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_profile_then_classify_round_trip(tmp_path, capsys):
    f = tmp_path / "rp9.json"
    assert run(capsys, "profile", "--builder", "rp:9", "--out", str(f))[0] == EXIT_OK
    a = run(capsys, "classify", "--profile", str(f), "--format", "machine")
    b = run(capsys, "classify", "--builder", "rp:9", "--format", "machine")
    assert a[0] == b[0] == EXIT_OK
    assert a[1] == b[1]
    assert json.loads(a[1])["inertia"]["generators"] == ["eta_epsilon"]


def test_machine_output_byte_stable(capsys):
    outs = {run(capsys, "classify", "--builder", "lens9:12", "--format", "machine")[1] for _ in range(3)}
    assert len(outs) == 1


def test_table_output_has_citations(capsys):
    code, out, _ = run(capsys, "classify", "--builder", "rp:8")
    assert code == EXIT_OK
    assert "[" in out and "RP^8" in out


def test_facet_file_input(tmp_path, capsys):
    f = tmp_path / "s8.facets"
    f.write_text(format_facets(sphere_boundary(8).facets))
    code, out, _ = run(capsys, "classify", "--complex", str(f), "--format", "machine")
    assert code == EXIT_OK
    assert json.loads(out)["concordance"]["group"] == "Z/2"


def test_exit_codes(tmp_path, capsys):
    s46 = tmp_path / "s4s6.json"
    s46.write_text(profile_sphere_product(4, 6).dumps())
    assert run(capsys, "classify", "--profile", str(s46))[0] == EXIT_NEEDS_ASSERTION
    assert run(capsys, "classify", "--profile", str(s46), "--assert", "phi=zero", "psi=zero")[0] == EXIT_OK
    assert run(capsys, "classify", "--builder", "sphere:10", "--assert", "phi=nonzero")[0] == EXIT_HYPOTHESIS
    assert run(capsys, "classify", "--builder", "bogus:3")[0] == EXIT_PARSE
    assert run(capsys, "classify")[0] == EXIT_PARSE
    bad = tmp_path / "bad.facets"
    bad.write_text("0 1 x\n")
    assert run(capsys, "profile", "--complex", str(bad))[0] == EXIT_PARSE
    f = tmp_path / "rp2.facets"
    f.write_text(format_facets(rp2().facets))
    # dimension 2 is outside the classifier's range
    assert run(capsys, "profile", "--complex", str(f))[0] == EXIT_PARSE


@pytest.mark.parametrize("table", ["lens", "rp", "spheres", "theoremC"])
def test_zoo_tables_pass(table, capsys):
    code, out, _ = run(capsys, "zoo", "--table", table)
    assert code == EXIT_OK
    assert "FAIL" not in out and "PASS" in out


def test_ops(capsys):
    code, out, _ = run(capsys, "ops", "--complex", "moore:4,7", "--op", "d2", "--class", "7:0:4")
    assert code == EXIT_OK and out.strip() == "8:1:2"
    code, out, _ = run(capsys, "ops", "--complex", "moore:8,7", "--op", "beta:3", "--class", "7:0:2")
    assert out.strip() == "8:1:2"
    assert run(capsys, "ops", "--complex", "moore:4,7", "--op", "sq9", "--class", "7:0:2")[0] == EXIT_PARSE


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK and "FAIL" not in out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "smoothings", "zoo", "--table", "spheres"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "PASS" in p.stdout
