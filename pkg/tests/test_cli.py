"""CLI surface: JSON output shape, exit codes, and the probe/selfcheck paths."""

from __future__ import annotations

import json

from click.testing import CliRunner

from groupinv.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_rinf_golden():
    result = run("rinf", "-g", "BS(1,2) x F(3)")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["conclusion"] == "RInfinity"
    assert data["trace"][-1]["rule"] == "ThmMain1"
    assert data["version"]


def test_reidemeister_golden():
    result = run("reidemeister", "--matrix", "[[-1]]")
    assert json.loads(result.output)["reidemeister"] == 2
    result = run("reidemeister", "--matrix", "[[1]]")
    assert json.loads(result.output)["reidemeister"] == "infinity"
    result = run("reidemeister", "--matrix", "[[-1]]", "--torsion", "[2]")
    assert json.loads(result.output)["reidemeister"] == 4


def test_reidemeister_table_path():
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    result = run("reidemeister", "--table", json.dumps(z4),
                 "--automorphism", "[0, 3, 2, 1]")
    data = json.loads(result.output)
    assert data["reidemeister"] == 2
    assert data["representatives"] == [0, 1]
    assert run("reidemeister", "--table", json.dumps(z4), "--matrix", "[[1]]").exit_code == 1
    assert run("reidemeister").exit_code == 1


def test_invariants_golden():
    result = run("invariants", "-g", "F(2) x Z")
    data = json.loads(result.output)
    assert data["hom_rank"] == 3
    assert data["omega_cardinality"] == "2"
    assert data["o_class"] == "O2"
    points = data["omega"]["atoms"][0][1]["points"]
    assert sorted(points) == [[-1], [1]]


def test_invariants_unknown_level():
    result = run("invariants", "-g", "L(2)", "-n", "2")
    data = json.loads(result.output)
    assert data["omega"] is None and data["o_class"] == "unknown"


def test_probe_json_and_csv():
    result = run("probe", "--atom", "BS(1,2)", "--dir", "1", "--radius", "6")
    data = json.loads(result.output)
    assert data["evidence"] == "SupportsMembership"
    result = run("probe", "--atom", "BS(1,2)", "--dir", "-1", "--radius", "6",
                 "--mode", "cone")
    assert json.loads(result.output)["evidence"] == "SupportsNonMembership"
    result = run("probe", "--atom", "Z^2", "--dir", "1,1", "--radius", "4",
                 "--grid", "0,1/2,1", "--format", "csv")
    assert result.exit_code == 0
    assert result.output.splitlines()[0].startswith("s,vertices")


def test_computation_errors_are_json_exit_1():
    result = run("rinf", "-g", "BS(2,3)")
    assert result.exit_code == 1
    assert "error" in json.loads(result.output)
    result = run("probe", "--atom", "T(3)", "--dir", "1,0,0")
    assert result.exit_code == 1
    assert "error" in json.loads(result.output)
    result = run("reidemeister", "--matrix", "[[2]]")
    assert result.exit_code == 1


def test_usage_errors_exit_2():
    assert run("rinf").exit_code == 2
    assert run("nonsense").exit_code == 2
    assert run("probe", "--atom", "Z^2").exit_code == 2
