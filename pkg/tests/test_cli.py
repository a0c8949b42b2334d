import json

import pytest
from click.testing import CliRunner

from stab23.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, tmp_path, args):
    return runner.invoke(main, ["--out", str(tmp_path)] + args, catch_exceptions=False)


def test_verify_relations_exit_zero(runner, tmp_path):
    r = invoke(runner, tmp_path, ["group", "verify-relations"])
    assert r.exit_code == 0, r.output
    assert "PASS" in r.output
    data = json.loads((tmp_path / "group-verify-relations.json").read_text())
    assert all(data["relations"].values())
    assert data["subgroup_orders"]["G24"] == 24


def test_subgroup_listing(runner, tmp_path):
    r = invoke(runner, tmp_path, ["group", "subgroup", "G24"])
    assert r.exit_code == 0
    data = json.loads((tmp_path / "group-subgroup-G24.json").read_text())
    assert data["order"] == 24
    assert len(data["elements"]) == 24


def test_quotient_report(runner, tmp_path):
    r = invoke(runner, tmp_path, ["group", "quotient", "--level", "1", "--mod", "1"])
    assert r.exit_code == 0
    data = json.loads((tmp_path / "group-quotient-1-1.json").read_text())
    assert data["order"] == 144


def test_invariants_pass(runner, tmp_path):
    r = invoke(runner, tmp_path, ["invariants", "--ring", "Srho", "--group", "C3", "--max-degree", "16"])
    assert r.exit_code == 0
    assert "PASS" in r.output


def test_chart_command_and_determinism(runner, tmp_path):
    args = ["--format", "json", "chart", "--group", "C3", "--stems", "-1..20"]
    r1 = invoke(runner, tmp_path, args)
    assert r1.exit_code == 0
    first = (tmp_path / "chart-C3.json").read_bytes()
    r2 = invoke(runner, tmp_path, args)
    assert r2.exit_code == 0
    assert (tmp_path / "chart-C3.json").read_bytes() == first


def test_chart_svg_written(runner, tmp_path):
    r = invoke(runner, tmp_path, ["--format", "svg", "chart", "--group", "SD16", "--stems", "-1..17"])
    assert r.exit_code == 0
    svg = (tmp_path / "chart-SD16.svg").read_text()
    assert svg.startswith("<svg")


def test_cohomology_command(runner, tmp_path):
    r = invoke(
        runner,
        tmp_path,
        ["cohomology", "--group", "C3", "--smax", "3", "--tmin", "-12", "--tmax", "12"],
    )
    assert r.exit_code == 0
    assert "PASS" in r.output


def test_bad_config_rejected(runner, tmp_path):
    # precision below level + 2 must be refused
    r = runner.invoke(
        main,
        ["--out", str(tmp_path), "--precision", "3", "--level", "2", "group", "verify-relations"],
    )
    assert r.exit_code != 0


def test_tower_chart_command(runner, tmp_path):
    r = invoke(runner, tmp_path, ["chart", "--tower", "--stems", "-4..28"])
    assert r.exit_code == 0
    data = json.loads((tmp_path / "chart-tower.json").read_text())
    assert data["vanishing_inputs"]["pi25_shifted_48"] == 0
