"""Command-line tests: reports on stdout, diagnostics on stderr and the exit codes."""

import json

import pytest
import yaml

from RHSActions.__main__ import EXIT_BUDGET, EXIT_INPUT_ERROR, EXIT_OBSTRUCTION, EXIT_OK, run
from RHSActions.utils.budgets import Budgets, get_budgets


def _run_json(capsys, *argv):
    status = run(list(argv))
    out = capsys.readouterr().out
    return status, json.loads(out) if out else None


def test_classify_the_klein_four_group(capsys):
    status, report = _run_json(capsys, "classify", "C(2)x C(2)", "--deterministic")
    assert status == EXIT_OK
    assert report["command"] == "classify"
    assert report["input"] == "C(2)x C(2)"
    assert report["normalized_spec"] == "C(2) x C(2)"
    assert report["timestamp"] is None
    payload = report["payload"]
    assert payload["verdict"]["tag"] == "can_act_by_construction"
    [witness] = payload["periodic_extensions"]["2"]
    assert (witness["total_order"], witness["total_involutions"], witness["period"]) == (8, 1, 4)
    assert witness["nonsplit_primes"] == [2]


def test_period(capsys):
    status, report = _run_json(capsys, "period", "BT", "--deterministic")
    assert status == EXIT_OK
    assert report["payload"]["period"] == 4
    assert report["payload"]["periodic"] is True


def test_text_output_is_yaml(capsys):
    assert run(["period", "Q(8)", "--text", "--deterministic"]) == EXIT_OK
    document = yaml.safe_load(capsys.readouterr().out)
    assert document["payload"]["period"] == 4


def test_h2_with_enumeration(capsys):
    status, report = _run_json(capsys, "h2", "C(2) x C(2)", "--mod", "2", "--enumerate", "--deterministic")
    assert status == EXIT_OK
    payload = report["payload"]
    assert payload["invariant_factors"] == [2, 2, 2]
    assert payload["coefficients"] == "Z/2"
    assert payload["enumerated"] is True
    assert len(payload["representatives"]) == 8
    assert len(payload["generators"]) == 3


def test_extensions(capsys):
    status, report = _run_json(capsys, "extensions", "C(3)", "--mod", "3", "--deterministic")
    assert status == EXIT_OK
    assert [w["period"] for w in report["payload"]] == [2, 2]


def test_theorem_b_with_fail_flag(capsys):
    status, report = _run_json(capsys, "theoremB", "Q(16,3,1)", "--fail-on-obstruction", "--deterministic")
    assert status == EXIT_OBSTRUCTION
    assert report["command"] == "theoremB"
    assert report["payload"]["tag"] == "cannot_act"
    assert report["payload"]["certificate_verified"] is True
    status, report = _run_json(capsys, "theoremB", "Q(16,3,1)", "--deterministic")
    assert status == EXIT_OK


def test_theorem_b_on_a_central_quotient_with_a_bound(capsys):
    status, report = _run_json(capsys, "theoremB", "quot(Q(16,3,1), Z(2))", "--bound", "256", "--deterministic")
    assert status == EXIT_OK
    assert report["payload"]["tag"] == "cannot_act"
    assert report["payload"]["certificate_verified"] is True


def test_obstruction_is_an_alias_of_theorem_b(capsys):
    status, report = _run_json(capsys, "obstruction", "D(6)", "--deterministic")
    assert status == EXIT_OK
    assert report["payload"]["tag"] == "no_obstruction_found"


def test_catalog_is_newline_delimited_json(capsys):
    assert run(["catalog", "--max-order", "16"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 22
    entries = [json.loads(line) for line in lines]
    assert entries[0]["spec"] == "C(1)"
    assert {e["milnor_tag"] for e in entries} == {"hopf", "dihedral_product"}


def test_catalog_type_filter(capsys):
    assert run(["catalog", "--max-order", "48", "--type", "B"]) == EXIT_OK
    assert [json.loads(line)["spec"] for line in capsys.readouterr().out.splitlines()] == ["Q(16,3,1)"]


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "C(2) + C(3)"],
        ["classify", "D(7)"],
        ["h2", "C(4)"],
        ["h2", "C(4)", "--mod", "2", "-k", "no_such_budget=1"],
        ["period", "C(4)", "-C", "missing.yaml"],
        ["frobnicate", "C(4)"],
    ],
)
def test_input_errors(capsys, argv):
    assert run(argv) == EXIT_INPUT_ERROR
    captured = capsys.readouterr()
    assert captured.out == ""


def test_syntax_error_reports_the_byte_offset(capsys):
    assert run(["period", "C(2) + C(3)"]) == EXIT_INPUT_ERROR
    assert "at byte 5" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["period", "C(2) x C(30000)"],
        ["h2", "Q(16) x C(5)", "--mod", "2"],
        ["extensions", "Q(8)", "--mod", "4", "-k", "extension_order_bound=16"],
    ],
)
def test_budget_errors(capsys, argv):
    assert run(argv) == EXIT_BUDGET
    assert capsys.readouterr().out == ""


def test_budget_from_the_environment(capsys, monkeypatch):
    monkeypatch.setenv("RHS_ACTIONS_BUDGET", "4")
    assert run(["period", "C(2) x C(3)"]) == EXIT_BUDGET
    monkeypatch.delenv("RHS_ACTIONS_BUDGET")
    assert run(["period", "C(2) x C(3)", "--deterministic"]) == EXIT_OK


def test_budget_file(capsys, tmp_path):
    config = tmp_path / "budgets.yaml"
    config.write_text("closure_order_bound: 4\n")
    assert run(["period", "C(6)", "-C", str(config)]) == EXIT_BUDGET
    wrong_suffix = tmp_path / "budgets.txt"
    wrong_suffix.write_text("closure_order_bound: 4\n")
    assert run(["period", "C(6)", "-C", str(wrong_suffix)]) == EXIT_INPUT_ERROR


def test_budgets_are_restored_after_a_run(capsys):
    before = get_budgets()
    run(["period", "C(6)", "-k", "h2_order_bound=8", "--deterministic"])
    assert get_budgets() is before
    assert before == Budgets()


DETERMINISM_CORPUS = [
    "C(1)", "C(2)", "C(6)", "C(2) x C(2)", "C(2) x C(4)", "C(3) x C(3)", "D(6)", "D(8)", "D(10)", "Q(8)",
    "Q(12)", "Q(16)", "Q(8) x C(3)", "BT", "D(6) x C(5)", "quot(Q(16), Z)", "C(2) x C(2) x C(2)",
    "perm[(0 1 2); (0 1)]", "perm[(0 1 2 3)]", "C(9)",
]


@pytest.mark.slow
@pytest.mark.parametrize("spec", DETERMINISM_CORPUS)
def test_classify_is_byte_identical_across_runs(capsys, spec):
    outputs = set()
    for _ in range(5):
        assert run(["classify", spec, "--deterministic", "--threads", "2"]) in (EXIT_OK, EXIT_OBSTRUCTION)
        outputs.add(capsys.readouterr().out)
    assert len(outputs) == 1
