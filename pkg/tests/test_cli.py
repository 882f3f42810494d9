import json
import subprocess
import sys

import pytest

from fusionlim.cli import EXIT_BUDGET, EXIT_OK, EXIT_PARSE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lambda_base_case(capsys):
    code, out, _ = run(capsys, "lambda", "-p", "2", "-G", "Sym(3)", "-M", "natural(2)",
                       "--max-i", "2", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["dims"] == [0, 1, 0]


def test_lambda_headline(capsys):
    code, out, _ = run(capsys, "lambda", "-p", "2", "-G", "prod(Sym(3),Sym(3),Sym(3))",
                       "-M", "tensor(natural(2),natural(2),natural(2))", "--max-i", "3", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["dims"][3] == 1


def test_lambda_wreath(capsys):
    code, out, _ = run(capsys, "lambda", "-p", "2", "-G", "wreath(Sym(3),2)",
                       "-M", "power(natural(2),2)", "--max-i", "3", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["dims"] == [0, 0, 1, 0]


def test_lambda_both_backends_human_output(capsys):
    code, out, _ = run(capsys, "lambda", "-G", "Sym(3)", "-M", "natural(2)", "--max-i", "2",
                       "--backend", "both")
    assert code == EXIT_OK
    assert "Lambda^1 = 1" in out and "backends agree: True" in out


def test_lambda_writes_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, _, _ = run(capsys, "lambda", "-G", "Sym(3)", "-M", "natural(2)", "--max-i", "1",
                     "-o", str(path))
    assert code == EXIT_OK
    assert json.loads(path.read_text())["dims"] == [0, 1]


def test_output_is_stable(capsys):
    args = ["lambda", "-G", "prod(Sym(3),C(2))", "-M", "tensor(natural(2),trivial(2,1))",
            "--max-i", "2", "--json"]
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first


@pytest.mark.parametrize("argv", [
    ["lambda", "-G", "Sym(3", "-M", "natural(2)"],
    ["lambda", "-G", "Sym(4)", "-M", "natural(2)"],
    ["lambda", "-p", "3", "-G", "Sym(3)", "-M", "natural(2)"],
    ["lambda", "-p", "4", "-G", "Sym(3)", "-M", "natural(2)"],
    ["lambda", "-G", "Sym(3)", "-M", "natural(2)", "--max-i", "9"],
    ["fusion-report", "-G", "Sym(4)"],
    ["no-such-command"],
])
def test_malformed_input_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_PARSE


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "lambda", "-G", "Sym(4)", "-M", "natural(2,4)", "--backend", "bar",
                       "--max-i", "3", "--budget-chains", "10")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_fusion_report_small(capsys):
    code, out, _ = run(capsys, "fusion-report", "-G", "semidirect(natural(2), Sym(3))",
                       "--max-i", "3", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["x_classes"] == 1 and rep["y_classes"] == 1
    assert rep["prime"] == 2


def test_fusion_report_ex2(capsys):
    code, out, _ = run(capsys, "fusion-report", "-G",
                       "semidirect(tensor(natural(2),natural(2),natural(2)), "
                       "prod(Sym(3),Sym(3),Sym(3)))", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["x_classes"] == 1 and rep["y_classes"] == 2
    assert rep["lambda_dims"][3] == 1
    assert {"prime", "group_spec", "module_spec", "lambda_dims", "per_class_table"} <= set(rep)


def test_verify_paper_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "1,2")
    assert code == EXIT_OK
    lines = [ln for ln in out.splitlines() if ln.startswith("[")]
    assert len(lines) == 2 and all(ln.startswith("[PASS]") for ln in lines)


def test_verify_paper_json(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "1", "--json")
    assert code == EXIT_OK
    table = json.loads(out)
    assert table["all_required_pass"] and table["rows"][0]["id"] == "1"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fusionlim", "lambda", "-G", "Sym(3)", "-M",
                          "natural(2)", "--max-i", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "Lambda^1 = 1" in res.stdout
