"""End-to-end command line checks: subcommands, formats, exit codes."""

import json

import pytest

from lamperm.ast_json import load_program, program_from_json
from lamperm.cli import main
from lamperm.surface import parse_program
from lamperm import alpha_eq

GOOD = "assume u : p ;\nassume f : p -> q ;\nf u\n"
REDEX = "assume u : p ;\n((fn x : p => <x, x>) u).1\n"


@pytest.fixture
def good(tmp_path):
    path = tmp_path / "good.lam"
    path.write_text(GOOD)
    return str(path)


@pytest.fixture
def redex(tmp_path):
    path = tmp_path / "redex.lam"
    path.write_text(REDEX)
    return str(path)


def test_check_prints_the_type(good, capsys):
    assert main(["check", good]) == 0
    assert capsys.readouterr().out.strip() == "q"


def test_check_rejects_ill_typed_programs(tmp_path, capsys):
    path = tmp_path / "bad.lam"
    path.write_text("f u\n")
    assert main(["check", str(path)]) == 1
    assert "type error" in capsys.readouterr().err


def test_parse_errors_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.lam"
    path.write_text("assume u : p ; fn x\n")
    assert main(["check", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_files_exit_two(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.lam")]) == 2
    capsys.readouterr()


def test_reduce_prints_the_normal_form(redex, capsys):
    assert main(["reduce", redex]) == 0
    out = capsys.readouterr().out
    _, t = parse_program(out)
    from lamperm import Var
    assert t == Var("u")


def test_reduce_trace_lines_name_rule_path_and_chi(redex, capsys):
    assert main(["reduce", redex, "--trace", "--chi"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "step 0: B-ARROW at 0 chi 16 -> 4"
    assert lines[1] == "step 1: B-PI1 at root chi 4 -> 1"


def test_reduce_strategies_agree(redex, capsys):
    outs = []
    for strategy in ("lo", "ri", "cfirst"):
        assert main(["reduce", redex, "--strategy", strategy]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]


def test_reduce_out_of_fuel_exits_one(redex, capsys):
    assert main(["reduce", redex, "--fuel", "0"]) == 1
    captured = capsys.readouterr()
    assert "fuel exhausted" in captured.err
    # the partial term is still printed so progress is not lost
    _, t = parse_program(captured.out)
    assert t is not None


def test_translate_simple_shows_the_collapsed_types(good, capsys):
    assert main(["translate", good, "--target", "simple", "--show-type"]) == 0
    out = capsys.readouterr().out
    assert "assume u : _|_ ;" in out
    assert "-- type : _|_" in out


def test_translate_cps_is_well_typed_output(good, capsys):
    assert main(["translate", good, "--target", "cps"]) == 0
    out = capsys.readouterr().out
    ctx, t = parse_program(out)
    from lamperm import infer, trf_type, Atom
    assert infer(ctx, t) == trf_type(Atom("q"))


def test_translate_rejects_polymorphism_for_simple(tmp_path, capsys):
    path = tmp_path / "poly.lam"
    path.write_text("(tfn t => fn x : t => x) [p]\n")
    assert main(["translate", str(path), "--target", "simple"]) == 1
    assert "translation error" in capsys.readouterr().err
    assert main(["translate", str(path), "--target", "cps"]) == 0
    capsys.readouterr()


def test_measure_prints_chi(redex, capsys):
    assert main(["measure", redex]) == 0
    assert capsys.readouterr().out.strip() == "16"


def test_ast_format_round_trips(good, tmp_path, capsys):
    ctx, t = parse_program(GOOD)
    from lamperm.ast_json import dump_program
    ast_path = tmp_path / "good.json"
    ast_path.write_text(dump_program(ctx, t))

    assert main(["check", str(ast_path), "--format", "ast"]) == 0
    assert capsys.readouterr().out.strip() == "q"

    assert main(["translate", str(ast_path), "--format", "ast",
                 "--target", "cps"]) == 0
    payload = json.loads(capsys.readouterr().out)
    ctx2, t2 = program_from_json(payload)
    from lamperm import infer, trf_type, Atom
    assert infer(ctx2, t2) == trf_type(Atom("q"))


def test_ast_format_rejects_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["check", str(path), "--format", "ast"]) == 2
    capsys.readouterr()


def test_verify_witnesses_only(capsys):
    assert main(["verify", "--checks", "cps-commutative", "--count", "0"]) == 0
    assert "21/21" in capsys.readouterr().out


def test_verify_passes_on_system_f(capsys):
    assert main(["verify", "--calculus", "f", "--count", "4",
                 "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out


def test_verify_reports_the_simulation_gap_on_lambda(capsys):
    code = main(["verify", "--calculus", "lambda", "--count", "6",
                 "--seed", "0", "--checks", "sim-simple"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "failing witness(es):" in out


def test_verify_report_dir_writes_artifacts(tmp_path, capsys):
    report_dir = tmp_path / "report"
    assert main(["verify", "--calculus", "f", "--count", "3", "--seed", "2",
                 "--report-dir", str(report_dir)]) == 0
    out = capsys.readouterr().out
    assert out.count("wrote ") == 6
    for name in ("checks.csv", "rules.csv", "failures.txt"):
        assert (report_dir / name).exists()
    pngs = list(report_dir.glob("*.png"))
    assert len(pngs) == 3
    for p in pngs:
        assert p.stat().st_size > 0
