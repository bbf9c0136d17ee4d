import json
from pathlib import Path

import pytest

from boxtt.cli import main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_modulus_worked_example(capsys):
    code, out, _ = run(capsys, "modulus", PROGRAMS / "F_nested.sexp", PROGRAMS / "alpha_succ.sexp")
    assert code == 0 and out.strip() == "modulus = 4, oracle = 4, AGREE"


def test_modulus_report(capsys, tmp_path):
    report = tmp_path / "m.json"
    run(capsys, "modulus", PROGRAMS / "F_nested.sexp", PROGRAMS / "alpha_succ.sexp",
        "--report", report)
    doc = json.loads(report.read_text())
    assert doc["modulus"] == 4 and doc["oracle"] == 4 and doc["agree"]


def test_modulus_rejects_names(capsys, tmp_path):
    alpha = tmp_path / "a.sexp"
    alpha.write_text("(lam n (read (name 0)))")
    world = tmp_path / "w.sexp"
    world.write_text("(world (cell 0 nat 0 true))")
    code, _, err = run(capsys, "modulus", PROGRAMS / "F_nested.sexp", alpha, "--world", world)
    assert code != 0 and "purity" in err


def test_eval_exit_codes(capsys, tmp_path):
    assert run(capsys, "eval", PROGRAMS / "diverge.sexp", "--fuel", 100)[0] == 3
    code, out, _ = run(capsys, "eval", PROGRAMS / "counter.sexp", "--world", PROGRAMS / "counter.world")
    assert code == 0 and "value: (num 2)" in out and "(cell 0 nat 2 true)" in out
    stuck = tmp_path / "s.sexp"
    stuck.write_text("(app (num 1) (num 2))")
    code, out, _ = run(capsys, "eval", stuck)
    assert code == 2 and "BadApplication" in out


def test_names_need_a_world_cell(capsys):
    code, _, err = run(capsys, "eval", PROGRAMS / "counter.sexp")
    assert code == 65 and "(name 0)" in err


def test_io_and_usage_errors(capsys, tmp_path):
    assert run(capsys, "eval", tmp_path / "missing.sexp")[0] == 74
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["check", "modulus", "--cases", "many"])
    assert info.value.code == 64
    assert run(capsys, "check", "modulus", "--cases", 0)[0] == 64


def test_parse_errors_are_data_errors(capsys, tmp_path):
    bad = tmp_path / "bad.sexp"
    bad.write_text("(lam x")
    code, _, err = run(capsys, "eval", bad)
    assert code == 65 and "bad.sexp" in err


def test_fuel_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BOXTT_FUEL", "50")
    code, out, _ = run(capsys, "eval", PROGRAMS / "diverge.sexp")
    assert code == 3 and "after 50 steps" in out
    monkeypatch.setenv("BOXTT_FUEL", "lots")
    assert run(capsys, "eval", PROGRAMS / "diverge.sexp")[0] == 64


def test_trace_json(capsys, tmp_path):
    out = tmp_path / "t.jsonl"
    code, _, _ = run(capsys, "trace", PROGRAMS / "counter.sexp", "--world", PROGRAMS / "counter.world",
                     "--json", out)
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert code == 0 and lines[0]["step"] == 0 and lines[-1]["term"] == "(num 2)"


def test_check_purity_counterexample(capsys):
    code, out, _ = run(capsys, "check", "purity-counterexample")
    assert code == 0 and out.startswith("PASS purity-counterexample")


def test_check_json_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "check", "highest", "--cases", 10, "--json", p, "--no-timing")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["reports"][0]["cases_run"] == 10


def test_check_replay(capsys, tmp_path):
    from boxtt.validation.suites import gen_case

    case = tmp_path / "case.sexp"
    case.write_text(gen_case(4242).to_sexpr())
    code, out, _ = run(capsys, "check", "modulus", "--replay", case, "--samples", 2)
    assert code == 0 and "1 cases" in out
