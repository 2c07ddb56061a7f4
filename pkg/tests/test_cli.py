import os
import re
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from htnipc.cli import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, InputError, build_parser, main, read_dfa, read_grammar

from conftest import LOGISTICS
from test_planner import EXPECTED

GOLDEN = Path(__file__).parent / "golden"
DOM, PROB = str(LOGISTICS / "domain.hddl"), str(LOGISTICS / "p01.hddl")


def cli(*args, cwd=None):
    env = {**os.environ, "COLUMNS": "80"}
    return subprocess.run([sys.executable, "-m", "htnipc", *args], capture_output=True, text=True,
                          env=env, cwd=cwd)


@pytest.fixture
def run(capsys, tmp_path, monkeypatch):
    """In-process invocation from an empty working directory."""
    monkeypatch.chdir(tmp_path)

    def go(*args):
        code = main(list(args))
        out, err = capsys.readouterr()
        return code, out, err
    return go


def test_help_golden():
    r = cli("--help")
    assert r.returncode == 0
    assert r.stdout == (GOLDEN / "help.txt").read_text()


def test_help_lists_every_flag():
    text = (GOLDEN / "help.txt").read_text()
    ap = build_parser()
    sub = next(a for a in ap._actions if a.dest == "command")
    assert set(sub.choices) == {"parse", "ground", "plan", "verify", "verify-nowitness", "score",
                                "run", "byob-check", "gen-transport", "gen-grammar"}
    for name, p in sub.choices.items():
        for action in p._actions:
            for flag in action.option_strings:
                if flag.startswith("--"):
                    assert flag in text, (name, flag)


def test_version():
    r = cli("--version")
    assert r.returncode == 0 and re.fullmatch(r"htnipc \d+\.\d+\.\d+\n", r.stdout)


@pytest.mark.parametrize("args", [[], ["plan"], ["plan", DOM], ["bogus"], ["plan", DOM, PROB, "--mode", "fast"]])
def test_usage_errors(args):
    r = cli(*args)
    assert r.returncode == EXIT_INPUT
    assert "--help" in r.stderr and "error:" in r.stderr


def test_plan_verify_roundtrip(run, tmp_path):
    code, out, err = run("plan", DOM, PROB, "--mode", "optimal")
    assert code == EXIT_OK and out == EXPECTED and "verdict=solved" in err
    (tmp_path / "p.plan").write_text(out)
    code, out, _ = run("verify", DOM, PROB, "p.plan")
    assert (code, out) == (EXIT_OK, "accepted\n")
    code, out, _ = run("verify-nowitness", DOM, PROB, "p.plan", "--depth-bound", "8")
    assert (code, out) == (EXIT_OK, "accepted\n")


def test_plan_out_file_only(run, tmp_path):
    code, out, _ = run("plan", DOM, PROB, "--out", "p.plan", "--strategy", "dfs", "--order-class", "total-order")
    assert code == EXIT_OK and out == ""
    assert sorted(p.name for p in tmp_path.iterdir()) == ["p.plan"]


@pytest.mark.parametrize("edit, failure", [
    (lambda t: t.replace("(load t1 l2 p1)", "(load t1 l9 p1)"), "unknownAction"),
    (lambda t: t.replace("root 4\n", ""), "parseError"),
    (lambda t: t.replace("-> m-drive 7 0", "-> m-fly 7 0"), "methodMismatch"),
])
def test_verify_rejections(run, tmp_path, edit, failure):
    (tmp_path / "bad.plan").write_text(edit(EXPECTED))
    code, out, _ = run("verify", DOM, PROB, "bad.plan")
    assert code == EXIT_NEGATIVE and out.startswith(f"rejected: {failure}")


def test_verify_nowitness_bound(run, tmp_path):
    (tmp_path / "p.plan").write_text(EXPECTED)
    code, out, _ = run("verify-nowitness", DOM, PROB, "p.plan", "--depth-bound", "1")
    assert code == EXIT_NEGATIVE and "boundExceeded" in out
    code, _, err = run("verify-nowitness", DOM, PROB, "p.plan", "--depth-bound", "0")
    assert code == EXIT_INPUT and "depth-bound" in err


def test_plan_unsolvable_exit_1(run, tmp_path):
    (tmp_path / "q.hddl").write_text(LOGISTICS.joinpath("p01.hddl").read_text().replace("(road l2 l3)", ""))
    (tmp_path / "q.hddl").write_text((tmp_path / "q.hddl").read_text().replace("(road l3 l1)", ""))
    code, out, err = run("plan", DOM, "q.hddl", "--mode", "optimal")
    assert code == EXIT_NEGATIVE and out == "" and "verdict=" in err


def test_input_error_located(run, tmp_path):
    (tmp_path / "bad.hddl").write_text(LOGISTICS.joinpath("p01.hddl").read_text().replace("(at t1 l1)", "(at t1)"))
    code, out, err = run("parse", DOM, "bad.hddl")
    assert code == EXIT_INPUT and out == ""
    assert re.search(r"bad\.hddl:10:\d+", err)


def test_missing_file(run):
    code, _, err = run("verify", DOM, PROB, "nope.plan")
    assert code == EXIT_INPUT and "nope.plan" in err


def test_parse_prints_canonical(run, tmp_path):
    code, out, _ = run("parse", DOM)
    assert code == EXIT_OK and out.startswith("(define (domain logistics-mini)")
    (tmp_path / "d.hddl").write_text(out)
    assert run("parse", "d.hddl")[1] == out
    code, out, _ = run("parse", DOM, PROB)
    assert code == EXIT_OK and "(problem" in out


def test_ground_stats(run):
    code, out, _ = run("ground", DOM, PROB)
    assert code == EXIT_OK and "actions" in out
    code, dumped, _ = run("ground", DOM, PROB, "--dump", "--no-prune")
    assert code == EXIT_OK and "(drive t1 l1 l2)" in dumped and len(dumped) > len(out)


def test_gen_transport(run, tmp_path):
    code, out, _ = run("gen-transport", "--trucks", "2", "--packages", "2", "--locations", "4", "--seed", "3")
    assert code == EXIT_OK and "(define (domain logistics-mini)" in out
    code, _, _ = run("gen-transport", "--unordered", "--out", "inst")
    assert code == EXIT_OK and sorted(p.name for p in (tmp_path / "inst").iterdir()) == ["domain.hddl", "p01.hddl"]
    assert ":subtasks" in (tmp_path / "inst" / "p01.hddl").read_text()
    code, out, _ = run("plan", "inst/domain.hddl", "inst/p01.hddl")
    assert code == EXIT_OK
    code, _, err = run("gen-transport", "--packages", "0")
    assert code == EXIT_INPUT and "at least 1" in err


def test_gen_grammar_files(run, tmp_path):
    (tmp_path / "g.txt").write_text("S -> A T\nS -> A B  # base case\nT -> S B\nA -> a\nB -> b\n")
    (tmp_path / "d.txt").write_text("start e\naccept e\ne a o\ne b x\no a x\no b e\nx a x\nx b x\n")
    code, _, _ = run("gen-grammar", "--grammar", "g.txt", "--dfa", "d.txt", "--out", "gi")
    assert code == EXIT_OK
    code, out, _ = run("plan", "gi/domain.hddl", "gi/p01.hddl", "--mode", "optimal")
    assert code == EXIT_OK and "(t-a " in out and "(t-b " in out
    code, _, err = run("gen-grammar", "--grammar", "g.txt")
    assert code == EXIT_INPUT
    (tmp_path / "long.txt").write_text("S -> a S b\nS -> a b\n")
    code, _, err = run("gen-grammar", "--grammar", "long.txt", "--dfa", "d.txt")
    assert code == EXIT_INPUT


def test_gen_grammar_random(run):
    code, out, _ = run("gen-grammar", "--seed", "5", "--max-nonterminals", "2")
    assert code == EXIT_OK and "(:task top" in out


def test_grammar_and_dfa_readers():
    g = read_grammar("S -> A B\nA -> a\nB -> b\n")
    assert g.start == "S" and g.terminals == ["a", "b"]
    d = read_dfa("start q\naccept q\nq a q\n")
    assert d.accepts("aaa")
    with pytest.raises(InputError, match="no start"):
        read_dfa("q a q\n")


def test_run_and_score(run, tmp_path):
    code, out, _ = run("run", "logistics-mini", "--out-dir", "runs", "--time-limit", "60", "--workers", "1",
                       "--planner", f"ref={sys.executable} -m htnipc plan")
    assert code == EXIT_OK and "validPlan" in out
    assert sorted(p.name for p in (tmp_path / "runs").iterdir()) == ["logistics-mini.p01.ref.plan", "results.tsv"]
    (tmp_path / "optima.txt").write_text("logistics-mini p01 4\n")
    code, out, _ = run("score", "runs/results.tsv", "--reference", "optima.txt", "--csv", "s.csv")
    assert code == EXIT_OK
    assert re.search(r"ref\s+1\.000\s+1\.000\s+1\.000\s+1\.000", out)
    assert (tmp_path / "s.csv").read_text().startswith("domain,instance,planner,")
    code, _, err = run("score", "nope.tsv")
    assert code == EXIT_INPUT


def test_run_rejects_bad_planner_spec(run):
    code, _, err = run("run", "logistics-mini", "--planner", "no-equals-sign")
    assert code == EXIT_INPUT and "NAME=COMMAND" in err


def test_byob_check(run, tmp_path):
    sub = tmp_path / "sub"
    sub.mkdir()
    (sub / "domain.hddl").write_text(Path(DOM).read_text())
    for i in range(20):
        (sub / f"p{i + 1:02d}.hddl").write_text(Path(PROB).read_text())
    code, out, _ = run("byob-check", "sub", "--planner", f"{sys.executable} -c pass", "--time-limit", "30")
    assert (code, out) == (EXIT_OK, "solved 0 of 20: pass\n")
    (sub / "p20.hddl").unlink()
    code, _, err = run("byob-check", "sub", "--planner", f"{sys.executable} -c pass")
    assert code == EXIT_INPUT and "20 required" in err


def test_console_script_matches_module():
    exe = shutil.which("htnipc")
    if exe is None:
        pytest.skip("console script not on PATH")
    r = subprocess.run([exe, "--help"], capture_output=True, text=True, env={**os.environ, "COLUMNS": "80"})
    assert r.returncode == 0 and r.stdout.replace("htnipc", "") == cli("--help").stdout.replace("htnipc", "")
