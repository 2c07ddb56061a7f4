"""Command-line entry point: ``htnipc <subcommand> ...``.

Exit codes: 0 success or accepted, 1 negative verdict (no plan, rejected
plan, failed BYOB check), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import HtnError
from .grounder import dump, ground
from .parser import parse_domain, parse_problem, print_domain, print_problem
from .planfile import format_plan
from .planner import Mode, OrderClass, SearchConfig, Strategy, solve

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

REFERENCE_PLANNER = [sys.executable, "-m", "htnipc", "plan"]


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message} (see {self.prog} --help)\n")


def bundled_suites() -> Path:
    return Path(str(resources.files("htnipc") / "data" / "suites"))


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load(domain_file, problem_file=None):
    d = parse_domain(_read(domain_file), str(domain_file))
    if problem_file is None:
        return d, None
    return d, parse_problem(_read(problem_file), d, str(problem_file))


def _model(args):
    d, p = _load(args.domain, args.problem)
    return ground(d, p)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def cmd_parse(args) -> int:
    d, p = _load(args.domain, args.problem)
    _emit(print_problem(p) if p is not None else print_domain(d), args.out)
    return EXIT_OK


def cmd_ground(args) -> int:
    d, p = _load(args.domain, args.problem)
    model, stats = ground(d, p, prune=not args.no_prune)
    text = "\n".join(stats.lines()) + "\n"
    if args.dump:
        text += dump(model) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    model, _ = _model(args)
    cfg = SearchConfig(
        mode=args.mode, order_class=args.order_class, strategy=args.strategy,
        max_network_size=args.max_network_size, max_plan_length=args.max_plan_length,
        seed=args.seed, time_limit=args.time_limit,
        memory_limit=None if args.memory_limit is None else int(args.memory_limit * 2**20),
    )
    try:
        outcome = solve(model, cfg)
    except ValueError as e:
        raise InputError(str(e)) from None
    for line in outcome.stats_lines():
        print(line, file=sys.stderr)
    if not outcome.solved:
        return EXIT_NEGATIVE
    _emit(format_plan(model, outcome.plan, outcome.witness), args.out)
    return EXIT_OK


def _report(verdict) -> int:
    print(verdict)
    return EXIT_OK if verdict.accepted else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    from .verifier import verify_text

    model, _ = _model(args)
    return _report(verify_text(model, _read(args.plan)))


def cmd_verify_nowitness(args) -> int:
    from .verifier import verify_text_without_witness

    model, _ = _model(args)
    if args.depth_bound < 1:
        raise InputError("--depth-bound must be at least 1")
    return _report(verify_text_without_witness(model, _read(args.plan), args.depth_bound))


def _reference_tables(paths) -> dict:
    from .harness.results import read_table

    table = {}
    for p in paths or ():
        try:
            table.update(read_table(p))
        except (OSError, ValueError) as e:
            raise InputError(str(e)) from None
    return table


def cmd_score(args) -> int:
    from .harness.results import read_records
    from .harness.scoring import score

    try:
        records = read_records(args.results)
    except (OSError, ValueError) as e:
        raise InputError(str(e)) from None
    reference = _reference_tables(args.reference)
    optima = _reference_tables(args.optima) if args.optima else None
    report = score(records, reference, optima, wall=args.wall)
    sys.stdout.write(report.text())
    if args.csv:
        Path(args.csv).write_text(report.csv())
    return EXIT_OK


def _limits(args):
    from .harness.runner import DEFAULT_LIMITS, GIB, Limits

    return Limits(
        cores=DEFAULT_LIMITS.cores,
        memory=DEFAULT_LIMITS.memory if args.memory_limit is None else int(args.memory_limit * GIB),
        wall=DEFAULT_LIMITS.wall if args.time_limit is None else args.time_limit,
        grace=DEFAULT_LIMITS.grace,
    )


def _planner_specs(specs) -> dict[str, list[str]]:
    import shlex

    if not specs:
        return {"reference": list(REFERENCE_PLANNER)}
    out = {}
    for spec in specs:
        name, sep, cmd = spec.partition("=")
        if not sep or not name or not cmd.strip():
            raise InputError(f"--planner expects NAME=COMMAND, got {spec!r}")
        out[name] = shlex.split(cmd)
    return out


def cmd_run(args) -> int:
    from .harness.results import write_records
    from .harness.suite import run_suite

    suite = Path(args.suite)
    if not suite.exists() and (bundled_suites() / args.suite).is_dir():
        suite = bundled_suites() / args.suite
    if not suite.is_dir():
        raise InputError(f"no suite directory {args.suite}")
    records = run_suite(suite, _planner_specs(args.planner), args.out_dir, _limits(args), args.workers)
    results = Path(args.results or Path(args.out_dir) / "results.tsv")
    write_records(records, results)
    for r in records:
        cost = "-" if r.cost is None else r.cost
        print(f"{r.domain}\t{r.instance}\t{r.planner}\t{r.verdict.value}\t{r.wall_seconds:.2f}\t{cost}")
    print(f"results written to {results}")
    return EXIT_OK


def cmd_byob_check(args) -> int:
    import shlex

    from .harness.byob import ByobSubmission, byob_check

    cmd = shlex.split(args.planner) if args.planner else list(REFERENCE_PLANNER)
    sub = ByobSubmission.from_dir(args.submission, cmd)
    if not sub.domain_file.is_file():
        raise InputError(f"{sub.domain_file} not found")
    result = byob_check(sub, _limits(args))
    print(f"solved {result.solved} of {len(result.records)}: {'pass' if result.passed else 'fail'}")
    return EXIT_OK if result.passed else EXIT_NEGATIVE


def _write_pair(domain: str, problem: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(domain + "\n" + problem)
        return
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "domain.hddl").write_text(domain)
    (out_dir / "p01.hddl").write_text(problem)


def cmd_gen_transport(args) -> int:
    from .harness.generators import gen_transport

    try:
        d, p = gen_transport(args.trucks, args.packages, args.locations, args.seed, ordered=not args.unordered)
    except ValueError as e:
        raise InputError(str(e)) from None
    _write_pair(d, p, args.out)
    return EXIT_OK


def read_grammar(text: str):
    """``LHS -> sym sym`` per line; the first left-hand side is the start symbol."""
    from .harness.generators import Grammar

    prods = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, arrow, rhs = line.partition("->")
        if not arrow or len(lhs.split()) != 1:
            raise InputError(f"grammar line {lineno}: expected 'LHS -> symbols'")
        prods.append((lhs.strip(), tuple(rhs.split())))
    if not prods:
        raise InputError("grammar has no productions")
    return Grammar(prods[0][0], tuple(prods))


def read_dfa(text: str):
    """``start Q``, ``accept Q...`` and ``Q symbol Q'`` lines."""
    from .harness.generators import Dfa

    start, accepting, delta, states, alphabet = None, set(), {}, {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] == "start" and len(parts) == 2:
            start = parts[1]
            states.setdefault(start)
        elif parts[0] == "accept":
            accepting.update(parts[1:])
            for q in parts[1:]:
                states.setdefault(q)
        elif len(parts) == 3:
            q, a, r = parts
            delta[(q, a)] = r
            states.setdefault(q)
            states.setdefault(r)
            alphabet.setdefault(a)
        else:
            raise InputError(f"automaton line {lineno}: cannot parse {line.strip()!r}")
    if start is None:
        raise InputError("automaton has no start line")
    try:
        return Dfa(tuple(states), tuple(alphabet), delta, start, frozenset(accepting))
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_gen_grammar(args) -> int:
    from .harness.generators import gen_grammar, random_grammar_pair

    if (args.grammar is None) != (args.dfa is None):
        raise InputError("give both --grammar and --dfa, or neither for a random pair")
    if args.grammar is None:
        cfg, dfa = random_grammar_pair(args.seed, args.max_nonterminals)
    else:
        cfg, dfa = read_grammar(_read(args.grammar)), read_dfa(_read(args.dfa))
    try:
        d, p = gen_grammar(cfg, dfa, args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    _write_pair(d, p, args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="htnipc", description="HTN planning competition toolkit.",
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def files(p, problem_required=True, plan=False):
        p.add_argument("domain", help="domain file")
        if problem_required:
            p.add_argument("problem", help="problem file")
        else:
            p.add_argument("problem", nargs="?", help="problem file (optional)")
        if plan:
            p.add_argument("plan", help="plan + witness file")

    def run_limits(p):
        p.add_argument("--time-limit", type=float, metavar="SECONDS",
                       help="wall-clock limit per run (default 1800)")
        p.add_argument("--memory-limit", type=float, metavar="GIB",
                       help="address-space limit per run in GiB (default 8)")

    p = sub.add_parser("parse", help="check a domain (and problem) and print it canonically")
    files(p, problem_required=False)
    p.add_argument("--out", help="write to this file instead of standard output")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("ground", help="ground a problem and print statistics")
    files(p)
    p.add_argument("--dump", action="store_true", help="also print the ground model")
    p.add_argument("--no-prune", action="store_true", help="skip reachability pruning")
    p.add_argument("--out", help="write to this file instead of standard output")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("plan", help="solve a problem and print plan + witness")
    files(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="satisficing")
    p.add_argument("--order-class", choices=[o.value for o in OrderClass],
                   help="solver to use (default: decided by the model)")
    p.add_argument("--strategy", choices=[s.value for s in Strategy],
                   help="search strategy (default: uniform-cost when optimal, greedy otherwise)")
    p.add_argument("--time-limit", type=float, metavar="SECONDS", help="search time limit")
    p.add_argument("--memory-limit", type=float, metavar="MIB", help="search memory limit")
    p.add_argument("--seed", type=int, default=0, help="random seed (search is deterministic)")
    p.add_argument("--max-network-size", type=int, default=2**16, metavar="N",
                   help="largest task network explored (default 65536)")
    p.add_argument("--max-plan-length", type=int, metavar="N", help="longest plan considered")
    p.add_argument("--out", help="write the plan to this file instead of standard output")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="verify a plan + witness file")
    files(p, plan=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-nowitness", help="verify a plan by searching for a decomposition")
    files(p, plan=True)
    p.add_argument("--depth-bound", type=int, default=64, metavar="N",
                   help="most method applications tried (default 64)")
    p.set_defaults(func=cmd_verify_nowitness)

    p = sub.add_parser("score", help="score a results table")
    p.add_argument("results", help="results table written by 'run'")
    p.add_argument("--reference", action="append", metavar="FILE",
                   help="reference costs (instance<TAB>cost), repeatable")
    p.add_argument("--optima", action="append", metavar="FILE",
                   help="reference optima for the optimal score (default: --reference)")
    p.add_argument("--wall", type=float, default=1800.0, metavar="SECONDS",
                   help="time limit used for the agile score (default 1800)")
    p.add_argument("--csv", metavar="FILE", help="also write the per-instance table as CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("run", help="run planners on a benchmark suite")
    p.add_argument("suite", help="suite directory or bundled suite name")
    p.add_argument("--planner", action="append", metavar="NAME=CMD",
                   help="planner command, repeatable (default: the bundled planner)")
    p.add_argument("--out-dir", default="runs", help="directory for plan files (default runs)")
    p.add_argument("--results", metavar="FILE", help="results table (default OUT_DIR/results.tsv)")
    p.add_argument("--workers", type=int, metavar="K", help="parallel runs (default: available cores)")
    run_limits(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("byob-check", help="check a BYOB submission (20 instances, at most 10 solved)")
    p.add_argument("submission", help="directory with domain.hddl and p*.hddl")
    p.add_argument("--planner", metavar="CMD", help="submitter's planner command")
    run_limits(p)
    p.set_defaults(func=cmd_byob_check)

    p = sub.add_parser("gen-transport", help="generate a transport instance")
    p.add_argument("--trucks", type=int, default=1)
    p.add_argument("--packages", type=int, default=1)
    p.add_argument("--locations", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unordered", action="store_true", help="leave the delivery tasks unordered")
    p.add_argument("--out", metavar="DIR", help="write domain.hddl and p01.hddl into DIR")
    p.set_defaults(func=cmd_gen_transport)

    p = sub.add_parser("gen-grammar", help="generate a grammar-intersection instance")
    p.add_argument("--grammar", metavar="FILE", help="productions, one 'LHS -> symbols' per line")
    p.add_argument("--dfa", metavar="FILE", help="automaton: 'start Q', 'accept Q...', 'Q sym Q2' lines")
    p.add_argument("--seed", type=int, default=0, help="seed for a random pair when no files are given")
    p.add_argument("--max-nonterminals", type=int, default=4, metavar="N")
    p.add_argument("--out", metavar="DIR", help="write domain.hddl and p01.hddl into DIR")
    p.set_defaults(func=cmd_gen_grammar)

    usages = [sp.format_usage().strip().replace("usage: ", "  ", 1) for sp in sub.choices.values()]
    ap.epilog = ("subcommand usage:\n" + "\n".join(usages)
                 + "\n\nexit codes: 0 success/accepted, 1 negative verdict, 2 usage or input error")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, HtnError, FileNotFoundError) as e:
        print(f"htnipc {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
