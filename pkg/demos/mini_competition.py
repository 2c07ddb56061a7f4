"""
A small competition on a laptop
===============================

Generate a transport suite, run two configurations of the bundled planner
as child processes under contest-style limits, and score the results with
the coverage, quality, agile and optimal metrics. Finally check a bring
your own benchmark submission against the at-most-half-solvable rule.
"""

import sys
import tempfile
from pathlib import Path

from htnipc.harness import (
    ByobSubmission,
    Limits,
    byob_check,
    gen_transport,
    read_records,
    run_suite,
    score,
    write_records,
)

# everything lands in one directory: the first argument or a fresh temp dir
work = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="mini-ipc-"))
suite = work / "suites" / "transport"
suite.mkdir(parents=True)

# five growing instances; the domain file is the same for all of them
for i, (trucks, packages, locations) in enumerate([(1, 1, 3), (1, 2, 3), (1, 2, 4), (2, 2, 4), (2, 3, 6)], 1):
    domain, problem = gen_transport(trucks, packages, locations, seed=i, ordered=i % 2 == 1)
    (suite / "domain.hddl").write_text(domain)
    (suite / f"p{i:02d}.hddl").write_text(problem)

planners = {
    "greedy": [sys.executable, "-m", "htnipc", "plan", "--mode", "satisficing"],
    "optimal": [sys.executable, "-m", "htnipc", "plan", "--mode", "optimal"],
}

# 30 minutes is the real limit; a few seconds keeps the demo short
limits = Limits(wall=5.0)
records = run_suite(work / "suites", planners, work / "plans", limits, workers=2)
write_records(records, work / "results.tsv")
for r in records:
    print(f"{r.instance} {r.planner:8} {r.verdict.value:10} {r.wall_seconds:6.2f}s cost {r.cost}")

# scores depend only on the persisted table, so re-read it before scoring;
# whatever the optimal configuration proved serves as reference optima
records = read_records(work / "results.tsv")
optima = {(r.domain, r.instance): r.cost for r in records if r.planner == "optimal" and r.cost is not None}
report = score(records, optima=optima, wall=limits.wall)
print()
print(report.text())
print(report.csv())

# a submission of 20 copies of an easy instance is rejected: all 20 solve
byob = work / "byob"
byob.mkdir()
(byob / "domain.hddl").write_text((suite / "domain.hddl").read_text())
for i in range(20):
    (byob / f"p{i + 1:02d}.hddl").write_text((suite / "p01.hddl").read_text())
result = byob_check(ByobSubmission.from_dir(byob, planners["greedy"]), limits)
print("byob:", result.solved, "of 20 solved,", "pass" if result.passed else "fail")
print("files kept in", work)
