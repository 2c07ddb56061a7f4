"""Results table persistence and benchmark suite layout."""

from __future__ import annotations

import csv
from pathlib import Path

from .runner import RunRecord

COLUMNS = ("domain", "instance", "planner", "verdict", "wall_seconds", "cost", "plan_path")


def write_records(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("#" + "\t".join(COLUMNS) + "\n")
        w = csv.writer(f, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_NONE, escapechar="\\")
        for r in sorted(records):
            w.writerow([r.domain, r.instance, r.planner, r.verdict.value, repr(r.wall_seconds),
                        "" if r.cost is None else r.cost, r.plan_path])


def read_records(path) -> list[RunRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as f:
        rows = csv.reader((line for line in f if not line.startswith("#")),
                          delimiter="\t", quoting=csv.QUOTE_NONE, escapechar="\\")
        for lineno, row in enumerate(rows, 2):
            if not row:
                continue
            if len(row) != len(COLUMNS):
                raise ValueError(f"{path}: record {lineno} has {len(row)} fields, expected {len(COLUMNS)}")
            d, i, p, verdict, wall, cost, plan = row
            out.append(RunRecord(d, i, p, verdict, float(wall), int(cost) if cost else None, plan))
    return out


def read_table(path) -> dict[tuple[str, str], int]:
    """Read ``instance<TAB>cost`` lines; the domain is the containing directory."""
    path = Path(path)
    domain = path.parent.name
    table = {}
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 3:  # domain instance cost
            table[(parts[0], parts[1])] = int(parts[2])
        elif len(parts) == 2:
            table[(domain, parts[0])] = int(parts[1])
        else:
            raise ValueError(f"{path}: malformed line {line!r}")
    return table


def suite_instances(root) -> list[tuple[str, Path, Path]]:
    """(domain id, domain file, problem file) for every ``suites/<d>/pNN.hddl``."""
    root = Path(root)
    out = []
    dirs = [root] if (root / "domain.hddl").is_file() else sorted(p for p in root.iterdir() if p.is_dir())
    for d in dirs:
        dom = d / "domain.hddl"
        if not dom.is_file():
            continue
        for prob in sorted(d.glob("p*.hddl")):
            out.append((d.name, dom, prob))
    return out


def suite_optima(root) -> dict[tuple[str, str], int]:
    root = Path(root)
    table = {}
    for f in sorted(root.glob("optima.txt")) + sorted(root.glob("*/optima.txt")):
        table.update(read_table(f))
    return table
