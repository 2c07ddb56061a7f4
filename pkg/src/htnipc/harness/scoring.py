"""IPC-style per-instance scores and their aggregation.

Scores are pure functions of run records and reference tables, so a report
can always be rebuilt from a persisted results table.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import MissingBestKnown, ReferenceInconsistency
from .runner import RunRecord, RunVerdict

log = logging.getLogger(__name__)

AGILE_FLOOR = 1.0  # seconds; anything at or below scores 1
DEFAULT_WALL = 1800.0

Instance = tuple[str, str]  # (domain, instance)


def quality(cost: int | None, best: int | float) -> float:
    """Best known cost over achieved cost; 0 without a plan."""
    if cost is None:
        return 0.0
    if cost == 0:
        return 1.0 if best == 0 else 0.0
    return min(1.0, best / cost)


def agile(seconds: float | None, wall: float = DEFAULT_WALL) -> float:
    if seconds is None or seconds >= wall:
        return 0.0
    if seconds <= AGILE_FLOOR:
        return 1.0
    return 1.0 - math.log(seconds) / math.log(wall)


def best_known(records: Iterable[RunRecord], reference: Mapping[Instance, int] | None = None) -> dict[Instance, int]:
    """Minimum valid cost per instance over all planners and reference plans."""
    best: dict[Instance, int] = dict(reference or {})
    for r in records:
        if r.verdict is RunVerdict.VALID:
            k = (r.domain, r.instance)
            best[k] = min(best.get(k, r.cost), r.cost)
    return best


def score_satisficing(records: Iterable[RunRecord], best: Mapping[Instance, int]) -> dict[tuple, float]:
    out = {}
    for r in records:
        k = (r.domain, r.instance)
        if k not in best:
            raise MissingBestKnown(f"no valid plan known for {k[0]}/{k[1]}")
        out[r.key] = quality(r.cost, best[k]) if r.verdict is RunVerdict.VALID else 0.0
    return out


def score_agile(records: Iterable[RunRecord], wall: float = DEFAULT_WALL) -> dict[tuple, float]:
    return {
        r.key: agile(r.wall_seconds, wall) if r.verdict is RunVerdict.VALID else 0.0
        for r in records
    }


def score_optimal(records: Iterable[RunRecord], optima: Mapping[Instance, int]) -> dict[tuple, float]:
    out = {}
    for r in records:
        k = (r.domain, r.instance)
        if r.verdict is not RunVerdict.VALID:
            out[r.key] = 0.0
            continue
        if k not in optima:
            raise MissingBestKnown(f"no reference optimum for {k[0]}/{k[1]}")
        if r.cost < optima[k]:
            raise ReferenceInconsistency(
                f"{r.planner} found cost {r.cost} on {k[0]}/{k[1]}, below the reference optimum {optima[k]}"
            )
        out[r.key] = 1.0 if r.cost == optima[k] else 0.0
    return out


METRICS = ("coverage", "quality", "agile", "optimal")


@dataclass
class ScoreReport:
    per_instance: dict[tuple, dict[str, float]]
    totals: dict[str, dict[str, float]]
    best_known: dict[Instance, int]
    excluded: list[Instance] = field(default_factory=list)

    def text(self) -> str:
        lines = ["planner           coverage   quality     agile   optimal"]
        for planner in sorted(self.totals):
            t = self.totals[planner]
            lines.append(f"{planner:<16}" + "".join(f"{t[m]:>10.3f}" for m in METRICS))
        if self.excluded:
            lines.append("excluded (no valid plan anywhere): "
                         + ", ".join(f"{d}/{i}" for d, i in self.excluded))
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["domain", "instance", "planner", *METRICS])
        for key in sorted(self.per_instance):
            s = self.per_instance[key]
            w.writerow([*key, *(repr(s[m]) for m in METRICS)])
        return buf.getvalue()


def score(records: Iterable[RunRecord], reference: Mapping[Instance, int] | None = None,
          optima: Mapping[Instance, int] | None = None, wall: float = DEFAULT_WALL) -> ScoreReport:
    """Aggregate all four metrics; instances without any valid plan are excluded.

    ``optima`` defaults to the reference table; the optimal column is zero
    for instances without a reference optimum.
    """
    records = sorted(records)
    best = best_known(records, reference)
    excluded = sorted({(r.domain, r.instance) for r in records} - set(best))
    for k in excluded:
        log.warning("no valid plan for %s/%s; instance excluded", *k)
    kept = [r for r in records if (r.domain, r.instance) in best]
    optima = dict(reference or {}) if optima is None else dict(optima)
    q = score_satisficing(kept, best)
    a = score_agile(kept, wall)
    with_opt = [r for r in kept if (r.domain, r.instance) in optima]
    o = score_optimal(with_opt, optima)
    per = {}
    totals: dict[str, dict[str, float]] = defaultdict(lambda: dict.fromkeys(METRICS, 0.0))
    for r in kept:
        s = {
            "coverage": 1.0 if r.verdict is RunVerdict.VALID else 0.0,
            "quality": q[r.key],
            "agile": a[r.key],
            "optimal": o.get(r.key, 0.0),
        }
        per[r.key] = s
        for m in METRICS:
            totals[r.planner][m] += s[m]
    return ScoreReport(per, dict(totals), best, excluded)
