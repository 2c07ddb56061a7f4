"""Bring-your-own-benchmark admission check."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..errors import MalformedSubmission
from .runner import DEFAULT_LIMITS, Limits, RunRecord, RunVerdict, run_planner

REQUIRED_INSTANCES = 20
MAX_SOLVED = 10


@dataclass(frozen=True)
class ByobSubmission:
    domain_file: Path
    instance_files: tuple[Path, ...]
    planner_cmd: tuple[str, ...]

    @classmethod
    def from_dir(cls, path, planner_cmd) -> "ByobSubmission":
        path = Path(path)
        return cls(path / "domain.hddl", tuple(sorted(path.glob("p*.hddl"))), tuple(planner_cmd))


@dataclass(frozen=True)
class ByobResult:
    passed: bool
    solved: int
    records: tuple[RunRecord, ...]


Runner = Callable[[list[str], Path, Path, Limits], RunRecord]


def byob_check(s: ByobSubmission, limits: Limits = DEFAULT_LIMITS,
               runner: Runner | None = None) -> ByobResult:
    """Pass iff there are exactly 20 instances and the submitter solves at most 10."""
    if len(s.instance_files) != REQUIRED_INSTANCES:
        raise MalformedSubmission(
            f"submission has {len(s.instance_files)} instances, {REQUIRED_INSTANCES} required"
        )
    run = runner or (lambda cmd, d, p, lim: run_planner(cmd, d, p, lim))
    records = tuple(run(list(s.planner_cmd), s.domain_file, p, limits) for p in s.instance_files)
    solved = sum(r.verdict is RunVerdict.VALID for r in records)
    return ByobResult(solved <= MAX_SOLVED, solved, records)
