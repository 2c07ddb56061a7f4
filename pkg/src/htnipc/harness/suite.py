"""Run a benchmark suite against several planners with a worker pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .results import suite_instances
from .runner import DEFAULT_LIMITS, Limits, RunRecord, run_planner


def default_workers() -> int:
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return os.cpu_count() or 1


def run_suite(suite_root, planners: dict[str, list[str]], out_dir,
              limits: Limits = DEFAULT_LIMITS, workers: int | None = None) -> list[RunRecord]:
    """Run every planner on every instance; plans land in ``out_dir``.

    Each worker thread owns one child process at a time. Records come back
    sorted by (domain, instance, planner) whatever the completion order.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = []
    for domain, dom_file, prob_file in suite_instances(suite_root):
        for name, cmd in sorted(planners.items()):
            plan = out_dir / f"{domain}.{prob_file.stem}.{name}.plan"
            jobs.append((cmd, dom_file, prob_file, plan, (domain, prob_file.stem, name)))
    with ThreadPoolExecutor(max_workers=workers or default_workers()) as pool:
        futures = [pool.submit(run_planner, cmd, d, p, limits, plan, ids) for cmd, d, p, plan, ids in jobs]
        records = [f.result() for f in futures]
    return sorted(records)
