"""Run one planner as a child process under contest limits."""

from __future__ import annotations

import logging
import os
import resource
import signal
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import HtnError, SpawnFailure
from ..grounder import ground
from ..model import GroundModel
from ..parser import parse_domain, parse_problem
from ..planfile import parse_plan_file
from ..verifier import verify_text

log = logging.getLogger(__name__)

GIB = 2**30


@dataclass(frozen=True)
class Limits:
    cores: int = 1
    memory: int = 8 * GIB
    wall: float = 1800.0
    grace: float = 2.0

    def __post_init__(self):
        if self.cores < 1 or self.memory <= 0 or self.wall <= 0 or self.grace < 0:
            raise ValueError(f"limits must be positive: {self}")


DEFAULT_LIMITS = Limits()


class RunVerdict(str, Enum):
    VALID = "validPlan"
    INVALID = "invalidPlan"
    NO_PLAN = "noPlan"
    TIMEOUT = "timeout"
    MEMOUT = "memout"
    CRASH = "crash"


@dataclass(frozen=True, order=True)
class RunRecord:
    domain: str
    instance: str
    planner: str
    verdict: RunVerdict = field(compare=False)
    wall_seconds: float = field(compare=False)
    cost: int | None = field(compare=False, default=None)
    plan_path: str = field(compare=False, default="")
    cpu_seconds: float | None = field(compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "verdict", RunVerdict(self.verdict))
        if (self.cost is not None) != (self.verdict is RunVerdict.VALID):
            raise ValueError("cost must be present iff the verdict is validPlan")
        if self.wall_seconds < 0:
            raise ValueError("negative wall time")

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.domain, self.instance, self.planner)


def _child_setup(cores: int, memory: int) -> None:
    # runs in the child between fork and exec; failures must not raise
    if hasattr(os, "sched_setaffinity"):
        try:
            allowed = sorted(os.sched_getaffinity(0))
            os.sched_setaffinity(0, allowed[:cores])
        except OSError:
            pass
    try:
        resource.setrlimit(resource.RLIMIT_AS, (memory, memory))
    except (ValueError, OSError):
        pass


_MEMOUT_MARKERS = ("MemoryError", "bad_alloc", "Cannot allocate memory", "out of memory")


def _kill_group(proc: subprocess.Popen, sig: int) -> None:
    try:
        os.killpg(proc.pid, sig)
    except (ProcessLookupError, PermissionError):
        pass


def _load_model(domain_file: Path, problem_file: Path) -> GroundModel:
    d = parse_domain(domain_file.read_text(), str(domain_file))
    p = parse_problem(problem_file.read_text(), d, str(problem_file))
    return ground(d, p)[0]


def run_planner(cmd: list[str], domain_file, problem_file, limits: Limits = DEFAULT_LIMITS,
                plan_file=None, ids: tuple[str, str, str] | None = None,
                model: GroundModel | None = None) -> RunRecord:
    """Launch ``cmd domain problem`` and classify what it printed.

    Standard output goes to ``plan_file`` (a temporary file when omitted)
    and is validated against the ground model of the input.
    """
    domain_file, problem_file = Path(domain_file), Path(problem_file)
    for f in (domain_file, problem_file):
        if not f.is_file():
            raise FileNotFoundError(f)
    if ids is None:
        ids = (domain_file.parent.name, problem_file.stem, Path(cmd[0]).name)
    if plan_file is None:
        fd, plan_file = tempfile.mkstemp(prefix="plan-", suffix=".txt")
        os.close(fd)
    plan_file = Path(plan_file)
    if not hasattr(os, "sched_setaffinity"):
        log.warning("CPU affinity unsupported on this platform; core limit not enforced")

    with open(plan_file, "wb") as out, tempfile.TemporaryFile() as err:
        t0 = time.monotonic()
        try:
            proc = subprocess.Popen(
                [*cmd, str(domain_file), str(problem_file)],
                stdout=out, stderr=err, stdin=subprocess.DEVNULL,
                preexec_fn=lambda: _child_setup(limits.cores, limits.memory),
                start_new_session=True,
            )
        except OSError as e:
            raise SpawnFailure(f"cannot start {cmd[0]}: {e}") from e
        killed = False
        usage = None
        status = 0
        while True:
            pid, status, usage = os.wait4(proc.pid, os.WNOHANG)
            if pid:
                break
            elapsed = time.monotonic() - t0
            if not killed and elapsed >= limits.wall:
                _kill_group(proc, signal.SIGTERM)
                killed = True
            if killed and elapsed >= limits.wall + limits.grace:
                _kill_group(proc, signal.SIGKILL)
                pid, status, usage = os.wait4(proc.pid, 0)
                break
            time.sleep(0.01)
        wall = time.monotonic() - t0
        proc.returncode = os.waitstatus_to_exitcode(status)
        _kill_group(proc, signal.SIGKILL)  # stray grandchildren
        err.seek(0)
        stderr = err.read().decode(errors="replace")
    cpu = usage.ru_utime + usage.ru_stime if usage is not None else None

    def record(verdict, cost=None):
        return RunRecord(*ids, verdict=verdict, wall_seconds=min(wall, limits.wall + limits.grace),
                         cost=cost, plan_path=str(plan_file), cpu_seconds=cpu)

    if killed:
        return record(RunVerdict.TIMEOUT)
    text = plan_file.read_text(errors="replace")
    if "==>" not in text:
        if any(mark in stderr for mark in _MEMOUT_MARKERS):
            return record(RunVerdict.MEMOUT)
        if proc.returncode < 0:
            return record(RunVerdict.CRASH)
        return record(RunVerdict.NO_PLAN)
    try:
        if model is None:
            model = _load_model(domain_file, problem_file)
    except HtnError as e:
        log.warning("cannot load %s: %s", problem_file, e)
        return record(RunVerdict.INVALID)
    verdict = verify_text(model, text)
    if not verdict.accepted:
        log.info("%s rejected: %s", ids, verdict)
        return record(RunVerdict.INVALID)
    plan, _ = parse_plan_file(text, model)
    return record(RunVerdict.VALID, model.plan_cost(plan))
