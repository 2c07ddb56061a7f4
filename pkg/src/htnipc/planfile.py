"""Line-oriented plan + decomposition witness format.

::

    ==>
    0 (drive t1 l1 l2)
    1 (load t1 l2 p1)
    root 2
    2 (deliver p1 l2) -> m-deliver 3 1
    3 (get-to t1 l2) -> m-drive 4 0
    4 (get-to t1 l1) -> m-noop
    <==

Step lines come first and are numbered ``0..n-1``. In decomposition lines,
child ids below ``n`` are plan steps, all others refer to other
decomposition lines. Children are listed in the order of the method's
subtasks. ``#`` starts a comment.
"""

from __future__ import annotations

import re

from .errors import HtnError
from .model import DecompositionWitness, GroundModel, TaskRef, WitnessNode

_STEP = re.compile(r"^(\d+)\s+\(([^()]*)\)$")
_DECOMP = re.compile(r"^(\d+)\s+\(([^()]*)\)\s*->\s*(\S+)((?:\s+\d+)*)$")
_ROOT = re.compile(r"^root((?:\s+\d+)*)$")


class PlanFileError(HtnError):
    """Input that cannot be turned into a plan/witness pair.

    ``failure`` is one of the verdict failure classes (``parseError``,
    ``unknownAction``, ``witnessMalformed``, ``methodMismatch``).
    """

    def __init__(self, failure: str, line: int | None, detail: str, where=None):
        self.failure = failure
        self.line = line
        self.detail = detail
        self.where = where
        loc = f"line {line}: " if line else ""
        super().__init__(f"{failure}: {loc}{detail}")


def format_plan(model: GroundModel, plan, witness: DecompositionWitness | None) -> str:
    lines = ["==>"]
    lines += [f"{i} {model.actions[a]}" for i, a in enumerate(plan)]
    if witness is not None:
        lines.append(" ".join(["root", *map(str, witness.roots)]))
        stack = list(reversed(witness.roots))
        seen = set()
        while stack:
            n = stack.pop()
            node = witness.nodes[n]
            if node.task.primitive or n in seen:
                continue
            seen.add(n)
            name = model.methods[node.method].name
            kids = "".join(f" {c}" for c in node.children)
            lines.append(f"{n} {model.task_str(node.task)} -> {name}{kids}")
            stack.extend(reversed(node.children))
    lines.append("<==")
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> list[tuple[int, str]]:
    raw = text.splitlines()
    start, end = 0, len(raw)
    for i, line in enumerate(raw):
        if line.split("#", 1)[0].strip() == "==>":
            start = i + 1
            break
    for i in range(start, len(raw)):
        if raw[i].split("#", 1)[0].strip() == "<==":
            end = i
            break
    out = []
    for i in range(start, end):
        line = " ".join(raw[i].split("#", 1)[0].split())
        if line:
            out.append((i + 1, line))
    return out


def _symbols(inner: str) -> tuple[str, tuple[str, ...]]:
    parts = inner.lower().split()
    if not parts:
        raise ValueError("empty task")
    return parts[0], tuple(parts[1:])


def parse_plan_file(text: str, model: GroundModel,
                    require_witness: bool = True) -> tuple[tuple[int, ...], DecompositionWitness | None]:
    """Parse plan and witness, resolving names against ``model``.

    Raises :class:`PlanFileError` carrying the failure class and line number.
    """
    steps: dict[int, tuple[int, str]] = {}
    roots: tuple[int, ...] | None = None
    root_line = None
    decomps: dict[int, tuple[int, str, str, tuple[int, ...]]] = {}
    for lineno, line in _content_lines(text):
        m = _ROOT.match(line)
        if m:
            if roots is not None:
                raise PlanFileError("parseError", lineno, "second root line")
            roots = tuple(int(x) for x in m.group(1).split())
            root_line = lineno
            continue
        m = _DECOMP.match(line)
        if m:
            nid = int(m.group(1))
            if nid in decomps or nid in steps:
                raise PlanFileError("parseError", lineno, f"duplicate node id {nid}")
            kids = tuple(int(x) for x in m.group(4).split())
            decomps[nid] = (lineno, m.group(2), m.group(3).lower(), kids)
            continue
        m = _STEP.match(line)
        if m:
            if roots is not None or decomps:
                raise PlanFileError("parseError", lineno, "plan step after the decomposition section")
            idx = int(m.group(1))
            if idx in steps:
                raise PlanFileError("parseError", lineno, f"duplicate step index {idx}")
            steps[idx] = (lineno, m.group(2))
            continue
        raise PlanFileError("parseError", lineno, f"unrecognised line {line!r}")

    n = len(steps)
    if sorted(steps) != list(range(n)):
        missing = min(set(range(n)) - set(steps))
        raise PlanFileError("parseError", None, f"step indices not contiguous: {missing} missing")
    plan = []
    for i in range(n):
        lineno, inner = steps[i]
        try:
            key = _symbols(inner)
        except ValueError:
            raise PlanFileError("parseError", lineno, "empty action") from None
        aid = model.action_index.get(key)
        if aid is None:
            raise PlanFileError("unknownAction", lineno, f"unknown action ({inner})", where=i)
        plan.append(aid)
    plan = tuple(plan)

    if roots is None:
        if decomps or require_witness:
            raise PlanFileError("parseError", None, "missing root line")
        return plan, None

    nodes: dict[int, WitnessNode] = {i: WitnessNode(TaskRef(True, a)) for i, a in enumerate(plan)}
    tasks: dict[int, TaskRef] = {}
    for nid, (lineno, inner, _, _) in decomps.items():
        if nid < n:
            raise PlanFileError("witnessMalformed", lineno, f"node id {nid} collides with a plan step", where=nid)
        try:
            key = _symbols(inner)
        except ValueError:
            raise PlanFileError("parseError", lineno, "empty task") from None
        tid = model.task_index.get(key)
        if tid is None:
            raise PlanFileError("witnessMalformed", lineno, f"unknown abstract task ({inner})", where=nid)
        tasks[nid] = TaskRef(False, tid)
    for r in roots:
        if r not in nodes and r not in tasks:
            raise PlanFileError("witnessMalformed", root_line, f"root {r} is not defined", where=r)

    for nid, (lineno, inner, mname, kids) in decomps.items():
        labels = []
        for c in kids:
            if c < n:
                labels.append(TaskRef(True, plan[c]))
            elif c in tasks:
                labels.append(tasks[c])
            else:
                raise PlanFileError("witnessMalformed", lineno, f"child {c} is not defined", where=nid)
        task = tasks[nid]
        named = [mid for mid in model.tasks[task.index].methods if model.methods[mid].name == mname]
        if not named:
            raise PlanFileError("methodMismatch", lineno, f"no method {mname} for {model.task_str(task)}", where=nid)
        chosen = named[0]
        for mid in named:
            net = model.methods[mid].network
            if sorted(net.labels.values()) == sorted(labels):
                chosen = mid
                break
        nodes[nid] = WitnessNode(task, chosen, kids)
    return plan, DecompositionWitness(roots, nodes)
