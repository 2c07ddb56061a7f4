"""Plan validation with and without a decomposition witness.

With a witness, validation is polynomial: the tree shape and method choices
are checked directly, ordering is checked by propagating earliest
processing times through the tree, and the plan is executed once. Without
a witness, :func:`verify_without_witness` searches for a decomposition and
takes exponential time in the worst case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    DecompositionWitness,
    GroundModel,
    TaskNetwork,
    TaskRef,
    WitnessNode,
    decompose,
    is_executable,
)
from .planfile import PlanFileError, parse_plan_file

FAILURES = (
    "parseError",
    "unknownAction",
    "notExecutable",
    "witnessMalformed",
    "methodMismatch",
    "orderViolation",
    "leafPlanMismatch",
    "methodPrecondition",
    "goalUnsatisfied",
    "notDerivable",
    "boundExceeded",
)


@dataclass
class Verdict:
    accepted: bool
    failure: str | None = None
    where: object = None  # step index, node id or (leaf, leaf) pair
    detail: str = ""
    checks: int = 0
    witness: DecompositionWitness | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.accepted != (self.failure is None):
            raise ValueError("failure must be present iff the plan is rejected")
        if self.failure is not None and self.failure not in FAILURES:
            raise ValueError(f"unknown failure class {self.failure!r}")

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        where = "" if self.where is None else f"({self.where})"
        return f"rejected: {self.failure}{where}: {self.detail}"


def _reject(failure: str, where=None, detail: str = "", checks: int = 0) -> Verdict:
    return Verdict(False, failure, where, detail, checks)


def _match(labels: list[TaskRef], network: TaskNetwork) -> dict[int, int] | None:
    """Map child positions to network nodes with equal labels.

    The k-th child carrying a label is paired with the k-th network node
    carrying it, so listing children in subtask order gives the identity.
    """
    if len(labels) != len(network.nodes):
        return None
    slots: dict[TaskRef, list[int]] = {}
    for n in network.nodes:
        slots.setdefault(network.labels[n], []).append(n)
    used: dict[TaskRef, int] = {}
    out = {}
    for i, lab in enumerate(labels):
        k = used.get(lab, 0)
        if k >= len(slots.get(lab, ())):
            return None
        out[i] = slots[lab][k]
        used[lab] = k + 1
    return out


class _Counter:
    def __init__(self):
        self.n = 0


def _check_shape(model: GroundModel, plan, w: DecompositionWitness, c: _Counter) -> Verdict | None:
    n = len(plan)
    for i, a in enumerate(plan):
        c.n += 1
        if not 0 <= a < len(model.actions):
            return _reject("unknownAction", i, f"step {i} names no action")
        node = w.nodes.get(i)
        if node is None:
            return _reject("witnessMalformed", i, f"plan step {i} missing from the witness")
        if node.task != TaskRef(True, a):
            return _reject("leafPlanMismatch", i, f"leaf {i} is {node.task!r}, plan has {model.actions[a]}")
    parent: dict[int, int | None] = {r: None for r in w.roots}
    if len(parent) != len(w.roots):
        return _reject("witnessMalformed", None, "root listed twice")
    for nid, node in w.nodes.items():
        c.n += 1
        if node.task.primitive:
            if nid >= n or not 0 <= nid:
                return _reject("witnessMalformed", nid, "primitive node that is not a plan step")
            if node.method is not None or node.children:
                return _reject("witnessMalformed", nid, "primitive node with a method or children")
            continue
        if nid < n:
            return _reject("witnessMalformed", nid, "abstract node id collides with a plan step")
        if not 0 <= node.task.index < len(model.tasks):
            return _reject("witnessMalformed", nid, "unknown abstract task")
        if node.method is None or not 0 <= node.method < len(model.methods):
            return _reject("witnessMalformed", nid, "abstract node without a method")
        for ch in node.children:
            c.n += 1
            if ch not in w.nodes:
                return _reject("witnessMalformed", nid, f"child {ch} does not exist")
            if ch in parent:
                return _reject("witnessMalformed", ch, "node has more than one parent")
            parent[ch] = nid
    for r in w.roots:
        if r not in w.nodes:
            return _reject("witnessMalformed", r, "root does not exist")
    missing = set(w.nodes) - set(parent)
    if missing:
        return _reject("witnessMalformed", min(missing), "node unreachable from the roots")
    # parent links alone still allow cycles detached from the roots
    seen = set()
    stack = list(w.roots)
    while stack:
        x = stack.pop()
        c.n += 1
        if x in seen:
            return _reject("witnessMalformed", x, "cycle in the decomposition tree")
        seen.add(x)
        stack.extend(w.nodes[x].children)
    if seen != set(w.nodes):
        return _reject("witnessMalformed", min(set(w.nodes) - seen), "node unreachable from the roots")
    return None


def _check_methods(model: GroundModel, w: DecompositionWitness, c: _Counter):
    """Resolve every network to (child ids, ordering over child positions)."""
    networks = []
    root_labels = [w.nodes[r].task for r in w.roots]
    mapping = _match(root_labels, model.initial_network)
    c.n += len(root_labels)
    if mapping is None:
        return _reject("methodMismatch", "root", "roots do not match the initial task network")
    networks.append((None, list(w.roots), mapping, model.initial_network))
    for nid, node in sorted(w.nodes.items()):
        if node.task.primitive:
            continue
        m = model.methods[node.method]
        c.n += 1 + len(node.children)
        if m.task != node.task.index:
            return _reject("methodMismatch", nid,
                           f"method {m.name} decomposes {model.task_str(TaskRef(False, m.task))}, "
                           f"not {model.task_str(node.task)}")
        mapping = _match([w.nodes[ch].task for ch in node.children], m.network)
        if mapping is None:
            return _reject("methodMismatch", nid, f"children do not match the subtasks of {m.name}")
        networks.append((nid, list(node.children), mapping, m.network))
    return networks


def _equivalent_methods(model: GroundModel, mid: int) -> list[int]:
    """Ground methods a witness line cannot tell apart from ``mid``."""
    m = model.methods[mid]
    labels = sorted(m.network.labels.values())
    return [
        j for j in model.tasks[m.task].methods
        if model.methods[j].name == m.name
        and sorted(model.methods[j].network.labels.values()) == labels
        and model.methods[j].network.ordering == m.network.ordering
    ]


def _schedule(model: GroundModel, w: DecompositionWitness, networks, c: _Counter,
              states: list[frozenset] | None):
    """Earliest processing time of every node; ``None`` states skip preconditions.

    A node can be processed once its parent is decomposed and every node
    ordered before it (in any network above it) is finished. Returns a
    rejecting verdict or ``None``.
    """
    by_parent = {parent: (kids, mapping, net) for parent, kids, mapping, net in networks}
    horizon = sum(1 for x in w.nodes.values() if x.task.primitive)

    def run(parent, lower: tuple[int, int | None]):
        """Process the network under ``parent``; returns (done_time, last_leaf)."""
        kids, mapping, net = by_parent[parent]
        pos_of = {mapping[i]: i for i in range(len(kids))}
        done: dict[int, tuple[int, int | None]] = {}
        finish = lower
        for tn_node in net.topological_order():
            i = pos_of[tn_node]
            child = kids[i]
            start = lower
            for p in net.predecessors[tn_node]:
                c.n += 1
                start = max(start, done[p], key=lambda x: x[0])
            node = w.nodes[child]
            if node.task.primitive:
                c.n += 1
                if child < start[0]:
                    if states is None:
                        return _reject("orderViolation", (start[1], child),
                                       f"step {start[1]} must precede step {child}")
                    return _reject("methodPrecondition", parent,
                                   f"step {child} precedes the earliest decomposition time of its ancestors")
                done[tn_node] = (child + 1, child)
            else:
                t = start[0]
                if states is not None:
                    pres = [model.methods[j].pre for j in _equivalent_methods(model, node.method)]
                    while t <= horizon:
                        c.n += 1
                        if any(pre <= states[t] for pre in pres):
                            break
                        t += 1
                    if t > horizon:
                        return _reject("methodPrecondition", child,
                                       f"precondition of {model.methods[node.method].name} never holds when required")
                sub = run(child, (t, start[1]))
                if isinstance(sub, Verdict):
                    return sub
                done[tn_node] = sub
            finish = max(finish, done[tn_node], key=lambda x: x[0])
        return finish

    res = run(None, (0, None))
    return res if isinstance(res, Verdict) else None


def verify(model: GroundModel, plan, witness: DecompositionWitness) -> Verdict:
    """Accept iff the witness derives exactly ``plan`` and the plan is valid.

    Check order: tree shape, method match, ordering, executability, method
    preconditions, goal. ``Verdict.checks`` counts elementary checks.
    """
    plan = tuple(plan)
    c = _Counter()
    bad = _check_shape(model, plan, witness, c)
    if bad:
        bad.checks = c.n
        return bad
    networks = _check_methods(model, witness, c)
    if isinstance(networks, Verdict):
        networks.checks = c.n
        return networks
    bad = _schedule(model, witness, networks, c, None)
    if bad:
        bad.checks = c.n
        return bad
    states = [model.init]
    for i, a in enumerate(plan):
        act = model.actions[a]
        c.n += 1
        if not act.pre <= states[-1]:
            missing = ", ".join(model.fact_names(act.pre - states[-1]))
            return _reject("notExecutable", i, f"{act} lacks {missing}", c.n)
        states.append((states[-1] - act.delete) | act.add)
    bad = _schedule(model, witness, networks, c, states)
    if bad:
        bad.checks = c.n
        return bad
    if not model.goal_satisfied(states[-1]):
        missing = ", ".join(model.fact_names(model.goal - states[-1]))
        return _reject("goalUnsatisfied", None, f"goal facts missing: {missing}", c.n)
    return Verdict(True, checks=c.n, witness=witness)


def verify_text(model: GroundModel, text: str) -> Verdict:
    """Parse a plan file and verify it; format problems become verdicts."""
    try:
        plan, witness = parse_plan_file(text, model)
    except PlanFileError as e:
        return _reject(e.failure, e.line if e.where is None else e.where, e.detail)
    return verify(model, plan, witness)


# --------------------------------------------------------------- no witness

def _min_lengths(model: GroundModel) -> list[float]:
    inf = float("inf")
    length = [inf] * len(model.tasks)
    changed = True
    while changed:
        changed = False
        for m in model.methods:
            n = sum(1 if r.primitive else length[r.index] for r in m.network.labels.values())
            if n < length[m.task]:
                length[m.task] = n
                changed = True
    return length


def _net_key(tn: TaskNetwork):
    # exact up to node ids: renumber in topological order
    order = tn.topological_order()
    idx = {n: i for i, n in enumerate(order)}
    return (tuple(tn.labels[n] for n in order),
            frozenset((idx[a], idx[b]) for a, b in tn.ordering))


def verify_without_witness(model: GroundModel, plan, depth_bound: int) -> Verdict:
    """Search for any decomposition with at most ``depth_bound`` method applications."""
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")
    plan = tuple(plan)
    for i, a in enumerate(plan):
        if not 0 <= a < len(model.actions):
            return _reject("unknownAction", i, f"step {i} names no action")
    run = is_executable(model, plan)
    if not run.executable:
        return _reject("notExecutable", run.failed_step, f"step {run.failed_step} is not applicable")
    if not model.goal_satisfied(run.state):
        return _reject("goalUnsatisfied", None, "goal does not hold after the plan")
    states = [model.init]
    for a in plan:
        act = model.actions[a]
        states.append((states[-1] - act.delete) | act.add)

    from .planner import extract_witness  # local: planner depends on grounder only

    min_len = _min_lengths(model)
    n = len(plan)
    best_budget: dict = {}
    bound_hit = False
    decisions: list[tuple] = []
    counter = [0]

    def pending(tn: TaskNetwork) -> float:
        return sum(1 if r.primitive else min_len[r.index] for r in tn.labels.values())

    def rec(pos: int, tn: TaskNetwork, budget: int, next_id: int) -> bool:
        nonlocal bound_hit
        counter[0] += 1
        if not tn.nodes:
            return pos == n
        if pending(tn) > n - pos:
            return False
        key = (pos, _net_key(tn))
        if best_budget.get(key, -1) >= budget:
            return False
        best_budget[key] = budget
        for u in tn.unconstrained():
            ref = tn.labels[u]
            if ref.primitive:
                if pos < n and ref.index == plan[pos]:
                    rest = TaskNetwork(
                        tuple(x for x in tn.nodes if x != u),
                        {x: r for x, r in tn.labels.items() if x != u},
                        frozenset(e for e in tn.ordering if u not in e),
                    )
                    decisions.append(("apply", u, ref.index))
                    if rec(pos + 1, rest, budget, next_id):
                        return True
                    decisions.pop()
                continue
            for mid in model.tasks[ref.index].methods:
                m = model.methods[mid]
                if not m.pre <= states[pos]:
                    continue
                if budget == 0:
                    bound_hit = True
                    continue
                new, ids = decompose(tn, u, m, next_id)
                decisions.append(("decompose", u, mid, ids))
                if rec(pos, new, budget - 1, next_id + len(ids)):
                    return True
                decisions.pop()
        return False

    net0 = model.initial_network
    if rec(0, net0, depth_bound, max(net0.nodes, default=-1) + 1):
        _, witness = extract_witness(model, tuple(net0.nodes), decisions)
        return Verdict(True, checks=counter[0], witness=witness)
    if bound_hit:
        return _reject("boundExceeded", None, f"no decomposition within {depth_bound} method applications", counter[0])
    return _reject("notDerivable", None, "no decomposition of the initial network yields this plan", counter[0])


def verify_text_without_witness(model: GroundModel, text: str, depth_bound: int) -> Verdict:
    try:
        plan, _ = parse_plan_file(text, model, require_witness=False)
    except PlanFileError as e:
        return _reject(e.failure, e.line if e.where is None else e.where, e.detail)
    return verify_without_witness(model, plan, depth_bound)
