"""Progression search over (state, remaining task network).

Two solvers share one search skeleton: :func:`solve_total_order` keeps the
remaining network as a sequence, :func:`solve_general` keeps a partially
ordered network and may progress any task without predecessors.
Both record their decisions so :func:`extract_witness` can rebuild the
decomposition tree behind the returned plan.
"""

from __future__ import annotations

import heapq
import logging
import math
import resource
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

from .errors import InternalInconsistency
from .grounder import is_totally_ordered
from .model import (
    DecompositionWitness,
    GroundModel,
    TaskNetwork,
    TaskRef,
    WitnessNode,
    decompose,
)

log = logging.getLogger(__name__)

INF = math.inf


class Mode(str, Enum):
    SATISFICING = "satisficing"
    OPTIMAL = "optimal"
    AGILE = "agile"


class OrderClass(str, Enum):
    TOTAL = "total-order"
    GENERAL = "general"


class Strategy(str, Enum):
    DFS = "dfs"
    UNIFORM_COST = "uniform-cost"
    GREEDY = "greedy"


class Verdict(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "provedUnsolvableWithinBound"
    BOUND_EXHAUSTED = "boundExhausted"
    TIMEOUT = "timeout"
    MEMOUT = "memout"


_DEFAULT_STRATEGY = {
    Mode.OPTIMAL: Strategy.UNIFORM_COST,
    Mode.SATISFICING: Strategy.GREEDY,
    Mode.AGILE: Strategy.GREEDY,
}


@dataclass(frozen=True)
class SearchConfig:
    mode: Mode = Mode.SATISFICING
    order_class: OrderClass | None = None  # None: pick from the model
    strategy: Strategy | None = None  # None: default for the mode
    max_network_size: int = 2**16
    max_plan_length: int | None = None
    seed: int = 0
    time_limit: float | None = None  # seconds
    memory_limit: int | None = None  # bytes of resident memory
    duplicate_detection: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.order_class is not None:
            object.__setattr__(self, "order_class", OrderClass(self.order_class))
        strategy = _DEFAULT_STRATEGY[self.mode] if self.strategy is None else Strategy(self.strategy)
        object.__setattr__(self, "strategy", strategy)
        if self.mode is Mode.OPTIMAL and strategy is not Strategy.UNIFORM_COST:
            raise ValueError("optimal mode requires the uniform-cost strategy")
        if self.max_network_size < 1:
            raise ValueError("max_network_size must be positive")


TRACKS: dict[str, SearchConfig] = {
    f"{mode.value}-{oc.value}": SearchConfig(mode=mode, order_class=oc)
    for mode in Mode
    for oc in OrderClass
}


@dataclass
class Outcome:
    verdict: Verdict
    plan: tuple[int, ...] | None = None
    witness: DecompositionWitness | None = None
    cost: int | None = None
    stats: dict[str, float] = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.verdict is Verdict.SOLVED

    def stats_lines(self) -> list[str]:
        return [f"verdict={self.verdict.value}"] + [f"{k}={v}" for k, v in self.stats.items()]


# --------------------------------------------------------------- static bounds

def task_lower_bounds(model: GroundModel) -> tuple[list[float], list[float]]:
    """Minimum achievable cost and number of actions per abstract task.

    Preconditions are ignored, so both are admissible; ``inf`` marks tasks
    that can never be fully decomposed.
    """
    cost = [INF] * len(model.tasks)
    length = [INF] * len(model.tasks)
    changed = True
    while changed:
        changed = False
        for m in model.methods:
            c = n = 0
            for r in m.network.labels.values():
                if r.primitive:
                    c += model.actions[r.index].cost
                    n += 1
                else:
                    c += cost[r.index]
                    n += length[r.index]
            if c < cost[m.task]:
                cost[m.task] = c
                changed = True
            if n < length[m.task]:
                length[m.task] = n
                changed = True
    return cost, length


def method_rank(model: GroundModel) -> dict[int, list[int]]:
    """Methods of each task, fewest subtasks first, then declaration order."""
    return {
        t.id: sorted(t.methods, key=lambda i: (len(model.methods[i].network), i))
        for t in model.tasks
    }


# --------------------------------------------------------------- search core

@dataclass
class _Node:
    state: frozenset
    net: object  # tuple of (id, ref) in TO mode, TaskNetwork otherwise
    g: int
    length: int
    h: float
    parent: "_Node | None"
    decision: tuple | None
    next_id: int = 0  # fresh node ids are unique along a search path
    key: object = None


class _Limits:
    def __init__(self, cfg: SearchConfig):
        self.deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit
        self.memory = cfg.memory_limit

    def check(self) -> Verdict | None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            return Verdict.TIMEOUT
        if self.memory is not None:
            rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
            if rss > self.memory:
                return Verdict.MEMOUT
        return None


def _search(model: GroundModel, cfg: SearchConfig, root: _Node,
            successors: Callable[[_Node], Iterator[_Node]],
            is_goal: Callable[[_Node], bool]) -> tuple[Verdict, _Node | None, dict]:
    strategy = cfg.strategy
    counter = 0
    frontier: list = []
    stats = {"expanded": 0, "generated": 1, "duplicates": 0, "peak_frontier": 1}
    best_g: dict = {root.key: 0}
    closed: set = set()
    limits = _Limits(cfg)

    def priority(n: _Node):
        if strategy is Strategy.UNIFORM_COST:
            return (n.g + n.h, n.g)
        if strategy is Strategy.GREEDY:
            return (n.h, n.g)
        return ()

    def push(n: _Node):
        nonlocal counter
        counter += 1
        if strategy is Strategy.DFS:
            frontier.append(n)
        else:
            heapq.heappush(frontier, (priority(n), counter, n))

    def pop() -> _Node:
        return frontier.pop() if strategy is Strategy.DFS else heapq.heappop(frontier)[2]

    def on_path(n: _Node, key) -> bool:
        p = n
        while p is not None:
            if p.key == key:
                return True
            p = p.parent
        return False

    push(root)
    t0 = time.perf_counter()
    try:
        while frontier:
            node = pop()
            if cfg.duplicate_detection:
                if node.key in closed:
                    continue
                closed.add(node.key)
            if is_goal(node):
                stats["seconds"] = round(time.perf_counter() - t0, 4)
                return Verdict.SOLVED, node, stats
            stats["expanded"] += 1
            if stats["expanded"] % 512 == 0:
                hit = limits.check()
                if hit is not None:
                    stats["seconds"] = round(time.perf_counter() - t0, 4)
                    return hit, None, stats
            children = list(successors(node))
            if strategy is Strategy.DFS:
                children.reverse()
            for child in children:
                stats["generated"] += 1
                if cfg.duplicate_detection:
                    if child.key in closed:
                        stats["duplicates"] += 1
                        continue
                    old = best_g.get(child.key)
                    if old is not None and (strategy is not Strategy.UNIFORM_COST or old <= child.g):
                        stats["duplicates"] += 1
                        continue
                    best_g[child.key] = child.g
                elif on_path(node, child.key):
                    stats["duplicates"] += 1
                    continue
                push(child)
            stats["peak_frontier"] = max(stats["peak_frontier"], len(frontier))
    except MemoryError:
        frontier.clear()
        return Verdict.MEMOUT, None, stats
    stats["seconds"] = round(time.perf_counter() - t0, 4)
    return Verdict.UNSOLVABLE, None, stats


class _Bounds:
    def __init__(self, model: GroundModel, cfg: SearchConfig):
        self.model = model
        self.cfg = cfg
        self.task_cost, self.task_len = task_lower_bounds(model)
        self.ranked = method_rank(model)
        self.hit = False  # set when the size or length bound cut a node

    def ref_cost(self, r: TaskRef) -> float:
        return self.model.actions[r.index].cost if r.primitive else self.task_cost[r.index]

    def ref_len(self, r: TaskRef) -> float:
        return 1 if r.primitive else self.task_len[r.index]

    def methods(self, task: int) -> list[int]:
        if self.cfg.strategy is Strategy.UNIFORM_COST:
            return list(self.model.tasks[task].methods)
        return self.ranked[task]

    def admissible(self, size: int, length: int, pending_len: float, h: float) -> bool:
        if h == INF:
            return False
        if size > self.cfg.max_network_size:
            self.hit = True
            return False
        limit = self.cfg.max_plan_length
        if limit is not None and length + pending_len > limit:
            self.hit = True
            return False
        return True


def _finish(model: GroundModel, cfg: SearchConfig, bounds: _Bounds, verdict: Verdict,
            node: _Node | None, stats: dict, roots: tuple[int, ...]) -> Outcome:
    if verdict is Verdict.UNSOLVABLE and bounds.hit:
        verdict = Verdict.BOUND_EXHAUSTED
    if verdict is not Verdict.SOLVED:
        return Outcome(verdict, stats=stats)
    decisions = []
    while node.parent is not None:
        decisions.append(node.decision)
        node = node.parent
    decisions.reverse()
    plan, witness = extract_witness(model, roots, decisions)
    cost = model.plan_cost(plan)
    stats["plan_length"] = len(plan)
    stats["plan_cost"] = cost
    return Outcome(Verdict.SOLVED, plan, witness, cost, stats)


def _key(cfg: SearchConfig, state, net_key, length):
    if cfg.max_plan_length is None:
        return (state, net_key)
    return (state, net_key, length)


# --------------------------------------------------------------- totally ordered

def solve_total_order(model: GroundModel, cfg: SearchConfig = SearchConfig()) -> Outcome:
    """Progression over (state, task sequence) for totally ordered models."""
    if not is_totally_ordered(model):
        raise ValueError("model is not totally ordered; use solve_general")
    bounds = _Bounds(model, cfg)
    actions = model.actions
    methods = model.methods
    # subtask sequence of every method, with the fresh-id offset of each node
    seqs = {}
    for m in methods:
        pos = {n: i for i, n in enumerate(m.network.nodes)}
        seqs[m.id] = [(pos[n], m.network.labels[n]) for n in m.network.topological_order()]

    init_net = model.initial_network
    seq0 = tuple((n, init_net.labels[n]) for n in init_net.topological_order())
    refs0 = tuple(r for _, r in seq0)
    root = _Node(model.init, seq0, 0, 0,
                 sum(bounds.ref_cost(r) for r in refs0), None, None,
                 max(init_net.nodes, default=-1) + 1)
    root.key = _key(cfg, root.state, refs0, 0)
    roots = tuple(init_net.nodes)

    def successors(node: _Node):
        seq = node.net
        if not seq:
            return
        head_id, head = seq[0]
        rest = seq[1:]
        if head.primitive:
            act = actions[head.index]
            if act.pre <= node.state:
                state = (node.state - act.delete) | act.add
                g = node.g + act.cost
                h = node.h - act.cost
                length = node.length + 1
                pend = sum(bounds.ref_len(r) for _, r in rest)
                if bounds.admissible(len(rest), length, pend, h):
                    child = _Node(state, rest, g, length, h, node, ("apply", head_id, head.index), node.next_id)
                    child.key = _key(cfg, state, tuple(r for _, r in rest), length)
                    yield child
            return
        start = node.next_id
        base_h = node.h - bounds.task_cost[head.index]
        rest_len = sum(bounds.ref_len(r) for _, r in rest)
        for mid in bounds.methods(head.index):
            m = methods[mid]
            if not m.pre <= node.state:
                continue
            sub = tuple((start + off, r) for off, r in seqs[mid])
            new = sub + rest
            h = base_h + sum(bounds.ref_cost(r) for _, r in sub)
            pend = rest_len + sum(bounds.ref_len(r) for _, r in sub)
            if not bounds.admissible(len(new), node.length, pend, h):
                continue
            new_ids = tuple(start + i for i in range(len(m.network.nodes)))
            child = _Node(node.state, new, node.g, node.length, h, node,
                          ("decompose", head_id, mid, new_ids), start + len(new_ids))
            child.key = _key(cfg, node.state, tuple(r for _, r in new), node.length)
            yield child

    def is_goal(node: _Node) -> bool:
        return not node.net and model.goal_satisfied(node.state)

    verdict, node, stats = _search(model, cfg, root, successors, is_goal)
    return _finish(model, cfg, bounds, verdict, node, stats, roots)


# --------------------------------------------------------------- general

def canonical_key(tn: TaskNetwork):
    """Renaming-invariant encoding of a task network.

    Equal keys imply isomorphic networks. Nodes are ordered by colour
    refinement over the closed ordering; remaining ties fall back to node id,
    which can only cause missed duplicates, never false merges.
    """
    nodes = tn.nodes
    if not nodes:
        return ((), ())
    if not tn.ordering:
        return (tuple(sorted(tn.labels.values())), ())
    closure = tn.closure()
    preds: dict[int, list[int]] = {n: [] for n in nodes}
    succs: dict[int, list[int]] = {n: [] for n in nodes}
    for a, b in closure:
        succs[a].append(b)
        preds[b].append(a)
    color = {n: (tn.labels[n], len(preds[n]), len(succs[n])) for n in nodes}
    for _ in range(2):
        sig = {n: (color[n], tuple(sorted(color[p] for p in preds[n])),
                   tuple(sorted(color[s] for s in succs[n]))) for n in nodes}
        palette = {c: i for i, c in enumerate(sorted(set(sig.values())))}
        refined = {n: (color[n], palette[sig[n]]) for n in nodes}
        if len(set(refined.values())) == len(set(color.values())):
            color = refined
            break
        color = refined
    order = sorted(nodes, key=lambda n: (color[n], n))
    index = {n: i for i, n in enumerate(order)}
    return (
        tuple(tn.labels[n] for n in order),
        tuple(sorted((index[a], index[b]) for a, b in closure)),
    )


def _remove(tn: TaskNetwork, node: int) -> TaskNetwork:
    return TaskNetwork(
        tuple(n for n in tn.nodes if n != node),
        {n: r for n, r in tn.labels.items() if n != node},
        frozenset(e for e in tn.ordering if node not in e),
    )


def solve_general(model: GroundModel, cfg: SearchConfig = SearchConfig()) -> Outcome:
    """Progression over (state, partially ordered network)."""
    bounds = _Bounds(model, cfg)
    actions = model.actions
    methods = model.methods
    net0 = model.initial_network
    root = _Node(model.init, net0, 0, 0,
                 sum(bounds.ref_cost(r) for r in net0.labels.values()), None, None,
                 max(net0.nodes, default=-1) + 1)
    root.key = _key(cfg, root.state, canonical_key(net0), 0)

    def successors(node: _Node):
        tn: TaskNetwork = node.net
        pending = sum(bounds.ref_len(r) for r in tn.labels.values())
        for n in tn.unconstrained():
            ref = tn.labels[n]
            if ref.primitive:
                act = actions[ref.index]
                if not act.pre <= node.state:
                    continue
                state = (node.state - act.delete) | act.add
                length = node.length + 1
                h = node.h - act.cost
                if not bounds.admissible(len(tn) - 1, length, pending - 1, h):
                    continue
                new = _remove(tn, n)
                child = _Node(state, new, node.g + act.cost, length, h, node, ("apply", n, ref.index),
                              node.next_id)
                child.key = _key(cfg, state, canonical_key(new), length)
                yield child
                continue
            base_h = node.h - bounds.task_cost[ref.index]
            base_len = pending - bounds.task_len[ref.index]
            for mid in bounds.methods(ref.index):
                m = methods[mid]
                if not m.pre <= node.state:
                    continue
                labels = m.network.labels.values()
                h = base_h + sum(bounds.ref_cost(r) for r in labels)
                pend = base_len + sum(bounds.ref_len(r) for r in labels)
                if not bounds.admissible(len(tn) - 1 + len(m.network), node.length, pend, h):
                    continue
                new, new_ids = decompose(tn, n, m, node.next_id)
                child = _Node(node.state, new, node.g, node.length, h, node,
                              ("decompose", n, mid, new_ids), node.next_id + len(new_ids))
                child.key = _key(cfg, node.state, canonical_key(new), node.length)
                yield child

    def is_goal(node: _Node) -> bool:
        return not node.net.nodes and model.goal_satisfied(node.state)

    verdict, node, stats = _search(model, cfg, root, successors, is_goal)
    return _finish(model, cfg, bounds, verdict, node, stats, tuple(net0.nodes))


def solve(model: GroundModel, cfg: SearchConfig = SearchConfig()) -> Outcome:
    """Dispatch on ``cfg.order_class`` (or on the model when it is unset)."""
    order = cfg.order_class
    if order is None:
        order = OrderClass.TOTAL if is_totally_ordered(model) else OrderClass.GENERAL
    if order is OrderClass.TOTAL:
        return solve_total_order(model, cfg)
    return solve_general(model, cfg)


# --------------------------------------------------------------- witnesses

def extract_witness(model: GroundModel, roots: tuple[int, ...],
                    decisions: list[tuple]) -> tuple[tuple[int, ...], DecompositionWitness]:
    """Rebuild plan and decomposition tree from a solved decision sequence.

    ``decisions`` holds ``("apply", node, action)`` and
    ``("decompose", node, method, new_node_ids)`` records over search node
    ids. Plan steps become witness ids ``0..n-1``; abstract nodes are numbered
    from ``n`` upward in breadth-first order from the roots.
    """
    plan: list[int] = []
    leaf_pos: dict[int, int] = {}
    method_of: dict[int, int] = {}
    children: dict[int, tuple[int, ...]] = {}
    label: dict[int, TaskRef] = {n: model.initial_network.labels[n] for n in roots}
    for d in decisions:
        if d[0] == "apply":
            _, node, action = d
            if label.get(node) != TaskRef(True, action) or node in leaf_pos:
                raise InternalInconsistency(f"bad apply decision {d}")
            leaf_pos[node] = len(plan)
            plan.append(action)
        else:
            _, node, mid, new_ids = d
            m = model.methods[mid]
            if label.get(node) != TaskRef(False, m.task) or node in method_of:
                raise InternalInconsistency(f"bad decompose decision {d}")
            method_of[node] = mid
            children[node] = new_ids
            for new, old in zip(new_ids, m.network.nodes):
                label[new] = m.network.labels[old]

    wid: dict[int, int] = dict(leaf_pos)
    nxt = len(plan)
    queue = list(roots)
    i = 0
    while i < len(queue):
        n = queue[i]
        i += 1
        if label[n].primitive:
            if n not in leaf_pos:
                raise InternalInconsistency(f"action node {n} never executed")
            continue
        if n not in method_of:
            raise InternalInconsistency(f"abstract node {n} never decomposed")
        wid[n] = nxt
        nxt += 1
        queue.extend(children[n])

    nodes = {}
    for n, w in wid.items():
        if label[n].primitive:
            nodes[w] = WitnessNode(label[n])
        else:
            nodes[w] = WitnessNode(label[n], method_of[n], tuple(wid[c] for c in children[n]))
    return tuple(plan), DecompositionWitness(tuple(wid[r] for r in roots), nodes)
