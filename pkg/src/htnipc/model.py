"""Ground HTN model: facts, actions, abstract tasks, methods and task networks.

Everything here is immutable. Facts, actions, abstract tasks and methods are
referred to by dense integer ids; symbols are kept only for printing.
A task occurrence inside a network is labelled with a :class:`TaskRef`, which
says whether it points into ``GroundModel.actions`` or ``GroundModel.tasks``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    InvalidNetwork,
    MethodTaskMismatch,
    NodeNotFound,
    PreconditionUnsatisfied,
)

State = frozenset  # of fact ids
Plan = tuple  # of action ids


class TaskRef(NamedTuple):
    primitive: bool
    index: int

    def __repr__(self) -> str:
        return f"{'a' if self.primitive else 't'}{self.index}"


def prim(i: int) -> TaskRef:
    return TaskRef(True, i)


def abstract(i: int) -> TaskRef:
    return TaskRef(False, i)


def atom_str(name: str, args: Sequence[str]) -> str:
    return f"({' '.join((name, *args))})"


@dataclass(frozen=True)
class Fact:
    id: int
    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return atom_str(self.name, self.args)


@dataclass(frozen=True)
class GroundAction:
    id: int
    name: str
    args: tuple[str, ...]
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]
    cost: int = 1

    def __post_init__(self):
        if self.add & self.delete:
            raise ValueError(f"action {self}: add and delete effects overlap")
        if self.cost < 0:
            raise ValueError(f"action {self}: negative cost")

    def __str__(self) -> str:
        return atom_str(self.name, self.args)


@dataclass(frozen=True)
class AbstractTask:
    id: int
    name: str
    args: tuple[str, ...]
    methods: tuple[int, ...] = ()

    def __str__(self) -> str:
        return atom_str(self.name, self.args)


@dataclass(frozen=True)
class TaskNetwork:
    """Partially ordered multiset of task occurrences.

    ``ordering`` holds explicit constraint edges; it need not be transitively
    closed. Use :meth:`closure` when the full relation is required.
    """

    nodes: tuple[int, ...] = ()
    labels: Mapping[int, TaskRef] = field(default_factory=dict)
    ordering: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise InvalidNetwork("duplicate node id")
        if set(self.labels) != node_set:
            raise InvalidNetwork("labels must cover exactly the nodes")
        for a, b in self.ordering:
            if a == b:
                raise InvalidNetwork(f"reflexive ordering constraint on node {a}")
            if a not in node_set or b not in node_set:
                raise InvalidNetwork(f"ordering constraint ({a}, {b}) names an unknown node")
        if len(self.topological_order()) != len(self.nodes):
            raise InvalidNetwork("ordering contains a cycle")

    @classmethod
    def sequence(cls, refs: Iterable[TaskRef], start: int = 0) -> "TaskNetwork":
        refs = list(refs)
        nodes = tuple(range(start, start + len(refs)))
        return cls(
            nodes,
            dict(zip(nodes, refs)),
            frozenset(zip(nodes, nodes[1:])),
        )

    @classmethod
    def unordered(cls, refs: Iterable[TaskRef], start: int = 0) -> "TaskNetwork":
        refs = list(refs)
        nodes = tuple(range(start, start + len(refs)))
        return cls(nodes, dict(zip(nodes, refs)), frozenset())

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, TaskNetwork):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and dict(self.labels) == dict(other.labels)
            and self.ordering == other.ordering
        )

    def __hash__(self):
        return hash((self.nodes, tuple(self.labels[n] for n in self.nodes), self.ordering))

    def label(self, node: int) -> TaskRef:
        try:
            return self.labels[node]
        except KeyError:
            raise NodeNotFound(f"node {node} not in network") from None

    @cached_property
    def predecessors(self) -> dict[int, frozenset[int]]:
        preds: dict[int, set[int]] = {n: set() for n in self.nodes}
        for a, b in self.ordering:
            preds[b].add(a)
        return {n: frozenset(p) for n, p in preds.items()}

    @cached_property
    def successors(self) -> dict[int, frozenset[int]]:
        succs: dict[int, set[int]] = {n: set() for n in self.nodes}
        for a, b in self.ordering:
            succs[a].add(b)
        return {n: frozenset(s) for n, s in succs.items()}

    def unconstrained(self) -> list[int]:
        """Nodes without predecessors, in increasing id order."""
        return sorted(n for n in self.nodes if not self.predecessors[n])

    def topological_order(self) -> list[int]:
        """Kahn's algorithm, smallest id first. Shorter than ``nodes`` iff cyclic."""
        indeg = {n: 0 for n in self.nodes}
        succs: dict[int, list[int]] = {n: [] for n in self.nodes}
        for a, b in self.ordering:
            if a in indeg and b in indeg:
                indeg[b] += 1
                succs[a].append(b)
        ready = [n for n, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            n = heapq.heappop(ready)
            order.append(n)
            for s in succs[n]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    heapq.heappush(ready, s)
        return order

    def closure(self) -> frozenset[tuple[int, int]]:
        below: dict[int, set[int]] = {}
        for n in reversed(self.topological_order()):
            reach = set()
            for s in self.successors[n]:
                reach.add(s)
                reach |= below[s]
            below[n] = reach
        return frozenset((a, b) for a, bs in below.items() for b in bs)

    def is_total_order(self) -> bool:
        n = len(self.nodes)
        return len(self.closure()) == n * (n - 1) // 2

    def relabel(self, mapping: Mapping[int, int]) -> "TaskNetwork":
        return TaskNetwork(
            tuple(mapping[n] for n in self.nodes),
            {mapping[n]: r for n, r in self.labels.items()},
            frozenset((mapping[a], mapping[b]) for a, b in self.ordering),
        )


@dataclass(frozen=True)
class Method:
    id: int
    name: str
    task: int
    network: TaskNetwork
    pre: frozenset[int] = frozenset()
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return atom_str(self.name, self.args)


@dataclass(frozen=True)
class WitnessNode:
    task: TaskRef
    method: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class DecompositionWitness:
    """Decomposition tree behind a plan.

    Ids ``0 .. len(plan)-1`` are the plan steps (primitive leaves); larger ids
    are abstract nodes. ``roots`` lists the nodes standing for the initial
    network's task occurrences. Children of an abstract node are listed in the
    order of the applied method's subtasks.
    """

    roots: tuple[int, ...]
    nodes: Mapping[int, WitnessNode]


@dataclass(frozen=True)
class GroundModel:
    facts: tuple[Fact, ...]
    actions: tuple[GroundAction, ...]
    tasks: tuple[AbstractTask, ...]
    methods: tuple[Method, ...]
    init: frozenset[int]
    initial_network: TaskNetwork
    goal: frozenset[int] | None = None
    domain_name: str = "domain"
    problem_name: str = "problem"

    def __post_init__(self):
        nf = len(self.facts)
        for i, f in enumerate(self.facts):
            if f.id != i:
                raise ValueError("fact ids must be dense and ordered")
        for i, a in enumerate(self.actions):
            if a.id != i:
                raise ValueError("action ids must be dense and ordered")
            if any(not 0 <= x < nf for x in a.pre | a.add | a.delete):
                raise ValueError(f"action {a} refers to an unknown fact")
        for i, t in enumerate(self.tasks):
            if t.id != i:
                raise ValueError("task ids must be dense and ordered")
            for m in t.methods:
                if self.methods[m].task != i:
                    raise ValueError(f"method {m} listed under the wrong task {t}")
        for i, m in enumerate(self.methods):
            if m.id != i:
                raise ValueError("method ids must be dense and ordered")
            if not 0 <= m.task < len(self.tasks):
                raise ValueError(f"method {m} decomposes an unknown task")
            self._check_refs(m.network)
        self._check_refs(self.initial_network)
        if any(not 0 <= x < nf for x in self.init):
            raise ValueError("init refers to an unknown fact")

    def _check_refs(self, tn: TaskNetwork) -> None:
        for ref in tn.labels.values():
            bound = len(self.actions) if ref.primitive else len(self.tasks)
            if not 0 <= ref.index < bound:
                raise ValueError(f"network label {ref!r} does not resolve")

    @cached_property
    def fact_index(self) -> dict[tuple[str, tuple[str, ...]], int]:
        return {(f.name, f.args): f.id for f in self.facts}

    @cached_property
    def action_index(self) -> dict[tuple[str, tuple[str, ...]], int]:
        return {(a.name, a.args): a.id for a in self.actions}

    @cached_property
    def task_index(self) -> dict[tuple[str, tuple[str, ...]], int]:
        return {(t.name, t.args): t.id for t in self.tasks}

    def fact_names(self, ids: Iterable[int]) -> list[str]:
        return [str(self.facts[i]) for i in sorted(ids)]

    def task_str(self, ref: TaskRef) -> str:
        return str(self.actions[ref.index] if ref.primitive else self.tasks[ref.index])

    def goal_satisfied(self, state: frozenset[int]) -> bool:
        return self.goal is None or self.goal <= state

    def plan_cost(self, plan: Sequence[int]) -> int:
        return sum(self.actions[a].cost for a in plan)


class Execution(NamedTuple):
    executable: bool
    state: frozenset[int]
    failed_step: int | None = None


def apply_action(state: frozenset[int], action: GroundAction,
                 fact_names: Sequence | None = None) -> frozenset[int]:
    missing = action.pre - state
    if missing:
        names = [str(fact_names[i]) if fact_names is not None else f"#{i}"
                 for i in sorted(missing)]
        raise PreconditionUnsatisfied(str(action), names)
    return (state - action.delete) | action.add


def is_executable(model: GroundModel, plan: Sequence[int],
                  init: frozenset[int] | None = None) -> Execution:
    state = model.init if init is None else init
    for i, a in enumerate(plan):
        act = model.actions[a]
        if not act.pre <= state:
            return Execution(False, state, i)
        state = (state - act.delete) | act.add
    return Execution(True, state, None)


def decompose(tn: TaskNetwork, node: int, method: Method,
              start: int | None = None) -> tuple[TaskNetwork, tuple[int, ...]]:
    """Replace ``node`` by a fresh copy of ``method.network``.

    Returns the new network and the ids given to the inserted nodes, in the
    order of ``method.network.nodes``. Fresh ids are ``start, start+1, ...``;
    by default ``start`` is one above the current maximum id.
    """
    label = tn.label(node)
    if label != TaskRef(False, method.task):
        raise MethodTaskMismatch(f"method {method.name} decomposes task {method.task}, node {node} is {label!r}")
    sub = method.network
    if start is None:
        start = max(tn.nodes) + 1
    fresh = {old: start + i for i, old in enumerate(sub.nodes)}
    new_ids = tuple(fresh[o] for o in sub.nodes)

    preds = tn.predecessors[node]
    succs = tn.successors[node]
    ordering = {(a, b) for a, b in tn.ordering if a != node and b != node}
    ordering |= {(fresh[a], fresh[b]) for a, b in sub.ordering}
    if new_ids:
        ordering |= {(p, c) for p in preds for c in new_ids}
        ordering |= {(c, s) for s in succs for c in new_ids}
    else:
        # keep the order the removed node imposed between its neighbours
        ordering |= {(p, s) for p in preds for s in succs}

    labels = {n: r for n, r in tn.labels.items() if n != node}
    for old, new in fresh.items():
        labels[new] = sub.labels[old]
    nodes = tuple(n for n in tn.nodes if n != node) + new_ids
    return TaskNetwork(nodes, labels, frozenset(ordering)), new_ids


def apply_method(tn: TaskNetwork, node: int, method: Method) -> TaskNetwork:
    return decompose(tn, node, method)[0]


class Linearizations(NamedTuple):
    orders: list[list[int]]
    cap_exceeded: bool


def linearizations(tn: TaskNetwork, cap: int = 10_000) -> Linearizations:
    """All topological orders of ``tn`` in lexicographic order, at most ``cap``."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    preds = {n: set(p) for n, p in tn.predecessors.items()}
    remaining = sorted(tn.nodes)
    out: list[list[int]] = []
    prefix: list[int] = []
    exceeded = False

    def rec(rest: list[int]) -> bool:
        nonlocal exceeded
        if not rest:
            if len(out) >= cap:
                exceeded = True
                return False
            out.append(list(prefix))
            return True
        done = set(prefix)
        for n in rest:
            if preds[n] <= done:
                prefix.append(n)
                ok = rec([r for r in rest if r != n])
                prefix.pop()
                if not ok:
                    return False
        return True

    rec(remaining)
    return Linearizations(out, exceeded)


def classical_to_htn(actions: Sequence[GroundAction], init: Iterable[int],
                     goal: Iterable[int], facts: Sequence[Fact]) -> GroundModel:
    """Wrap a STRIPS problem into an equivalent HTN problem.

    A single abstract task ``top`` either performs any action and recurses, or
    finishes with a ``goal-check`` action whose precondition is the goal.
    """
    actions = list(actions)
    n = len(actions)
    check = GroundAction(n, "goal-check", (), frozenset(goal), frozenset(), frozenset(), cost=0)
    top = abstract(0)
    methods = [
        Method(i, f"m-{a.name}", 0, TaskNetwork.sequence([prim(a.id), top]), args=a.args)
        for i, a in enumerate(actions)
    ]
    methods.append(Method(n, "m-finish", 0, TaskNetwork.sequence([prim(n)])))
    return GroundModel(
        facts=tuple(facts),
        actions=tuple(actions) + (check,),
        tasks=(AbstractTask(0, "top", (), tuple(range(n + 1))),),
        methods=tuple(methods),
        init=frozenset(init),
        initial_network=TaskNetwork.sequence([top]),
        domain_name="classical",
        problem_name="classical",
    )
