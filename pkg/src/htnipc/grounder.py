"""Instantiate a lifted domain/problem into a pruned :class:`GroundModel`."""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field

from .errors import GroundingBlowup
from .lifted import LiftedDomain, LiftedProblem, Literal
from .model import (
    AbstractTask,
    Fact,
    GroundAction,
    GroundModel,
    Method,
    TaskNetwork,
    TaskRef,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**7


@dataclass
class GroundingStats:
    before: dict[str, int] = field(default_factory=dict)
    after: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    def lines(self) -> list[str]:
        out = [f"{k}_before={v}" for k, v in self.before.items()]
        out += [f"{k}_after={v}" for k, v in self.after.items()]
        out.append(f"ground_seconds={self.seconds:.3f}")
        return out


def _counts(m: GroundModel) -> dict[str, int]:
    return {"facts": len(m.facts), "actions": len(m.actions),
            "tasks": len(m.tasks), "methods": len(m.methods)}


class _Interner:
    def __init__(self, pred_order: dict[str, int]):
        self.ids: dict[tuple[str, tuple[str, ...]], int] = {}
        self.facts: list[Fact] = []
        self.pred_order = pred_order

    def __call__(self, name: str, args: tuple[str, ...]) -> int:
        key = (name, args)
        fid = self.ids.get(key)
        if fid is None:
            fid = self.ids[key] = len(self.facts)
            self.facts.append(Fact(fid, name, args))
        return fid


def _negated_predicates(d: LiftedDomain, p: LiftedProblem) -> list[str]:
    neg = set()
    literals = [l for a in d.actions for l in a.pre] + [l for m in d.methods for l in m.pre]
    literals += list(p.goal or ())
    for lit in literals:
        if not lit.positive:
            neg.add(lit.atom.name)
    return [q.name for q in d.predicates if q.name in neg]


def ground(d: LiftedDomain, p: LiftedProblem, cap: int = DEFAULT_CAP,
           prune: bool = True) -> tuple[GroundModel, GroundingStats]:
    """Enumerate every type-consistent instantiation, then prune to a fixpoint.

    Negative preconditions are compiled into complementary ``not-<pred>``
    facts. Ids are assigned in declaration order, then lexicographic object
    order, so identical inputs give identical models.
    """
    t0 = time.perf_counter()
    objects_of: dict[str, list[str]] = {t: [] for t in d.type_names}
    for obj, typ in p.objects:
        for t in d.ancestors(typ):
            objects_of.setdefault(t, []).append(obj)
    for t in objects_of:
        objects_of[t].sort()

    def combos(params):
        return itertools.product(*(objects_of.get(t, []) for _, t in params))

    def n_combos(params) -> int:
        return math.prod(len(objects_of.get(t, [])) for _, t in params)

    total = sum(n_combos(x.params) for x in (*d.actions, *d.tasks, *d.methods))
    if total > cap:
        raise GroundingBlowup(f"{total} instantiations exceed the cap of {cap}")

    negated = _negated_predicates(d, p)
    declared = {q.name for q in d.predicates}
    not_name = {}
    for q in negated:
        name = f"not-{q}"
        while name in declared:
            name += "_"
        not_name[q] = name
    pred_order = {q.name: i for i, q in enumerate(d.predicates)}
    for i, q in enumerate(negated):
        pred_order[not_name[q]] = len(d.predicates) + i
    fact = _Interner(pred_order)

    init_atoms = {(a.name, a.args) for a in p.init}
    init = {fact(n, args) for n, args in sorted(init_atoms, key=lambda x: (pred_order[x[0]], x[1]))}
    pmap = d.predicate_map
    for q in negated:
        for args in combos(pmap[q].params):
            if (q, args) not in init_atoms:
                init.add(fact(not_name[q], args))

    def lit_fact(lit: Literal, sub: dict[str, str]) -> int:
        args = tuple(sub.get(x, x) for x in lit.atom.args)
        if lit.positive:
            return fact(lit.atom.name, args)
        return fact(not_name[lit.atom.name], args)

    actions: list[GroundAction] = []
    action_ids: dict[tuple[str, tuple[str, ...]], int] = {}
    for a in d.actions:
        names = [v for v, _ in a.params]
        for args in combos(a.params):
            sub = dict(zip(names, args))
            pre = frozenset(lit_fact(l, sub) for l in a.pre)
            add_atoms = {(l.atom.name, tuple(sub[x] for x in l.atom.args)) for l in a.effects if l.positive}
            del_atoms = {(l.atom.name, tuple(sub[x] for x in l.atom.args)) for l in a.effects if not l.positive}
            del_atoms -= add_atoms  # add wins over delete
            add = {fact(n, x) for n, x in sorted(add_atoms)}
            dele = {fact(n, x) for n, x in sorted(del_atoms)}
            for n, x in sorted(add_atoms):
                if n in not_name:
                    dele.add(fact(not_name[n], x))
            for n, x in sorted(del_atoms):
                if n in not_name:
                    add.add(fact(not_name[n], x))
            aid = len(actions)
            action_ids[(a.name, args)] = aid
            actions.append(GroundAction(aid, a.name, args, pre, frozenset(add), frozenset(dele),
                                        1 if a.cost is None else a.cost))

    tasks: list[tuple[str, tuple[str, ...]]] = []
    task_ids: dict[tuple[str, tuple[str, ...]], int] = {}
    for t in d.tasks:
        for args in combos(t.params):
            task_ids[(t.name, args)] = len(tasks)
            tasks.append((t.name, args))

    def resolve(name: str, args: tuple[str, ...]) -> TaskRef | None:
        if name in d.action_map:
            aid = action_ids.get((name, args))
            return None if aid is None else TaskRef(True, aid)
        tid = task_ids.get((name, args))
        return None if tid is None else TaskRef(False, tid)

    methods: list[Method] = []
    for m in d.methods:
        names = [v for v, _ in m.params]
        index = {s.id: i for i, s in enumerate(m.subtasks)}
        order = frozenset((index[a], index[b]) for a, b in m.constraints())
        for args in combos(m.params):
            sub = dict(zip(names, args))
            tid = task_ids.get((m.task.name, tuple(sub[x] for x in m.task.args)))
            if tid is None:
                continue
            labels = []
            for s in m.subtasks:
                ref = resolve(s.atom.name, tuple(sub[x] for x in s.atom.args))
                if ref is None:
                    break
                labels.append(ref)
            else:
                nodes = tuple(range(len(labels)))
                net = TaskNetwork(nodes, dict(zip(nodes, labels)), order)
                pre = frozenset(lit_fact(l, sub) for l in m.pre)
                methods.append(Method(len(methods), m.name, tid, net, pre, args))

    init_refs = []
    for s in p.subtasks:
        ref = resolve(s.atom.name, s.atom.args)
        if ref is None:  # parser type-checks ground atoms, so this cannot happen
            raise GroundingBlowup(f"initial task {s.atom} has no instance")
        init_refs.append(ref)
    pindex = {s.id: i for i, s in enumerate(p.subtasks)}
    inodes = tuple(range(len(init_refs)))
    initial = TaskNetwork(inodes, dict(zip(inodes, init_refs)),
                          frozenset((pindex[a], pindex[b]) for a, b in p.constraints()))
    goal = None
    if p.goal is not None:
        goal = frozenset(lit_fact(l, {}) for l in p.goal)

    by_task: dict[int, list[int]] = {i: [] for i in range(len(tasks))}
    for m in methods:
        by_task[m.task].append(m.id)
    raw = GroundModel(
        facts=tuple(fact.facts),
        actions=tuple(actions),
        tasks=tuple(AbstractTask(i, n, a, tuple(by_task[i])) for i, (n, a) in enumerate(tasks)),
        methods=tuple(methods),
        init=frozenset(init),
        initial_network=initial,
        goal=goal,
        domain_name=d.name,
        problem_name=p.name,
    )
    raw = _sort_facts(raw, pred_order)
    stats = GroundingStats(before=_counts(raw))
    model = reachability_prune(raw) if prune else raw
    stats.after = _counts(model)
    stats.seconds = time.perf_counter() - t0
    return model, stats


def _sort_facts(m: GroundModel, pred_order: dict[str, int]) -> GroundModel:
    order = sorted(range(len(m.facts)), key=lambda i: (pred_order.get(m.facts[i].name, 0), m.facts[i].args))
    return _compact(m, order, range(len(m.actions)), range(len(m.tasks)), range(len(m.methods)))


def _compact(m: GroundModel, facts, actions, tasks, methods) -> GroundModel:
    """Keep the listed elements (in the given order) and renumber densely."""
    fmap = {old: new for new, old in enumerate(facts)}
    amap = {old: new for new, old in enumerate(actions)}
    tmap = {old: new for new, old in enumerate(tasks)}
    mmap = {old: new for new, old in enumerate(methods)}

    def fs(ids):
        return frozenset(fmap[i] for i in ids if i in fmap)

    def ref(r: TaskRef) -> TaskRef:
        return TaskRef(True, amap[r.index]) if r.primitive else TaskRef(False, tmap[r.index])

    def net(tn: TaskNetwork) -> TaskNetwork:
        return TaskNetwork(tn.nodes, {n: ref(r) for n, r in tn.labels.items()}, tn.ordering)

    new_facts = tuple(Fact(fmap[i], m.facts[i].name, m.facts[i].args) for i in facts)
    new_actions = tuple(
        GroundAction(amap[i], a.name, a.args, fs(a.pre), fs(a.add), fs(a.delete), a.cost)
        for i in actions for a in [m.actions[i]]
    )
    new_methods = tuple(
        Method(mmap[i], x.name, tmap[x.task], net(x.network), fs(x.pre), x.args)
        for i in methods for x in [m.methods[i]]
    )
    new_tasks = tuple(
        AbstractTask(tmap[i], t.name, t.args, tuple(mmap[j] for j in t.methods if j in mmap))
        for i in tasks for t in [m.tasks[i]]
    )
    return GroundModel(
        facts=new_facts,
        actions=new_actions,
        tasks=new_tasks,
        methods=new_methods,
        init=fs(m.init),
        initial_network=net(m.initial_network),
        goal=None if m.goal is None else fs(m.goal),
        domain_name=m.domain_name,
        problem_name=m.problem_name,
    )


def relaxed_reachable(m: GroundModel, actions) -> set[int]:
    """Facts reachable from init ignoring delete effects, using only ``actions``."""
    reached = set(m.init)
    waiting: dict[int, list[int]] = {}
    missing: dict[int, int] = {}
    queue = []
    for a in actions:
        need = m.actions[a].pre - reached
        missing[a] = len(need)
        if not need:
            queue.append(a)
        for f in need:
            waiting.setdefault(f, []).append(a)
    while queue:
        a = queue.pop()
        for f in m.actions[a].add:
            if f not in reached:
                reached.add(f)
                for b in waiting.get(f, ()):
                    missing[b] -= 1
                    if missing[b] == 0:
                        queue.append(b)
    return reached


def reachability_prune(m: GroundModel) -> GroundModel:
    """Remove facts, actions, methods and tasks that cannot occur in any solution.

    Iterates delete-relaxed reachability, bottom-up productivity of abstract
    tasks and top-down reachability from the initial network until nothing
    changes. Tasks of the initial network are always kept.
    """
    alive_actions = set(range(len(m.actions)))
    alive_methods = set(range(len(m.methods)))
    while True:
        reached = relaxed_reachable(m, sorted(alive_actions))
        usable_actions = {a for a in alive_actions if m.actions[a].pre <= reached}
        usable_methods = {i for i in alive_methods if m.methods[i].pre <= reached}

        productive: set[int] = set()
        changed = True
        while changed:
            changed = False
            for i in usable_methods:
                t = m.methods[i].task
                if t in productive:
                    continue
                if all(r.index in usable_actions if r.primitive else r.index in productive
                       for r in m.methods[i].network.labels.values()):
                    productive.add(t)
                    changed = True
        usable_methods = {
            i for i in usable_methods
            if all(r.index in usable_actions if r.primitive else r.index in productive
                   for r in m.methods[i].network.labels.values())
        }

        reach_tasks: set[int] = set()
        reach_actions: set[int] = set()
        reach_methods: set[int] = set()
        stack = list(m.initial_network.labels.values())
        while stack:
            r = stack.pop()
            if r.primitive:
                reach_actions.add(r.index)
                continue
            if r.index in reach_tasks:
                continue
            reach_tasks.add(r.index)
            for j in m.tasks[r.index].methods:
                if j in usable_methods:
                    reach_methods.add(j)
                    stack.extend(m.methods[j].network.labels.values())

        new_actions = reach_actions & usable_actions
        if new_actions == alive_actions and reach_methods == alive_methods:
            break
        alive_actions, alive_methods = new_actions, reach_methods

    keep_tasks = reach_tasks
    # initial-network actions stay even when inapplicable: the model is then unsolvable
    keep_actions = alive_actions | {r.index for r in m.initial_network.labels.values() if r.primitive}
    keep_facts = reached | set(m.goal or ())
    for a in keep_actions - alive_actions:
        keep_facts |= m.actions[a].pre
    return _compact(m, sorted(keep_facts), sorted(keep_actions), sorted(keep_tasks), sorted(alive_methods))


def is_totally_ordered(m: GroundModel) -> bool:
    return m.initial_network.is_total_order() and all(x.network.is_total_order() for x in m.methods)


def trivially_unsolvable(m: GroundModel) -> bool:
    """An initial abstract task without methods, or an initial action that never becomes applicable."""
    for r in m.initial_network.labels.values():
        if not r.primitive and not m.tasks[r.index].methods:
            return True
    reached = relaxed_reachable(m, range(len(m.actions)))
    return any(r.primitive and not m.actions[r.index].pre <= reached
               for r in m.initial_network.labels.values())


def dump(m: GroundModel) -> str:
    """One line per fact, action, task and method, in id order."""
    lines = [f"; ground model {m.domain_name} / {m.problem_name}"]
    for f in m.facts:
        lines.append(f"fact {f.id} {f}{' init' if f.id in m.init else ''}")
    names = lambda ids: " ".join(str(m.facts[i]) for i in sorted(ids))
    for a in m.actions:
        lines.append(f"action {a.id} {a} cost={a.cost} pre=[{names(a.pre)}] add=[{names(a.add)}] del=[{names(a.delete)}]")
    for t in m.tasks:
        lines.append(f"task {t.id} {t} methods=[{' '.join(map(str, t.methods))}]")
    for x in m.methods:
        subs = " ".join(f"{n}:{m.task_str(x.network.labels[n])}" for n in x.network.nodes)
        order = " ".join(f"{a}<{b}" for a, b in sorted(x.network.ordering))
        lines.append(f"method {x.id} {x} task={m.task_str(TaskRef(False, x.task))} pre=[{names(x.pre)}] subtasks=[{subs}] order=[{order}]")
    init_net = " ".join(f"{n}:{m.task_str(m.initial_network.labels[n])}" for n in m.initial_network.nodes)
    lines.append(f"initial [{init_net}] order=[{' '.join(f'{a}<{b}' for a, b in sorted(m.initial_network.ordering))}]")
    if m.goal is not None:
        lines.append(f"goal [{names(m.goal)}]")
    return "\n".join(lines)


def lifted_totally_ordered(d: LiftedDomain, p: LiftedProblem | None = None) -> bool:
    """Direct check on the lifted methods: each subtask list is a chain."""

    def chain(subtasks, constraints) -> bool:
        ids = [s.id for s in subtasks]
        n = len(ids)
        succ = {i: set() for i in ids}
        for a, b in constraints:
            succ[a].add(b)
        closure = 0
        for i in ids:
            seen, stack = set(), [i]
            while stack:
                for s in succ[stack.pop()]:
                    if s not in seen:
                        seen.add(s)
                        stack.append(s)
            closure += len(seen)
        return closure == n * (n - 1) // 2

    ok = all(chain(m.subtasks, m.constraints()) for m in d.methods)
    if p is not None:
        ok = ok and chain(p.subtasks, p.constraints())
    return ok
