"""First-order (lifted) domain and problem as produced by the parser.

Source spans are attached to most nodes but excluded from equality, so two
parses of differently formatted but equivalent text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .sexpr import SourceSpan

ROOT_TYPE = "object"

Param = tuple[str, str]  # (variable, type)


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[str, ...] = ()
    span: SourceSpan | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"({' '.join((self.name, *self.args))})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"(not {self.atom})"


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[Param, ...] = ()


@dataclass(frozen=True)
class Task:
    name: str
    params: tuple[Param, ...] = ()


@dataclass(frozen=True)
class Action:
    name: str
    params: tuple[Param, ...] = ()
    pre: tuple[Literal, ...] = ()
    effects: tuple[Literal, ...] = ()
    cost: int | None = None  # None: no explicit cost, counts as 1


@dataclass(frozen=True)
class Subtask:
    id: str
    atom: Atom


@dataclass(frozen=True)
class Method:
    name: str
    params: tuple[Param, ...]
    task: Atom
    subtasks: tuple[Subtask, ...] = ()
    ordering: tuple[tuple[str, str], ...] = ()
    ordered: bool = False
    pre: tuple[Literal, ...] = ()

    def constraints(self) -> frozenset[tuple[str, str]]:
        """Ordering as id pairs; the chain for ``:ordered-subtasks``."""
        return network_constraints(self.subtasks, self.ordering, self.ordered)


def network_constraints(subtasks, ordering, ordered) -> frozenset[tuple[str, str]]:
    if ordered:
        ids = [s.id for s in subtasks]
        return frozenset(zip(ids, ids[1:]))
    return frozenset(ordering)


@dataclass(frozen=True)
class LiftedDomain:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[tuple[str, str], ...] = ()  # (type, parent) in declaration order
    predicates: tuple[Predicate, ...] = ()
    tasks: tuple[Task, ...] = ()
    methods: tuple[Method, ...] = ()
    actions: tuple[Action, ...] = ()

    @cached_property
    def parent(self) -> dict[str, str]:
        return dict(self.types)

    @cached_property
    def type_names(self) -> set[str]:
        return {ROOT_TYPE, *self.parent}

    def ancestors(self, t: str) -> list[str]:
        """``t`` followed by its supertypes up to ``object``."""
        chain = [t]
        while chain[-1] != ROOT_TYPE and chain[-1] in self.parent:
            nxt = self.parent[chain[-1]]
            if nxt in chain:
                break
            chain.append(nxt)
        if chain[-1] != ROOT_TYPE:
            chain.append(ROOT_TYPE)
        return chain

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup in self.ancestors(sub)

    @cached_property
    def predicate_map(self) -> dict[str, Predicate]:
        return {p.name: p for p in self.predicates}

    @cached_property
    def action_map(self) -> dict[str, Action]:
        return {a.name: a for a in self.actions}

    @cached_property
    def task_map(self) -> dict[str, Task]:
        return {t.name: t for t in self.tasks}


@dataclass(frozen=True)
class LiftedProblem:
    name: str
    domain: str
    objects: tuple[tuple[str, str], ...] = ()
    init: tuple[Atom, ...] = ()
    subtasks: tuple[Subtask, ...] = ()
    ordering: tuple[tuple[str, str], ...] = ()
    ordered: bool = False
    goal: tuple[Literal, ...] | None = None

    def constraints(self) -> frozenset[tuple[str, str]]:
        return network_constraints(self.subtasks, self.ordering, self.ordered)
