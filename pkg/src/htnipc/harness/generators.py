"""Benchmark generators: transport instances and grammar intersection.

Every generator is a pure function of its arguments; the returned texts
are byte-identical for identical inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from ..errors import GrammarNotNormalized

# ------------------------------------------------------------------ transport


def transport_domain() -> str:
    return (resources.files("htnipc") / "data" / "suites" / "logistics-mini" / "domain.hddl").read_text()


def random_road_map(n: int, rng: random.Random, extra: float = 0.3) -> list[tuple[int, int]]:
    """Strongly connected directed road map over locations ``0..n-1``.

    A random spanning tree is laid in both directions, then roughly
    ``extra * n`` further one-way roads are added.
    """
    order = list(range(n))
    rng.shuffle(order)
    roads = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        roads.add((a, b))
        roads.add((b, a))
    for _ in range(round(extra * n)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            roads.add((a, b))
    return sorted(roads)


def gen_transport(n_trucks: int, n_packages: int, n_locations: int, seed: int,
                  ordered: bool = True) -> tuple[str, str]:
    """Return (domain text, problem text) for a random transport instance.

    Each package gets a ``deliver`` task to a random location; the tasks are
    a sequence when ``ordered`` and unordered otherwise. The road map is
    strongly connected, so every instance is solvable.
    """
    if min(n_trucks, n_packages, n_locations) < 1:
        raise ValueError("trucks, packages and locations must all be at least 1")
    rng = random.Random(seed)
    roads = random_road_map(n_locations, rng)
    trucks = [f"t{i + 1}" for i in range(n_trucks)]
    packages = [f"p{i + 1}" for i in range(n_packages)]
    locs = [f"l{i + 1}" for i in range(n_locations)]
    init = [f"(at {t} {locs[rng.randrange(n_locations)]})" for t in trucks]
    goals = []
    for p in packages:
        start = rng.randrange(n_locations)
        dest = rng.randrange(n_locations)
        if n_locations > 1:
            while dest == start:
                dest = rng.randrange(n_locations)
        init.append(f"(pat {p} {locs[start]})")
        goals.append((p, locs[dest]))
    init += [f"(road {locs[a]} {locs[b]})" for a, b in roads]
    mode = "o" if ordered else "u"
    lines = [
        f"(define (problem transport-{mode}{n_trucks}-{n_packages}-{n_locations}-s{seed})",
        "  (:domain logistics-mini)",
        "  (:objects",
        f"    {' '.join(trucks)} - truck",
        f"    {' '.join(packages)} - package",
        f"    {' '.join(locs)} - location)",
        "  (:htn",
        f"    :{'ordered-subtasks' if ordered else 'subtasks'} (and",
    ]
    lines += [f"      (d{i} (deliver {p} {l}))" for i, (p, l) in enumerate(goals)]
    lines[-1] += "))"
    lines.append("  (:init")
    lines += [f"    {a}" for a in init]
    lines[-1] += ")"
    lines.append(")")
    return transport_domain(), "\n".join(lines) + "\n"


# ------------------------------------------------------- grammar intersection


@dataclass(frozen=True)
class Grammar:
    """Context-free grammar; symbols that never appear on a left-hand side are terminals."""

    start: str
    productions: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def nonterminals(self) -> list[str]:
        seen = dict.fromkeys([self.start] + [lhs for lhs, _ in self.productions])
        return list(seen)

    @property
    def terminals(self) -> list[str]:
        nts = set(self.nonterminals)
        return sorted({s for _, rhs in self.productions for s in rhs if s not in nts})


@dataclass(frozen=True)
class Dfa:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: Mapping[tuple[str, str], str]
    start: str
    accepting: frozenset[str]

    def __post_init__(self):
        for q in self.states:
            for a in self.alphabet:
                if self.delta.get((q, a)) not in self.states:
                    raise ValueError(f"automaton is not total: no move from {q} on {a}")
        if self.start not in self.states or not self.accepting <= set(self.states):
            raise ValueError("start or accepting state undeclared")

    def accepts(self, word) -> bool:
        q = self.start
        for a in word:
            q = self.delta[(q, a)]
        return q in self.accepting


def _sym(s: str) -> str:
    out = "".join(c if c.isalnum() else "-" for c in s.lower())
    return out or "x"


def gen_grammar(cfg: Grammar, dfa: Dfa, seed: int = 0) -> tuple[str, str]:
    """Return (domain, problem) whose solutions spell words of L(cfg) ∩ L(dfa).

    Each nonterminal becomes an abstract task and each production a totally
    ordered method. A terminal ``a`` becomes an action that moves the
    automaton from ``?from`` to ``?to`` along a ``delta-a`` fact; a final
    ``check`` action requires an accepting state. ``seed`` only names the
    problem.
    """
    for lhs, rhs in cfg.productions:
        if len(rhs) > 2:
            raise GrammarNotNormalized(f"production {lhs} -> {' '.join(rhs)} has more than 2 symbols")
    nts = cfg.nonterminals
    terms = cfg.terminals
    missing = set(terms) - set(dfa.alphabet)
    if missing:
        raise ValueError(f"terminals {sorted(missing)} not in the automaton alphabet")
    nt_name = {n: f"nt-{_sym(n)}" for n in nts}
    t_name = {a: _sym(a) for a in dfa.alphabet}
    if len(set(nt_name.values())) != len(nts) or len(set(t_name.values())) != len(dfa.alphabet):
        raise ValueError("symbol names collide after lowercasing")

    d = [
        "(define (domain grammar-intersection)",
        "  (:requirements :hierarchy :typing)",
        "  (:types dstate - object)",
        "  (:predicates",
        "    (cur ?q - dstate)",
        "    (accepting ?q - dstate)",
    ]
    d += [f"    (delta-{t_name[a]} ?from ?to - dstate)" for a in dfa.alphabet]
    d[-1] += ")"
    d.append("")
    d.append("  (:task top :parameters ())")
    d += [f"  (:task {nt_name[n]} :parameters ())" for n in nts]
    d.append("")
    d += [
        "  (:method m-top",
        "    :parameters (?q - dstate)",
        "    :task (top)",
        f"    :ordered-subtasks (and (s0 ({nt_name[cfg.start]})) (s1 (check ?q))))",
        "",
    ]
    for i, (lhs, rhs) in enumerate(cfg.productions):
        params, subs = [], []
        for j, s in enumerate(rhs):
            if s in nt_name:
                subs.append(f"(s{j} ({nt_name[s]}))")
            else:
                params += [f"?f{j}", f"?g{j}"]
                subs.append(f"(s{j} (t-{t_name[s]} ?f{j} ?g{j}))")
        ptxt = f"{' '.join(params)} - dstate" if params else ""
        body = f"(and {' '.join(subs)})" if subs else "()"
        d += [
            f"  (:method m{i}-{nt_name[lhs]}",
            f"    :parameters ({ptxt})",
            f"    :task ({nt_name[lhs]})",
            f"    :ordered-subtasks {body})",
        ]
    d.append("")
    for a in dfa.alphabet:
        d += [
            f"  (:action t-{t_name[a]}",
            "    :parameters (?from ?to - dstate)",
            f"    :precondition (and (cur ?from) (delta-{t_name[a]} ?from ?to))",
            "    :effect (and (not (cur ?from)) (cur ?to)))",
        ]
    d += [
        "  (:action check",
        "    :parameters (?q - dstate)",
        "    :precondition (and (cur ?q) (accepting ?q))",
        "    :effect ())",
        ")",
    ]

    q_name = {q: f"q{i}" for i, q in enumerate(dfa.states)}
    init = [f"(cur {q_name[dfa.start]})"]
    init += [f"(accepting {q_name[q]})" for q in dfa.states if q in dfa.accepting]
    init += [f"(delta-{t_name[a]} {q_name[q]} {q_name[dfa.delta[(q, a)]]})"
             for a in dfa.alphabet for q in dfa.states]
    p = [
        f"(define (problem grammar-s{seed})",
        "  (:domain grammar-intersection)",
        f"  (:objects {' '.join(q_name[q] for q in dfa.states)} - dstate)",
        "  (:htn :ordered-subtasks (top))",
        "  (:init",
    ]
    p += [f"    {a}" for a in init]
    p[-1] += ")"
    p.append(")")
    return "\n".join(d) + "\n", "\n".join(p) + "\n"


def anbn() -> Grammar:
    """aⁿbⁿ for n ≥ 1 in the two-symbol normal form."""
    return Grammar("S", (
        ("S", ("A", "T")),
        ("S", ("A", "B")),
        ("T", ("S", "B")),
        ("A", ("a",)),
        ("B", ("b",)),
    ))


def ab_star() -> Dfa:
    """(ab)* over {a, b}, with an explicit sink."""
    return Dfa(
        ("even", "odd", "sink"), ("a", "b"),
        {("even", "a"): "odd", ("even", "b"): "sink",
         ("odd", "a"): "sink", ("odd", "b"): "even",
         ("sink", "a"): "sink", ("sink", "b"): "sink"},
        "even", frozenset({"even"}),
    )


def random_grammar_pair(seed: int, max_nonterminals: int = 4, alphabet: tuple[str, ...] = ("a", "b"),
                        max_states: int = 3) -> tuple[Grammar, Dfa]:
    """Random normalized grammar (no empty productions) and random total automaton."""
    rng = random.Random(seed)
    nts = [f"N{i}" for i in range(rng.randint(1, max_nonterminals))]
    prods = []
    for n in nts:
        for _ in range(rng.randint(1, 3)):
            k = rng.choice((1, 2, 2))
            rhs = tuple(rng.choice(nts) if rng.random() < 0.5 else rng.choice(alphabet) for _ in range(k))
            if rhs not in [r for l, r in prods if l == n]:
                prods.append((n, rhs))
    states = tuple(f"s{i}" for i in range(rng.randint(1, max_states)))
    delta = {(q, a): rng.choice(states) for q in states for a in alphabet}
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return Grammar(nts[0], tuple(prods)), Dfa(states, alphabet, delta, states[0], accepting)
