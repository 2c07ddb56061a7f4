import pytest

from htnipc import (
    GroundingBlowup,
    ground,
    is_totally_ordered,
    lifted_totally_ordered,
    parse_domain,
    parse_problem,
    reachability_prune,
)
from htnipc.grounder import dump, trivially_unsolvable
from htnipc.harness import gen_transport

import oracles
from conftest import SUITES
from test_parser import bundled_pairs


def lifted(dtext, ptext):
    d = parse_domain(dtext)
    return d, parse_problem(ptext, d)


def test_logistics_drive_instances(logistics_text):
    d, p = lifted(*logistics_text)
    raw, _ = ground(d, p, prune=False)
    drives = [a for a in raw.actions if a.name == "drive"]
    # one truck, 3 x 3 (from, to) pairs before pruning
    assert len(drives) == 1 * 3 * 3
    pruned, stats = ground(d, p)
    kept = {str(a) for a in pruned.actions if a.name == "drive"}
    roads = {(f.args[0], f.args[1]) for f in pruned.facts if f.name == "road"}
    assert kept <= {f"(drive t1 {a} {b})" for a, b in roads}
    assert stats.before["actions"] == len(raw.actions)
    assert all(stats.after[k] <= stats.before[k] for k in stats.before)


def test_zero_objects_of_a_type():
    d, p = lifted(
        """(define (domain d) (:types box - object) (:predicates (p ?b - box))
          (:task t :parameters ()) (:action a :parameters (?b - box) :precondition (p ?b) :effect ())
          (:method m :parameters () :task (t) :subtasks ()))""",
        "(define (problem q) (:domain d) (:htn :ordered-subtasks (t)) (:init))")
    m, _ = ground(d, p, prune=False)
    assert m.actions == ()


def test_unsolvable_initial_task_is_kept_and_flagged():
    d, p = lifted(
        """(define (domain d) (:predicates (never))
          (:task t :parameters ()) (:action a :parameters () :precondition (never) :effect ())
          (:method m :parameters () :task (t) :ordered-subtasks (a)))""",
        "(define (problem q) (:domain d) (:htn :ordered-subtasks (t)) (:init))")
    m, _ = ground(d, p)
    assert not m.methods and trivially_unsolvable(m)
    assert len(m.initial_network.nodes) == 1


def test_prune_idempotent(logistics):
    assert reachability_prune(logistics) == logistics


def test_unreachable_action_removed():
    d, p = lifted(
        """(define (domain d) (:predicates (g) (never))
          (:task t :parameters ())
          (:action a :parameters () :precondition () :effect (g))
          (:action b :parameters () :precondition (never) :effect (g))
          (:method m1 :parameters () :task (t) :ordered-subtasks (a))
          (:method m2 :parameters () :task (t) :ordered-subtasks (b)))""",
        "(define (problem q) (:domain d) (:htn :ordered-subtasks (t)) (:init))")
    m, _ = ground(d, p)
    assert [a.name for a in m.actions] == ["a"] and len(m.methods) == 1


def test_cap():
    d, p = lifted(*[(SUITES / "logistics-mini" / f).read_text() for f in ("domain.hddl", "p01.hddl")])
    with pytest.raises(GroundingBlowup):
        ground(d, p, cap=5)


def test_negative_preconditions_compiled():
    d, p = lifted(
        """(define (domain d) (:requirements :negative-preconditions) (:predicates (done))
          (:task t :parameters ())
          (:action a :parameters () :precondition (not (done)) :effect (done))
          (:method m :parameters () :task (t) :ordered-subtasks (and (a) (a))))""",
        "(define (problem q) (:domain d) (:htn :ordered-subtasks (t)) (:init))")
    m, _ = ground(d, p, prune=False)
    assert all(f.name in {"done", "not-done"} for f in m.facts)
    assert not oracles.solutions(m)  # second (a) finds (done) true


def test_deterministic(logistics_text):
    a = dump(ground(*lifted(*logistics_text))[0])
    b = dump(ground(*lifted(*logistics_text))[0])
    assert a == b


@pytest.mark.parametrize("dom, prob", bundled_pairs())
def test_totally_ordered_agrees_with_lifted(dom, prob):
    d, p = lifted(dom.read_text(), prob.read_text())
    assert is_totally_ordered(ground(d, p, prune=False)[0]) == lifted_totally_ordered(d, p)


def test_totally_ordered_examples(logistics):
    assert is_totally_ordered(logistics)
    _, unordered = gen_transport(1, 2, 3, 0, ordered=False)
    d, p = lifted(gen_transport(1, 2, 3, 0)[0], unordered)
    assert not is_totally_ordered(ground(d, p)[0]) and not lifted_totally_ordered(d, p)
    empty = lifted(
        """(define (domain d) (:task t :parameters ())
          (:method m :parameters () :task (t) :subtasks ()))""",
        "(define (problem q) (:domain d) (:htn :ordered-subtasks (t)) (:init))")
    assert is_totally_ordered(ground(*empty)[0]) and lifted_totally_ordered(*empty)


def _named(model, plans):
    return {oracles.plan_names(model, p) for p in plans}


@pytest.mark.parametrize("seed", range(60))
def test_pruning_preserves_solutions(seed):
    m = oracles.random_model(seed, n_facts=8, partial=seed % 3 != 0)
    pruned = reachability_prune(m)
    assert _named(m, oracles.solutions(m)) == _named(pruned, oracles.solutions(pruned))
    assert reachability_prune(pruned) == pruned
