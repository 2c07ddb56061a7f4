import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htnipc import (
    GroundAction,
    PreconditionUnsatisfied,
    TaskNetwork,
    TaskRef,
    apply_action,
    apply_method,
    classical_to_htn,
    decompose,
    is_executable,
    linearizations,
)
from htnipc.errors import InvalidNetwork, MethodTaskMismatch, NodeNotFound
from htnipc.model import Fact, Method, abstract, prim

import oracles


def fid(model, text):
    name, *args = text.strip("()").split()
    return model.fact_index[(name, tuple(args))]


def aid(model, text):
    name, *args = text.strip("()").split()
    return model.action_index[(name, tuple(args))]


def test_apply_action_substitutes(logistics):
    m = logistics
    drive = m.actions[aid(m, "(drive t1 l1 l2)")]
    state = frozenset({fid(m, "(at t1 l1)"), fid(m, "(road l1 l2)")})
    assert apply_action(state, drive) == {fid(m, "(at t1 l2)"), fid(m, "(road l1 l2)")}


def test_apply_action_identity():
    noop = GroundAction(0, "noop", (), frozenset(), frozenset(), frozenset())
    assert apply_action(frozenset(), noop) == frozenset()


def test_apply_action_missing_precondition(logistics):
    m = logistics
    drive = m.actions[aid(m, "(drive t1 l1 l2)")]
    with pytest.raises(PreconditionUnsatisfied) as e:
        apply_action(frozenset({fid(m, "(at t1 l2)")}), drive, m.facts)
    assert "(at t1 l1)" in e.value.missing


def test_add_delete_overlap_rejected():
    with pytest.raises(ValueError):
        GroundAction(0, "x", (), frozenset(), frozenset({1}), frozenset({1}))


def test_is_executable(logistics):
    m = logistics
    ok = [aid(m, "(drive t1 l1 l2)"), aid(m, "(load t1 l2 p1)")]
    assert is_executable(m, []).executable and is_executable(m, []).state == m.init
    run = is_executable(m, ok)
    assert run.executable and run.state == apply_action(apply_action(m.init, m.actions[ok[0]]), m.actions[ok[1]])
    bad = is_executable(m, ok[::-1])
    assert not bad.executable and bad.failed_step == 0


def test_apply_method_substitutes_network(logistics):
    m = logistics
    tn = m.initial_network
    (root,) = tn.nodes
    deliver = m.methods[m.tasks[tn.labels[root].index].methods[0]]
    out = apply_method(tn, root, deliver)
    assert len(out.nodes) == 4 and out.is_total_order()
    names = [m.task_str(out.labels[n]).split()[0] for n in out.topological_order()]
    assert names == ["(get-to", "(load", "(get-to", "(unload"]


def test_empty_method_removes_first_node(logistics):
    m = logistics
    noop = next(x for x in m.methods if x.name == "m-noop")
    tn = TaskNetwork.sequence([abstract(noop.task), prim(0)])
    out = apply_method(tn, 0, noop)
    assert out.nodes == (1,) and not out.ordering


def test_empty_method_keeps_outer_order():
    empty = Method(0, "e", 0, TaskNetwork())
    tn = TaskNetwork.sequence([prim(0), abstract(0), prim(1)])
    out = apply_method(tn, 1, empty)
    assert out.closure() == {(0, 2)}


def test_two_unordered_subtasks_inherit_order():
    sub = TaskNetwork.unordered([prim(1), prim(2)])
    m = Method(0, "m", 0, sub)
    tn = TaskNetwork.sequence([prim(0), abstract(0), prim(3)])
    out, new = decompose(tn, 1, m)
    orders = [[out.labels[n].index for n in o] for o in linearizations(out).orders]
    assert sorted(orders) == [[0, 1, 2, 3], [0, 2, 1, 3]]


def test_apply_method_errors():
    m = Method(0, "m", 0, TaskNetwork())
    tn = TaskNetwork.sequence([prim(0)])
    with pytest.raises(NodeNotFound):
        apply_method(tn, 5, m)
    with pytest.raises(MethodTaskMismatch):
        apply_method(tn, 0, m)


def test_network_rejects_cycles():
    with pytest.raises(InvalidNetwork):
        TaskNetwork((0, 1), {0: prim(0), 1: prim(0)}, frozenset({(0, 1), (1, 0)}))
    with pytest.raises(InvalidNetwork):
        TaskNetwork((0,), {0: prim(0)}, frozenset({(0, 0)}))


def test_linearizations_small_cases():
    assert linearizations(TaskNetwork()).orders == [[]]
    assert linearizations(TaskNetwork.sequence([prim(0)] * 3)).orders == [[0, 1, 2]]
    two = TaskNetwork.unordered([prim(0), prim(1)])
    brute = [list(p) for p in itertools.permutations(two.nodes)]
    assert linearizations(two).orders == brute == [[0, 1], [1, 0]]


def test_linearizations_cap():
    tn = TaskNetwork.unordered([prim(0)] * 4)
    res = linearizations(tn, cap=5)
    assert len(res.orders) == 5 and res.cap_exceeded
    assert not linearizations(tn, cap=24).cap_exceeded


@st.composite
def networks(draw):
    n = draw(st.integers(0, 5))
    pairs = draw(st.sets(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0)))))
    order = frozenset((a, b) for a, b in pairs if a < b)
    labels = {i: prim(draw(st.integers(0, 2))) for i in range(n)}
    return TaskNetwork(tuple(range(n)), labels, order)


@given(networks(), networks(), st.data())
@settings(max_examples=150, deadline=None)
def test_decomposition_refines_linearizations(outer, inner, data):
    """Deleting inserted nodes from any linearization of the result gives one of the source."""
    if not outer.nodes:
        return
    node = data.draw(st.sampled_from(outer.nodes))
    tn = TaskNetwork(outer.nodes, {**outer.labels, node: abstract(0)}, outer.ordering)
    out, new = decompose(tn, node, Method(0, "m", 0, inner))
    out.topological_order()  # acyclic by construction
    source = {tuple(o) for o in linearizations(tn).orders}
    for order in linearizations(out, cap=2000).orders:
        kept = [n for n in order if n not in new]
        # some position for the decomposed node must exist
        assert any(tuple(kept[:i] + [node] + kept[i:]) in source for i in range(len(kept) + 1))


def test_apply_action_idempotent_when_effects_hold(logistics):
    m = logistics
    for a in m.actions:
        state = (m.init | a.pre | a.add) - a.delete
        if a.pre <= state:
            assert apply_action(apply_action(state, a), a) == apply_action(state, a) == state


def _strips(goal_in_init=False, reachable=True):
    facts = (Fact(0, "g"), Fact(1, "h"))
    acts = [GroundAction(0, "a", (), frozenset(), frozenset({0}), frozenset())] if reachable else []
    init = {0} if goal_in_init else set()
    return classical_to_htn(acts, init, {0}, facts)


def test_classical_goal_in_init():
    m = _strips(goal_in_init=True)
    check = m.action_index[("goal-check", ())]
    assert (check,) in oracles.solutions(m, max_len=3)


def test_classical_single_action():
    m = _strips()
    sols = oracles.solutions(m, max_len=3)
    shortest = min(sols, key=len)
    assert oracles.plan_names(m, shortest) == ("(a)", "(goal-check)")


def test_classical_unreachable_goal():
    m = _strips(reachable=False)
    assert not oracles.solutions(m, max_len=6)


def _classical_plans(actions, init, goal, bound):
    out = set()
    for k in range(bound + 1):
        for seq in itertools.product(range(len(actions)), repeat=k):
            s = frozenset(init)
            ok = True
            for a in seq:
                if not actions[a].pre <= s:
                    ok = False
                    break
                s = (s - actions[a].delete) | actions[a].add
            if ok and goal <= s:
                out.add(seq)
    return out


@pytest.mark.parametrize("seed", range(15))
def test_classical_solution_sets_match(seed):
    rng = random.Random(seed)
    facts = tuple(Fact(i, f"f{i}") for i in range(4))
    sub = lambda p: frozenset(i for i in range(4) if rng.random() < p)
    acts = []
    for i in range(3):
        add = sub(0.4)
        acts.append(GroundAction(i, f"a{i}", (), sub(0.3), add, sub(0.3) - add))
    init, goal = sub(0.4), sub(0.4)
    m = classical_to_htn(acts, init, goal, facts)
    bound = 4
    htn = {p[:-1] for p in oracles.solutions(m, max_len=bound + 1, max_size=bound + 3)}
    assert htn == _classical_plans(acts, init, goal, bound)


def test_task_ref_helpers():
    assert prim(3) == TaskRef(True, 3) and abstract(2) == TaskRef(False, 2)
