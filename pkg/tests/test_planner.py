import pytest

from htnipc import (
    TRACKS,
    Mode,
    SearchConfig,
    TaskNetwork,
    Verdict,
    is_totally_ordered,
    load_bundled,
    parse_domain,
    parse_problem,
    ground,
    solve,
    solve_general,
    solve_total_order,
    verify,
)
from htnipc.model import AbstractTask, GroundAction, GroundModel, Method, abstract, prim
from htnipc.planfile import format_plan
from htnipc.planner import canonical_key, method_rank, task_lower_bounds

import oracles
from conftest import SUITES
from htnipc.harness import gen_transport, read_table

EXPECTED = """\
==>
0 (drive t1 l1 l2)
1 (load t1 l2 p1)
2 (drive t1 l2 l3)
3 (unload t1 l3 p1)
root 4
4 (deliver p1 l3) -> m-deliver 5 1 6 3
5 (get-to t1 l2) -> m-drive 7 0
7 (get-to t1 l1) -> m-noop
6 (get-to t1 l3) -> m-drive 8 2
8 (get-to t1 l2) -> m-noop
<==
"""


@pytest.mark.parametrize("solver", [solve_total_order, solve_general])
@pytest.mark.parametrize("mode", list(Mode))
def test_logistics(logistics, solver, mode):
    out = solver(logistics, SearchConfig(mode))
    assert out.solved and out.cost == 4
    assert format_plan(logistics, out.plan, out.witness) == EXPECTED
    assert verify(logistics, out.plan, out.witness).accepted


def test_logistics_oracle_optimum(logistics):
    assert oracles.optimum(logistics) == 4
    assert not any(len(p) < 4 for p in oracles.solutions(logistics))


def _one_task(methods, actions=(), init=frozenset(), facts=()):
    return GroundModel(
        facts=tuple(facts), actions=tuple(actions),
        tasks=(AbstractTask(0, "t", (), tuple(range(len(methods)))),),
        methods=tuple(methods), init=init, initial_network=TaskNetwork.sequence([abstract(0)]),
    )


def test_empty_plan_via_empty_method():
    m = _one_task([Method(0, "m-noop", 0, TaskNetwork())])
    out = solve(m, SearchConfig("optimal"))
    assert out.solved and out.plan == () and out.witness.roots == (0,)
    assert out.witness.nodes[0].method == 0 and out.witness.nodes[0].children == ()


def test_unreachable_method_precondition():
    from htnipc.model import Fact
    m = _one_task([Method(0, "m", 0, TaskNetwork(), pre=frozenset({0}))], facts=[Fact(0, "never")])
    for solver in (solve_total_order, solve_general):
        assert solver(m, SearchConfig("optimal")).verdict is Verdict.UNSOLVABLE


def test_recursion_hits_bound():
    loop = Method(0, "m", 0, TaskNetwork.sequence([abstract(0), abstract(0)]))
    m = _one_task([loop])
    out = solve_general(m, SearchConfig("satisficing", max_network_size=6))
    assert out.verdict is Verdict.BOUND_EXHAUSTED and out.plan is None and out.witness is None


def test_empty_initial_network():
    m = GroundModel((), (), (), (), frozenset(), TaskNetwork())
    out = solve_general(m)
    assert out.solved and out.plan == ()


def test_total_order_precondition():
    model = load_bundled("transport-unordered", "p01")
    assert not is_totally_ordered(model)
    with pytest.raises(ValueError):
        solve_total_order(model)
    with pytest.raises(ValueError):
        SearchConfig("optimal", strategy="greedy")


def test_tracks():
    assert len(TRACKS) == 6
    assert all(c.strategy.value == "uniform-cost" for k, c in TRACKS.items() if k.startswith("optimal"))


@pytest.mark.parametrize("instance", ["p01", "p02", "p03"])
def test_unordered_transport_optimal(instance):
    model = load_bundled("transport-unordered", instance)
    out = solve_general(model, SearchConfig("optimal"))
    assert out.solved and verify(model, out.plan, out.witness).accepted
    table = read_table(SUITES / "transport-unordered" / "optima.txt")
    assert out.cost == table[("transport-unordered", instance)]


def test_two_unordered_deliveries_any_interleaving():
    dtext, ptext = gen_transport(2, 2, 3, 7, ordered=False)
    d = parse_domain(dtext)
    m, _ = ground(d, parse_problem(ptext, d))
    out = solve(m, SearchConfig("satisficing"))
    assert out.solved and verify(m, out.plan, out.witness).accepted
    assert oracles.executable(m, out.plan)


def test_general_matches_total_order_cost(logistics):
    a = solve_total_order(logistics, SearchConfig("optimal"))
    b = solve_general(logistics, SearchConfig("optimal"))
    assert a.cost == b.cost == 4


def test_deterministic(logistics):
    runs = [solve(logistics, SearchConfig("satisficing", seed=s)) for s in (0, 0, 5)]
    assert len({(r.plan, format_plan(logistics, r.plan, r.witness)) for r in runs}) == 1


def test_static_bounds(logistics):
    cost, length = task_lower_bounds(logistics)
    root = logistics.initial_network.labels[0].index
    assert cost[root] == 2 and length[root] == 2  # load + unload when already in place
    ranks = method_rank(logistics)
    for t, ms in ranks.items():
        sizes = [len(logistics.methods[x].network.nodes) for x in ms]
        assert sizes == sorted(sizes)


def test_canonical_key_isomorphism():
    a = TaskNetwork((0, 1, 2), {0: prim(0), 1: prim(1), 2: prim(0)}, frozenset({(0, 1)}))
    b = TaskNetwork((5, 9, 7), {5: prim(0), 9: prim(1), 7: prim(0)}, frozenset({(7, 9)}))
    c = TaskNetwork((0, 1, 2), {0: prim(0), 1: prim(1), 2: prim(0)}, frozenset({(1, 0)}))
    assert canonical_key(a) == canonical_key(b) != canonical_key(c)


def _check_against_oracle(model, seed):
    sols = oracles.solutions(model)
    best = min((model.plan_cost(p) for p in sols), default=None)
    solvers = [solve_general] + ([solve_total_order] if is_totally_ordered(model) else [])
    for solver in solvers:
        for mode in ("optimal", "satisficing"):
            cfg = SearchConfig(mode, max_plan_length=6, max_network_size=8)
            out = solver(model, cfg)
            assert out.solved == bool(sols), (seed, solver.__name__, mode, out.verdict)
            if out.solved:
                assert oracles.plan_names(model, out.plan) in {oracles.plan_names(model, p) for p in sols}
                assert verify(model, out.plan, out.witness).accepted
                if mode == "optimal":
                    assert out.cost == best
            else:
                assert out.verdict in (Verdict.UNSOLVABLE, Verdict.BOUND_EXHAUSTED)


@pytest.mark.parametrize("seed", range(40))
def test_random_models_match_oracle(seed):
    _check_against_oracle(oracles.random_model(seed, partial=seed % 2 == 0, costs=seed % 3 == 0), seed)


@pytest.mark.parametrize("seed", range(30))
def test_duplicate_detection_never_changes_verdicts(seed):
    model = oracles.random_model(1000 + seed, partial=True)
    for solver in (solve_general,) + ((solve_total_order,) if is_totally_ordered(model) else ()):
        on = solver(model, SearchConfig("satisficing", max_plan_length=6, max_network_size=8))
        off = solver(model, SearchConfig("satisficing", max_plan_length=6, max_network_size=8,
                                         duplicate_detection=False))
        assert on.solved == off.solved


def test_stats_lines(logistics):
    out = solve(logistics, SearchConfig("optimal"))
    lines = out.stats_lines()
    assert lines[0] == "verdict=solved" and all("=" in l for l in lines)
    assert out.stats["expanded"] > 0


def test_time_limit():
    dtext, ptext = gen_transport(2, 3, 6, 1, ordered=False)
    d = parse_domain(dtext)
    m, _ = ground(d, parse_problem(ptext, d))
    out = solve(m, SearchConfig("optimal", time_limit=0.2))
    assert out.verdict is Verdict.TIMEOUT


def test_action_costs_respected():
    cheap = GroundAction(0, "cheap", (), frozenset(), frozenset(), frozenset(), cost=1)
    pricey = GroundAction(1, "pricey", (), frozenset(), frozenset(), frozenset(), cost=5)
    m = _one_task([
        Method(0, "one", 0, TaskNetwork.sequence([prim(1)])),
        Method(1, "three", 0, TaskNetwork.sequence([prim(0)] * 3)),
    ], actions=[cheap, pricey])
    out = solve(m, SearchConfig("optimal"))
    assert out.cost == 3 and len(out.plan) == 3
