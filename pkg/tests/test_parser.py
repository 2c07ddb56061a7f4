import pytest

from htnipc import parse_domain, parse_problem, print_domain, print_problem
from htnipc.harness import anbn, ab_star, gen_grammar, gen_transport, random_grammar_pair
from htnipc.lifted import network_constraints
from htnipc.sexpr import (
    ArityMismatch,
    DomainMismatch,
    DuplicateDefinition,
    HddlSyntaxError,
    ParseError,
    TypeMismatch,
    UndeclaredSymbol,
    read,
)

from conftest import SUITES


def bundled_pairs():
    out = []
    for d in sorted(SUITES.iterdir()):
        for p in sorted(d.glob("p*.hddl")):
            out.append(pytest.param(d / "domain.hddl", p, id=f"{d.name}/{p.stem}"))
    return out


def generated_pairs():
    out = [gen_transport(t, p, l, s, ordered=s % 2 == 0)
           for s, (t, p, l) in enumerate([(1, 1, 3), (2, 3, 6), (1, 2, 4), (2, 1, 5)])]
    out.append(gen_grammar(anbn(), ab_star()))
    out += [gen_grammar(*random_grammar_pair(s), seed=s) for s in range(4)]
    return out


def test_empty_domain():
    d = parse_domain("(define (domain d))")
    assert (d.name, d.predicates, d.actions, d.tasks) == ("d", (), (), ())
    assert print_domain(d) == "(define (domain d)\n)"


def test_logistics_counts(logistics_text):
    d = parse_domain(logistics_text[0])
    assert (len(d.actions), len(d.tasks), len(d.methods), len(d.predicates)) == (3, 2, 3, 4)
    m = {x.name: x for x in d.methods}
    assert m["m-deliver"].ordered and len(m["m-deliver"].subtasks) == 4
    assert m["m-noop"].subtasks == () and m["m-noop"].pre
    assert [s.atom.name for s in m["m-drive"].subtasks] == ["get-to", "drive"]


def test_comments_and_case_are_ignored(logistics_text):
    text = logistics_text[0].replace("(:action drive", "; a comment (\n(:ACTION Drive")
    assert parse_domain(text) == parse_domain(logistics_text[0])


def test_undeclared_subtask_located(logistics_text):
    text = logistics_text[0].replace("(t0 (get-to ?t ?l1))", "(t0 (fly ?t))")
    with pytest.raises(UndeclaredSymbol) as e:
        parse_domain(text, "dom.hddl")
    line = next(i for i, l in enumerate(text.splitlines(), 1) if "(fly ?t)" in l)
    col = text.splitlines()[line - 1].index("fly") + 1
    assert (e.value.span.file, e.value.span.line, e.value.span.column) == ("dom.hddl", line, col)


def test_problem_single_ordered_task(logistics):
    assert len(logistics.initial_network.nodes) == 1


def test_problem_unordered_subtasks(logistics_text):
    d = parse_domain(logistics_text[0])
    text = logistics_text[1].replace(
        ":ordered-subtasks (deliver p1 l3)",
        ":subtasks (and (t0 (deliver p1 l3)) (t1 (deliver p1 l1)))")
    p = parse_problem(text, d)
    assert [s.id for s in p.subtasks] == ["t0", "t1"]
    assert network_constraints(p.subtasks, p.ordering, p.ordered) == frozenset()


def test_init_arity_error(logistics_text):
    d = parse_domain(logistics_text[0])
    text = logistics_text[1].replace("(at t1 l1)", "(at t1)")
    with pytest.raises(ArityMismatch) as e:
        parse_problem(text, d)
    assert e.value.span.line == 10


def test_domain_mismatch(logistics_text):
    d = parse_domain(logistics_text[0])
    with pytest.raises(DomainMismatch):
        parse_problem(logistics_text[1].replace("(:domain logistics-mini)", "(:domain other)"), d)


def test_type_mismatch(logistics_text):
    d = parse_domain(logistics_text[0])
    with pytest.raises(TypeMismatch):
        parse_problem(logistics_text[1].replace("(deliver p1 l3)", "(deliver l3 p1)"), d)


def test_duplicate_action(logistics_text):
    text = logistics_text[0].replace("(:action load", "(:action drive")
    with pytest.raises(DuplicateDefinition):
        parse_domain(text)


@pytest.mark.parametrize("text, line", [
    ("(define (domain d)", 1),
    ("(define (domain d)))", 1),
    ("(define (domain d))\n(extra)", 2),
    ("", 1),
    ("(define (domain d)\n  (:predicates (p ?x))\n  (:bogus))", 3),
])
def test_syntax_errors(text, line):
    with pytest.raises(HddlSyntaxError) as e:
        parse_domain(text)
    assert e.value.span.line == line and e.value.span.line >= 1 and e.value.span.column >= 1


def test_ordered_and_explicit_chain_agree(logistics_text):
    explicit = logistics_text[0].replace(
        """    :ordered-subtasks (and
      (t0 (get-to ?t ?l1))
      (t1 (drive ?t ?l1 ?l2))))""",
        """    :subtasks (and
      (t0 (get-to ?t ?l1))
      (t1 (drive ?t ?l1 ?l2)))
    :ordering (and (< t0 t1)))""")
    assert explicit != logistics_text[0]
    a = {m.name: m for m in parse_domain(logistics_text[0]).methods}["m-drive"]
    b = {m.name: m for m in parse_domain(explicit).methods}["m-drive"]
    assert a.constraints() == b.constraints() and a.subtasks == b.subtasks


def test_auto_subtask_ids():
    text = """(define (domain d) (:task t :parameters ()) (:action a :parameters ())
      (:method m :parameters () :task (t) :ordered-subtasks (and (a) (a))))"""
    (m,) = parse_domain(text).methods
    assert [s.id for s in m.subtasks] == ["_t0", "_t1"]


def test_action_cost_and_negative_precondition():
    text = """(define (domain d) (:requirements :negative-preconditions :action-costs)
      (:predicates (p))
      (:action a :parameters () :precondition (not (p)) :effect (and (p) (increase (total-cost) 3))))"""
    (a,) = parse_domain(text).actions
    assert a.cost == 3 and not a.pre[0].positive


def _roundtrip(dtext, ptext):
    d1 = parse_domain(dtext)
    p1 = parse_problem(ptext, d1)
    d2 = parse_domain(print_domain(d1))
    p2 = parse_problem(print_problem(p1), d2)
    assert d2 == d1 and p2 == p1
    assert print_domain(d2) == print_domain(d1) and print_problem(p2) == print_problem(p1)


@pytest.mark.parametrize("dom, prob", bundled_pairs())
def test_roundtrip_bundled(dom, prob):
    _roundtrip(dom.read_text(), prob.read_text())


@pytest.mark.parametrize("i", range(9))
def test_roundtrip_generated(i):
    _roundtrip(*generated_pairs()[i])


def test_print_deterministic(logistics_text):
    d = parse_domain(logistics_text[0])
    assert print_domain(d) == print_domain(parse_domain(logistics_text[0]))


def inject(text: str, line: int) -> str | None:
    """Put a stray keyword right after the first '(' of a line."""
    lines = text.splitlines()
    src = lines[line - 1]
    body = src.split(";", 1)[0]
    if "(" not in body:
        return None
    k = body.index("(") + 1
    lines[line - 1] = src[:k] + ":bogus " + src[k:]
    return "\n".join(lines) + "\n"


def induced_errors(dtext, ptext):
    """Yield (which, line, error) for a stray token on every line with a '('."""
    d = parse_domain(dtext)
    for which, text in (("domain", dtext), ("problem", ptext)):
        for line in range(1, len(text.splitlines()) + 1):
            bad = inject(text, line)
            if bad is None:
                continue
            try:
                if which == "domain":
                    parse_domain(bad)
                else:
                    parse_problem(bad, d)
            except ParseError as e:
                yield which, line, e
            else:
                yield which, line, None


@pytest.mark.parametrize("dom, prob", bundled_pairs())
def test_induced_errors_located(dom, prob):
    for which, line, err in induced_errors(dom.read_text(), prob.read_text()):
        assert err is not None, f"{which} line {line}: stray token accepted"
        assert err.span is not None and err.span.line == line, f"{which} line {line}: {err}"


def test_reader_spans():
    top = read("(a\n  (b c))", "f")
    assert top[1].span.line == 2 and top[1][1].span.column == 6
