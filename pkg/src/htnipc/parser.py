"""Reader and canonical printer for the hierarchical PDDL fragment.

Supported: ``:types``, ``:predicates``, ``:task``, ``:method`` (with optional
``:precondition``, ``:subtasks`` + ``:ordering`` or ``:ordered-subtasks``) and
``:action`` with conjunctive (possibly negated) preconditions and effects plus
an optional ``(increase (total-cost) N)`` cost term. Problems carry
``:objects``, an ``:htn`` block, ``:init`` and an optional ``:goal``.
"""

from __future__ import annotations

from .lifted import (
    ROOT_TYPE,
    Action,
    Atom,
    LiftedDomain,
    LiftedProblem,
    Literal,
    Method,
    Param,
    Predicate,
    Subtask,
    Task,
)
from .sexpr import (
    ArityMismatch,
    DomainMismatch,
    DuplicateDefinition,
    HddlSyntaxError,
    SList,
    SourceSpan,
    Symbol,
    TypeMismatch,
    UndeclaredSymbol,
    read,
)


# ---------------------------------------------------------------- helpers

def _sym(node, what: str) -> Symbol:
    if not isinstance(node, Symbol):
        raise HddlSyntaxError(f"expected {what}", node.span)
    return node


def _list(node, what: str) -> SList:
    if not isinstance(node, SList):
        raise HddlSyntaxError(f"expected {what}, found {node.text!r}", node.span)
    return node


def _head(lst: SList, keyword: str, what: str) -> None:
    if not lst.items or not isinstance(lst[0], Symbol) or lst[0].text != keyword:
        span = lst[0].span if lst.items else lst.span
        raise HddlSyntaxError(f"expected ({keyword} ...) for {what}", span)


def _name(node, what: str) -> Symbol:
    s = _sym(node, what)
    if s.text.startswith((":", "?")) or s.text in {"-", "and", "not"}:
        raise HddlSyntaxError(f"expected {what}, found {s.text!r}", s.span)
    return s


def _keywords(items, allowed: set[str], where: str) -> dict[str, tuple[Symbol, object]]:
    """Split ``:key value :key value ...`` into a dict; reject unknown keys."""
    out: dict[str, tuple[Symbol, object]] = {}
    i = 0
    while i < len(items):
        key = _sym(items[i], "a keyword")
        if key.text not in allowed:
            raise HddlSyntaxError(f"unexpected {key.text!r} in {where}", key.span)
        if key.text in out:
            raise DuplicateDefinition(f"{key.text} given twice in {where}", key.span)
        if i + 1 >= len(items):
            raise HddlSyntaxError(f"missing value after {key.text}", key.span)
        out[key.text] = (key, items[i + 1])
        i += 2
    return out


def _typed_list(lst: SList, variables: bool) -> list[tuple[Symbol, str, SourceSpan | None]]:
    """Parse ``a b - t c`` into ``[(a, t), (b, t), (c, object)]``."""
    out: list[tuple[Symbol, str, SourceSpan | None]] = []
    pending: list[Symbol] = []
    items = list(lst.items)
    i = 0
    while i < len(items):
        tok = _sym(items[i], "a name")
        if tok.text == "-":
            if not pending or i + 1 >= len(items):
                raise HddlSyntaxError("dangling '-' in typed list", tok.span)
            typ = _name(items[i + 1], "a type name")
            out += [(p, typ.text, typ.span) for p in pending]
            pending = []
            i += 2
            continue
        if variables and not tok.text.startswith("?"):
            raise HddlSyntaxError(f"expected a variable, found {tok.text!r}", tok.span)
        if not variables and tok.text.startswith(("?", ":")):
            raise HddlSyntaxError(f"expected a name, found {tok.text!r}", tok.span)
        pending.append(tok)
        i += 1
    out += [(p, ROOT_TYPE, None) for p in pending]
    return out


def _atom(node, what: str = "an atom") -> Atom:
    lst = _list(node, what)
    if not lst.items:
        raise HddlSyntaxError(f"empty {what}", lst.span)
    head = _name(lst[0], "a predicate or task name")
    args = tuple(_sym(a, "a term").text for a in lst.items[1:])
    for a in lst.items[1:]:
        if isinstance(a, Symbol) and a.text.startswith(":"):
            raise HddlSyntaxError(f"unexpected {a.text!r} in {what}", a.span)
    return Atom(head.text, args, head.span)


class _Scope:
    """Variable (or object) name -> type, with span info for diagnostics."""

    def __init__(self, domain: LiftedDomain, names: dict[str, str], ground: bool):
        self.domain = domain
        self.names = names
        self.ground = ground
        self.arg_spans: dict[int, SourceSpan] = {}

    def check_args(self, atom: Atom, node: SList, params: tuple[Param, ...], what: str) -> None:
        if len(atom.args) != len(params):
            raise ArityMismatch(
                f"{what} {atom.name} expects {len(params)} argument(s), got {len(atom.args)}",
                atom.span,
            )
        for sym, (_, ptype) in zip(node.items[1:], params):
            arg = sym.text
            if arg not in self.names:
                kind = "object" if self.ground else "variable"
                if not self.ground and not arg.startswith("?"):
                    kind = "constant"
                raise UndeclaredSymbol(f"undeclared {kind} {arg!r}", sym.span)
            atype = self.names[arg]
            if self.ground:
                ok = self.domain.is_subtype(atype, ptype)
            else:
                ok = self.domain.is_subtype(atype, ptype) or self.domain.is_subtype(ptype, atype)
            if not ok:
                raise TypeMismatch(f"{arg!r} of type {atype} cannot fill a {ptype} slot of {atom.name}", sym.span)


def _literals(node, scope: _Scope, what: str, allow_cost: bool = False):
    """Conjunction of literals over declared predicates; returns (literals, cost)."""
    lst = _list(node, what)
    literals: list[Literal] = []
    cost = None

    def visit(n):
        nonlocal cost
        n = _list(n, what)
        if not n.items:
            return
        head = _sym(n[0], "a predicate name")
        if head.text == "and":
            for sub in n.items[1:]:
                visit(sub)
            return
        if head.text == "not":
            if len(n) != 2:
                raise HddlSyntaxError("(not ...) takes exactly one atom", head.span)
            inner = _list(n[1], "an atom")
            literals.append(Literal(_checked_atom(inner), False))
            return
        if head.text == "increase" and allow_cost:
            if len(n) != 3 or not isinstance(n[1], SList) or [s.text for s in n[1].items if isinstance(s, Symbol)] != ["total-cost"]:
                raise HddlSyntaxError("only (increase (total-cost) N) is supported", head.span)
            amount = _sym(n[2], "an integer cost")
            try:
                value = int(amount.text)
            except ValueError:
                raise HddlSyntaxError(f"cost must be a non-negative integer, found {amount.text!r}", amount.span) from None
            if value < 0:
                raise HddlSyntaxError("cost must be non-negative", amount.span)
            cost = (cost or 0) + value
            return
        if head.text in {"or", "imply", "forall", "exists", "when", "=", "increase", "decrease"}:
            raise HddlSyntaxError(f"{head.text!r} is outside the supported fragment", head.span)
        literals.append(Literal(_checked_atom(n)))

    def _checked_atom(n: SList) -> Atom:
        atom = _atom(n)
        pred = scope.domain.predicate_map.get(atom.name)
        if pred is None:
            raise UndeclaredSymbol(f"undeclared predicate {atom.name!r}", atom.span)
        scope.check_args(atom, n, pred.params, "predicate")
        return atom

    visit(lst)
    return tuple(literals), cost


def _subtask_net(node, scope: _Scope, allow_ids: bool = True) -> list[tuple[Subtask, SList]]:
    lst = _list(node, "a subtask network")
    if not lst.items:
        return []
    head = lst[0]
    entries = list(lst.items[1:]) if isinstance(head, Symbol) and head.text == "and" else [lst]
    out: list[tuple[Subtask, SList]] = []
    seen: set[str] = set()
    for i, e in enumerate(entries):
        e = _list(e, "a subtask")
        if len(e) == 2 and isinstance(e[0], Symbol) and isinstance(e[1], SList):
            label = _name(e[0], "a subtask id")
            task_node = e[1]
            sid, sid_span = label.text, label.span
        else:
            task_node = e
            sid, sid_span = f"_t{i}", e.span
        if sid in seen:
            raise DuplicateDefinition(f"duplicate subtask id {sid!r}", sid_span)
        seen.add(sid)
        atom = _atom(task_node, "a subtask")
        d = scope.domain
        target = d.action_map.get(atom.name) or d.task_map.get(atom.name)
        if target is None:
            raise UndeclaredSymbol(f"undeclared task or action {atom.name!r}", atom.span)
        scope.check_args(atom, task_node, target.params, "task")
        out.append((Subtask(sid, atom), task_node))
    return out


def _ordering(node, ids: dict[str, None]) -> tuple[tuple[str, str], ...]:
    lst = _list(node, "an ordering")
    if not lst.items:
        return ()
    head = lst[0]
    entries = list(lst.items[1:]) if isinstance(head, Symbol) and head.text == "and" else [lst]
    out = []
    for e in entries:
        e = _list(e, "an ordering constraint")
        if len(e) != 3 or not isinstance(e[0], Symbol) or e[0].text != "<":
            raise HddlSyntaxError("expected (< id id)", e.span)
        a, b = _sym(e[1], "a subtask id"), _sym(e[2], "a subtask id")
        for s in (a, b):
            if s.text not in ids:
                raise UndeclaredSymbol(f"undeclared subtask id {s.text!r}", s.span)
        if a.text == b.text:
            raise HddlSyntaxError("reflexive ordering constraint", a.span)
        out.append((a.text, b.text))
    _check_acyclic(out, e.span if entries else lst.span)
    return tuple(out)


def _check_acyclic(pairs, span) -> None:
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    state: dict[str, int] = {}

    def dfs(n):
        state[n] = 1
        for s in succ.get(n, ()):
            if state.get(s) == 1 or (state.get(s) is None and dfs(s)):
                return True
        state[n] = 2
        return False

    for n in list(succ):
        if state.get(n) is None and dfs(n):
            raise HddlSyntaxError("ordering constraints contain a cycle", span)


def _network_section(fields: dict, scope: _Scope, where: str):
    has_sub = [k for k in (":subtasks", ":tasks") if k in fields]
    has_ord = [k for k in (":ordered-subtasks", ":ordered-tasks") if k in fields]
    if len(has_sub) + len(has_ord) > 1:
        key = fields[(has_sub + has_ord)[1]][0]
        raise HddlSyntaxError(f"{where} declares more than one subtask section", key.span)
    if has_ord:
        if ":ordering" in fields:
            raise HddlSyntaxError(":ordering not allowed with ordered subtasks", fields[":ordering"][0].span)
        entries = _subtask_net(fields[has_ord[0]][1], scope)
        return tuple(s for s, _ in entries), (), True
    if has_sub:
        entries = _subtask_net(fields[has_sub[0]][1], scope)
        subtasks = tuple(s for s, _ in entries)
        ordering = ()
        if ":ordering" in fields:
            ordering = _ordering(fields[":ordering"][1], {s.id: None for s in subtasks})
        return subtasks, ordering, False
    if ":ordering" in fields:
        raise UndeclaredSymbol(":ordering without subtasks", fields[":ordering"][0].span)
    return (), (), False


def _params(node, domain_types: set[str], where: str) -> tuple[Param, ...]:
    lst = _list(node, "a parameter list")
    out = []
    seen = set()
    for sym, typ, tspan in _typed_list(lst, variables=True):
        if typ not in domain_types:
            raise UndeclaredSymbol(f"undeclared type {typ!r}", tspan)
        if sym.text in seen:
            raise DuplicateDefinition(f"parameter {sym.text} repeated in {where}", sym.span)
        seen.add(sym.text)
        out.append((sym.text, typ))
    return tuple(out)


# ---------------------------------------------------------------- domain

def parse_domain(text: str, file: str = "<domain>") -> LiftedDomain:
    top = read(text, file)
    _head(top, "define", "a domain")
    if len(top) < 2:
        raise HddlSyntaxError("missing (domain NAME)", top.span)
    header = _list(top[1], "(domain NAME)")
    _head(header, "domain", "the domain header")
    if len(header) != 2:
        raise HddlSyntaxError("expected (domain NAME)", header.span)
    name = _name(header[1], "a domain name").text

    requirements: list[str] = []
    types: list[tuple[str, str]] = []
    type_spans: dict[str, SourceSpan] = {}
    predicates: list[Predicate] = []
    task_nodes: list[SList] = []
    method_nodes: list[SList] = []
    action_nodes: list[SList] = []
    seen_sections: set[str] = set()

    for sec in top.items[2:]:
        sec = _list(sec, "a domain section")
        if not sec.items:
            raise HddlSyntaxError("empty section", sec.span)
        key = _sym(sec[0], "a section keyword")
        k = key.text
        if k in {":requirements", ":types", ":predicates"}:
            if k in seen_sections:
                raise DuplicateDefinition(f"{k} section given twice", key.span)
            seen_sections.add(k)
        if k == ":requirements":
            for r in sec.items[1:]:
                r = _sym(r, "a requirement")
                if not r.text.startswith(":"):
                    raise HddlSyntaxError(f"requirement must start with ':', found {r.text!r}", r.span)
                requirements.append(r.text)
        elif k == ":types":
            for sym, parent, _ in _typed_list(SList(sec.items[1:], sec.span), variables=False):
                if sym.text == ROOT_TYPE or sym.text in type_spans:
                    raise DuplicateDefinition(f"type {sym.text!r} declared twice", sym.span)
                type_spans[sym.text] = sym.span
                types.append((sym.text, parent))
        elif k == ":predicates":
            for p in sec.items[1:]:
                p = _list(p, "a predicate declaration")
                if not p.items:
                    raise HddlSyntaxError("empty predicate declaration", p.span)
                pname = _name(p[0], "a predicate name")
                predicates.append((pname, SList(p.items[1:], p.span)))
        elif k == ":task":
            task_nodes.append(sec)
        elif k == ":method":
            method_nodes.append(sec)
        elif k == ":action":
            action_nodes.append(sec)
        else:
            raise HddlSyntaxError(f"unknown domain section {k!r}", key.span)

    type_names = {ROOT_TYPE, *type_spans}
    for t, parent in types:
        if parent not in type_names:
            raise UndeclaredSymbol(f"undeclared parent type {parent!r}", type_spans[t])
    # the hierarchy must reach the root from every type
    parent_of = dict(types)
    for t in parent_of:
        seen = {t}
        cur = t
        while cur != ROOT_TYPE:
            cur = parent_of.get(cur, ROOT_TYPE)
            if cur in seen:
                raise HddlSyntaxError(f"type hierarchy cycle through {t!r}", type_spans[t])
            seen.add(cur)

    preds: list[Predicate] = []
    pred_names: set[str] = set()
    for pname, plist in predicates:
        if pname.text in pred_names:
            raise DuplicateDefinition(f"predicate {pname.text!r} declared twice", pname.span)
        pred_names.add(pname.text)
        preds.append(Predicate(pname.text, _params(plist, type_names, pname.text)))

    operator_names: dict[str, SourceSpan] = {}

    def claim(sym: Symbol) -> None:
        if sym.text in operator_names:
            raise DuplicateDefinition(f"{sym.text!r} already declared as a task or action", sym.span)
        operator_names[sym.text] = sym.span

    tasks = []
    for sec in task_nodes:
        if len(sec) < 2:
            raise HddlSyntaxError("missing task name", sec.span)
        tname = _name(sec[1], "a task name")
        claim(tname)
        fields = _keywords(sec.items[2:], {":parameters"}, f"task {tname.text}")
        params = _params(fields[":parameters"][1], type_names, tname.text) if ":parameters" in fields else ()
        tasks.append(Task(tname.text, params))

    action_heads = []
    for sec in action_nodes:
        if len(sec) < 2:
            raise HddlSyntaxError("missing action name", sec.span)
        aname = _name(sec[1], "an action name")
        claim(aname)
        fields = _keywords(sec.items[2:], {":parameters", ":precondition", ":effect"}, f"action {aname.text}")
        params = _params(fields[":parameters"][1], type_names, aname.text) if ":parameters" in fields else ()
        action_heads.append((aname, params, fields))

    partial = LiftedDomain(
        name=name,
        requirements=tuple(requirements),
        types=tuple(types),
        predicates=tuple(preds),
        tasks=tuple(tasks),
        actions=tuple(Action(a.text, p) for a, p, _ in action_heads),
    )

    actions = []
    for aname, params, fields in action_heads:
        scope = _Scope(partial, dict(params), ground=False)
        pre = eff = ()
        cost = None
        if ":precondition" in fields:
            pre, _ = _literals(fields[":precondition"][1], scope, "a precondition")
        if ":effect" in fields:
            eff, cost = _literals(fields[":effect"][1], scope, "an effect", allow_cost=True)
        actions.append(Action(aname.text, params, pre, eff, cost))
    partial = LiftedDomain(
        name=name,
        requirements=tuple(requirements),
        types=tuple(types),
        predicates=tuple(preds),
        tasks=tuple(tasks),
        actions=tuple(actions),
    )

    methods = []
    method_names: set[str] = set()
    for sec in method_nodes:
        if len(sec) < 2:
            raise HddlSyntaxError("missing method name", sec.span)
        mname = _name(sec[1], "a method name")
        if mname.text in method_names:
            raise DuplicateDefinition(f"method {mname.text!r} declared twice", mname.span)
        method_names.add(mname.text)
        fields = _keywords(
            sec.items[2:],
            {":parameters", ":task", ":precondition", ":subtasks", ":tasks",
             ":ordered-subtasks", ":ordered-tasks", ":ordering"},
            f"method {mname.text}",
        )
        params = _params(fields[":parameters"][1], type_names, mname.text) if ":parameters" in fields else ()
        scope = _Scope(partial, dict(params), ground=False)
        if ":task" not in fields:
            raise HddlSyntaxError(f"method {mname.text} lacks :task", mname.span)
        tnode = _list(fields[":task"][1], "a task")
        tatom = _atom(tnode, "a task")
        task = partial.task_map.get(tatom.name)
        if task is None:
            raise UndeclaredSymbol(f"undeclared task {tatom.name!r}", tatom.span)
        scope.check_args(tatom, tnode, task.params, "task")
        pre = ()
        if ":precondition" in fields:
            pre, _ = _literals(fields[":precondition"][1], scope, "a method precondition")
        subtasks, ordering, ordered = _network_section(fields, scope, f"method {mname.text}")
        methods.append(Method(mname.text, params, tatom, subtasks, ordering, ordered, pre))

    return LiftedDomain(
        name=name,
        requirements=tuple(requirements),
        types=tuple(types),
        predicates=tuple(preds),
        tasks=tuple(tasks),
        methods=tuple(methods),
        actions=tuple(actions),
    )


# ---------------------------------------------------------------- problem

def parse_problem(text: str, domain: LiftedDomain, file: str = "<problem>") -> LiftedProblem:
    top = read(text, file)
    _head(top, "define", "a problem")
    if len(top) < 2:
        raise HddlSyntaxError("missing (problem NAME)", top.span)
    header = _list(top[1], "(problem NAME)")
    _head(header, "problem", "the problem header")
    if len(header) != 2:
        raise HddlSyntaxError("expected (problem NAME)", header.span)
    name = _name(header[1], "a problem name").text

    sections: dict[str, SList] = {}
    for sec in top.items[2:]:
        sec = _list(sec, "a problem section")
        if not sec.items:
            raise HddlSyntaxError("empty section", sec.span)
        key = _sym(sec[0], "a section keyword")
        if key.text not in {":domain", ":objects", ":htn", ":init", ":goal", ":requirements", ":metric"}:
            raise HddlSyntaxError(f"unknown problem section {key.text!r}", key.span)
        if key.text in sections:
            raise DuplicateDefinition(f"{key.text} section given twice", key.span)
        sections[key.text] = sec

    if ":domain" not in sections:
        raise HddlSyntaxError("missing (:domain NAME)", top.span)
    dsec = sections[":domain"]
    if len(dsec) != 2:
        raise HddlSyntaxError("expected (:domain NAME)", dsec.span)
    dname = _name(dsec[1], "a domain name")
    if dname.text != domain.name:
        raise DomainMismatch(f"problem is for domain {dname.text!r}, not {domain.name!r}", dname.span)

    objects: list[tuple[str, str]] = []
    names: dict[str, str] = {}
    if ":objects" in sections:
        sec = sections[":objects"]
        for sym, typ, tspan in _typed_list(SList(sec.items[1:], sec.span), variables=False):
            if typ not in domain.type_names:
                raise UndeclaredSymbol(f"undeclared type {typ!r}", tspan)
            if sym.text in names:
                raise DuplicateDefinition(f"object {sym.text!r} declared twice", sym.span)
            names[sym.text] = typ
            objects.append((sym.text, typ))
    scope = _Scope(domain, names, ground=True)

    if ":htn" not in sections:
        raise HddlSyntaxError("missing (:htn ...) initial task network", top.span)
    hsec = sections[":htn"]
    fields = _keywords(
        hsec.items[1:],
        {":parameters", ":subtasks", ":tasks", ":ordered-subtasks", ":ordered-tasks", ":ordering"},
        ":htn",
    )
    if ":parameters" in fields:
        plist = _list(fields[":parameters"][1], "a parameter list")
        if plist.items:
            raise HddlSyntaxError("parameters of the initial network are not supported", plist.span)
    subtasks, ordering, ordered = _network_section(fields, scope, ":htn")

    init: list[Atom] = []
    if ":init" in sections:
        for a in sections[":init"].items[1:]:
            a = _list(a, "an init atom")
            atom = _atom(a, "an init atom")
            pred = domain.predicate_map.get(atom.name)
            if pred is None:
                raise UndeclaredSymbol(f"undeclared predicate {atom.name!r}", atom.span)
            scope.check_args(atom, a, pred.params, "predicate")
            init.append(atom)

    goal = None
    if ":goal" in sections:
        gsec = sections[":goal"]
        if len(gsec) != 2:
            raise HddlSyntaxError("expected (:goal FORMULA)", gsec.span)
        goal, _ = _literals(gsec[1], scope, "a goal")

    return LiftedProblem(
        name=name,
        domain=dname.text,
        objects=tuple(objects),
        init=tuple(init),
        subtasks=subtasks,
        ordering=ordering,
        ordered=ordered,
        goal=goal,
    )


# ---------------------------------------------------------------- printing

def _fmt_params(params) -> str:
    out: list[str] = []
    i = 0
    while i < len(params):
        j = i
        while j < len(params) and params[j][1] == params[i][1]:
            j += 1
        out += [v for v, _ in params[i:j]] + ["-", params[i][1]]
        i = j
    return " ".join(out)


def _fmt_conj(literals, extra: list[str] | None = None) -> str:
    parts = [str(l) for l in literals] + (extra or [])
    if not parts:
        return "()"
    return f"(and {' '.join(parts)})"


def _fmt_network(subtasks, ordering, ordered, indent: str) -> list[str]:
    key = ":ordered-subtasks" if ordered else ":subtasks"
    if not subtasks:
        lines = [f"{indent}{key} ()"]
    else:
        lines = [f"{indent}{key} (and"]
        lines += [f"{indent}  ({s.id} {s.atom})" for s in subtasks]
        lines[-1] += ")"
    if ordering:
        lines.append(f"{indent}:ordering (and {' '.join(f'(< {a} {b})' for a, b in ordering)})")
    return lines


def print_domain(d: LiftedDomain) -> str:
    lines = [f"(define (domain {d.name})"]
    if d.requirements:
        lines.append(f"  (:requirements {' '.join(d.requirements)})")
    if d.types:
        lines.append(f"  (:types {_fmt_params(d.types)})")
    if d.predicates:
        lines.append("  (:predicates")
        for p in d.predicates:
            inner = " ".join(filter(None, [p.name, _fmt_params(p.params)]))
            lines.append(f"    ({inner})")
        lines[-1] += ")"
    for t in d.tasks:
        lines.append(f"  (:task {t.name} :parameters ({_fmt_params(t.params)}))")
    for m in d.methods:
        lines.append(f"  (:method {m.name}")
        lines.append(f"    :parameters ({_fmt_params(m.params)})")
        lines.append(f"    :task {m.task}")
        if m.pre:
            lines.append(f"    :precondition {_fmt_conj(m.pre)}")
        lines += _fmt_network(m.subtasks, m.ordering, m.ordered, "    ")
        lines[-1] += ")"
    for a in d.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({_fmt_params(a.params)})")
        lines.append(f"    :precondition {_fmt_conj(a.pre)}")
        extra = [f"(increase (total-cost) {a.cost})"] if a.cost is not None else []
        lines.append(f"    :effect {_fmt_conj(a.effects, extra)})")
    lines.append(")")
    return "\n".join(lines)


def print_problem(p: LiftedProblem) -> str:
    lines = [f"(define (problem {p.name})", f"  (:domain {p.domain})"]
    if p.objects:
        lines.append(f"  (:objects {_fmt_params(p.objects)})")
    lines.append("  (:htn")
    lines += _fmt_network(p.subtasks, p.ordering, p.ordered, "    ")
    lines[-1] += ")"
    lines.append("  (:init")
    lines += [f"    {a}" for a in p.init]
    lines[-1] += ")"
    if p.goal is not None:
        lines.append(f"  (:goal {_fmt_conj(p.goal)})")
    lines.append(")")
    return "\n".join(lines)
