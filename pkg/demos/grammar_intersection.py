"""
Grammar intersection as a planning problem
==========================================

Hierarchies can count. The generator turns a context-free grammar into
tasks and methods and a finite automaton into the state, so a plan spells
a word the grammar derives and the automaton accepts. Intersecting aⁿbⁿ
with (ab)* leaves exactly one word, ab.
"""

import random

from htnipc import SearchConfig, ground, parse_domain, parse_problem, solve, verify
from htnipc.harness import Dfa, ab_star, anbn, gen_grammar, random_grammar_pair


def model_of(domain_text, problem_text):
    d = parse_domain(domain_text)
    return ground(d, parse_problem(problem_text, d))[0]


def spelled(model, plan):
    # terminal actions are named t-<letter>; the final action is the check
    return "".join(model.actions[a].name[2:] for a in plan if model.actions[a].name.startswith("t-"))


domain_text, problem_text = gen_grammar(anbn(), ab_star())
print(domain_text[:400], "...\n")

m = model_of(domain_text, problem_text)
out = solve(m, SearchConfig("optimal"))
print("aⁿbⁿ ∩ (ab)*:", out.verdict.value, "word", spelled(m, out.plan), "plan", [str(m.actions[a]) for a in out.plan])
print("verifier:", verify(m, out.plan, out.witness))

# an automaton that accepts nothing makes the instance unsolvable; the
# grammar is recursive, so the planner needs a bound to give up
nothing = Dfa(("q",), ("a", "b"), {("q", "a"): "q", ("q", "b"): "q"}, "q", frozenset())
m = model_of(*gen_grammar(anbn(), nothing))
print("aⁿbⁿ ∩ ∅:", solve(m, SearchConfig("satisficing", max_plan_length=13)).verdict.value)

# a handful of random pairs; words found are checked against the automaton
rng = random.Random(7)
for seed in rng.sample(range(1000), 8):
    g, dfa = random_grammar_pair(seed)
    m = model_of(*gen_grammar(g, dfa, seed=seed))
    out = solve(m, SearchConfig("satisficing", max_plan_length=13))
    rules = "; ".join(f"{lhs}->{' '.join(rhs)}" for lhs, rhs in g.productions)
    if out.solved:
        word = spelled(m, out.plan)
        print(f"seed {seed:3d}: {word!r:12} accepted by automaton: {dfa.accepts(word)}   {rules}")
    else:
        print(f"seed {seed:3d}: {out.verdict.value:12}   {rules}")
