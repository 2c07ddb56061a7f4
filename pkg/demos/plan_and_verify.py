"""
Planning with a witness, then checking it
=========================================

A walk through the bundled logistics-mini instance: parse the lifted
files, ground them, solve, print the plan with its decomposition witness
and hand the result to the verifier. The last part breaks the plan on
purpose to show what a rejection looks like.
"""

from htnipc import (
    SearchConfig,
    format_plan,
    ground,
    parse_domain,
    parse_problem,
    solve,
    verify,
    verify_text,
    verify_without_witness,
)
from htnipc.cli import bundled_suites

suite = bundled_suites() / "logistics-mini"
domain = parse_domain((suite / "domain.hddl").read_text(), "domain.hddl")
problem = parse_problem((suite / "p01.hddl").read_text(), domain, "p01.hddl")

# grounding instantiates every schema and then drops what is unreachable
model, stats = ground(domain, problem)
print("\n".join(stats.lines()))

# optimal mode: uniform-cost search, so the cost printed is the true optimum
out = solve(model, SearchConfig("optimal"))
print(out.verdict.value, "cost", out.cost)
text = format_plan(model, out.plan, out.witness)
print(text)

# the verifier replays the witness top down and the plan left to right
print("with witness:   ", verify(model, out.plan, out.witness))
print("without witness:", verify_without_witness(model, out.plan, depth_bound=8))

# an action that does not exist in the ground model is caught first
print(verify_text(model, text.replace("(load t1 l2 p1)", "(load t1 l9 p1)")))

# swapping two steps together with their leaves keeps the witness well
# formed, but drive must come before unload inside m-deliver
steps = text.splitlines()
steps[3], steps[4] = steps[4].replace("3 ", "2 ", 1), steps[3].replace("2 ", "3 ", 1)
swapped = "\n".join(steps).replace("m-deliver 5 1 6 3", "m-deliver 5 1 6 2").replace("m-drive 8 2", "m-drive 8 3")
print(verify_text(model, swapped + "\n"))
