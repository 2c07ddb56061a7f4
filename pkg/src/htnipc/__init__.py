"""Toolkit for hierarchical task network planning competitions.

Parse the hierarchical input language, ground and solve problems by
progression search, verify plans against decomposition witnesses, and run
and score contests.

>>> from htnipc import load_bundled, solve, SearchConfig, verify
>>> model = load_bundled("logistics-mini", "p01")
>>> out = solve(model, SearchConfig("optimal"))
>>> out.cost, verify(model, out.plan, out.witness).accepted
(4, True)
"""

from importlib import resources

__version__ = "0.1.0"

from .errors import (
    GrammarNotNormalized,
    GroundingBlowup,
    HtnError,
    InternalInconsistency,
    InvalidNetwork,
    MalformedSubmission,
    MethodTaskMismatch,
    MissingBestKnown,
    NodeNotFound,
    PreconditionUnsatisfied,
    ReferenceInconsistency,
    SpawnFailure,
)
from .grounder import (
    GroundingStats,
    ground,
    is_totally_ordered,
    lifted_totally_ordered,
    reachability_prune,
)
from .model import (
    AbstractTask,
    DecompositionWitness,
    Fact,
    GroundAction,
    GroundModel,
    Method,
    TaskNetwork,
    TaskRef,
    WitnessNode,
    apply_action,
    apply_method,
    classical_to_htn,
    decompose,
    is_executable,
    linearizations,
)
from .parser import parse_domain, parse_problem, print_domain, print_problem
from .planfile import PlanFileError, format_plan, parse_plan_file
from .planner import (
    TRACKS,
    Mode,
    OrderClass,
    Outcome,
    SearchConfig,
    Strategy,
    Verdict,
    extract_witness,
    solve,
    solve_general,
    solve_total_order,
)
from .sexpr import ParseError, SourceSpan
from .verifier import verify, verify_text, verify_without_witness


def load_bundled(domain: str, instance: str) -> GroundModel:
    """Ground a bundled benchmark instance, e.g. ``("logistics-mini", "p01")``."""
    base = resources.files("htnipc") / "data" / "suites" / domain
    d = parse_domain((base / "domain.hddl").read_text(), f"{domain}/domain.hddl")
    p = parse_problem((base / f"{instance}.hddl").read_text(), d, f"{domain}/{instance}.hddl")
    return ground(d, p)[0]
