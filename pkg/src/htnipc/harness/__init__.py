"""Contest harness: limits, planner runs, scoring, BYOB and generators."""

from .byob import ByobResult, ByobSubmission, byob_check
from .generators import Dfa, Grammar, ab_star, anbn, gen_grammar, gen_transport, random_grammar_pair
from .results import read_records, read_table, suite_instances, suite_optima, write_records
from .runner import DEFAULT_LIMITS, GIB, Limits, RunRecord, RunVerdict, run_planner
from .scoring import (
    ScoreReport,
    agile,
    best_known,
    quality,
    score,
    score_agile,
    score_optimal,
    score_satisficing,
)
from .suite import run_suite

__all__ = [
    "ByobResult", "ByobSubmission", "byob_check",
    "Dfa", "Grammar", "ab_star", "anbn", "gen_grammar", "gen_transport", "random_grammar_pair",
    "read_records", "read_table", "suite_instances", "suite_optima", "write_records",
    "DEFAULT_LIMITS", "GIB", "Limits", "RunRecord", "RunVerdict", "run_planner",
    "ScoreReport", "agile", "best_known", "quality", "score", "score_agile", "score_optimal",
    "score_satisficing", "run_suite",
]
