"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class HtnError(Exception):
    """Base class for every error raised by htnipc."""


# model

class PreconditionUnsatisfied(HtnError):
    def __init__(self, action_name: str, missing: list[str]):
        self.action_name = action_name
        self.missing = missing
        super().__init__(f"{action_name}: missing precondition(s) {', '.join(missing)}")


class NodeNotFound(HtnError):
    pass


class MethodTaskMismatch(HtnError):
    pass


class InvalidNetwork(HtnError):
    """A task network violates its structural invariants (e.g. ordering cycle)."""


# grounding / planning

class GroundingBlowup(HtnError):
    pass


class InternalInconsistency(AssertionError):
    """Raised on a broken internal invariant; never expected to fire."""


# harness

class SpawnFailure(HtnError):
    pass


class MissingBestKnown(HtnError):
    pass


class ReferenceInconsistency(HtnError):
    pass


class MalformedSubmission(HtnError):
    pass


class GrammarNotNormalized(HtnError):
    pass
