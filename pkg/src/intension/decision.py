"""Decision evaluation: abduct a completion of an initial state, score it."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyEvalSet, SpaceMismatch
from .learners import Solution, SolutionKind
from .state import PartialState, Task


class AbductionPolicy(enum.Enum):
    LEX_FIRST = "lex"
    UNIFORM = "uniform"
    EXTENSIONAL_FIRST = "extensional-first"


class FailureReason(enum.Enum):
    NO_COMPLETION = "NO_COMPLETION"


@dataclass(frozen=True)
class Outcome:
    initial: PartialState
    decision: PartialState | None
    success: bool
    failure_reason: FailureReason | None = None


def abduct(
    sol: Solution,
    s: PartialState,
    policy: AbductionPolicy = AbductionPolicy.LEX_FIRST,
    rng: np.random.Generator | None = None,
    extensional: Solution | None = None,
) -> PartialState | None:
    """Pick a complete supersequence of ``s`` that ``sol`` accepts.

    Returns ``None`` when no accepted completion exists.  With
    ``EXTENSIONAL_FIRST`` the attached lookup table is consulted first and the
    sentence only on a miss.
    """
    if policy is AbductionPolicy.EXTENSIONAL_FIRST:
        if extensional is None or extensional.kind is not SolutionKind.EXTENSIONAL:
            raise ValueError("EXTENSIONAL_FIRST needs an attached extensional solution")
        hits = extensional.accepted_codes(s)
        if hits.size:
            return PartialState.complete(s.n, int(hits[0]))
        policy = AbductionPolicy.LEX_FIRST
    codes = sol.accepted_codes(s)
    if codes.size == 0:
        return None
    if policy is AbductionPolicy.UNIFORM:
        if rng is None:
            raise ValueError("UNIFORM abduction needs an rng")
        return PartialState.complete(s.n, int(codes[rng.integers(codes.size)]))
    return PartialState.complete(s.n, int(codes[0]))


def decision_trial(
    task: Task,
    sol: Solution,
    s: PartialState,
    policy: AbductionPolicy = AbductionPolicy.LEX_FIRST,
    rng: np.random.Generator | None = None,
    extensional: Solution | None = None,
) -> Outcome:
    if s.n != task.n or sol.n != task.n:
        raise SpaceMismatch("task, solution and state must share a variable space")
    b = abduct(sol, s, policy, rng, extensional)
    if b is None:
        return Outcome(s, None, False, FailureReason.NO_COMPLETION)
    return Outcome(s, b, task.is_goal(b))


def generalization_rate(
    task: Task,
    sol: Solution,
    eval_set: Sequence[PartialState],
    policy: AbductionPolicy = AbductionPolicy.LEX_FIRST,
    rng: np.random.Generator | None = None,
    extensional: Solution | None = None,
) -> float:
    if not eval_set:
        raise EmptyEvalSet("no initial states to evaluate")
    wins = sum(decision_trial(task, sol, s, policy, rng, extensional).success for s in eval_set)
    return wins / len(eval_set)
