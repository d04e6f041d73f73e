"""Learners: extensional lookup, strongest sentence, weakest exact sentence.

All sentence learners work in the language of clauses up to a width bound.
Exactness is judged on the closed world of completions of the observed
initial states: observed goals must be accepted, every other completion of an
observed initial state must be rejected.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BadWidth, ExactnessInfeasible, SpaceMismatch, TooManyVariables
from .logic import Clause, Sentence, count_models, render, universe_masks
from .state import MAX_VARS, OstensiveDefinition, PartialState, completion_codes

# Budget on the summed size of candidate rejection sets held in memory.
MAX_REJECTION_ENTRIES = 1 << 26


class SolutionKind(enum.Enum):
    INTENSIONAL = "intensional"
    EXTENSIONAL = "extensional"
    STRONGEST = "strongest"


class InfeasibilityMode(enum.Enum):
    ERROR = "error"
    BEST_EFFORT = "best-effort"


@dataclass(frozen=True)
class LearnerConfig:
    width: int
    exhaustive_threshold: int = 18
    infeasibility_mode: InfeasibilityMode = InfeasibilityMode.ERROR

    def __post_init__(self):
        if self.width < 1:
            raise BadWidth("width bound must be at least 1")
        if self.exhaustive_threshold < 0:
            raise ValueError("exhaustive_threshold must be non-negative")


@dataclass(frozen=True)
class Solution:
    kind: SolutionKind
    weakness: int
    learner: str
    sentence: Sentence | None = None
    states: tuple[PartialState, ...] | None = None
    width: int | None = None
    fit_ms: float = 0.0
    search: str = ""
    violations: int = 0
    codes: frozenset[int] = field(default=frozenset(), repr=False, compare=False)

    @property
    def n(self) -> int:
        if self.sentence is not None:
            return self.sentence.n
        return self.states[0].n

    def accepted_codes(self, s: PartialState) -> np.ndarray:
        """Codes of complete supersequences of ``s`` this solution accepts, ascending."""
        if s.n != self.n:
            raise SpaceMismatch(f"state over {s.n} variables, solution over {self.n}")
        if self.kind is SolutionKind.EXTENSIONAL:
            hits = [g.code for g in self.states if (g.values ^ s.values) & s.defined == 0]
            return np.array(sorted(hits), dtype=np.uint32)
        codes = completion_codes(s)
        return codes[kernels.accept_mask(codes, self.sentence.pos, self.sentence.neg)]

    def accepts(self, s: PartialState) -> bool:
        if not s.is_complete:
            return False
        if self.kind is SolutionKind.EXTENSIONAL:
            return s.code in self.codes
        return bool(kernels.accept_mask(np.array([s.code], dtype=np.uint32),
                                        self.sentence.pos, self.sentence.neg)[0])

    def header(self) -> str:
        parts = [f"# {self.learner}", f"kind={self.kind.value}", f"weakness={self.weakness}"]
        if self.width is not None:
            parts.append(f"k={self.width}")
        if self.search:
            parts.append(f"search={self.search}")
        if self.violations:
            parts.append(f"violations={self.violations}")
        parts.append(f"fit_ms={self.fit_ms:.3f}")
        return " ".join(parts)

    def body(self) -> str:
        if self.kind is SolutionKind.EXTENSIONAL:
            return " | ".join(str(g) for g in self.states)
        return render(self.sentence)

    def __str__(self) -> str:
        return f"{self.header()}\n{self.body()}"


def observed_codes(o: OstensiveDefinition) -> np.ndarray:
    parts = [completion_codes(s) for s in o.initials_o]
    return np.unique(np.concatenate(parts))


def observed_frame(o: OstensiveDefinition) -> list[PartialState]:
    return [PartialState.complete(o.n, int(c)) for c in observed_codes(o)]


def _sample_codes(o: OstensiveDefinition) -> np.ndarray:
    return np.array([g.code for g in o.sample], dtype=np.uint32)


def is_exact(h: Sentence, o: OstensiveDefinition) -> bool:
    if h.n != o.n:
        raise SpaceMismatch(f"sentence over {h.n} variables, sample over {o.n}")
    world = observed_codes(o)
    accepted = kernels.accept_mask(world, h.pos, h.neg)
    return bool(np.array_equal(accepted, np.isin(world, _sample_codes(o))))


def fit_extensional(o: OstensiveDefinition) -> Solution:
    t0 = time.perf_counter()
    states = tuple(o.sample)
    return Solution(
        kind=SolutionKind.EXTENSIONAL,
        weakness=len(states),
        learner="extensional",
        states=states,
        fit_ms=(time.perf_counter() - t0) * 1e3,
        codes=frozenset(g.code for g in states),
    )


def _check(o: OstensiveDefinition, cfg: LearnerConfig) -> None:
    if o.n > MAX_VARS:
        raise TooManyVariables(f"{o.n} variables exceeds {MAX_VARS}")
    if cfg.width > o.n:
        raise BadWidth(f"width bound {cfg.width} exceeds {o.n} variables")


def _strongest_indices(o: OstensiveDefinition, k: int) -> np.ndarray:
    pos, neg, _ = universe_masks(o.n, k)
    return np.flatnonzero(kernels.reject_counts(_sample_codes(o), pos, neg) == 0)


def _sentence(n: int, k: int, idx) -> Sentence:
    _, _, pairs = universe_masks(n, k)
    return Sentence.make(n, (Clause.of(pairs[j]) for j in idx), k)


def fit_strongest(o: OstensiveDefinition, cfg: LearnerConfig) -> Solution:
    """Conjunction of every clause in the language that holds on all observed goals."""
    _check(o, cfg)
    t0 = time.perf_counter()
    h = _sentence(o.n, cfg.width, _strongest_indices(o, cfg.width))
    weakness = count_models(h, o.n)
    return Solution(
        kind=SolutionKind.STRONGEST,
        weakness=weakness,
        learner="strongest",
        sentence=h,
        width=cfg.width,
        fit_ms=(time.perf_counter() - t0) * 1e3,
    )


def fit_intensional(o: OstensiveDefinition, cfg: LearnerConfig) -> Solution:
    """Weakest sentence of the language that is exact on the observed world.

    Every exact sentence is made of clauses true on all observed goals, so the
    search runs over subsets of the strongest sentence.  Clauses that reject
    no observed non-goal are dropped first.  Up to ``exhaustive_threshold``
    remaining candidates the subset search is exhaustive (globally weakest);
    above it, clauses are removed greedily by largest model-count gain.
    """
    _check(o, cfg)
    t0 = time.perf_counter()
    n, k = o.n, cfg.width
    pos, neg, _ = universe_masks(n, k)
    strongest = _strongest_indices(o, k)
    hpos, hneg = pos[strongest], neg[strongest]

    world = observed_codes(o)
    negatives = world[~np.isin(world, _sample_codes(o))]
    uncovered = kernels.accept_mask(negatives, hpos, hneg)
    violations = int(uncovered.sum())
    if violations:
        if cfg.infeasibility_mode is InfeasibilityMode.ERROR:
            raise ExactnessInfeasible(
                f"{violations} observed non-goal state(s) cannot be rejected at width {k}"
            )
        negatives = negatives[~uncovered]

    useful = kernels.reject_counts(negatives, hpos, hneg) > 0
    cand = strongest[useful]
    if cand.size == 0:
        chosen, search = [], "trivial"
    else:
        widths = np.array([(int(p) | int(q)).bit_count() for p, q in zip(pos[cand], neg[cand])])
        if int(np.sum(np.left_shift(1, n - widths, dtype=np.int64))) > MAX_REJECTION_ENTRIES:
            raise TooManyVariables("candidate rejection sets exceed the memory budget")
        offsets, members = kernels.rejection_sets(n, pos[cand], neg[cand])
        if cand.size <= cfg.exhaustive_threshold:
            search = "exhaustive"
            chosen = kernels.exhaustive_weakest(n, offsets, members, negatives)
        else:
            search = "greedy"
            chosen = kernels.greedy_weaken(n, offsets, members, negatives)
    h = _sentence(n, k, cand[chosen] if len(chosen) else [])
    return Solution(
        kind=SolutionKind.INTENSIONAL,
        weakness=count_models(h, n),
        learner="intensional",
        sentence=h,
        width=k,
        fit_ms=(time.perf_counter() - t0) * 1e3,
        search=search,
        violations=violations,
    )


def weakness_of(sol: Solution) -> int:
    if sol.kind is SolutionKind.EXTENSIONAL:
        return len(sol.states)
    return count_models(sol.sentence, sol.sentence.n)


LEARNERS = {
    "intensional": fit_intensional,
    "strongest": fit_strongest,
    "extensional": lambda o, cfg=None: fit_extensional(o),
}


def fit(learner: str, o: OstensiveDefinition, cfg: LearnerConfig) -> Solution:
    try:
        fn = LEARNERS[learner]
    except KeyError:
        raise ValueError(f"unknown learner {learner!r}") from None
    return fn(o, cfg)
