"""Partial binary states, tasks and ostensive definitions.

States are stored as two bit masks over ``n`` variables.  Variable ``i`` lives
in bit ``n - 1 - i`` so that, for complete states, the integer code orders the
same way as the printed value vector (``"10" < "11"``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateIndex,
    EmptyGoalSet,
    IndexOutOfRange,
    SampleTooLarge,
    SpaceMismatch,
    TooManyFree,
)

MAX_VARS = 24
MAX_FREE = 24


def bit(n: int, i: int) -> int:
    return 1 << (n - 1 - i)


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class VariableSpace:
    n: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VARS:
            raise IndexOutOfRange(f"variable count {self.n} outside 1..{MAX_VARS}")
        if self.names is not None:
            names = tuple(self.names)
            object.__setattr__(self, "names", names)
            if len(names) != self.n:
                raise IndexOutOfRange(f"{len(names)} names for {self.n} variables")
            if len(set(names)) != len(names):
                raise DuplicateIndex("variable names must be distinct")

    def check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"index {i} outside 0..{self.n - 1}")


@dataclass(frozen=True, slots=True)
class PartialState:
    """A partial assignment; ``values`` bits are zero wherever ``defined`` is."""

    n: int
    defined: int
    values: int

    def __post_init__(self):
        if self.values & ~self.defined:
            raise ValueError("non-canonical state: value bits outside defined mask")
        if self.defined & ~full_mask(self.n):
            raise IndexOutOfRange("defined mask wider than the variable space")

    @classmethod
    def from_string(cls, text: str) -> "PartialState":
        n = len(text)
        defined = values = 0
        for i, ch in enumerate(text):
            if ch == "*":
                continue
            if ch not in "01":
                raise ValueError(f"bad state character {ch!r}")
            defined |= bit(n, i)
            if ch == "1":
                values |= bit(n, i)
        return cls(n, defined, values)

    @classmethod
    def complete(cls, n: int, code: int) -> "PartialState":
        return cls(n, full_mask(n), int(code))

    @classmethod
    def empty(cls, n: int) -> "PartialState":
        return cls(n, 0, 0)

    @property
    def is_complete(self) -> bool:
        return self.defined == full_mask(self.n)

    @property
    def code(self) -> int:
        """Integer code of the value vector (meaningful for complete states)."""
        return self.values

    @property
    def free_count(self) -> int:
        return self.n - self.defined.bit_count()

    def get(self, i: int) -> int | None:
        b = bit(self.n, i)
        if not self.defined & b:
            return None
        return 1 if self.values & b else 0

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.defined & bit(self.n, i))

    def __str__(self) -> str:
        out = []
        for i in range(self.n):
            b = bit(self.n, i)
            out.append("*" if not self.defined & b else ("1" if self.values & b else "0"))
        return "".join(out)

    def __repr__(self) -> str:
        return f"PartialState({str(self)!r})"


def state_key(s: PartialState) -> str:
    """Canonical sort key: the printed form (``*`` sorts before digits)."""
    return str(s)


def _same_space(a: PartialState, b: PartialState) -> None:
    if a.n != b.n:
        raise SpaceMismatch(f"states over {a.n} and {b.n} variables")


def make_state(space: VariableSpace, assignments: Iterable[tuple[int, int]]) -> PartialState:
    n = space.n
    defined = values = 0
    for i, v in assignments:
        space.check_index(i)
        b = bit(n, i)
        if defined & b:
            raise DuplicateIndex(f"index {i} assigned twice")
        defined |= b
        if v:
            values |= b
    return PartialState(n, defined, values)


def is_subsequence(a: PartialState, b: PartialState) -> bool:
    _same_space(a, b)
    if a.defined & ~b.defined:
        return False
    return (a.values ^ b.values) & a.defined == 0


def completion_codes(s: PartialState) -> np.ndarray:
    """Codes of all complete supersequences of ``s``, ascending."""
    free = s.free_count
    if free > MAX_FREE:
        raise TooManyFree(f"{free} free variables exceeds budget {MAX_FREE}")
    positions = [s.n - 1 - i for i in range(s.n) if not s.defined & bit(s.n, i)]
    t = np.arange(1 << free, dtype=np.uint32)
    codes = np.full(1 << free, s.values, dtype=np.uint32)
    # positions run from most to least significant, matching t's bit order
    for j, pos in enumerate(positions):
        codes |= ((t >> np.uint32(free - 1 - j)) & np.uint32(1)) << np.uint32(pos)
    return codes


def completions(s: PartialState) -> list[PartialState]:
    return [PartialState.complete(s.n, int(c)) for c in completion_codes(s)]


def restrict(g: PartialState, frame: Iterable[int]) -> PartialState:
    mask = 0
    for i in frame:
        if not 0 <= i < g.n:
            raise IndexOutOfRange(f"frame index {i} outside 0..{g.n - 1}")
        mask |= bit(g.n, i)
    defined = g.defined & mask
    return PartialState(g.n, defined, g.values & defined)


def _canonical_frames(space: VariableSpace, frames: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    out = set()
    for f in frames:
        f = tuple(sorted(set(f)))
        for i in f:
            space.check_index(i)
        out.add(f)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Task:
    space: VariableSpace
    goals: tuple[PartialState, ...]
    frames: tuple[tuple[int, ...], ...]
    initials: tuple[PartialState, ...]
    goal_codes: frozenset[int] = field(repr=False, compare=False, default=frozenset())

    @property
    def n(self) -> int:
        return self.space.n

    def is_goal(self, s: PartialState) -> bool:
        return s.is_complete and s.code in self.goal_codes


def _derive_initials(goals: Sequence[PartialState], frames) -> tuple[PartialState, ...]:
    seen = {restrict(g, f) for g in goals for f in frames}
    return tuple(sorted(seen, key=state_key))


def build_task(space: VariableSpace, goal_patterns: Iterable[PartialState], frames) -> Task:
    frames = _canonical_frames(space, frames)
    if not frames:
        raise EmptyGoalSet("a task needs at least one decision frame")
    codes: set[int] = set()
    for p in goal_patterns:
        if p.n != space.n:
            raise SpaceMismatch(f"goal pattern over {p.n} variables, task has {space.n}")
        codes.update(int(c) for c in completion_codes(p))
    if not codes:
        raise EmptyGoalSet("no goal states")
    goals = tuple(PartialState.complete(space.n, c) for c in sorted(codes))
    initials = _derive_initials(goals, frames)
    for s in initials:
        if not any(is_subsequence(s, g) for g in goals):
            raise AssertionError(f"initial {s} has no goal supersequence")
    return Task(space, goals, frames, initials, frozenset(codes))


@dataclass(frozen=True)
class OstensiveDefinition:
    space: VariableSpace
    sample: tuple[PartialState, ...]
    initials_o: tuple[PartialState, ...]
    covers_all: bool

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def sample_codes(self) -> frozenset[int]:
        return frozenset(g.code for g in self.sample)


def define_ostensive(task: Task, sample: Iterable[PartialState], *, proper: bool = True) -> OstensiveDefinition:
    """Build an ostensive definition from an explicit goal subset.

    With ``proper=False`` the whole goal set may be supplied, which is how the
    harness fits a learner directly on a full task.
    """
    chosen = sorted(set(sample), key=state_key)
    for g in chosen:
        if g.n != task.n:
            raise SpaceMismatch("sample state from a different space")
        if not task.is_goal(g):
            raise ValueError(f"{g} is not a goal of the task")
    if not chosen:
        raise EmptyGoalSet("empty ostensive sample")
    if proper and len(chosen) >= len(task.goals):
        raise SampleTooLarge(f"sample of {len(chosen)} is not a proper subset of {len(task.goals)} goals")
    initials_o = _derive_initials(chosen, task.frames)
    covered = set(initials_o)
    covers_all = all(s in covered for s in task.initials)
    return OstensiveDefinition(task.space, tuple(chosen), initials_o, covers_all)


def sample_ostensive(task: Task, m: int, rng: np.random.Generator) -> OstensiveDefinition:
    if m >= len(task.goals):
        raise SampleTooLarge(f"m={m} must be below |G|={len(task.goals)}")
    if m < 1:
        raise SampleTooLarge(f"m={m} must be at least 1")
    idx = rng.choice(len(task.goals), size=m, replace=False)
    return define_ostensive(task, (task.goals[i] for i in sorted(int(j) for j in idx)))
