"""Width-bounded clausal sentences under strong Kleene evaluation."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from . import kernels
from .errors import BadWidth, DuplicateIndex, IndexOutOfRange, SpaceMismatch, TooManyVariables
from .state import MAX_VARS, PartialState, VariableSpace, bit, completion_codes


class TruthValue3(enum.IntEnum):
    """Kleene truth values; the integer order is FALSE < INDETERMINATE < TRUE."""

    FALSE = 0
    INDETERMINATE = 1
    TRUE = 2


@dataclass(frozen=True, order=True)
class Literal:
    index: int
    polarity: int

    def __str__(self) -> str:
        return f"x{self.index}={self.polarity}"


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        lits = tuple(sorted(self.literals))
        if not lits:
            raise BadWidth("a clause needs at least one literal")
        idx = [lit.index for lit in lits]
        if len(set(idx)) != len(idx):
            raise DuplicateIndex("two literals on the same variable")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Clause":
        return cls(tuple(Literal(i, int(p)) for i, p in pairs))

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def key(self) -> tuple:
        return (self.width, tuple((lit.index, lit.polarity) for lit in self.literals))

    def masks(self, n: int) -> tuple[int, int]:
        pos = neg = 0
        for lit in self.literals:
            if lit.index >= n:
                raise IndexOutOfRange(f"literal on x{lit.index} in a {n}-variable space")
            if lit.polarity:
                pos |= bit(n, lit.index)
            else:
                neg |= bit(n, lit.index)
        return pos, neg

    def __str__(self) -> str:
        return "(" + "|".join(str(lit) for lit in self.literals) + ")"


@dataclass(frozen=True)
class Sentence:
    """A conjunction of clauses; the empty conjunction is vacuously true."""

    n: int
    clauses: tuple[Clause, ...]
    width_bound: int

    @classmethod
    def make(cls, n: int, clauses: Iterable[Clause] = (), k: int | None = None) -> "Sentence":
        uniq = sorted(set(clauses), key=lambda c: c.key)
        if k is None:
            k = max((c.width for c in uniq), default=1)
        for c in uniq:
            if c.width > k:
                raise BadWidth(f"clause {c} wider than bound {k}")
            c.masks(n)
        return cls(n, tuple(uniq), k)

    @cached_property
    def pos(self) -> np.ndarray:
        return np.array([c.masks(self.n)[0] for c in self.clauses], dtype=np.uint32)

    @cached_property
    def neg(self) -> np.ndarray:
        return np.array([c.masks(self.n)[1] for c in self.clauses], dtype=np.uint32)

    def __len__(self) -> int:
        return len(self.clauses)

    def __str__(self) -> str:
        return render(self)


def render(h: Sentence) -> str:
    if not h.clauses:
        return "TRUE"
    return "&".join(str(c) for c in h.clauses)


_LIT = re.compile(r"x(\d+)=([01])$")


def parse_sentence(text: str, n: int, k: int | None = None) -> Sentence:
    text = text.strip()
    if text == "TRUE":
        return Sentence.make(n, (), k)
    clauses = []
    for part in text.split("&"):
        part = part.strip()
        if not (part.startswith("(") and part.endswith(")")):
            raise ValueError(f"bad clause {part!r}")
        pairs = []
        for tok in part[1:-1].split("|"):
            m = _LIT.match(tok.strip())
            if not m:
                raise ValueError(f"bad literal {tok!r}")
            pairs.append((int(m.group(1)), int(m.group(2))))
        clauses.append(Clause.of(pairs))
    return Sentence.make(n, clauses, k)


def eval_literal(lit: Literal, s: PartialState) -> TruthValue3:
    if not 0 <= lit.index < s.n:
        raise IndexOutOfRange(f"literal on x{lit.index} in a {s.n}-variable state")
    v = s.get(lit.index)
    if v is None:
        return TruthValue3.INDETERMINATE
    return TruthValue3.TRUE if v == lit.polarity else TruthValue3.FALSE


def eval_clause(pos: int, neg: int, s: PartialState) -> TruthValue3:
    if (s.values & pos) | (s.defined & ~s.values & neg):
        return TruthValue3.TRUE
    if (pos | neg) & ~s.defined:
        return TruthValue3.INDETERMINATE
    return TruthValue3.FALSE


def eval_sentence(h: Sentence, s: PartialState) -> TruthValue3:
    if h.n != s.n:
        raise SpaceMismatch(f"sentence over {h.n} variables, state over {s.n}")
    if s.is_complete:
        ok = kernels.accept_mask(np.array([s.code], dtype=np.uint32), h.pos, h.neg)[0]
        return TruthValue3.TRUE if ok else TruthValue3.FALSE
    result = TruthValue3.TRUE
    for p, q in zip(h.pos.tolist(), h.neg.tolist()):
        v = eval_clause(p, q, s)
        if v is TruthValue3.FALSE:
            return v
        result = min(result, v)
    return result


def count_models(h: Sentence, space: VariableSpace | int) -> int:
    n = space if isinstance(space, int) else space.n
    if n > MAX_VARS:
        raise TooManyVariables(f"{n} variables exceeds {MAX_VARS}")
    if n != h.n:
        raise SpaceMismatch(f"sentence over {h.n} variables, space has {n}")
    return kernels.count_models(n, h.pos, h.neg)


def _universe_pairs(n: int, k: int):
    # literal tuples of each width in lexicographic (index, polarity) order
    def rec(start, width):
        if width == 0:
            yield ()
            return
        for i in range(start, n - width + 1):
            for p in (0, 1):
                for rest in rec(i + 1, width - 1):
                    yield ((i, p),) + rest

    for w in range(1, k + 1):
        yield from rec(0, w)


def _check_width(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise BadWidth(f"width bound {k} outside 1..{n}")


def clause_universe(space: VariableSpace | int, k: int) -> list[Clause]:
    n = space if isinstance(space, int) else space.n
    _check_width(n, k)
    return [Clause.of(pairs) for pairs in _universe_pairs(n, k)]


@lru_cache(maxsize=16)
def universe_masks(n: int, k: int) -> tuple[np.ndarray, np.ndarray, tuple]:
    """``(pos, neg, pairs)`` for every clause of ``clause_universe(n, k)``."""
    _check_width(n, k)
    pairs = tuple(_universe_pairs(n, k))
    pos = np.zeros(len(pairs), dtype=np.uint32)
    neg = np.zeros(len(pairs), dtype=np.uint32)
    for j, lits in enumerate(pairs):
        p = q = 0
        for i, v in lits:
            if v:
                p |= 1 << (n - 1 - i)
            else:
                q |= 1 << (n - 1 - i)
        pos[j] = p
        neg[j] = q
    pos.flags.writeable = False
    neg.flags.writeable = False
    return pos, neg, pairs


def satisfying_codes(h: Sentence, s: PartialState) -> np.ndarray:
    if h.n != s.n:
        raise SpaceMismatch(f"sentence over {h.n} variables, state over {s.n}")
    codes = completion_codes(s)
    return codes[kernels.accept_mask(codes, h.pos, h.neg)]


def satisfying_completions(h: Sentence, s: PartialState) -> list[PartialState]:
    return [PartialState.complete(s.n, int(c)) for c in satisfying_codes(h, s)]
