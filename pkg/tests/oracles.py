"""Brute-force reference computations, independent of the bit-mask paths."""
import itertools

from intension.state import PartialState


def clause_true(clause, z: PartialState) -> bool:
    return any(z.get(lit.index) == lit.polarity for lit in clause.literals)


def sentence_true(h, z: PartialState) -> bool:
    return all(clause_true(c, z) for c in h.clauses)


def all_complete(n):
    return [PartialState.from_string("".join(t)) for t in itertools.product("01", repeat=n)]


def models(h):
    return [z for z in all_complete(h.n) if sentence_true(h, z)]


def weakest_subset(n, clauses, negatives):
    """Enumerate every subset; return (count, clauses) of the optimum or None."""
    space = all_complete(n)
    neg = set(negatives)
    best = None
    for r in range(len(clauses) + 1):
        for combo in itertools.combinations(range(len(clauses)), r):
            chosen = [clauses[i] for i in combo]
            accepted = {z for z in space if all(clause_true(c, z) for c in chosen)}
            if accepted & neg:
                continue
            key = (-len(accepted), r, combo)
            if best is None or key < best[0]:
                best = (key, chosen)
    if best is None:
        return None
    return -best[0][0], best[1]


def kleene(h, s: PartialState) -> int:
    """Three-valued value of ``h`` on ``s``: 0 false, 1 indeterminate, 2 true."""
    result = 2
    for c in h.clauses:
        vals = [s.get(lit.index) for lit in c.literals]
        if any(v == lit.polarity for v, lit in zip(vals, c.literals)):
            continue
        if all(v is not None for v in vals):
            return 0
        result = 1
    return result
