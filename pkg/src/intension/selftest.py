"""Randomised invariant checks runnable without pytest (``intension selftest``)."""
from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .decision import AbductionPolicy, abduct
from .errors import ExactnessInfeasible
from .learners import (
    LearnerConfig,
    Solution,
    SolutionKind,
    fit_extensional,
    fit_intensional,
    fit_strongest,
    is_exact,
    observed_frame,
)
from .logic import (
    Clause,
    Sentence,
    TruthValue3,
    clause_universe,
    count_models,
    eval_sentence,
)
from .state import PartialState, VariableSpace, build_task, completions, is_subsequence, sample_ostensive
from .tasks import GENERATORS, RANDOM_PRESET_SEEDS, read_task, write_task


def random_state(rng, n, p_defined=0.5) -> PartialState:
    defined = values = 0
    for i in range(n):
        if rng.random() < p_defined:
            b = 1 << (n - 1 - i)
            defined |= b
            if rng.random() < 0.5:
                values |= b
    return PartialState(n, defined, values)


def refine(rng, s: PartialState) -> PartialState:
    """A random supersequence of ``s``."""
    extra = random_state(rng, s.n)
    add = extra.defined & ~s.defined
    return PartialState(s.n, s.defined | add, s.values | (extra.values & add))


def random_sentence(rng, n, k, max_clauses=6) -> Sentence:
    clauses = []
    for _ in range(int(rng.integers(0, max_clauses + 1))):
        w = int(rng.integers(1, k + 1))
        idx = rng.choice(n, size=w, replace=False)
        clauses.append(Clause.of((int(i), int(rng.integers(2))) for i in idx))
    return Sentence.make(n, clauses, k)


def naive_count(h: Sentence) -> int:
    total = 0
    for code in range(1 << h.n):
        z = PartialState.complete(h.n, code)
        ok = True
        for c in h.clauses:
            if not any(z.get(lit.index) == lit.polarity for lit in c.literals):
                ok = False
                break
        total += ok
    return total


def check_subsequence_order(rng) -> str | None:
    n = 3
    states = [PartialState.from_string("".join(t)) for t in itertools.product("01*", repeat=n)]
    for a in states:
        if not is_subsequence(a, a):
            return f"not reflexive at {a}"
        for b in states:
            if a != b and is_subsequence(a, b) and is_subsequence(b, a):
                return f"not antisymmetric at {a},{b}"
            if not is_subsequence(a, b):
                continue
            for c in states:
                if is_subsequence(b, c) and not is_subsequence(a, c):
                    return f"not transitive at {a},{b},{c}"
    return None


def check_completions(rng) -> str | None:
    for _ in range(200):
        s = random_state(rng, 6)
        comp = completions(s)
        if len(comp) != 2 ** s.free_count or len(set(comp)) != len(comp):
            return f"wrong completion count for {s}"
        if not all(c.is_complete and is_subsequence(s, c) for c in comp):
            return f"bad completion of {s}"
    return None


def check_kleene(rng) -> str | None:
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        h = random_sentence(rng, n, min(3, n))
        s = random_state(rng, n)
        t = refine(rng, s)
        v, w = eval_sentence(h, s), eval_sentence(h, t)
        if v is not TruthValue3.INDETERMINATE and v != w:
            return f"{h} on {s}={v.name} but on {t}={w.name}"
        full = PartialState.complete(n, int(rng.integers(1 << n)))
        if eval_sentence(h, full) is TruthValue3.INDETERMINATE:
            return f"indeterminate on complete state {full}"
    return None


def check_counting(rng) -> str | None:
    for _ in range(20):
        h = random_sentence(rng, 8, 3)
        if count_models(h, 8) != naive_count(h):
            return f"count mismatch on {h}"
    for n in range(1, 6):
        for k in range(1, n + 1):
            expect = sum(len(list(itertools.combinations(range(n), w))) * 2 ** w for w in range(1, k + 1))
            if len(clause_universe(n, k)) != expect:
                return f"universe size wrong for n={n}, k={k}"
    return None


def check_learners(rng) -> str | None:
    for _ in range(20):
        n = int(rng.integers(2, 6))
        codes = rng.choice(1 << n, size=int(rng.integers(2, 1 << n)), replace=False)
        frame = tuple(int(i) for i in sorted(rng.choice(n, size=int(rng.integers(0, n)), replace=False)))
        task = build_task(VariableSpace(n), [PartialState.complete(n, int(c)) for c in codes], [frame])
        o = sample_ostensive(task, int(rng.integers(1, len(task.goals))), rng)
        cfg = LearnerConfig(int(rng.integers(1, n + 1)))
        ext = fit_extensional(o)
        if {c.code for c in observed_frame(o) if ext.accepts(c)} != o.sample_codes:
            return "extensional solution is not its sample"
        strong = fit_strongest(o, cfg)
        try:
            weak = fit_intensional(o, cfg)
        except ExactnessInfeasible:
            if is_exact(strong.sentence, o):
                return "infeasible reported although the strongest sentence is exact"
            continue
        if not is_exact(weak.sentence, o):
            return f"intensional solution not exact: {weak.sentence}"
        if weak.weakness < strong.weakness:
            return "intensional solution stronger than the strongest"
    return None


def check_abduction(rng) -> str | None:
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        h = random_sentence(rng, n, min(3, n))
        s = random_state(rng, n)
        sol = Solution(SolutionKind.INTENSIONAL, 0, "check", sentence=h)
        b = abduct(sol, s, AbductionPolicy.LEX_FIRST)
        if b is None:
            if any(eval_sentence(h, c) is TruthValue3.TRUE for c in completions(s)):
                return f"missed completion of {s} under {h}"
        elif not (b.is_complete and is_subsequence(s, b) and eval_sentence(h, b) is TruthValue3.TRUE):
            return f"unsound decision {b} for {s} under {h}"
    return None


def check_round_trip(rng) -> str | None:
    samples = {
        "addition": {"w": "2"},
        "string": {"L": "6", "p": "2"},
        "parity": {"n": "4"},
        "toycpu": {"w": "1"},
        "reward": {"n": "4", "theta": "3"},
        "random": {"seed": str(RANDOM_PRESET_SEEDS[0])},
    }
    for name, params in samples.items():
        task = GENERATORS[name](params)
        text = write_task(task)
        if read_task(text) != task or write_task(read_task(text)) != text:
            return f"round trip failed for {name}"
    return None


CHECKS: dict[str, Callable] = {
    "subsequence partial order": check_subsequence_order,
    "completions": check_completions,
    "kleene persistence": check_kleene,
    "model counting": check_counting,
    "learner exactness": check_learners,
    "abduction soundness": check_abduction,
    "task file round trip": check_round_trip,
}


def run_all(seed: int = 0, echo: Callable[[str], None] = print) -> bool:
    ok = True
    for name, fn in CHECKS.items():
        problem = fn(np.random.default_rng(seed))
        echo(f"{'PASS' if problem is None else 'FAIL'} {name}" + (f": {problem}" if problem else ""))
        ok &= problem is None
    return ok
