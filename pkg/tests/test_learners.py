import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from intension.errors import BadWidth, ExactnessInfeasible
from intension.learners import (
    InfeasibilityMode,
    LearnerConfig,
    SolutionKind,
    fit_extensional,
    fit_intensional,
    fit_strongest,
    is_exact,
    observed_frame,
    weakness_of,
)
from intension.logic import Clause, Sentence, clause_universe, render
from intension.state import PartialState, VariableSpace, build_task, define_ostensive, sample_ostensive
from intension.tasks import gen_binary_addition, gen_parity

from .oracles import all_complete, clause_true, models, sentence_true, weakest_subset

S = PartialState.from_string


def task_of(goals, frames):
    n = len(goals[0])
    return build_task(VariableSpace(n), [S(g) for g in goals], frames)


@pytest.fixture
def toy():
    """G = {00, 10}, frame {x0}; observing 10 gives initial 1*."""
    t = task_of(["00", "10"], [(0,)])
    return t, define_ostensive(t, [S("10")])


class TestObservedFrame:
    def test_partial_initial(self, toy):
        _, o = toy
        assert [str(z) for z in observed_frame(o)] == ["10", "11"]

    def test_complete_initial(self):
        t = task_of(["10", "01"], [(0, 1)])
        o = define_ostensive(t, [S("10")])
        assert [str(z) for z in observed_frame(o)] == ["10"]

    def test_addition_pair(self):
        t = gen_binary_addition(1)
        o = sample_ostensive(t, 2, np.random.default_rng(3))
        world = observed_frame(o)
        # two distinct (a, b) inputs, each completed over the two sum bits
        assert len(world) == 2 * 2**2
        assert set(o.sample) <= set(world)


class TestIsExact:
    def test_examples(self, toy):
        _, o = toy
        assert is_exact(Sentence.make(2, [Clause.of([(1, 0)])]), o)
        assert not is_exact(Sentence.make(2), o)
        assert not is_exact(Sentence.make(2, [Clause.of([(0, 0)])]), o)


class TestExtensional:
    def test_lookup(self):
        t = task_of(["110", "011"], [(0,)])
        sol = fit_extensional(define_ostensive(t, [S("110")]))
        assert [z for z in all_complete(3) if sol.accepts(z)] == [S("110")]

    def test_addition_minus_one(self):
        t = gen_binary_addition(1)
        sol = fit_extensional(define_ostensive(t, t.goals[:3]))
        assert sol.weakness == 3 == weakness_of(sol)

    def test_accepts_exactly_sample(self, rng):
        t = gen_binary_addition(2)
        for _ in range(20):
            o = sample_ostensive(t, int(rng.integers(1, 16)), rng)
            sol = fit_extensional(o)
            assert {z for z in all_complete(t.n) if sol.accepts(z)} == set(o.sample)


class TestStrongest:
    def test_two_goals(self):
        t = task_of(["10", "11", "00"], [(0,)])
        o = define_ostensive(t, [S("10"), S("11")])
        sol = fit_strongest(o, LearnerConfig(2))
        # brute force: conjunction of every clause true on both goals
        kept = [c for c in clause_universe(2, 2) if all(clause_true(c, g) for g in o.sample)]
        assert set(sol.sentence.clauses) == set(kept)
        assert [str(z) for z in models(sol.sentence)] == ["10", "11"]
        assert sol.weakness == 2

    @pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 1), (3, 2)])
    def test_all_states_gives_empty(self, n, k):
        t = build_task(VariableSpace(n), [PartialState.empty(n)], [()])
        o = define_ostensive(t, t.goals, proper=False)
        sol = fit_strongest(o, LearnerConfig(k))
        assert render(sol.sentence) == "TRUE" and sol.weakness == 2**n

    def test_single_bit(self):
        t = task_of(["1", "0"], [()])
        sol = fit_strongest(define_ostensive(t, [S("1")]), LearnerConfig(1))
        assert render(sol.sentence) == "(x0=1)" and sol.weakness == 1

    def test_width_above_n(self, toy):
        with pytest.raises(BadWidth):
            fit_strongest(toy[1], LearnerConfig(3))


class TestIntensional:
    def test_toy(self, toy):
        _, o = toy
        sol = fit_intensional(o, LearnerConfig(1))
        assert render(sol.sentence) == "(x1=0)"
        assert sol.weakness == 2 and sol.kind is SolutionKind.INTENSIONAL
        assert fit_strongest(o, LearnerConfig(1)).weakness == 1

    def test_xor_full_observation(self):
        t = gen_parity(3)
        o = define_ostensive(t, t.goals, proper=False)
        sol = fit_intensional(o, LearnerConfig(3))
        world = observed_frame(o)
        assert {z for z in world if sentence_true(sol.sentence, z)} == set(t.goals)

    def test_addition_leave_one_out_feasible(self):
        t = gen_binary_addition(1)
        for held in t.goals:
            o = define_ostensive(t, [g for g in t.goals if g != held])
            sol = fit_intensional(o, LearnerConfig(t.n))
            assert is_exact(sol.sentence, o)
            # nothing in the language can reject fewer states than the observed non-goals
            world = observed_frame(o)
            assert sol.weakness == 2**t.n - (len(world) - len(o.sample))

    def test_infeasible_error(self):
        t = gen_parity(3)
        o = define_ostensive(t, t.goals, proper=False)
        with pytest.raises(ExactnessInfeasible):
            fit_intensional(o, LearnerConfig(1))

    def test_infeasible_best_effort(self):
        t = gen_parity(3)
        o = define_ostensive(t, t.goals, proper=False)
        sol = fit_intensional(o, LearnerConfig(1, infeasibility_mode=InfeasibilityMode.BEST_EFFORT))
        assert render(sol.sentence) == "TRUE"
        assert sol.violations == 4 and "violations=4" in sol.header()

    def test_determinism(self, rng):
        t = gen_binary_addition(2)
        o = sample_ostensive(t, 6, rng)
        a = fit_intensional(o, LearnerConfig(t.n))
        b = fit_intensional(o, LearnerConfig(t.n))
        assert a.sentence == b.sentence and a.weakness == b.weakness

    def test_greedy_and_exhaustive_agree_on_easy_case(self, toy):
        _, o = toy
        a = fit_intensional(o, LearnerConfig(2, exhaustive_threshold=0))
        b = fit_intensional(o, LearnerConfig(2))
        assert a.search == "greedy" and b.search == "exhaustive"
        assert a.weakness == b.weakness == 3

    def test_backends_agree(self, backend, rng):
        t = gen_binary_addition(2)
        o = sample_ostensive(t, 9, np.random.default_rng(5))
        sol = fit_intensional(o, LearnerConfig(t.n))
        assert is_exact(sol.sentence, o)
        assert sol.weakness == weakness_of(sol) == len(models(sol.sentence))


@st.composite
def small_problems(draw):
    n = draw(st.integers(2, 4))
    codes = draw(st.sets(st.integers(0, 2**n - 1), min_size=2, max_size=2**n - 1))
    frame = draw(st.sets(st.integers(0, n - 1), max_size=n - 1))
    t = build_task(VariableSpace(n), [PartialState.complete(n, c) for c in codes], [frame])
    m = draw(st.integers(1, len(t.goals) - 1))
    o = sample_ostensive(t, m, np.random.default_rng(draw(st.integers(0, 2**31))))
    k = draw(st.integers(1, n))
    return t, o, k


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_problems())
def test_exhaustive_is_globally_weakest(problem):
    t, o, k = problem
    world = set(observed_frame(o))
    negatives = world - set(o.sample)
    strongest = [c for c in clause_universe(t.n, k) if all(clause_true(c, g) for g in o.sample)]
    useful = [c for c in strongest if any(not clause_true(c, z) for z in negatives)]
    assume(len(useful) <= 12)
    oracle = weakest_subset(t.n, useful, negatives)
    cfg = LearnerConfig(k, exhaustive_threshold=12)
    if oracle is None:
        with pytest.raises(ExactnessInfeasible):
            fit_intensional(o, cfg)
        return
    sol = fit_intensional(o, cfg)
    assert sol.search in ("exhaustive", "trivial")
    assert sol.weakness == oracle[0] == len(models(sol.sentence))
    assert list(sol.sentence.clauses) == sorted(oracle[1], key=lambda c: c.key)


@settings(max_examples=80, deadline=None)
@given(small_problems(), st.integers(0, 30))
def test_intensional_exact_and_weaker_than_strongest(problem, threshold):
    t, o, k = problem
    cfg = LearnerConfig(k, exhaustive_threshold=threshold)
    strong = fit_strongest(o, cfg)
    try:
        weak = fit_intensional(o, cfg)
    except ExactnessInfeasible:
        assert not is_exact(strong.sentence, o)
        return
    assert is_exact(weak.sentence, o)
    assert is_exact(strong.sentence, o)
    assert weak.weakness >= strong.weakness
    assert weak.weakness == weakness_of(weak) == len(models(weak.sentence))
    assert all(c.width <= k for c in weak.sentence.clauses)
    assert set(weak.sentence.clauses) <= set(strong.sentence.clauses)
    if weak.search == "greedy":
        # local maximality: dropping any single clause breaks exactness
        for c in weak.sentence.clauses:
            rest = Sentence.make(t.n, [d for d in weak.sentence.clauses if d != c], k)
            assert not is_exact(rest, o)
