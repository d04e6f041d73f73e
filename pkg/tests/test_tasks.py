import pytest

from intension.errors import BadPeriod, BadSpec, BadWidth, EmptyGoalSet, ParseError, SpaceMismatch
from intension.state import PartialState
from intension.tasks import (
    GENERATORS,
    ToyCpuSpec,
    execute,
    gen_binary_addition,
    gen_from_reward,
    gen_parity,
    gen_string_prediction,
    gen_toycpu,
    generate,
    parse_params,
    popcount_score,
    read_task,
    task_id,
    write_task,
)


def goal_strings(t):
    return {str(g) for g in t.goals}


@pytest.mark.parametrize("w", [1, 2, 3])
def test_addition_matches_integer_sum(w):
    t = gen_binary_addition(w)
    assert t.n == 3 * w + 1 and len(t.goals) == 4**w
    for g in goal_strings(t):
        a, b, s = int(g[:w], 2), int(g[w:2 * w], 2), int(g[2 * w:], 2)
        assert a + b == s
    assert [len(s.indices()) for s in t.initials] == [2 * w] * 4**w
    assert t.space.names[:2] == ((f"a{w - 1}", f"a{w - 2}") if w > 1 else ("a0", "b0"))


def test_addition_width_range():
    for w in (0, 4):
        with pytest.raises(BadWidth):
            gen_binary_addition(w)


@pytest.mark.parametrize("L,p", [(4, 1), (6, 2), (8, 3), (16, 4)])
def test_string_prediction_is_periodic(L, p):
    t = gen_string_prediction(L, p)
    assert len(t.goals) == 2**p
    for g in goal_strings(t):
        assert all(g[i] == g[i - p] for i in range(p, L))
    assert t.frames == (tuple(range(p)),)


@pytest.mark.parametrize("L,p", [(4, 4), (4, 0), (17, 2)])
def test_string_prediction_bad_period(L, p):
    with pytest.raises(BadPeriod):
        gen_string_prediction(L, p)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_parity_goals_are_xor(n):
    t = gen_parity(n)
    expect = set()
    for x in range(2 ** (n - 1)):
        bits = format(x, f"0{n - 1}b")
        expect.add(bits + str(bits.count("1") % 2))
    assert goal_strings(t) == expect


def _emulate(op, r0, r1, w):
    # reference semantics written independently of the generator
    ref = {"ADD": lambda: (r0 + r1) % 2**w, "AND": lambda: r0 & r1, "XOR": lambda: r0 ^ r1, "MOV": lambda: r1}
    return ref[op](), r1


@pytest.mark.parametrize("w", [1, 2])
def test_toycpu_matches_emulator(w):
    t = gen_toycpu(ToyCpuSpec(w))
    assert t.n == 2 + 4 * w and len(t.goals) == 4 * 4**w
    names = ["ADD", "AND", "XOR", "MOV"]
    for g in goal_strings(t):
        op = names[int(g[:2], 2)]
        r0, r1 = int(g[2:2 + w], 2), int(g[2 + w:2 + 2 * w], 2)
        p0, p1 = int(g[2 + 2 * w:2 + 3 * w], 2), int(g[2 + 3 * w:], 2)
        assert (p0, p1) == _emulate(op, r0, r1, w) == execute(op, r0, r1, w)


def test_toycpu_subset_and_errors():
    t = gen_toycpu(ToyCpuSpec(1, ("XOR",)))
    assert len(t.goals) == 4 and all(str(g).startswith("10") for g in t.goals)
    for spec in (ToyCpuSpec(0), ToyCpuSpec(1, ()), ToyCpuSpec(1, ("NOP",)), ToyCpuSpec(1, ("ADD", "ADD"))):
        with pytest.raises(BadSpec):
            gen_toycpu(spec)


def test_reward_popcount_threshold():
    t = gen_from_reward(4, popcount_score, 3, [(0, 1)])
    assert len(t.goals) == 5  # C(4,3) + C(4,4)
    assert all(str(g).count("1") >= 3 for g in t.goals)
    with pytest.raises(EmptyGoalSet):
        gen_from_reward(3, popcount_score, 4, [()])


def test_random_is_seeded():
    a, b = generate("random", {"seed": "7"}), generate("random", {"seed": "7"})
    assert a == b and len(a.goals) == 32
    assert generate("random", {"seed": "8"}) != a


def test_params_and_ids():
    assert parse_params("L=8, p=2") == {"L": "8", "p": "2"}
    assert parse_params("") == {}
    with pytest.raises(BadSpec):
        parse_params("w")
    assert task_id("string", {"p": "2", "L": "8"}) == "string(L=8,p=2)"
    with pytest.raises(BadSpec):
        generate("nope", {})
    with pytest.raises(BadSpec):
        generate("addition", {})
    with pytest.raises(BadSpec):
        generate("addition", {"w": "x"})


ALL = [
    ("addition", {"w": "2"}),
    ("string", {"L": "8", "p": "3"}),
    ("parity", {"n": "4"}),
    ("toycpu", {"w": "1"}),
    ("toycpu", {"w": "1", "ops": "AND+MOV"}),
    ("reward", {"n": "5", "theta": "3"}),
    ("random", {"n": "6", "size": "10", "seed": "3"}),
]


@pytest.mark.parametrize("name,params", ALL)
def test_round_trip(name, params):
    t = generate(name, params)
    text = write_task(t)
    back = read_task(text)
    assert back == t and back.initials == t.initials
    assert write_task(back) == text


def test_every_generator_covered():
    assert {name for name, _ in ALL} == set(GENERATORS)


def test_read_accepts_patterns_and_comments():
    t = read_task("task v1\nvars 3  # three\nframe 0\ngoal 1*0\n\ngoal 000\n")
    assert goal_strings(t) == {"000", "100", "110"}
    assert [str(s) for s in t.initials] == ["0**", "1**"]


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("task v2\nvars 2\n", 1),
    ("task v1\nvar 2\n", 2),
    ("task v1\nvars x\n", 2),
    ("task v1\nvars 2\nframe 0\ngoal 1x\n", 4),
    ("task v1\nvars 2\nframe 2\ngoal 10\n", 3),
    ("task v1\nvars 2\nframe 0 0\ngoal 10\n", 3),
    ("task v1\nvars 2\nframe a\ngoal 10\n", 3),
    ("task v1\nvars 2\nframe 0\n\n\nfoo 1\n", 6),
    ("task v1\nvars 2\ngoal 10\n", 3),
    ("task v1\nvars 2\nframe 0\n", 3),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as exc:
        read_task(text)
    assert exc.value.line == line


def test_pattern_length_mismatch():
    with pytest.raises(SpaceMismatch):
        read_task("task v1\nvars 3\nframe 0\ngoal 10\n")
    with pytest.raises(SpaceMismatch):
        read_task("task v1\nvars 2\nnames a\nframe 0\ngoal 10\n")


def test_names_round_trip():
    t = read_task("task v1\nvars 2\nnames p q\nframe 1\ngoal 01\n")
    assert t.space.names == ("p", "q")
    assert "names p q" in write_task(t)
