"""Task generators and the line-oriented task file format."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import BadPeriod, BadSpec, BadWidth, EmptyGoalSet, ParseError, SpaceMismatch
from .state import PartialState, Task, VariableSpace, build_task, state_key


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def _task_from_strings(names: list[str], goals: Iterable[str], frames) -> Task:
    space = VariableSpace(len(names), tuple(names))
    return build_task(space, [PartialState.from_string(g) for g in goals], frames)


def gen_binary_addition(w: int) -> Task:
    """``a + b = s`` on ``w``-bit operands with a ``w+1``-bit sum (carry kept)."""
    if not 1 <= w <= 3:
        raise BadWidth(f"addition width {w} outside 1..3")
    names = ([f"a{i}" for i in reversed(range(w))] + [f"b{i}" for i in reversed(range(w))]
             + [f"s{i}" for i in reversed(range(w + 1))])
    goals = [_bits(a, w) + _bits(b, w) + _bits(a + b, w + 1)
             for a in range(1 << w) for b in range(1 << w)]
    return _task_from_strings(names, goals, [range(2 * w)])


def gen_string_prediction(length: int, period: int) -> Task:
    """Strings of ``length`` bits repeating with ``period``; the prefix is given."""
    if not 1 <= period < length <= 16:
        raise BadPeriod(f"need 1 <= period < length <= 16, got p={period}, L={length}")
    goals = []
    for head in range(1 << period):
        prefix = _bits(head, period)
        goals.append("".join(prefix[i % period] for i in range(length)))
    names = [f"c{i}" for i in range(length)]
    return _task_from_strings(names, goals, [range(period)])


def gen_parity(n: int) -> Task:
    if not 2 <= n <= 8:
        raise BadWidth(f"parity size {n} outside 2..8")
    goals = []
    for x in range(1 << (n - 1)):
        goals.append(_bits(x, n - 1) + str(x.bit_count() & 1))
    names = [f"x{i}" for i in range(1, n)] + ["y"]
    return _task_from_strings(names, goals, [range(n - 1)])


OPCODES = {"ADD": 0, "AND": 1, "XOR": 2, "MOV": 3}


@dataclass(frozen=True)
class ToyCpuSpec:
    """One-instruction machine: ``r0 <- op(r0, r1)``, ``r1`` unchanged."""

    width: int
    opcodes: tuple[str, ...] = ("ADD", "AND", "XOR", "MOV")

    def validate(self) -> None:
        if not 1 <= self.width <= 3:
            raise BadSpec(f"register width {self.width} outside 1..3")
        if not self.opcodes:
            raise BadSpec("empty opcode set")
        for op in self.opcodes:
            if op not in OPCODES:
                raise BadSpec(f"unknown opcode {op!r}")
        if len(set(self.opcodes)) != len(self.opcodes):
            raise BadSpec("duplicate opcode")

    @property
    def n(self) -> int:
        return 2 + 4 * self.width


def execute(op: str, r0: int, r1: int, width: int) -> tuple[int, int]:
    mask = (1 << width) - 1
    if op == "ADD":
        return (r0 + r1) & mask, r1
    if op == "AND":
        return r0 & r1, r1
    if op == "XOR":
        return r0 ^ r1, r1
    if op == "MOV":
        return r1, r1
    raise BadSpec(f"unknown opcode {op!r}")


def gen_toycpu(spec: ToyCpuSpec) -> Task:
    spec.validate()
    w = spec.width
    goals = []
    for op in spec.opcodes:
        for r0 in range(1 << w):
            for r1 in range(1 << w):
                p0, p1 = execute(op, r0, r1, w)
                goals.append(_bits(OPCODES[op], 2) + _bits(r0, w) + _bits(r1, w)
                             + _bits(p0, w) + _bits(p1, w))
    names = (["op1", "op0"]
             + [f"r0_{i}" for i in reversed(range(w))] + [f"r1_{i}" for i in reversed(range(w))]
             + [f"r0p_{i}" for i in reversed(range(w))] + [f"r1p_{i}" for i in reversed(range(w))])
    return _task_from_strings(names, goals, [range(2 + 2 * w)])


def popcount_score(z: PartialState) -> int:
    return z.values.bit_count()


def gen_from_reward(n: int, score: Callable[[PartialState], float], threshold: float, frames) -> Task:
    """Goal set = complete states whose score reaches ``threshold``."""
    goals = [PartialState.complete(n, c) for c in range(1 << n)]
    goals = [z for z in goals if score(z) >= threshold]
    if not goals:
        raise EmptyGoalSet(f"no state scores at least {threshold}")
    return build_task(VariableSpace(n), goals, frames)


RANDOM_PRESET_SEEDS = (101, 202, 303, 404, 505)


def gen_random(n: int = 8, size: int = 32, seed: int = RANDOM_PRESET_SEEDS[0]) -> Task:
    """Uniformly random goal set with no structure to model.

    Frames are the first half of the variables plus the empty frame, so the
    observed world of any sample is the entire state space.
    """
    if not 1 <= size <= 1 << n:
        raise BadSpec(f"goal count {size} outside 1..{1 << n}")
    rng = np.random.default_rng(seed)
    codes = rng.choice(1 << n, size=size, replace=False)
    goals = [PartialState.complete(n, int(c)) for c in codes]
    return build_task(VariableSpace(n), goals, [(), range(n // 2)])


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise BadSpec(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise BadSpec(f"parameter {key!r} must be an integer") from None


def _frame_param(text: str, n: int):
    if text in ("", "-"):
        return ()
    try:
        return tuple(int(t) for t in text.split("."))
    except ValueError:
        raise BadSpec(f"bad frame {text!r}; use dot-separated indices") from None


def _reward(params):
    n = _int(params, "n")
    frame = _frame_param(params.get("frame", ".".join(str(i) for i in range(n // 2))), n)
    return gen_from_reward(n, popcount_score, _int(params, "theta"), [frame])


def _toycpu(params):
    ops = tuple(params.get("ops", "ADD+AND+XOR+MOV").split("+"))
    return gen_toycpu(ToyCpuSpec(_int(params, "w"), ops))


GENERATORS: dict[str, Callable[[Mapping[str, str]], Task]] = {
    "addition": lambda p: gen_binary_addition(_int(p, "w")),
    "string": lambda p: gen_string_prediction(_int(p, "L"), _int(p, "p")),
    "parity": lambda p: gen_parity(_int(p, "n")),
    "toycpu": _toycpu,
    "reward": _reward,
    "random": lambda p: gen_random(_int(p, "n", 8), _int(p, "size", 32),
                                   _int(p, "seed", RANDOM_PRESET_SEEDS[0])),
}


def parse_params(text: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise BadSpec(f"bad parameter {item!r}; expected key=value")
        out[key.strip()] = value.strip()
    return out


def generate(name: str, params: Mapping[str, str]) -> Task:
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise BadSpec(f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}") from None
    return fn(params)


def task_id(name: str, params: Mapping[str, str]) -> str:
    inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{name}({inner})"


# -- file format -----------------------------------------------------------

def write_task(task: Task) -> str:
    lines = ["task v1", f"vars {task.n}"]
    if task.space.names is not None:
        lines.append("names " + " ".join(task.space.names))
    for f in task.frames:
        lines.append(" ".join(["frame", *map(str, f)]))
    for g in sorted(task.goals, key=state_key):
        lines.append(f"goal {g}")
    return "\n".join(lines) + "\n"


def read_task(text: str) -> Task:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows or rows[0][1] != ["task", "v1"]:
        raise ParseError("expected header 'task v1'", rows[0][0] if rows else 1)
    if len(rows) < 2 or rows[1][1][0] != "vars" or len(rows[1][1]) != 2:
        raise ParseError("expected 'vars <n>'", rows[1][0] if len(rows) > 1 else rows[0][0])
    lineno, toks = rows[1]
    try:
        n = int(toks[1])
        space_n = VariableSpace(n)
    except ValueError as exc:
        raise ParseError(f"bad variable count: {exc}", lineno) from None
    names = None
    frames, goals = [], []
    for lineno, toks in rows[2:]:
        kw, args = toks[0], toks[1:]
        if kw == "names":
            if names is not None:
                raise ParseError("duplicate names line", lineno)
            if len(args) != n:
                raise SpaceMismatch(f"line {lineno}: {len(args)} names for {n} variables")
            names = tuple(args)
        elif kw == "frame":
            try:
                idx = [int(a) for a in args]
            except ValueError:
                raise ParseError("frame indices must be integers", lineno) from None
            for i in idx:
                if not 0 <= i < n:
                    raise ParseError(f"frame index {i} outside 0..{n - 1}", lineno)
            if len(set(idx)) != len(idx):
                raise ParseError("repeated frame index", lineno)
            frames.append(idx)
        elif kw == "goal":
            if len(args) != 1 or set(args[0]) - set("01*"):
                raise ParseError("goal pattern must be one string over {0,1,*}", lineno)
            if len(args[0]) != n:
                raise SpaceMismatch(f"line {lineno}: pattern of length {len(args[0])}, expected {n}")
            goals.append(PartialState.from_string(args[0]))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
    if not frames:
        raise ParseError("at least one frame line required", rows[-1][0])
    if not goals:
        raise ParseError("at least one goal line required", rows[-1][0])
    try:
        space = VariableSpace(n, names) if names is not None else space_n
    except ValueError as exc:
        raise ParseError(str(exc), rows[2][0]) from None
    return build_task(space, goals, frames)
