"""Sample-efficiency curves and the dominance verdict.

Every (m, trial) cell draws one ostensive sample that all learners share, so
learner comparisons are paired.  Trial seeds come from a splitmix64-style
mixer over (master seed, task id hash, m, trial); nothing depends on
execution order, which keeps the CSV byte-identical across runs.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .decision import AbductionPolicy, generalization_rate
from .errors import BadConfig, IntensionError, MismatchedRuns
from .learners import (
    InfeasibilityMode,
    LearnerConfig,
    SolutionKind,
    fit,
    fit_extensional,
    is_exact,
)
from .state import Task, sample_ostensive
from .tasks import generate, read_task, task_id

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB

LEARNER_ORDER = ("intensional", "strongest", "extensional")
# fixed per-learner salts for the UNIFORM abduction stream
_LEARNER_SALT = {"intensional": 1, "strongest": 2, "extensional": 3}

CSV_HEADER = ("task", "learner", "m", "trial", "seed", "rate", "weakness", "exact", "fit_ms")


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_C2) & MASK64
    return z ^ (z >> 31)


def task_hash(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode(), digest_size=8).digest(), "little")


def trial_seed(master: int, task: str, m: int, trial: int) -> int:
    h = splitmix64(master & MASK64)
    for part in (task_hash(task), m, trial):
        h = splitmix64(h ^ (part & MASK64))
    return h


class EvalMode(enum.Enum):
    FULL_S = "full"
    HELDOUT = "heldout"


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str | None = None
    params: dict = field(default_factory=dict)
    task_path: str | None = None
    learners: tuple[str, ...] = LEARNER_ORDER
    sizes: tuple[int, ...] = (1,)
    trials: int = 1
    seed: int = 0
    width: int | None = None
    policy: AbductionPolicy = AbductionPolicy.LEX_FIRST
    eval_mode: EvalMode = EvalMode.HELDOUT
    epsilon: float = 0.02
    abort_on_error: bool = False
    exhaustive_threshold: int = 18
    infeasibility_mode: InfeasibilityMode = InfeasibilityMode.ERROR

    @property
    def task_name(self) -> str:
        if self.task_path is not None:
            return Path(self.task_path).stem
        return task_id(self.generator, self.params)

    def load_task(self) -> Task:
        if (self.generator is None) == (self.task_path is None):
            raise BadConfig("give exactly one of a generator or a task file")
        if self.task_path is not None:
            return read_task(Path(self.task_path).read_text())
        return generate(self.generator, self.params)

    def learner_config(self, task: Task) -> LearnerConfig:
        k = default_width(task) if self.width is None else self.width
        return LearnerConfig(k, self.exhaustive_threshold, self.infeasibility_mode)

    def validate(self, task: Task) -> None:
        if self.trials < 1:
            raise BadConfig("trials must be at least 1")
        if not self.sizes:
            raise BadConfig("no sample sizes")
        for m in self.sizes:
            if not 1 <= m < len(task.goals):
                raise BadConfig(f"sample size {m} outside 1..{len(task.goals) - 1}")
        for name in self.learners:
            if name not in LEARNER_ORDER:
                raise BadConfig(f"unknown learner {name!r}")
        if len(set(self.learners)) != len(self.learners):
            raise BadConfig("duplicate learner")


def default_width(task: Task) -> int:
    return min(3, task.n)


@dataclass(frozen=True)
class CurvePoint:
    task: str
    learner: str
    m: int
    trial: int
    seed: int
    rate: float | None
    weakness: int | None
    exact: bool
    fit_ms: float


def _run_cell(task: Task, cfg: ExperimentConfig, name: str, m: int, trial: int) -> list[CurvePoint]:
    seed = trial_seed(cfg.seed, name, m, trial)
    o = sample_ostensive(task, m, np.random.default_rng(seed))
    lcfg = cfg.learner_config(task)
    if cfg.eval_mode is EvalMode.FULL_S:
        eval_set = list(task.initials)
    else:
        seen = set(o.initials_o)
        eval_set = [s for s in task.initials if s not in seen]
    lookup = fit_extensional(o) if cfg.policy is AbductionPolicy.EXTENSIONAL_FIRST else None
    rows = []
    for learner in cfg.learners:
        try:
            sol = fit(learner, o, lcfg)
        except IntensionError as exc:
            if cfg.abort_on_error:
                raise
            log.warning("%s m=%d trial=%d %s: %s", name, m, trial, learner, exc)
            rows.append(CurvePoint(name, learner, m, trial, seed, None, None, False, 0.0))
            continue
        exact = True if sol.kind is SolutionKind.EXTENSIONAL else is_exact(sol.sentence, o)
        rate = None
        if eval_set:
            rng = np.random.default_rng(splitmix64(seed ^ _LEARNER_SALT[learner]))
            rate = generalization_rate(task, sol, eval_set, cfg.policy, rng, lookup)
        rows.append(CurvePoint(name, learner, m, trial, seed, rate, sol.weakness, exact, sol.fit_ms))
    return rows


def _run_cell_star(args):
    return _run_cell(*args)


def run_curve(cfg: ExperimentConfig, task: Task | None = None, workers: int = 1) -> list[CurvePoint]:
    """Fit and evaluate every learner for each (m, trial); rows ordered by (m, trial, learner)."""
    if task is None:
        task = cfg.load_task()
    cfg.validate(task)
    name = cfg.task_name
    jobs = [(task, cfg, name, m, t) for m in cfg.sizes for t in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            cells = list(pool.map(_run_cell_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        cells = [_run_cell(*job) for job in jobs]
    return [row for cell in cells for row in cell]


def _fmt(p: CurvePoint, timing: bool) -> list[str]:
    return [
        p.task,
        p.learner,
        str(p.m),
        str(p.trial),
        str(p.seed),
        "" if p.rate is None else f"{p.rate:.6f}",
        "" if p.weakness is None else str(p.weakness),
        "1" if p.exact else "0",
        f"{p.fit_ms:.3f}" if timing else "",
    ]


def write_csv(points: Iterable[CurvePoint], timing: bool = False) -> str:
    """Render points as CSV.  ``fit_ms`` is left blank unless ``timing`` is set,
    since wall-clock values would break byte-identical reruns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow(_fmt(p, timing))
    return buf.getvalue()


def read_csv(text: str) -> list[CurvePoint]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise MismatchedRuns("unexpected CSV header")
    out = []
    for r in rows[1:]:
        out.append(CurvePoint(
            r[0], r[1], int(r[2]), int(r[3]), int(r[4]),
            float(r[5]) if r[5] else None,
            int(r[6]) if r[6] else None,
            r[7] == "1",
            float(r[8]) if r[8] else 0.0,
        ))
    return out


@dataclass(frozen=True)
class DominanceRow:
    task: str
    m: int
    comparator: str
    pairs: int
    subject_mean: float
    comparator_mean: float

    @property
    def difference(self) -> float:
        return self.subject_mean - self.comparator_mean


@dataclass(frozen=True)
class DominanceReport:
    subject: str
    epsilon: float
    rows: tuple[DominanceRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.difference >= -self.epsilon for r in self.rows)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def render(self) -> str:
        lines = [f"{'task':<24} {'m':>4} {'comparator':<12} {'pairs':>5} "
                 f"{self.subject:>12} {'comparator':>10} {'diff':>9}"]
        for r in self.rows:
            lines.append(f"{r.task:<24} {r.m:>4} {r.comparator:<12} {r.pairs:>5} "
                         f"{r.subject_mean:>12.6f} {r.comparator_mean:>10.6f} {r.difference:>+9.6f}")
        lines.append(f"verdict: {self.verdict} (epsilon={self.epsilon})")
        return "\n".join(lines)


def dominance_report(
    points: Sequence[CurvePoint],
    epsilon: float = 0.02,
    subject: str = "intensional",
    comparators: Sequence[str] | None = None,
) -> DominanceReport:
    """Per (task, m): paired mean rates of ``subject`` against each comparator.

    Trials where either side has no rate (fit error, empty held-out set) drop
    out of that pair.  PASS iff the subject's mean is never below a
    comparator's by more than ``epsilon``.
    """
    by_learner: dict[str, dict[tuple, float | None]] = {}
    for p in points:
        by_learner.setdefault(p.learner, {})[(p.task, p.m, p.trial, p.seed)] = p.rate
    if subject not in by_learner:
        raise MismatchedRuns(f"no rows for {subject!r}")
    if comparators is None:
        comparators = [name for name in LEARNER_ORDER if name in by_learner and name != subject]
        comparators += sorted(set(by_learner) - set(LEARNER_ORDER) - {subject})
    if not comparators:
        raise MismatchedRuns("dominance needs at least two learners")
    base = by_learner[subject]
    rows = []
    for comp in comparators:
        other = by_learner.get(comp)
        if other is None or set(other) != set(base):
            raise MismatchedRuns(f"{comp!r} rows are not paired with {subject!r}")
        cells: dict[tuple[str, int], list[tuple[float, float]]] = {}
        for key in sorted(base):
            a, b = base[key], other[key]
            if a is None or b is None:
                continue
            cells.setdefault((key[0], key[1]), []).append((a, b))
        for (task, m), pairs in sorted(cells.items()):
            arr = np.array(pairs)
            rows.append(DominanceRow(task, m, comp, len(pairs), float(arr[:, 0].mean()), float(arr[:, 1].mean())))
    rows.sort(key=lambda r: (r.task, r.m, comparators.index(r.comparator)))
    return DominanceReport(subject, epsilon, tuple(rows))
