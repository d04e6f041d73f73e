"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 no exact
sentence exists (error mode), 4 dominance verdict FAIL.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import selftest
from .decision import AbductionPolicy, decision_trial
from .errors import BadConfig, ExactnessInfeasible, IntensionError
from .harness import (
    LEARNER_ORDER,
    EvalMode,
    ExperimentConfig,
    dominance_report,
    run_curve,
    splitmix64,
    trial_seed,
    write_csv,
)
from .learners import fit
from .state import define_ostensive, sample_ostensive
from .tasks import parse_params, write_task

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE, EXIT_DOMINANCE = 0, 1, 2, 3, 4

POLICIES = {p.value: p for p in AbductionPolicy}
EVAL_MODES = {m.value: m for m in EvalMode}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str | None) -> int:
    if text is None:
        text = os.environ.get("INTENSION_SEED", "0")
    try:
        return int(text, 0)
    except ValueError:
        raise UsageError(f"seed must be an integer, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="intension", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def task_opts(sp):
        sp.add_argument("--task", help="task file")
        sp.add_argument("--generator", help="task generator name")
        sp.add_argument("--params", default="", help="generator parameters, e.g. w=1 or L=8,p=2")

    def learn_opts(sp, many=False):
        sp.add_argument("--learner", default=",".join(LEARNER_ORDER) if many else "intensional",
                        help="learner name" + (" list" if many else ""))
        sp.add_argument("--width", type=int, help="clause width bound (default min(3, n))")
        sp.add_argument("--seed", help="master seed (default $INTENSION_SEED or 0)")
        sp.add_argument("--policy", choices=sorted(POLICIES), default="lex")

    g = sub.add_parser("gen", help="write a task file from a generator")
    task_opts(g)
    g.add_argument("--out")

    f = sub.add_parser("fit", help="fit one learner and print the solution")
    task_opts(f)
    learn_opts(f)
    f.add_argument("--samples", type=int, help="ostensive sample size (default: the whole goal set)")
    f.add_argument("--out")

    e = sub.add_parser("eval", help="fit, then run decision trials on initial states")
    task_opts(e)
    learn_opts(e)
    e.add_argument("--samples", type=int)
    e.add_argument("--eval-mode", choices=sorted(EVAL_MODES), default="full")
    e.add_argument("--out")

    c = sub.add_parser("curve", help="sample-efficiency sweep to CSV plus dominance verdict")
    task_opts(c)
    learn_opts(c, many=True)
    c.add_argument("--samples", required=True, help="comma-separated sample sizes")
    c.add_argument("--trials", type=int, default=1)
    c.add_argument("--eval-mode", choices=sorted(EVAL_MODES), default="heldout")
    c.add_argument("--epsilon", type=float, default=0.02)
    c.add_argument("--abort-on-error", action="store_true")
    c.add_argument("--out")

    s = sub.add_parser("selftest", help="run the randomised invariant checks")
    s.add_argument("--seed")
    return p


def _config(args, sizes=(1,), trials=1) -> ExperimentConfig:
    if (args.task is None) == (args.generator is None):
        raise UsageError("give exactly one of --task or --generator")
    return ExperimentConfig(
        generator=args.generator,
        params=parse_params(args.params) if args.generator else {},
        task_path=args.task,
        learners=tuple(x.strip() for x in args.learner.split(",")) if hasattr(args, "learner") else LEARNER_ORDER,
        sizes=sizes,
        trials=trials,
        seed=_seed(getattr(args, "seed", None)),
        width=getattr(args, "width", None),
        policy=POLICIES[getattr(args, "policy", "lex")],
        eval_mode=EVAL_MODES[getattr(args, "eval_mode", "heldout")],
        epsilon=getattr(args, "epsilon", 0.02),
        abort_on_error=getattr(args, "abort_on_error", False),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ostensive(cfg, task, m):
    if m is None:
        return define_ostensive(task, task.goals, proper=False)
    return sample_ostensive(task, m, np.random.default_rng(trial_seed(cfg.seed, cfg.task_name, m, 0)))


def cmd_gen(args) -> int:
    cfg = _config(args)
    _emit(write_task(cfg.load_task()), args.out)
    return EXIT_OK


def _fit_one(args):
    cfg = _config(args)
    if len(cfg.learners) != 1:
        raise UsageError("--learner takes a single name here")
    task = cfg.load_task()
    o = _ostensive(cfg, task, args.samples)
    sol = fit(cfg.learners[0], o, cfg.learner_config(task))
    return cfg, task, o, sol


def cmd_fit(args) -> int:
    _, _, _, sol = _fit_one(args)
    _emit(f"{sol}\n", args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg, task, o, sol = _fit_one(args)
    lookup = None
    if cfg.policy is AbductionPolicy.EXTENSIONAL_FIRST:
        lookup = fit("extensional", o, cfg.learner_config(task))
    if cfg.eval_mode is EvalMode.FULL_S:
        eval_set = list(task.initials)
    else:
        seen = set(o.initials_o)
        eval_set = [s for s in task.initials if s not in seen]
    rng = np.random.default_rng(splitmix64(cfg.seed))
    lines = [sol.header()]
    wins = 0
    for s in eval_set:
        out = decision_trial(task, sol, s, cfg.policy, rng, lookup)
        wins += out.success
        decision = str(out.decision) if out.decision is not None else out.failure_reason.value
        lines.append(f"{s} -> {decision} {'ok' if out.success else 'fail'}")
    rate = f"{wins / len(eval_set):.6f}" if eval_set else "n/a"
    lines.append(f"rate {rate} ({wins}/{len(eval_set)})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    cfg = _config(args, sizes=_int_list(args.samples), trials=args.trials)
    points = run_curve(cfg)
    timing = os.environ.get("INTENSION_TIMING", "") not in ("", "0")
    _emit(write_csv(points, timing=timing), args.out)
    if "intensional" in cfg.learners and len(cfg.learners) > 1:
        report = dominance_report(points, cfg.epsilon)
        print(report.render(), file=sys.stderr)
        if not report.passed:
            return EXIT_DOMINANCE
    return EXIT_OK


def cmd_selftest(args) -> int:
    ok = selftest.run_all(_seed(args.seed))
    return EXIT_OK if ok else EXIT_DATA


COMMANDS = {"gen": cmd_gen, "fit": cmd_fit, "eval": cmd_eval, "curve": cmd_curve, "selftest": cmd_selftest}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"intension: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BadConfig as exc:
        print(f"intension: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactnessInfeasible as exc:
        print(f"intension: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (IntensionError, OSError) as exc:
        print(f"intension: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
