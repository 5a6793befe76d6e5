"""Command-line experiment harness.

Three subcommands:

* ``learn``: run one learner on one model, write a stats row, the
  per-hypothesis size log and the learned machine.
* ``compare``: run two learners on the same model and seed, write a
  side-by-side row with query/action ratios.
* ``info``: structural report: sizes, component sizes, optional reverse.

All outputs are deterministic for a fixed configuration and seed: rerunning
a command produces byte-identical CSVs.
"""

import argparse
import csv
import sys
from pathlib import Path

from .errors import ProductLearnError
from .machine import minimize, project, reverse_machine
from .models import (
    make_register_machine,
    parse_kiss2,
    parse_moore,
    serialize_moore,
    circuit_to_moore,
)
from .estimators import resolve_split
from .reduction import run_reduction_learner
from .table import lstar
from .teacher import SamplingEQConfig, SimulatorTeacher

STATS_FIELDS = ["name", "states", "components", "eqs", "mqs", "dispatch_mqs", "actions", "learner", "seed"]
COMPARE_FIELDS = [
    "name", "states",
    "a_learner", "a_eqs", "a_mqs", "a_dispatch_mqs", "a_actions",
    "b_learner", "b_eqs", "b_mqs", "b_dispatch_mqs", "b_actions",
    "mq_ratio", "action_ratio", "seed",
]


def load_model(args):
    """Resolve --model/--format/--split into (name, machine, decomposition)."""
    fmt = args.format
    if fmt.startswith("register:"):
        n = int(fmt.split(":", 1)[1])
        machine = make_register_machine(n)
        name = args.model or f"M_{n}"
        split = args.split or "bits"
        return name, machine, resolve_split(_parse_split(split), machine.output_arity)
    if args.model is None:
        raise SystemExit("--model is required for file formats")
    text = Path(args.model).read_text()
    name = Path(args.model).stem
    if fmt == "native":
        machine = parse_moore(text)
        split = args.split or "bits"
        return name, machine, resolve_split(_parse_split(split), machine.output_arity)
    if fmt == "kiss2":
        circuit = parse_kiss2(text)
        grouping = None
        split = args.split or "bits"
        if split.startswith("groups:"):
            size = int(split.split(":", 1)[1])
            grouping = _contiguous_groups(circuit.output_width, size)
        machine, decomposition = circuit_to_moore(circuit, grouping)
        if split == "none":
            decomposition = resolve_split("none", machine.output_arity)
        return name, machine, decomposition
    raise SystemExit(f"unknown format {fmt!r}")


def _contiguous_groups(width, size):
    groups, j = [], 0
    while j < width:
        groups.append(tuple(range(j, min(j + size, width))))
        j += size
    return groups


def _parse_split(split):
    if split.startswith("groups:"):
        return int(split.split(":", 1)[1])
    return split


def make_teacher(machine, args):
    sampling = SamplingEQConfig(
        sample_count=args.samples,
        min_length=args.min_len,
        expected_extra_length=args.exp_len,
        rng_seed=args.seed,
    )
    return SimulatorTeacher(machine, eq_mode=args.eq, sampling=sampling)


def run_learner(kind, machine, decomposition, args):
    """Run one learner; returns (teacher, learned machine, components, hypothesis log)."""
    teacher = make_teacher(machine, args)
    log = []
    if kind == "product":
        outcome = run_reduction_learner(teacher, machine.inputs, decomposition)
        return teacher, outcome.machine, outcome.components, outcome.hypothesis_log
    if kind == "mono":
        learned = lstar(teacher, machine.inputs, hypothesis_log=log)
        return teacher, learned, None, log
    raise SystemExit(f"unknown learner {kind!r}")


def stats_row(name, target_states, components, teacher, kind, seed):
    s = teacher.stats
    return {
        "name": name,
        "states": target_states,
        "components": components,
        "eqs": s.eq_count,
        "mqs": s.mq_count,
        "dispatch_mqs": s.dispatch_mq_count,
        "actions": s.action_count,
        "learner": kind,
        "seed": seed,
    }


def write_csv(path, fields, rows):
    if path == "-" or path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def echo_config(args, extra=""):
    pairs = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()) if k != "func")
    print(f"# config: {pairs}{extra}", file=sys.stderr)


def cmd_learn(args):
    name, machine, decomposition = load_model(args)
    echo_config(args)
    minimal = minimize(machine)
    components = decomposition.arity if args.learner == "product" else 1
    teacher, learned, parts, log = run_learner(args.learner, machine, decomposition, args)
    row = stats_row(name, minimal.n_states, components, teacher, args.learner, args.seed)
    write_csv(args.stats_out, STATS_FIELDS, [row])
    if args.hyplog_out is not None:
        write_csv(
            args.hyplog_out,
            ["eq_ordinal", "reachable_states"],
            [
                {"eq_ordinal": i + 1, "reachable_states": n}
                for i, n in enumerate(log)
            ],
        )
    if args.learned_out is not None:
        Path(args.learned_out).write_text(serialize_moore(learned))
    return 0


def cmd_compare(args):
    name, machine, decomposition = load_model(args)
    echo_config(args)
    minimal = minimize(machine)
    teacher_a, _, _, _ = run_learner(args.learner_a, machine, decomposition, args)
    teacher_b, _, _, _ = run_learner(args.learner_b, machine, decomposition, args)
    sa, sb = teacher_a.stats, teacher_b.stats
    row = {
        "name": name,
        "states": minimal.n_states,
        "a_learner": args.learner_a,
        "a_eqs": sa.eq_count,
        "a_mqs": sa.mq_count,
        "a_dispatch_mqs": sa.dispatch_mq_count,
        "a_actions": sa.action_count,
        "b_learner": args.learner_b,
        "b_eqs": sb.eq_count,
        "b_mqs": sb.mq_count,
        "b_dispatch_mqs": sb.dispatch_mq_count,
        "b_actions": sb.action_count,
        "mq_ratio": f"{sa.total_mq_count / sb.total_mq_count:.6f}",
        "action_ratio": f"{sa.action_count / sb.action_count:.6f}",
        "seed": args.seed,
    }
    write_csv(args.stats_out, COMPARE_FIELDS, [row])
    return 0


def cmd_info(args):
    name, machine, decomposition = load_model(args)
    echo_config(args)
    minimal = minimize(machine)
    print(f"model: {name}")
    print(f"states: {machine.n_states}")
    print(f"minimized states: {minimal.n_states}")
    print(f"inputs: {len(machine.inputs)}")
    print(f"output arity: {machine.output_arity}")
    sizes = [
        minimize(project(machine, decomposition, i)).n_states
        for i in range(decomposition.arity)
    ]
    print(f"components ({decomposition.arity}): " + " ".join(map(str, sizes)))
    if args.reverse:
        reversed_machine = reverse_machine(machine, max_states=args.reverse_cap)
        print(f"reversed states: {reversed_machine.n_states}")
    return 0


def _add_model_flags(p):
    p.add_argument("--model", default=None, help="file path (or name for register:N)")
    p.add_argument("--format", default="native", help="native | kiss2 | register:N")
    p.add_argument("--split", default=None, help="bits | groups:N | none")


def _add_eq_flags(p):
    p.add_argument("--eq", default="exact", choices=["exact", "sample"])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--min-len", type=int, default=3)
    p.add_argument("--exp-len", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="productlearn")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn one model and emit stats")
    _add_model_flags(p)
    p.add_argument("--learner", default="product", choices=["product", "mono"])
    _add_eq_flags(p)
    p.add_argument("--stats-out", default="-")
    p.add_argument("--hyplog-out", default=None)
    p.add_argument("--learned-out", default=None)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("compare", help="run two learners on the same model")
    _add_model_flags(p)
    p.add_argument("--learner-a", default="product", choices=["product", "mono"])
    p.add_argument("--learner-b", default="mono", choices=["product", "mono"])
    _add_eq_flags(p)
    p.add_argument("--stats-out", default="-")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("info", help="structural report for a model")
    _add_model_flags(p)
    p.add_argument("--reverse", action="store_true", help="also build the reversed machine")
    p.add_argument("--reverse-cap", type=int, default=10**6)
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "learner", None) == "mono" and args.split is not None:
        parser.error("--split only applies to the product learner")
    try:
        return args.func(args)
    except ProductLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
