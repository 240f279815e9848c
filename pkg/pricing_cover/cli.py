"""
Command-line entry point: ``pricing-cover <subcommand>``.

Exit codes: 0 when everything passes, 1 when a fuzz or adversary assertion
fails, 2 on input errors and unpriceable steps.
"""

import argparse
import csv
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, TextIO

from dotenv import load_dotenv

from .errors import NotMonotoneError, PricingCoverError
from .functionality.adversary import binary_system, greedy_killer, random_instance
from .functionality.algorithms import algorithm_names
from .functionality.assignment import preference_graph_json
from .functionality.experiments import FuzzParams, format_ratio, greedy_killer_sweep, run_adversary_report, run_fuzz
from .hooks import create_event_logging_hook, create_price_logging_hook, create_transcript_writer_hook
from .manager import ENGINES, PricingCoverManager
from .model import Instance, dump_instance, format_fraction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_ERROR = 2


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value else default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pricing-cover",
        description="Online set cover under dynamic pricing",
    )
    parser.add_argument("--log-level", default=os.getenv("PRICING_COVER_LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an algorithm on an instance and print its transcript")
    run.add_argument("--instance", required=True)
    run.add_argument("--alg", choices=algorithm_names(), default="primal-dual")
    run.add_argument("--engine", choices=ENGINES, default="direct")
    run.add_argument("--out", help="write the transcript here instead of stdout")

    fuzz = sub.add_parser("fuzz", help="seeded random instances checked against every invariant")
    fuzz.add_argument("--trials", type=int, default=_env_int("PRICING_COVER_TRIALS", 1000))
    fuzz.add_argument("--seed", type=int, default=_env_int("PRICING_COVER_SEED", 0))
    fuzz.add_argument("--alg", choices=algorithm_names(), default="primal-dual")
    fuzz.add_argument("--n", type=int, default=16, help="largest universe size")
    fuzz.add_argument("--m", type=int, default=16, help="largest number of sets")
    fuzz.add_argument("--f-max", type=int, default=6, help="largest element frequency")
    fuzz.add_argument("--workers", type=int, default=_env_int("PRICING_COVER_WORKERS", 1))
    fuzz.add_argument("--out", default=os.getenv("PRICING_COVER_OUT", "."), help="counterexample directory")

    adversary = sub.add_parser("adversary", help="binary-counter adversary against an algorithm")
    adversary.add_argument("--k", type=int, required=True)
    adversary.add_argument("--alg", choices=algorithm_names(), default="primal-dual")

    gen = sub.add_parser("gen", help="write a generated instance as JSON")
    gen.add_argument("--kind", choices=("greedy-killer", "binary", "random"), default="random")
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--m", type=int, default=10)
    gen.add_argument("--f-max", type=int, default=3)
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    gen.add_argument("--cost-low", type=Fraction, default=Fraction(1))
    gen.add_argument("--cost-high", type=Fraction, default=Fraction(10))
    gen.add_argument("--seed", type=int, default=_env_int("PRICING_COVER_SEED", 0))
    gen.add_argument("--out")

    opt = sub.add_parser("opt", help="exact offline optimum over the requested elements")
    opt.add_argument("--instance", required=True)

    table = sub.add_parser("price-table", help="PathPrice prices for the first arrival as CSV")
    table.add_argument("--instance", required=True)
    table.add_argument("--alg", choices=algorithm_names(), default="primal-dual")
    table.add_argument("--out")

    graph = sub.add_parser("graph", help="preference graph before the first arrival as JSON")
    graph.add_argument("--instance", required=True)
    graph.add_argument("--alg", choices=algorithm_names(), default="primal-dual")

    killer = sub.add_parser("killer", help="greedy against the hard instance for several n, as CSV")
    killer.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000])
    killer.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))

    return parser


def _open_out(path: Optional[str], stdout: TextIO) -> TextIO:
    if path is None:
        return stdout
    return open(path, "w", encoding="utf-8", newline="")


def cmd_run(args: argparse.Namespace, stdout: TextIO) -> int:
    out = _open_out(args.out, stdout)
    try:
        hooks = {
            "event": [create_transcript_writer_hook(out), create_event_logging_hook()],
            "prices": [create_price_logging_hook()],
        }
        manager = PricingCoverManager.from_file(args.instance, hooks=hooks)
        report = manager.run(args.alg, engine=args.engine)
        out.write(json.dumps(report.summary()) + "\n")
    finally:
        if out is not stdout:
            out.close()
    logger.info(
        f"{args.alg}/{args.engine}: cost {report.transcript.total_cost}, ratio {format_ratio(report.ratio)}",
        extra={"event_type": "run_summary", **report.summary()["summary"]},
    )
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace, stdout: TextIO) -> int:
    params = FuzzParams(n_max=args.n, m_max=args.m, f_max=args.f_max)
    report = run_fuzz(
        trials=args.trials,
        seed=args.seed,
        params=params,
        algorithm_name=args.alg,
        workers=args.workers,
        out_dir=Path(args.out),
    )
    stdout.write(f"passed {report.passed}/{len(report.results)}\n")
    first = report.first_failure
    if first is None:
        return EXIT_OK
    stdout.write(f"first failure: trial {first.index} (seed {first.seed})\n")
    for failure in first.failures:
        stdout.write(f"  {failure}\n")
    if first.witness is not None:
        stdout.write(f"  witness cycle: {first.witness}\n")
    if report.counterexample is not None:
        stdout.write(f"counterexample written to {report.counterexample}\n")
    return EXIT_ASSERTION


def cmd_adversary(args: argparse.Namespace, stdout: TextIO) -> int:
    report = run_adversary_report(args.k, args.alg)
    stdout.write(
        json.dumps(
            {
                "k": report.k,
                "algorithm": report.algorithm,
                "requests": report.requests,
                "cost": format_fraction(report.cost),
                "opt": format_fraction(report.optimum.cost),
                "ratio": format_fraction(report.ratio),
            }
        )
        + "\n"
    )
    if not report.holds:
        logger.error(
            f"Adversary ratio {report.ratio} differs from k={report.k}",
            extra={"event_type": "adversary_failed", "k": report.k, "ratio": str(report.ratio)},
        )
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, stdout: TextIO) -> int:
    if args.kind == "greedy-killer":
        instance = greedy_killer(args.n, args.epsilon)
    elif args.kind == "binary":
        instance = Instance(system=binary_system(args.k))
    else:
        instance = random_instance(
            n=args.n,
            m=args.m,
            f_max=args.f_max,
            cost_range=(args.cost_low, args.cost_high),
            seed=args.seed,
        )
    text = dump_instance(instance, args.out)
    if args.out is None:
        stdout.write(text + "\n")
    return EXIT_OK


def cmd_opt(args: argparse.Namespace, stdout: TextIO) -> int:
    optimum = PricingCoverManager.from_file(args.instance).optimum
    stdout.write(json.dumps({"cost": format_fraction(optimum.cost), "witness": sorted(optimum.witness)}) + "\n")
    return EXIT_OK


def cmd_price_table(args: argparse.Namespace, stdout: TextIO) -> int:
    rows = PricingCoverManager.from_file(args.instance).price_table(args.alg)
    out = _open_out(args.out, stdout)
    try:
        writer = csv.DictWriter(out, fieldnames=["set_id", "cost", "label", "surcharge", "price"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not stdout:
            out.close()
    return EXIT_OK


def cmd_graph(args: argparse.Namespace, stdout: TextIO) -> int:
    check = PricingCoverManager.from_file(args.instance).initial_step(args.alg)
    payload = preference_graph_json(check.graph)
    payload["witness"] = check.witness
    stdout.write(json.dumps(payload) + "\n")
    return EXIT_OK


def cmd_killer(args: argparse.Namespace, stdout: TextIO) -> int:
    writer = csv.writer(stdout)
    writer.writerow(["n", "greedy_cost", "opt", "frequency", "ratio", "ratio_decimal"])
    for row in greedy_killer_sweep(args.n, args.epsilon):
        writer.writerow(
            [
                row.n,
                format_fraction(row.greedy_cost),
                format_fraction(row.opt),
                row.frequency,
                format_fraction(row.ratio),
                f"{float(row.ratio):.6f}",
            ]
        )
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "fuzz": cmd_fuzz,
    "adversary": cmd_adversary,
    "gen": cmd_gen,
    "opt": cmd_opt,
    "price-table": cmd_price_table,
    "graph": cmd_graph,
    "killer": cmd_killer,
}


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    load_dotenv()
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=stderr)

    try:
        return COMMANDS[args.command](args, stdout)
    except NotMonotoneError as e:
        stderr.write(f"error: {e}\nwitness cycle: {e.witness}\n")
        return EXIT_ERROR
    except PricingCoverError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
