"""
Experiment runners behind the CLI: single runs, fuzz campaigns, the binary
adversary report and the greedy-killer sweep.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from pricing_cover.errors import CapacityError, PricingCoverError
from pricing_cover.functionality.adversary import binary_adversary, greedy_killer, random_instance
from pricing_cover.functionality.algorithms import GreedyAlgorithm, PrimalDualAlgorithm, make_algorithm
from pricing_cover.functionality.assignment import is_monotone_step, scheme_from_prices
from pricing_cover.functionality.opt_oracle import OptimalCover, optimal_cover_cost
from pricing_cover.functionality.pathprice import longest_path_oracle, path_price
from pricing_cover.functionality.pricing_sim import DirectEngine, Hooks, Transcript, run_direct, run_priced, transcripts_equal
from pricing_cover.model import Instance, dump_instance, format_fraction, frequency, instance_from_dict, instance_to_dict

logger = logging.getLogger(__name__)

# Algorithms whose total cost must stay within frequency times the optimum.
FREQUENCY_COMPETITIVE = {PrimalDualAlgorithm.name}


def competitive_ratio(cost: Fraction, opt: Optional[OptimalCover]) -> Optional[Fraction]:
    if opt is None or opt.cost == 0:
        return None
    return cost / opt.cost


def format_ratio(ratio: Optional[Fraction]) -> str:
    if ratio is None:
        return "n/a"
    return f"{format_fraction(ratio)} (~{float(ratio):.6f})"


@dataclass
class RunReport:
    transcript: Transcript
    optimum: Optional[OptimalCover]
    ratio: Optional[Fraction]
    frequency: int

    def summary(self) -> dict:
        return {
            "summary": {
                "algorithm": self.transcript.algorithm,
                "engine": self.transcript.engine,
                "cost": format_fraction(self.transcript.total_cost),
                "opt": format_fraction(self.optimum.cost) if self.optimum is not None else "n/a",
                "opt_witness": sorted(self.optimum.witness) if self.optimum is not None else None,
                "ratio": format_fraction(self.ratio) if self.ratio is not None else "n/a",
                "ratio_decimal": round(float(self.ratio), 6) if self.ratio is not None else None,
                "frequency": self.frequency,
            }
        }


def audit_steps(instance: Instance, algorithm_name: str) -> List[str]:
    """
    Replay the algorithm directly and check every step's pricing.

    At each arrival: the preference graph is acyclic, PathPrice labels equal the
    longest-path DP, every edge u -> v has price(u) > price(v), price = label + C_max,
    and the greedy client's unique choice equals the algorithm's for every
    uncovered element.

    :return: failure messages, empty when every step passes
    """
    system = instance.system
    algorithm = make_algorithm(algorithm_name, system)
    engine = DirectEngine(algorithm, system)
    failures: List[str] = []

    for step, e in enumerate(instance.requests):
        scheme = algorithm.assignment_scheme(engine.state)
        check = is_monotone_step(system, engine.state, scheme)
        if not check.monotone:
            failures.append(f"step {step}: preference graph has cycle {check.witness}")
            break

        pricing = path_price(check.graph, system.costs)
        oracle = longest_path_oracle(check.graph)
        if dict(pricing.labels) != oracle:
            failures.append(f"step {step}: PathPrice labels {dict(pricing.labels)} differ from longest paths {oracle}")
        for u, v in check.graph.edges:
            if not pricing.price[u] > pricing.price[v]:
                failures.append(f"step {step}: edge {u}->{v} priced {pricing.price[u]} <= {pricing.price[v]}")
        for s in check.graph.vertices:
            if pricing.price[s] != pricing.labels[s] + pricing.c_max:
                failures.append(f"step {step}: price of set {s} is not label + C_max")
        try:
            induced = scheme_from_prices(system, engine.state, pricing.price, strict=True)
        except PricingCoverError as error:
            failures.append(f"step {step}: {error}")
        else:
            if dict(induced.choice) != dict(scheme.choice):
                failures.append(f"step {step}: prices do not reproduce the assignment scheme")

        if failures:
            break
        engine.step(e)
    return failures


@dataclass
class TrialResult:
    index: int
    seed: int
    passed: bool
    failures: List[str] = field(default_factory=list)
    witness: Optional[List[int]] = None
    instance: Optional[dict] = None


def check_trial(index: int, instance: Instance, algorithm_name: str, seed: int = 0) -> TrialResult:
    """Run every fuzz check on one instance."""
    failures: List[str] = []
    witness: Optional[List[int]] = None
    system = instance.system

    direct = run_direct(make_algorithm(algorithm_name, system), instance)
    try:
        priced = run_priced(make_algorithm(algorithm_name, system), instance)
    except PricingCoverError as error:
        failures.append(f"priced engine failed: {error}")
        witness = getattr(error, "witness", None)
    else:
        if not transcripts_equal(direct, priced):
            failures.append(f"transcripts differ: direct {direct.purchased}, priced {priced.purchased}")

    try:
        opt: Optional[OptimalCover] = optimal_cover_cost(system, instance.requests)
    except CapacityError:
        opt = None
    if opt is not None:
        if opt.cost > direct.total_cost:
            failures.append(f"OPT {opt.cost} exceeds the {algorithm_name} cost {direct.total_cost}")
        f = frequency(system)
        if algorithm_name in FREQUENCY_COMPETITIVE and direct.total_cost > f * opt.cost:
            failures.append(f"cost {direct.total_cost} exceeds f * OPT = {f} * {opt.cost}")

    failures.extend(audit_steps(instance, algorithm_name))

    passed = not failures
    return TrialResult(
        index=index,
        seed=seed,
        passed=passed,
        failures=failures,
        witness=witness,
        instance=None if passed else instance_to_dict(instance),
    )


@dataclass(frozen=True)
class FuzzParams:
    n_max: int = 16
    m_max: int = 16
    f_max: int = 6
    cost_low: Fraction = Fraction(1)
    cost_high: Fraction = Fraction(10)
    repeat_probability: float = 0.2


def fuzz_instance(seed: int, params: FuzzParams) -> Instance:
    rng = random.Random(seed)
    return random_instance(
        n=rng.randint(1, params.n_max),
        m=rng.randint(1, params.m_max),
        f_max=rng.randint(1, params.f_max),
        cost_range=(params.cost_low, params.cost_high),
        seed=rng.getrandbits(32),
        repeat_probability=params.repeat_probability,
    )


def _run_trial(args: tuple[int, int, FuzzParams, str]) -> TrialResult:
    index, seed, params, algorithm_name = args
    return check_trial(index, fuzz_instance(seed, params), algorithm_name, seed=seed)


@dataclass
class FuzzReport:
    results: List[TrialResult]
    counterexample: Optional[Path] = None

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def first_failure(self) -> Optional[TrialResult]:
        return next((r for r in self.results if not r.passed), None)


def run_fuzz(
    trials: int,
    seed: int,
    params: FuzzParams = FuzzParams(),
    algorithm_name: str = PrimalDualAlgorithm.name,
    workers: int = 1,
    out_dir: Optional[Path] = None,
) -> FuzzReport:
    """
    Run seeded fuzz trials, optionally in worker processes.

    :param trials: number of random instances
    :param seed: campaign seed; trial seeds are derived from it
    :param params: instance size parameters
    :param algorithm_name: algorithm under test
    :param workers: worker processes, 1 runs in-process
    :param out_dir: where the first counterexample is written
    :return: results ordered by trial index
    """
    rng = random.Random(seed)
    jobs = [(index, rng.getrandbits(64), params, algorithm_name) for index in range(trials)]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, trials // (workers * 4))))
    else:
        results = [_run_trial(job) for job in jobs]
    results.sort(key=lambda r: r.index)

    report = FuzzReport(results=results)
    for r in results:
        if r.passed:
            logger.debug(f"Trial {r.index} passed", extra={"event_type": "fuzz_trial", "trial": r.index})
        else:
            logger.error(
                f"Trial {r.index} failed: {r.failures[0]}",
                extra={"event_type": "fuzz_trial", "trial": r.index, "failures": r.failures, "witness": r.witness},
            )

    first = report.first_failure
    if first is not None and out_dir is not None:
        path = Path(out_dir) / f"counterexample-{first.index}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        dump_instance(instance_from_dict(first.instance), path)
        report.counterexample = path

    logger.info(
        f"Fuzz: {report.passed}/{len(results)} trials passed",
        extra={"event_type": "fuzz_summary", "passed": report.passed, "failed": report.failed},
    )
    return report


@dataclass
class AdversaryReport:
    k: int
    algorithm: str
    requests: List[int]
    cost: Fraction
    optimum: OptimalCover
    ratio: Fraction

    @property
    def holds(self) -> bool:
        return self.ratio == self.k


def run_adversary_report(k: int, algorithm_name: str, hooks: Optional[Hooks] = None) -> AdversaryReport:
    run = binary_adversary(k, algorithm_name, hooks=hooks)
    optimum = optimal_cover_cost(run.instance.system, run.instance.requests)
    return AdversaryReport(
        k=k,
        algorithm=algorithm_name,
        requests=list(run.instance.requests),
        cost=run.transcript.total_cost,
        optimum=optimum,
        ratio=run.transcript.total_cost / optimum.cost,
    )


@dataclass(frozen=True)
class SweepRow:
    n: int
    greedy_cost: Fraction
    opt: Fraction
    frequency: int
    ratio: Fraction


def greedy_killer_sweep(ns: Sequence[int], epsilon: Fraction) -> List[SweepRow]:
    rows = []
    for n in ns:
        instance = greedy_killer(n, epsilon)
        transcript = run_direct(GreedyAlgorithm(instance.system), instance)
        opt = optimal_cover_cost(instance.system, instance.requests)
        rows.append(
            SweepRow(
                n=n,
                greedy_cost=transcript.total_cost,
                opt=opt.cost,
                frequency=frequency(instance.system),
                ratio=transcript.total_cost / opt.cost,
            )
        )
    return rows
