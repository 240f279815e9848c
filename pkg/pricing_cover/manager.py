"""
PricingCoverManager - A facade for everything that runs against one instance.

This manager simplifies experiments by providing a single entry point with
lazy-loaded properties for the quantities that are expensive to compute
(optimum, frequency) and factories for fresh algorithm runs.
"""

from typing import List, Optional

from .functionality.algorithms import OnlineAlgorithm, make_algorithm
from .functionality.assignment import PreferenceGraph, StepCheck, is_monotone_step
from .functionality.experiments import RunReport, competitive_ratio
from .functionality.opt_oracle import OptimalCover, optimal_cover_cost
from .functionality.pathprice import PricingScheme, path_price, price_table
from .functionality.pricing_sim import Hooks, Transcript, run_direct, run_priced
from .errors import CapacityError, InvalidInputError, NotMonotoneError
from .model import CoverState, Instance, frequency, load_instance

ENGINES = ("direct", "priced")


class PricingCoverManager:
    """
    Manager for runs, prices and optima on a single instance.

    Eksempel:
        manager = PricingCoverManager.from_file("killer.json")
        report = manager.run("primal-dual", engine="priced")
        print(report.transcript.total_cost, manager.optimum.cost)
    """

    def __init__(self, instance: Instance, hooks: Optional[Hooks] = None):
        """
        Initialize the PricingCoverManager.

        Args:
            instance: The instance every run uses
            hooks: Engine hooks passed to every run (default: none)
        """
        self.instance = instance
        self._hooks = hooks

        # Lazy-loaded results
        self._optimum: Optional[OptimalCover] = None
        self._frequency: Optional[int] = None

    @classmethod
    def from_file(cls, path: str, hooks: Optional[Hooks] = None) -> "PricingCoverManager":
        return cls(load_instance(path), hooks=hooks)

    @property
    def system(self):
        return self.instance.system

    @property
    def frequency(self) -> int:
        """Frequency of the set system (lazy-loaded)."""
        if self._frequency is None:
            self._frequency = frequency(self.system)
        return self._frequency

    @property
    def optimum(self) -> OptimalCover:
        """Offline optimum over the requested elements (lazy-loaded)."""
        if self._optimum is None:
            self._optimum = optimal_cover_cost(self.system, self.instance.requests)
        return self._optimum

    def algorithm(self, name: str) -> OnlineAlgorithm:
        """Fresh algorithm state for a new run."""
        return make_algorithm(name, self.system)

    def transcript(self, algorithm: str, engine: str = "direct") -> Transcript:
        if engine == "direct":
            return run_direct(self.algorithm(algorithm), self.instance, hooks=self._hooks)
        if engine == "priced":
            return run_priced(self.algorithm(algorithm), self.instance, hooks=self._hooks)
        raise InvalidInputError(f"Ugyldig engine: {engine}. Godkendte engines er: {', '.join(ENGINES)}")

    def run(self, algorithm: str, engine: str = "direct") -> RunReport:
        """
        Run an algorithm and compare it with the optimum.

        :param algorithm: algorithm name, e.g. "greedy" or "primal-dual"
        :param engine: "direct" or "priced"
        :return: transcript, optimum (None beyond the oracle's capacity), ratio and frequency
        """
        transcript = self.transcript(algorithm, engine)
        try:
            optimum: Optional[OptimalCover] = self.optimum
        except CapacityError:
            optimum = None
        return RunReport(
            transcript=transcript,
            optimum=optimum,
            ratio=competitive_ratio(transcript.total_cost, optimum),
            frequency=self.frequency,
        )

    def initial_step(self, algorithm: str) -> StepCheck:
        """Monotonicity check of the algorithm's scheme before the first arrival."""
        state = CoverState()
        scheme = self.algorithm(algorithm).assignment_scheme(state)
        return is_monotone_step(self.system, state, scheme)

    def preference_graph(self, algorithm: str) -> PreferenceGraph:
        return self.initial_step(algorithm).graph

    def pricing(self, algorithm: str) -> PricingScheme:
        check = self.initial_step(algorithm)
        if not check.monotone:
            raise NotMonotoneError(f"{algorithm} is not monotone on this instance", check.witness)
        return path_price(check.graph, self.system.costs)

    def price_table(self, algorithm: str) -> List[dict]:
        return price_table(self.pricing(algorithm), self.system.costs)
