import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, List, Optional, Type

from pricing_cover.errors import InvalidInputError, ProtocolViolationError
from pricing_cover.functionality.assignment import AssignmentScheme
from pricing_cover.model import CoverState, SetSystem, sets_covering

logger = logging.getLogger(__name__)


class OnlineAlgorithm(ABC):
    """
    An online set cover algorithm seen from both engines.

    ``on_arrival`` is used when the algorithm buys directly. ``observe_purchase``
    is used when a client bought under posted prices and the algorithm only
    learns about it afterwards. ``element`` is None when the server is not told
    which element triggered the purchase.
    """

    name: ClassVar[str]
    needs_element_identity: ClassVar[bool] = False

    def __init__(self, system: SetSystem):
        self.system = system

    @abstractmethod
    def assignment_scheme(self, state: CoverState) -> AssignmentScheme:
        ...

    def on_arrival(self, e: int, state: CoverState) -> int:
        if state.is_covered(e):
            raise ProtocolViolationError(f"element {e} is already covered")
        return self.assignment_scheme(state)[e]

    def observe_purchase(self, element: Optional[int], set_id: int) -> None:
        pass


def greedy_assignment(system: SetSystem, state: CoverState) -> AssignmentScheme:
    """Cheapest covering set per uncovered element, smaller id on ties."""
    return AssignmentScheme(
        {
            e: min(sets_covering(system, e), key=lambda s: (system.sets[s].cost, s))
            for e in state.uncovered(system)
        }
    )


class GreedyAlgorithm(OnlineAlgorithm):
    name = "greedy"

    def assignment_scheme(self, state: CoverState) -> AssignmentScheme:
        return greedy_assignment(self.system, state)

    def on_arrival(self, e: int, state: CoverState) -> int:
        if state.is_covered(e):
            raise ProtocolViolationError(f"element {e} is already covered")
        return min(sets_covering(self.system, e), key=lambda s: (self.system.sets[s].cost, s))


@dataclass
class PrimalDualState:
    """
    Dual variables y_e and the per-set sums y_S.

    ``load[s]`` is kept equal to the sum of ``y`` over the members of set s.
    """

    y: Dict[int, Fraction] = field(default_factory=dict)
    load: Dict[int, Fraction] = field(default_factory=dict)

    def y_set(self, set_id: int) -> Fraction:
        return self.load.get(set_id, Fraction(0))

    def slack(self, system: SetSystem, set_id: int) -> Fraction:
        return system.sets[set_id].cost - self.y_set(set_id)

    def raise_dual(self, system: SetSystem, e: int, amount: Fraction) -> None:
        self.y[e] = self.y.get(e, Fraction(0)) + amount
        for s in sets_covering(system, e):
            self.load[s] = self.y_set(s) + amount

    def is_feasible(self, system: SetSystem) -> bool:
        return all(self.y_set(s) <= system.sets[s].cost for s in range(system.m))


def pd_assignment(system: SetSystem, pd_state: PrimalDualState, cover_state: CoverState) -> AssignmentScheme:
    """Each uncovered element goes to the covering set of least slack c_S - y_S, smaller id on ties."""
    return AssignmentScheme(
        {
            e: min(sets_covering(system, e), key=lambda s: (pd_state.slack(system, s), s))
            for e in cover_state.uncovered(system)
        }
    )


def pd_choice(e: int, pd_state: PrimalDualState, system: SetSystem) -> tuple[Fraction, List[int]]:
    """
    The raise of y_e that makes some covering set tight, and the sets it makes tight.

    Leaves ``pd_state`` untouched.
    """
    covering = sets_covering(system, e)
    slack = {s: pd_state.slack(system, s) for s in covering}
    raise_by = min(slack.values())
    return raise_by, [s for s in covering if slack[s] == raise_by]


def pd_on_arrival(e: int, pd_state: PrimalDualState, cover_state: CoverState, system: SetSystem) -> int:
    """
    Raise y_e until some covering set is tight and return the smallest-indexed tight set.

    :param e: arriving uncovered element
    :return: set id to purchase
    """
    if cover_state.is_covered(e):
        raise ProtocolViolationError(f"primal-dual received covered element {e}")
    raise_by, tight = pd_choice(e, pd_state, system)
    pd_state.raise_dual(system, e, raise_by)
    logger.debug(
        f"Raised y_{e} by {raise_by}, tight sets {tight}",
        extra={"event_type": "dual_raise", "element": e, "amount": str(raise_by), "tight": tight},
    )
    return tight[0]


class PrimalDualAlgorithm(OnlineAlgorithm):
    name = "primal-dual"
    needs_element_identity = True

    def __init__(self, system: SetSystem):
        super().__init__(system)
        self.duals = PrimalDualState()
        self._server_state = CoverState()

    def assignment_scheme(self, state: CoverState) -> AssignmentScheme:
        return pd_assignment(self.system, self.duals, state)

    def on_arrival(self, e: int, state: CoverState) -> int:
        return pd_on_arrival(e, self.duals, state, self.system)

    def observe_purchase(self, element: Optional[int], set_id: int) -> None:
        if element is None:
            raise ProtocolViolationError(
                "primal-dual pricing needs the identity of the requesting element to raise its dual"
            )
        if self._server_state.is_covered(element):
            raise ProtocolViolationError(f"primal-dual received covered element {element}")
        _, tight = pd_choice(element, self.duals, self.system)
        if tight[0] != set_id:
            raise ProtocolViolationError(
                f"client bought set {set_id} for element {element}, primal-dual would have bought {tight[0]}"
            )
        pd_on_arrival(element, self.duals, self._server_state, self.system)
        self._server_state.purchase(self.system, set_id)


class AlternatingAlgorithm(OnlineAlgorithm):
    """
    Non-monotone on purpose: even element ids take the highest-id covering set,
    odd ids the lowest. Used as a negative control.
    """

    name = "alternating"

    def assignment_scheme(self, state: CoverState) -> AssignmentScheme:
        choice = {}
        for e in state.uncovered(self.system):
            covering = sets_covering(self.system, e)
            choice[e] = covering[-1] if e % 2 == 0 else covering[0]
        return AssignmentScheme(choice)


ALGORITHMS: Dict[str, Type[OnlineAlgorithm]] = {
    GreedyAlgorithm.name: GreedyAlgorithm,
    PrimalDualAlgorithm.name: PrimalDualAlgorithm,
    AlternatingAlgorithm.name: AlternatingAlgorithm,
}


def make_algorithm(name: str, system: SetSystem) -> OnlineAlgorithm:
    try:
        algorithm_class = ALGORITHMS[name]
    except KeyError:
        raise InvalidInputError(f"Ugyldig algoritme: {name}. Godkendte algoritmer er: {', '.join(ALGORITHMS)}")
    return algorithm_class(system)


def algorithm_names() -> List[str]:
    return list(ALGORITHMS)
