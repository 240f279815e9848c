"""
Execution engines for the online protocol.

``run_direct`` lets the algorithm buy. ``run_priced`` only lets it post prices:
a greedy client buys the cheapest covering set and the algorithm is told
about the purchase afterwards.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from pricing_cover.errors import PricingInvariantError, ProtocolViolationError, UnpriceableStepError
from pricing_cover.functionality.algorithms import OnlineAlgorithm
from pricing_cover.functionality.assignment import is_monotone_step
from pricing_cover.functionality.pathprice import PricingScheme, path_price
from pricing_cover.model import CoverState, Instance, SetSystem, cost_of, format_fraction, sets_covering

logger = logging.getLogger(__name__)

Hooks = Mapping[str, Sequence[Callable]]


@dataclass(frozen=True)
class TranscriptEvent:
    step: int
    request: int
    purchase: Optional[int] = None
    price: Optional[Fraction] = None

    @property
    def is_noop(self) -> bool:
        return self.purchase is None

    def to_dict(self) -> dict:
        if self.purchase is None:
            return {"request": self.request, "action": "noop"}
        return {"request": self.request, "action": {"buy": self.purchase, "price": format_fraction(self.price)}}


@dataclass
class Transcript:
    engine: str
    algorithm: str
    events: List[TranscriptEvent] = field(default_factory=list)
    total_cost: Fraction = Fraction(0)

    @property
    def purchased(self) -> List[int]:
        return [ev.purchase for ev in self.events if ev.purchase is not None]

    @property
    def total_paid(self) -> Fraction:
        return sum((ev.price for ev in self.events if ev.price is not None), Fraction(0))

    def to_json_lines(self) -> List[str]:
        return [json.dumps(ev.to_dict()) for ev in self.events]


def _call_hooks(hooks: Optional[Hooks], kind: str, *args) -> None:
    if not hooks:
        return
    for hook in hooks.get(kind, ()):
        hook(*args)


class DirectEngine:
    """The algorithm receives each uncovered request and buys for it itself."""

    def __init__(self, algorithm: OnlineAlgorithm, system: SetSystem, hooks: Optional[Hooks] = None):
        self.algorithm = algorithm
        self.system = system
        self.state = CoverState()
        self.transcript = Transcript(engine="direct", algorithm=algorithm.name)
        self._hooks = hooks

    def step(self, e: int) -> TranscriptEvent:
        sets_covering(self.system, e)
        index = len(self.transcript.events)
        if self.state.is_covered(e):
            event = TranscriptEvent(step=index, request=e)
        else:
            bought = self.algorithm.on_arrival(e, self.state)
            if not 0 <= bought < self.system.m or e not in self.system.sets[bought].members:
                raise ProtocolViolationError(f"{self.algorithm.name} bought set {bought}, which does not cover {e}")
            self.state.purchase(self.system, bought)
            cost = self.system.sets[bought].cost
            self.transcript.total_cost += cost
            event = TranscriptEvent(step=index, request=e, purchase=bought, price=cost)
        self.transcript.events.append(event)
        _call_hooks(self._hooks, "event", event, self.transcript)
        return event


class PricingServer:
    """
    Holds the algorithm on the server side.

    It sees the instance structure and the purchases it is told about, never
    the next request.
    """

    def __init__(self, algorithm: OnlineAlgorithm, system: SetSystem, state: CoverState, reveal_element: bool = True):
        self.algorithm = algorithm
        self.system = system
        self._state = state
        self._reveal_element = reveal_element

    def post_prices(self, step: int) -> PricingScheme:
        scheme = self.algorithm.assignment_scheme(self._state)
        check = is_monotone_step(self.system, self._state, scheme)
        if not check.monotone:
            logger.error(
                f"Unpriceable step {step} for {self.algorithm.name}",
                extra={"event_type": "unpriceable_step", "step": step, "witness": check.witness},
            )
            raise UnpriceableStepError(step, check.witness)
        return path_price(check.graph, self.system.costs)

    def observe(self, element: int, set_id: int) -> None:
        self.algorithm.observe_purchase(element if self._reveal_element else None, set_id)


def client_choice(system: SetSystem, state: CoverState, prices: Mapping[int, Fraction], e: int) -> int:
    """Cheapest covering set that is not purchased yet; a tie means the prices are broken."""
    candidates = [s for s in sets_covering(system, e) if not state.is_purchased(s)]
    cheapest = min(prices[s] for s in candidates)
    winners = [s for s in candidates if prices[s] == cheapest]
    if len(winners) > 1:
        raise PricingInvariantError(f"client for element {e} faces tied sets {winners} at price {cheapest}")
    return winners[0]


def run_direct(algorithm: OnlineAlgorithm, instance: Instance, hooks: Optional[Hooks] = None) -> Transcript:
    engine = DirectEngine(algorithm, instance.system, hooks=hooks)
    for e in instance.requests:
        engine.step(e)
    return engine.transcript


def run_priced(
    algorithm: OnlineAlgorithm,
    instance: Instance,
    hooks: Optional[Hooks] = None,
    reveal_element: bool = True,
) -> Transcript:
    """
    Post PathPrice prices before every arrival and let a greedy client buy.

    :param algorithm: algorithm whose assignment schemes are priced
    :param instance: instance to run
    :param hooks: ``{"event": [...], "prices": [...]}`` callbacks
    :param reveal_element: tell the server which element triggered each purchase
    :return: transcript; prices paid include surcharges, total_cost does not
    """
    system = instance.system
    state = CoverState()
    server = PricingServer(algorithm, system, state, reveal_element=reveal_element)
    transcript = Transcript(engine="priced", algorithm=algorithm.name)

    for index, e in enumerate(instance.requests):
        sets_covering(system, e)
        pricing = server.post_prices(index)
        _call_hooks(hooks, "prices", index, pricing)

        if state.is_covered(e):
            event = TranscriptEvent(step=index, request=e)
        else:
            bought = client_choice(system, state, pricing.price, e)
            state.purchase(system, bought)
            transcript.total_cost += system.sets[bought].cost
            event = TranscriptEvent(step=index, request=e, purchase=bought, price=pricing.price[bought])
            server.observe(e, bought)

        transcript.events.append(event)
        _call_hooks(hooks, "event", event, transcript)

    assert transcript.total_cost == cost_of(system, transcript.purchased)
    return transcript


def transcripts_equal(a: Transcript, b: Transcript) -> bool:
    """Same request and same action at every step; prices paid are ignored."""
    return [(ev.request, ev.purchase) for ev in a.events] == [(ev.request, ev.purchase) for ev in b.events]


def summary_dict(transcript: Transcript) -> Dict[str, object]:
    return {
        "engine": transcript.engine,
        "algorithm": transcript.algorithm,
        "requests": len(transcript.events),
        "purchases": len(transcript.purchased),
        "total_cost": format_fraction(transcript.total_cost),
        "total_paid": format_fraction(transcript.total_paid),
    }
