"""
Instance generators: the hard instance for greedy, the adaptive binary-counter
adversary and seeded random families for fuzzing.

The constructions are stated over {1, ..., n}; element ids here are 0-based,
so number x becomes element id x - 1.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, Union

from pricing_cover.errors import InvalidInputError
from pricing_cover.functionality.algorithms import OnlineAlgorithm, make_algorithm
from pricing_cover.functionality.assignment import PreferenceGraph
from pricing_cover.functionality.pricing_sim import DirectEngine, Hooks, Transcript
from pricing_cover.model import Instance, SetSystem, WeightedSet

logger = logging.getLogger(__name__)

AlgorithmFactory = Union[str, Callable[[SetSystem], OnlineAlgorithm]]

# Random costs are drawn on a grid of this many steps across the cost range.
COST_RESOLUTION = 100


def greedy_killer(n: int, epsilon: Fraction) -> Instance:
    """
    n unit-cost singletons plus one set holding everything at cost 1 + epsilon.

    Set ids 0..n-1 are the singletons, set id n is the whole universe.
    Requests are every element once, in order.
    """
    epsilon = Fraction(epsilon)
    if n < 1:
        raise InvalidInputError(f"greedy_killer needs n >= 1, got {n}")
    if epsilon <= 0:
        raise InvalidInputError(f"greedy_killer needs epsilon > 0, got {epsilon}")
    sets = [WeightedSet(frozenset({e}), Fraction(1)) for e in range(n)]
    sets.append(WeightedSet(frozenset(range(n)), 1 + epsilon))
    return Instance(system=SetSystem(universe_size=n, sets=tuple(sets)), requests=tuple(range(n)))


def binary_system(k: int) -> SetSystem:
    """
    Numbers 1..2^k - 1 as element ids 0..2^k - 2; set i (unit cost) holds the
    numbers whose bit i is set.
    """
    if k < 1:
        raise InvalidInputError(f"binary adversary needs k >= 1, got {k}")
    top = 2**k - 1
    sets = tuple(
        WeightedSet(frozenset(x - 1 for x in range(1, top + 1) if x >> i & 1), Fraction(1))
        for i in range(k)
    )
    return SetSystem(universe_size=top, sets=sets)


@dataclass(frozen=True)
class AdversaryRun:
    instance: Instance
    transcript: Transcript
    opt_cost: Fraction
    last_set: int


def _resolve(algorithm: AlgorithmFactory, system: SetSystem) -> OnlineAlgorithm:
    if isinstance(algorithm, str):
        return make_algorithm(algorithm, system)
    return algorithm(system)


def binary_adversary(k: int, algorithm: AlgorithmFactory, hooks: Optional[Hooks] = None) -> AdversaryRun:
    """
    Start from the all-ones number and, after every purchase of set i, request
    the previous number with bit i cleared, until nothing is left.

    :param k: number of sets, which is also the frequency
    :param algorithm: algorithm name or factory taking the system
    :return: induced instance, the algorithm's transcript and the optimum (1)
    """
    system = binary_system(k)
    engine = DirectEngine(_resolve(algorithm, system), system, hooks=hooks)
    pending = 2**k - 1
    requests: List[int] = []
    last_set = -1
    while pending:
        e = pending - 1
        requests.append(e)
        event = engine.step(e)
        # The pending number only carries bits of sets not bought yet, so it is never covered.
        assert event.purchase is not None
        last_set = event.purchase
        pending &= ~(1 << last_set)
    logger.info(
        f"Binary adversary k={k} forced {len(engine.transcript.purchased)} purchases",
        extra={"event_type": "binary_adversary", "k": k, "requests": requests},
    )
    return AdversaryRun(
        instance=Instance(system=system, requests=tuple(requests)),
        transcript=engine.transcript,
        opt_cost=system.sets[last_set].cost,
        last_set=last_set,
    )


def _random_cost(rng: random.Random, low: Fraction, high: Fraction) -> Fraction:
    return low + (high - low) * Fraction(rng.randint(0, COST_RESOLUTION), COST_RESOLUTION)


def random_instance(
    n: int,
    m: int,
    f_max: int,
    cost_range: Tuple[Fraction, Fraction] = (Fraction(1), Fraction(10)),
    seed: int = 0,
    repeat_probability: float = 0.0,
) -> Instance:
    """
    Seeded random instance.

    Each element joins between 1 and f_max distinct sets chosen uniformly; sets
    left empty are dropped. Requests are a random permutation of a random
    nonempty subset of elements, with earlier requests repeated with the given
    probability.

    :param n: universe size
    :param m: number of candidate sets before empty ones are dropped
    :param f_max: largest number of sets per element
    :param cost_range: inclusive (low, high) with 0 < low <= high
    :param seed: random seed
    :param repeat_probability: chance of re-requesting an earlier element after each request
    """
    low, high = Fraction(cost_range[0]), Fraction(cost_range[1])
    if n < 1 or m < 1 or f_max < 1:
        raise InvalidInputError(f"random_instance needs n, m, f_max >= 1, got n={n}, m={m}, f_max={f_max}")
    if low <= 0 or high < low:
        raise InvalidInputError(f"cost range must satisfy 0 < low <= high, got ({low}, {high})")
    if not 0 <= repeat_probability < 1:
        raise InvalidInputError(f"repeat probability must lie in [0, 1), got {repeat_probability}")

    rng = random.Random(seed)
    members: List[set[int]] = [set() for _ in range(m)]
    for e in range(n):
        for s in rng.sample(range(m), rng.randint(1, min(f_max, m))):
            members[s].add(e)
    kept = [s for s in members if s]
    sets = tuple(WeightedSet(frozenset(s), _random_cost(rng, low, high)) for s in kept)

    requests: List[int] = []
    for e in rng.sample(range(n), rng.randint(1, n)):
        requests.append(e)
        if rng.random() < repeat_probability:
            requests.append(rng.choice(requests))
    return Instance(system=SetSystem(universe_size=n, sets=sets), requests=tuple(requests))


def random_dag(vertices: int, edge_probability: float = 0.3, seed: int = 0) -> PreferenceGraph:
    """Seeded random DAG: edges only go forward in a random vertex order."""
    if vertices < 0 or not 0 <= edge_probability <= 1:
        raise InvalidInputError(f"bad random_dag parameters: vertices={vertices}, p={edge_probability}")
    rng = random.Random(seed)
    order = list(range(vertices))
    rng.shuffle(order)
    edges = [
        (order[i], order[j])
        for i in range(vertices)
        for j in range(i + 1, vertices)
        if rng.random() < edge_probability
    ]
    return PreferenceGraph.from_edges(vertices, edges)
