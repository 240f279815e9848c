"""
Exact offline optimum over the requested elements.

``optimal_cover_cost`` runs a DP over the reachable bitmasks of covered
targets when there are at most ``MAX_TARGETS`` targets or at most ``MAX_SETS``
relevant sets. The DP only ever extends a mask with sets holding its lowest
uncovered target, and it gives up after ``MAX_DP_TRANSITIONS``. Past either
limit a branch and bound takes over, which raises ``CapacityError`` after
``MAX_SEARCH_NODES`` nodes. ``enumerate_optimal_cover`` is the independent
enumeration used to cross-check it.
"""

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Dict, Iterable, List, Optional

from pricing_cover.errors import CapacityError, InvalidInputError
from pricing_cover.model import SetSystem, sets_covering

logger = logging.getLogger(__name__)

MAX_TARGETS = 24
MAX_SETS = 24
MAX_ENUMERATION_SETS = 16
MAX_DP_TRANSITIONS = 500_000
MAX_SEARCH_NODES = 200_000


@dataclass(frozen=True)
class OptimalCover:
    cost: Fraction
    witness: frozenset[int]


def _check_targets(system: SetSystem, targets: Iterable[int]) -> List[int]:
    ordered = sorted(set(targets))
    for e in ordered:
        if not sets_covering(system, e):
            raise InvalidInputError(f"target element {e} is in no set")
    return ordered


def _relevant_sets(system: SetSystem, targets: Iterable[int]) -> List[int]:
    wanted = set(targets)
    return [s for s in range(system.m) if system.sets[s].members & wanted]


def _dp_cover(system: SetSystem, targets: List[int]) -> OptimalCover:
    bit = {e: 1 << i for i, e in enumerate(targets)}
    full = (1 << len(targets)) - 1
    relevant = _relevant_sets(system, targets)
    scale = lcm(*(system.sets[s].cost.denominator for s in relevant))

    def scaled(s: int) -> int:
        cost = system.sets[s].cost
        return cost.numerator * (scale // cost.denominator)

    # Cheapest set (smallest id on ties) per distinct target mask.
    by_mask: Dict[int, int] = {}
    for s in relevant:
        mask = 0
        for e in system.sets[s].members:
            mask |= bit.get(e, 0)
        current = by_mask.get(mask)
        if current is None or system.sets[s].cost < system.sets[current].cost:
            by_mask[mask] = s

    # moves[i]: (mask, scaled cost, set id) for the sets holding target i
    moves: List[List[tuple[int, int, int]]] = [[] for _ in targets]
    for mask, s in sorted(by_mask.items(), key=lambda item: item[1]):
        for i in range(len(targets)):
            if mask >> i & 1:
                moves[i].append((mask, scaled(s), s))

    best: Dict[int, int] = {0: 0}
    parent: Dict[int, tuple[int, int]] = {}
    frontier = [0]
    transitions = 0
    # Every move adds bits, so masks leave the heap in an order where all predecessors are final.
    while frontier:
        covered = heapq.heappop(frontier)
        if covered == full:
            break
        lowest = (~covered & (covered + 1)).bit_length() - 1
        for mask, cost, s in moves[lowest]:
            transitions += 1
            if transitions > MAX_DP_TRANSITIONS:
                raise CapacityError(f"cover DP exceeded {MAX_DP_TRANSITIONS} transitions on {len(targets)} targets")
            reached = covered | mask
            candidate = best[covered] + cost
            if reached not in best:
                heapq.heappush(frontier, reached)
            elif candidate >= best[reached]:
                continue
            best[reached] = candidate
            parent[reached] = (covered, s)

    witness = set()
    node = full
    while node:
        previous, s = parent[node]
        witness.add(s)
        node = previous
    return OptimalCover(cost=Fraction(best[full], scale), witness=frozenset(witness))


def enumerate_optimal_cover(system: SetSystem, targets: Iterable[int]) -> OptimalCover:
    """
    Try every subfamily of the sets touching a target, smallest families first.

    :param system: the set system
    :param targets: elements that must be covered
    :return: cheapest covering subfamily, first found on ties
    """
    ordered = _check_targets(system, targets)
    wanted = set(ordered)
    candidates = _relevant_sets(system, ordered)
    if len(candidates) > MAX_ENUMERATION_SETS:
        raise CapacityError(
            f"enumeration supports at most {MAX_ENUMERATION_SETS} relevant sets, got {len(candidates)}"
        )

    best: Optional[OptimalCover] = None
    for size in range(len(candidates) + 1):
        for family in combinations(candidates, size):
            covered = set()
            for s in family:
                covered |= system.sets[s].members
            if not wanted <= covered:
                continue
            cost = sum((system.sets[s].cost for s in family), Fraction(0))
            if best is None or cost < best.cost:
                best = OptimalCover(cost=cost, witness=frozenset(family))
    assert best is not None
    return best


def _greedy_upper_bound(system: SetSystem, targets: List[int]) -> OptimalCover:
    remaining = set(targets)
    chosen: set[int] = set()
    while remaining:
        s = min(
            _relevant_sets(system, remaining),
            key=lambda s: (system.sets[s].cost / len(system.sets[s].members & remaining), s),
        )
        chosen.add(s)
        remaining -= system.sets[s].members
    return OptimalCover(cost=sum((system.sets[s].cost for s in chosen), Fraction(0)), witness=frozenset(chosen))


def _branch_and_bound(system: SetSystem, targets: List[int]) -> OptimalCover:
    best = _greedy_upper_bound(system, targets)
    covering = {e: sets_covering(system, e) for e in targets}
    options = {e: sorted(covering[e], key=lambda s: (system.sets[s].cost, s)) for e in targets}
    cheapest = {e: system.sets[options[e][0]].cost for e in targets}
    nodes = 0

    def lower_bound(uncovered: frozenset[int]) -> Fraction:
        # Each uncovered element pays at least its cheapest share of a set covering it.
        share: Dict[int, Fraction] = {}
        total = Fraction(0)
        for e in uncovered:
            least = None
            for s in covering[e]:
                if s not in share:
                    share[s] = system.sets[s].cost / len(system.sets[s].members & uncovered)
                if least is None or share[s] < least:
                    least = share[s]
            total += least
        return max(total, max(cheapest[e] for e in uncovered))

    def search(uncovered: frozenset[int], chosen: tuple[int, ...], cost: Fraction) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > MAX_SEARCH_NODES:
            raise CapacityError(f"branch and bound exceeded {MAX_SEARCH_NODES} nodes on {len(targets)} targets")
        if not uncovered:
            if cost < best.cost:
                best = OptimalCover(cost=cost, witness=frozenset(chosen))
            return
        if cost + lower_bound(uncovered) >= best.cost:
            return
        # Branch on the element with the fewest covering sets.
        pivot = min(uncovered, key=lambda e: (len(covering[e]), e))
        for s in options[pivot]:
            if cost + system.sets[s].cost < best.cost:
                search(uncovered - system.sets[s].members, chosen + (s,), cost + system.sets[s].cost)

    search(frozenset(targets), (), Fraction(0))
    return best


def optimal_cover_cost(system: SetSystem, targets: Iterable[int]) -> OptimalCover:
    """
    Minimum total cost of a subfamily covering every target.

    :param system: the set system
    :param targets: elements that must be covered
    :return: optimum cost and one minimising family
    :raises CapacityError: when neither the DP nor the branch and bound finishes within its budget
    """
    ordered = _check_targets(system, targets)
    if not ordered:
        return OptimalCover(cost=Fraction(0), witness=frozenset())

    result: Optional[OptimalCover] = None
    if len(ordered) <= MAX_TARGETS or len(_relevant_sets(system, ordered)) <= MAX_SETS:
        try:
            result = _dp_cover(system, ordered)
        except CapacityError as e:
            logger.info(f"{e}; falling back to branch and bound", extra={"event_type": "optimum_fallback"})
    if result is None:
        result = _branch_and_bound(system, ordered)
    logger.debug(
        f"Optimum {result.cost} over {len(ordered)} targets",
        extra={"event_type": "optimum", "cost": str(result.cost), "witness": sorted(result.witness)},
    )
    return result
