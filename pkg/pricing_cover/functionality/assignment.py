import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Mapping, NamedTuple, Optional, Sequence

import networkx as nx

from pricing_cover.errors import InvalidInputError, PricingInvariantError
from pricing_cover.model import CoverState, SetSystem, sets_covering

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssignmentScheme:
    """
    Snapshot map from each uncovered element to the set an algorithm would buy
    if that element arrived next.
    """

    choice: Mapping[int, int]

    def __getitem__(self, e: int) -> int:
        return self.choice[e]

    def __contains__(self, e: int) -> bool:
        return e in self.choice

    def __len__(self) -> int:
        return len(self.choice)


@dataclass(frozen=True)
class PreferenceGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """Read-only networkx view; nodes and edges inserted in sorted order."""
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return nx.freeze(g)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence[tuple[int, int]]) -> "PreferenceGraph":
        unique = sorted({(u, v) for u, v in edges if u != v})
        return cls(vertices=tuple(range(vertex_count)), edges=tuple(unique))


class StepCheck(NamedTuple):
    monotone: bool
    witness: Optional[List[int]]
    graph: PreferenceGraph


def build_preference_graph(system: SetSystem, state: CoverState, scheme: AssignmentScheme) -> PreferenceGraph:
    """
    Edge (u, v) whenever an uncovered element lying in both sets is assigned to v.

    :param system: the set system
    :param state: current cover state
    :param scheme: assignment scheme, total on the uncovered elements
    :return: preference graph over every set id
    """
    edges: set[tuple[int, int]] = set()
    for e in state.uncovered(system):
        if e not in scheme:
            raise InvalidInputError(f"assignment scheme has no choice for uncovered element {e}")
        covering = sets_covering(system, e)
        target = scheme[e]
        if target not in covering:
            raise InvalidInputError(f"element {e} is assigned to set {target}, which does not contain it")
        for s in covering:
            if s != target:
                edges.add((s, target))
    return PreferenceGraph(vertices=tuple(range(system.m)), edges=tuple(sorted(edges)))


def find_cycle(g: PreferenceGraph) -> Optional[List[int]]:
    """
    Return a directed cycle ``[v1, ..., vk]`` with ``v1 == vk``, or None for a DAG.

    The cycle starts at the smallest vertex lying on any cycle and is a
    shortest cycle through it.
    """
    digraph = g.digraph
    cyclic = [c for c in nx.strongly_connected_components(digraph) if len(c) > 1]
    if not cyclic:
        return None

    start = min(min(c) for c in cyclic)
    component = next(c for c in cyclic if start in c)
    sub = digraph.subgraph(component)

    best: Optional[List[int]] = None
    for predecessor in sorted(sub.predecessors(start)):
        path = nx.shortest_path(sub, start, predecessor)
        candidate = list(path) + [start]
        if best is None or (len(candidate), candidate) < (len(best), best):
            best = candidate
    return best


def is_monotone_step(system: SetSystem, state: CoverState, scheme: AssignmentScheme) -> StepCheck:
    graph = build_preference_graph(system, state, scheme)
    witness = find_cycle(graph)
    if witness is not None:
        logger.debug(
            f"Cyclic preference graph: {witness}",
            extra={"event_type": "cyclic_preference_graph", "witness": witness},
        )
    return StepCheck(monotone=witness is None, witness=witness, graph=graph)


def scheme_from_prices(
    system: SetSystem,
    state: CoverState,
    prices: Mapping[int, Fraction],
    strict: bool = True,
) -> AssignmentScheme:
    """
    The scheme a greedy client induces: each uncovered element goes to its cheapest
    covering set that is not yet purchased.

    :param prices: total price per set id
    :param strict: raise on a tied minimum instead of falling back to the smaller id
    """
    choice: dict[int, int] = {}
    for e in state.uncovered(system):
        candidates = [s for s in sets_covering(system, e) if not state.is_purchased(s)]
        cheapest = min(prices[s] for s in candidates)
        winners = [s for s in candidates if prices[s] == cheapest]
        if strict and len(winners) > 1:
            raise PricingInvariantError(f"element {e} has tied cheapest sets {winners} at price {cheapest}")
        choice[e] = winners[0]
    return AssignmentScheme(choice)


def preference_graph_json(g: PreferenceGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [[u, v] for u, v in g.edges]}
