"""
PathPrice: turn a monotone preference graph into posted prices that mimic it.

Labels are longest-path lengths. The surcharge of set S is
``l(S) + (C_max - c_S)`` so the posted price is ``l(S) + C_max`` and every
preference edge u -> v gets ``price(u) > price(v)``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

import networkx as nx

from pricing_cover.errors import InvalidInputError, NotMonotoneError
from pricing_cover.functionality.assignment import PreferenceGraph, find_cycle
from pricing_cover.model import format_fraction

logger = logging.getLogger(__name__)

# None is an unset label.
LengthLabels = Dict[int, Optional[int]]


@dataclass(frozen=True)
class PricingScheme:
    surcharge: Mapping[int, Fraction]
    price: Mapping[int, Fraction]
    labels: Mapping[int, int]
    c_max: Fraction


def _require_acyclic(g: PreferenceGraph, what: str) -> None:
    witness = find_cycle(g)
    if witness is not None:
        raise NotMonotoneError(f"{what}: preference graph is not monotone, cycle {witness}", witness)


def _to_preference_graph(g: Union[PreferenceGraph, nx.DiGraph]) -> PreferenceGraph:
    if isinstance(g, PreferenceGraph):
        return g
    return PreferenceGraph(vertices=tuple(sorted(g.nodes)), edges=tuple(sorted(g.edges)))


def next_path(g: Union[PreferenceGraph, nx.DiGraph], labels: LengthLabels) -> List[int]:
    """
    Path with at least one edge maximising (vertices on the path + label of its last vertex).

    Unset labels count as 0. Among maximisers the lexicographically smallest
    vertex sequence wins.

    :param g: acyclic digraph with at least one edge
    :param labels: current length labels
    :return: vertex sequence of the chosen path
    """
    graph = _to_preference_graph(g)
    if not graph.edges:
        raise InvalidInputError("next_path needs a graph with at least one edge")
    _require_acyclic(graph, "next_path")
    return _best_path(graph.digraph, labels)


def _best_path(digraph: nx.DiGraph, labels: LengthLabels) -> List[int]:
    # best[v]: (value, sequence) of the best path starting at v, single-vertex paths allowed.
    # A bare [v] is a prefix of any longer sequence from v, so it wins value ties.
    best: Dict[int, tuple[int, List[int]]] = {}
    for v in reversed(list(nx.lexicographical_topological_sort(digraph))):
        value, sequence = 1 + (labels.get(v) or 0), [v]
        for w in digraph.successors(v):
            w_value, w_sequence = best[w]
            candidate = (1 + w_value, [v] + w_sequence)
            if candidate[0] > value or (candidate[0] == value and candidate[1] < sequence):
                value, sequence = candidate
        best[v] = (value, sequence)

    chosen: Optional[tuple[int, List[int]]] = None
    for u in sorted(digraph.nodes):
        for w in digraph.successors(u):
            w_value, w_sequence = best[w]
            candidate = (1 + w_value, [u] + w_sequence)
            if chosen is None or candidate[0] > chosen[0] or (candidate[0] == chosen[0] and candidate[1] < chosen[1]):
                chosen = candidate
    assert chosen is not None
    return chosen[1]


def path_price(g: PreferenceGraph, costs: Union[Sequence[Fraction], Mapping[int, Fraction]]) -> PricingScheme:
    """
    Run PathPrice on a monotone preference graph.

    :param g: acyclic preference graph
    :param costs: cost per set id, covering every vertex of ``g``
    :return: surcharges, prices, final labels and C_max
    """
    _require_acyclic(g, "path_price")
    cost = {v: Fraction(costs[v]) for v in g.vertices}
    c_max = max(cost.values(), default=Fraction(0))

    labels: LengthLabels = {v: None for v in g.vertices}
    working = nx.DiGraph()
    working.add_nodes_from(g.vertices)
    working.add_edges_from(g.edges)

    while working.number_of_edges() > 0:
        # Deleting edges keeps the graph acyclic, so the check above still holds.
        path = _best_path(working, labels)
        k = len(path)
        for i in range(k - 2, -1, -1):
            if labels[path[k - 1]] is None:
                labels[path[k - 1]] = 0
            if labels[path[i]] is not None:
                continue
            labels[path[i]] = labels[path[i + 1]] + 1
        working.remove_edges_from(zip(path, path[1:]))
        logger.debug(
            f"PathPrice took path {path}",
            extra={"event_type": "pathprice_path", "path": path, "edges_left": working.number_of_edges()},
        )

    final_labels = {v: labels[v] or 0 for v in g.vertices}
    surcharge = {v: final_labels[v] + (c_max - cost[v]) for v in g.vertices}
    price = {v: surcharge[v] + cost[v] for v in g.vertices}
    return PricingScheme(surcharge=surcharge, price=price, labels=final_labels, c_max=c_max)


def longest_path_oracle(g: PreferenceGraph) -> Dict[int, int]:
    """Edges on the longest path leaving each vertex, by DP in reverse topological order."""
    _require_acyclic(g, "longest_path_oracle")
    digraph = g.digraph
    longest: Dict[int, int] = {}
    for v in reversed(list(nx.topological_sort(digraph))):
        longest[v] = max((longest[w] + 1 for w in digraph.successors(v)), default=0)
    return longest


def price_table(pricing: PricingScheme, costs: Union[Sequence[Fraction], Mapping[int, Fraction]]) -> List[dict]:
    return [
        {
            "set_id": v,
            "cost": format_fraction(Fraction(costs[v])),
            "label": pricing.labels[v],
            "surcharge": format_fraction(pricing.surcharge[v]),
            "price": format_fraction(pricing.price[v]),
        }
        for v in sorted(pricing.price)
    ]
