# Fixtures are automatically loaded from conftest.py

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pricing_cover.errors import InvalidInputError, NotMonotoneError
from pricing_cover.functionality.adversary import random_dag
from pricing_cover.functionality.assignment import (
    AssignmentScheme,
    PreferenceGraph,
    build_preference_graph,
)
from pricing_cover.functionality.pathprice import longest_path_oracle, next_path, path_price, price_table
from pricing_cover.model import CoverState, SetSystem

A, B, C = 0, 1, 2


@pytest.fixture
def triangle_graph(triangle_system: SetSystem, triangle_scheme: AssignmentScheme) -> PreferenceGraph:
    return build_preference_graph(triangle_system, CoverState(), triangle_scheme)


def test_next_path_prefers_longest(triangle_graph: PreferenceGraph):
    assert next_path(triangle_graph, {A: None, B: None, C: None}) == [B, A, C]


def test_next_path_single_edge():
    assert next_path(PreferenceGraph.from_edges(2, [(1, 0)]), {}) == [1, 0]


def test_next_path_counts_label_of_last_vertex():
    graph = PreferenceGraph.from_edges(4, [(0, 1), (2, 3)])
    assert next_path(graph, {0: None, 1: 5, 2: None, 3: None}) == [0, 1]


def test_next_path_breaks_ties_lexicographically():
    graph = PreferenceGraph.from_edges(4, [(2, 3), (0, 1)])
    assert next_path(graph, {}) == [0, 1]


def test_next_path_needs_an_edge():
    with pytest.raises(InvalidInputError):
        next_path(PreferenceGraph.from_edges(3, []), {})


def test_path_price_triangle(triangle_graph: PreferenceGraph):
    pricing = path_price(triangle_graph, [Fraction(1)] * 3)
    assert dict(pricing.labels) == {C: 0, A: 1, B: 2}
    assert dict(pricing.surcharge) == {C: 0, A: 1, B: 2}
    assert dict(pricing.price) == {C: 1, A: 2, B: 3}
    for u, v in triangle_graph.edges:
        assert pricing.price[u] > pricing.price[v]


def test_path_price_edgeless_equalises_at_max_cost():
    pricing = path_price(PreferenceGraph.from_edges(2, []), [Fraction(1), Fraction(3)])
    assert pricing.c_max == 3
    assert dict(pricing.surcharge) == {0: 2, 1: 0}
    assert dict(pricing.price) == {0: 3, 1: 3}


def test_path_price_chain(chain_graph: PreferenceGraph):
    pricing = path_price(chain_graph, [Fraction(1)] * 3)
    assert dict(pricing.labels) == {2: 0, 1: 1, 0: 2}
    assert dict(pricing.price) == {2: 1, 1: 2, 0: 3}
    assert dict(pricing.labels) == longest_path_oracle(chain_graph)


def test_path_price_refuses_cycles():
    with pytest.raises(NotMonotoneError) as info:
        path_price(PreferenceGraph.from_edges(2, [(0, 1), (1, 0)]), [Fraction(1)] * 2)
    assert info.value.witness == [0, 1, 0]


def test_longest_path_oracle(triangle_graph: PreferenceGraph):
    assert longest_path_oracle(triangle_graph) == {C: 0, A: 1, B: 2}
    assert longest_path_oracle(PreferenceGraph.from_edges(1, [])) == {0: 0}


def test_longest_path_oracle_refuses_cycles():
    with pytest.raises(NotMonotoneError):
        longest_path_oracle(PreferenceGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))


def test_price_table_rows(triangle_graph: PreferenceGraph):
    costs = [Fraction(1)] * 3
    rows = price_table(path_price(triangle_graph, costs), costs)
    assert rows[B] == {"set_id": B, "cost": "1/1", "label": 2, "surcharge": "2/1", "price": "3/1"}
    assert [row["set_id"] for row in rows] == [0, 1, 2]


@settings(max_examples=300, deadline=None)
@given(
    vertices=st.integers(1, 12),
    p=st.floats(0, 1),
    seed=st.integers(0, 2**32),
    costs=st.lists(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20), min_size=12, max_size=12),
)
def test_path_price_properties_on_random_dags(vertices, p, seed, costs):
    graph = random_dag(vertices, p, seed)
    pricing = path_price(graph, costs)

    assert dict(pricing.labels) == longest_path_oracle(graph)
    for u, v in graph.edges:
        assert pricing.price[u] > pricing.price[v]
    for s in graph.vertices:
        assert pricing.price[s] == pricing.labels[s] + pricing.c_max
        assert pricing.price[s] == pricing.surcharge[s] + costs[s]
        assert pricing.surcharge[s] >= 0
