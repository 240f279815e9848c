# Fixtures are automatically loaded from conftest.py

"""End-to-end checks of the bounds and the pricing guarantees at desk scale."""

import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import cover_states, set_systems
from pricing_cover.errors import PricingInvariantError, UnpriceableStepError
from pricing_cover.functionality.adversary import random_dag, random_instance
from pricing_cover.functionality.algorithms import AlternatingAlgorithm
from pricing_cover.functionality.assignment import (
    AssignmentScheme,
    build_preference_graph,
    find_cycle,
    scheme_from_prices,
)
from pricing_cover.functionality.experiments import (
    audit_steps,
    greedy_killer_sweep,
    run_adversary_report,
    run_fuzz,
)
from pricing_cover.functionality.pathprice import longest_path_oracle, path_price
from pricing_cover.functionality.pricing_sim import DirectEngine, run_priced
from pricing_cover.model import CoverState, SetSystem, sets_covering

A, B = 0, 1


def test_greedy_is_linear_on_its_hard_instance():
    rows = greedy_killer_sweep([10, 100, 1000], Fraction(1, 100))
    for row in rows:
        assert row.greedy_cost == row.n
        assert row.opt == Fraction(101, 100)
        assert row.frequency == 2
        assert row.ratio == row.n / Fraction(101, 100)


@pytest.mark.parametrize("algorithm", ["greedy", "primal-dual"])
def test_binary_adversary_forces_frequency_ratio(algorithm: str):
    for k in range(1, 11):
        report = run_adversary_report(k, algorithm)
        assert report.cost == k
        assert report.optimum.cost == 1
        assert report.ratio == k


def test_primal_dual_fuzz_campaign():
    # f * OPT bound, priced == direct and per-step pricing audit on every trial
    report = run_fuzz(trials=1000, seed=0)
    assert report.passed == 1000, report.first_failure


def test_path_price_labels_on_random_dags():
    rng = random.Random(0)
    for seed in range(1000):
        vertices = rng.randint(1, 20)
        graph = random_dag(vertices, rng.random(), seed)
        costs = [Fraction(rng.randint(1, 100), rng.randint(1, 10)) for _ in range(vertices)]
        pricing = path_price(graph, costs)
        assert dict(pricing.labels) == longest_path_oracle(graph)
        for s in graph.vertices:
            assert pricing.price[s] == pricing.labels[s] + pricing.c_max


@pytest.mark.parametrize("choice", [{0: A, 1: B}, {0: B, 1: A}])
def test_cyclic_gadget_has_no_pricing(twin_system: SetSystem, choice: dict[int, int]):
    scheme = AssignmentScheme(choice)
    graph = build_preference_graph(twin_system, CoverState(), scheme)
    assert find_cycle(graph) == [A, B, A]

    for order in permutations(range(twin_system.m)):
        prices = {s: Fraction(rank + 1) for rank, s in enumerate(order)}
        assert scheme_from_prices(twin_system, CoverState(), prices) != scheme
    with pytest.raises(PricingInvariantError):
        scheme_from_prices(twin_system, CoverState(), {A: Fraction(1), B: Fraction(1)})


def test_non_monotone_algorithm_is_always_caught():
    triggered = 0
    for seed in range(300):
        instance = random_instance(8, 6, 4, seed=seed, repeat_probability=0.2)
        system = instance.system
        cycle_found = bool(audit_steps(instance, AlternatingAlgorithm.name))
        try:
            run_priced(AlternatingAlgorithm(system), instance)
        except UnpriceableStepError as error:
            assert cycle_found
            triggered += 1

            # witness is a closed walk in the preference graph of the failing step
            engine = DirectEngine(AlternatingAlgorithm(system), system)
            for e in instance.requests[: error.step]:
                engine.step(e)
            graph = build_preference_graph(
                system, engine.state, engine.algorithm.assignment_scheme(engine.state)
            )
            assert error.witness[0] == error.witness[-1]
            assert all(edge in graph.edges for edge in zip(error.witness, error.witness[1:]))
        else:
            assert not cycle_found
    assert triggered > 0


@settings(max_examples=300, deadline=None)
@given(system=set_systems(max_m=4), data=st.data())
def test_prices_reproduce_exactly_the_acyclic_schemes(system: SetSystem, data):
    state = data.draw(cover_states(system))
    scheme = AssignmentScheme(
        {e: data.draw(st.sampled_from(sets_covering(system, e))) for e in state.uncovered(system)}
    )
    graph = build_preference_graph(system, state, scheme)

    if find_cycle(graph) is not None:
        for order in permutations(range(system.m)):
            prices = {s: Fraction(rank + 1) for rank, s in enumerate(order)}
            assert dict(scheme_from_prices(system, state, prices).choice) != dict(scheme.choice)
    else:
        prices = path_price(graph, system.costs).price
        assert dict(scheme_from_prices(system, state, prices, strict=True).choice) == dict(scheme.choice)
