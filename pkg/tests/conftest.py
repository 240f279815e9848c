from fractions import Fraction

import pytest
from dotenv import load_dotenv

from pricing_cover.functionality.adversary import greedy_killer
from pricing_cover.functionality.assignment import AssignmentScheme, PreferenceGraph
from pricing_cover.manager import PricingCoverManager
from pricing_cover.model import Instance, SetSystem, dump_instance

# Load environment variables from .env
load_dotenv()

A, B, C = 0, 1, 2


@pytest.fixture
def killer_instance() -> Instance:
    """Greedy's hard instance with n=3, epsilon=1/2: singletons 0..2 and the whole universe as set 3."""
    return greedy_killer(3, Fraction(1, 2))


@pytest.fixture
def triangle_system() -> SetSystem:
    """Three unit-cost sets A, B, C; element 0 in A and C, 1 in B and C, 2 in A and B."""
    return SetSystem.from_lists(3, [([0, 2], 1), ([1, 2], 1), ([0, 1], 1)])


@pytest.fixture
def triangle_scheme() -> AssignmentScheme:
    return AssignmentScheme({0: C, 1: C, 2: A})


@pytest.fixture
def twin_system() -> SetSystem:
    """Two unit-cost sets A and B that both hold elements 0 and 1."""
    return SetSystem.from_lists(2, [([0, 1], 1), ([0, 1], 1)])


@pytest.fixture
def twin_cyclic_scheme() -> AssignmentScheme:
    return AssignmentScheme({0: A, 1: B})


@pytest.fixture
def chain_graph() -> PreferenceGraph:
    return PreferenceGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def killer_manager(killer_instance) -> PricingCoverManager:
    """Primary fixture - PricingCoverManager over the greedy hard instance."""
    return PricingCoverManager(killer_instance)


@pytest.fixture
def write_instance(tmp_path):
    """Returns a function that writes an instance to a JSON file and returns its path."""

    def write(instance: Instance, name: str = "instance.json") -> str:
        path = tmp_path / name
        dump_instance(instance, path)
        return str(path)

    return write
