from hypothesis import strategies as st

from pricing_cover.functionality.algorithms import OnlineAlgorithm
from pricing_cover.functionality.assignment import AssignmentScheme
from pricing_cover.model import CoverState, SetSystem


@st.composite
def set_systems(draw, max_n: int = 8, max_m: int = 6, max_cost: int = 9) -> SetSystem:
    """Valid set systems: every element in at least one set, empty sets dropped."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    members: list[set[int]] = [set() for _ in range(m)]
    for e in range(n):
        for s in draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=m, unique=True)):
            members[s].add(e)
    costs = draw(st.lists(st.integers(1, max_cost), min_size=m, max_size=m))
    return SetSystem.from_lists(n, [(mem, c) for mem, c in zip(members, costs) if mem])


@st.composite
def cover_states(draw, system: SetSystem) -> CoverState:
    state = CoverState()
    for s in draw(st.lists(st.integers(0, system.m - 1), max_size=system.m, unique=True)):
        state.purchase(system, s)
    return state


class FixedSchemeAlgorithm(OnlineAlgorithm):
    """Test stub: always answers with a fixed element -> set map."""

    name = "fixed"

    def __init__(self, system: SetSystem, choice: dict[int, int]):
        super().__init__(system)
        self._choice = choice

    def assignment_scheme(self, state: CoverState) -> AssignmentScheme:
        return AssignmentScheme({e: self._choice[e] for e in state.uncovered(self.system)})
