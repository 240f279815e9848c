"""
Set systems, request sequences and cover state.

Element and set ids are 0-based indices. Set ids double as the fixed set
ordering used for tie-breaking, so the order of ``SetSystem.sets`` matters.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, List, Optional, Union

from .errors import InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedSet:
    members: frozenset[int]
    cost: Fraction


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    sets: tuple[WeightedSet, ...]

    @classmethod
    def from_lists(cls, universe_size: int, sets: Iterable[tuple[Iterable[int], object]]) -> "SetSystem":
        """
        Build a system from ``(members, cost)`` pairs; costs go through ``Fraction``.

        :param universe_size: number of elements n
        :param sets: iterable of (members, cost) in set-id order
        """
        return cls(
            universe_size=universe_size,
            sets=tuple(WeightedSet(frozenset(members), Fraction(cost)) for members, cost in sets),
        )

    @property
    def m(self) -> int:
        return len(self.sets)

    @cached_property
    def costs(self) -> tuple[Fraction, ...]:
        return tuple(s.cost for s in self.sets)

    @cached_property
    def _covering(self) -> tuple[tuple[int, ...], ...]:
        index: List[List[int]] = [[] for _ in range(self.universe_size)]
        for set_id, weighted in enumerate(self.sets):
            for e in weighted.members:
                if 0 <= e < self.universe_size:
                    index[e].append(set_id)
        return tuple(tuple(ids) for ids in index)


@dataclass(frozen=True)
class Instance:
    system: SetSystem
    requests: tuple[int, ...] = ()


@dataclass
class CoverState:
    """
    Purchased sets in purchase order and the elements they cover. One per run.

    Starts empty; ``purchase`` is the only way to change it.
    """

    purchased: List[int] = field(default_factory=list, init=False)
    covered: set[int] = field(default_factory=set, init=False)

    def is_covered(self, e: int) -> bool:
        return e in self.covered

    def is_purchased(self, set_id: int) -> bool:
        return set_id in self._purchased_ids

    @cached_property
    def _purchased_ids(self) -> set[int]:
        return set(self.purchased)

    def purchase(self, system: SetSystem, set_id: int) -> None:
        _check_set_id(system, set_id)
        if set_id in self._purchased_ids:
            raise InvalidInputError(f"set {set_id} is already purchased")
        self.purchased.append(set_id)
        self._purchased_ids.add(set_id)
        self.covered.update(system.sets[set_id].members)

    def uncovered(self, system: SetSystem) -> List[int]:
        return [e for e in range(system.universe_size) if e not in self.covered]


def _check_set_id(system: SetSystem, set_id: int) -> None:
    if not 0 <= set_id < system.m:
        raise InvalidInputError(f"set id {set_id} out of range for {system.m} sets")


def sets_covering(system: SetSystem, e: int) -> List[int]:
    """
    Ids of the sets containing element ``e``, ascending.

    :param system: the set system
    :param e: element id
    :return: list of set ids
    """
    if not 0 <= e < system.universe_size:
        raise InvalidInputError(f"element id {e} out of range for universe of size {system.universe_size}")
    return list(system._covering[e])


def frequency(system: SetSystem) -> int:
    """Largest number of sets any single element of the universe belongs to."""
    return max((len(ids) for ids in system._covering), default=0)


def cost_of(system: SetSystem, family: Iterable[int]) -> Fraction:
    total = Fraction(0)
    for set_id in set(family):
        _check_set_id(system, set_id)
        total += system.sets[set_id].cost
    return total


def validate(instance: Instance) -> List[str]:
    """
    Check every SetSystem and Instance invariant.

    :param instance: instance to check
    :return: list of violations, empty when the instance is well formed
    """
    system = instance.system
    violations: List[str] = []

    if system.universe_size < 0:
        violations.append(f"negative universe size {system.universe_size}")

    for set_id, weighted in enumerate(system.sets):
        if weighted.cost <= 0:
            violations.append(f"nonpositive cost: set {set_id} has cost {weighted.cost}")
        if not weighted.members:
            violations.append(f"empty set: set {set_id}")
        for e in sorted(weighted.members):
            if not 0 <= e < system.universe_size:
                violations.append(f"element out of range: set {set_id} contains {e}")

    for e in range(max(system.universe_size, 0)):
        if not system._covering[e]:
            violations.append(f"uncovered element: {e} belongs to no set")

    for position, e in enumerate(instance.requests):
        if not 0 <= e < system.universe_size:
            violations.append(f"request out of range: request {position} is {e}")
        elif not system._covering[e]:
            violations.append(f"uncoverable request: request {position} is {e}")

    return violations


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def instance_to_dict(instance: Instance) -> dict:
    system = instance.system
    return {
        "universe_size": system.universe_size,
        "sets": [
            {"id": set_id, "cost": format_fraction(s.cost), "elements": sorted(s.members)}
            for set_id, s in enumerate(system.sets)
        ],
        "requests": list(instance.requests),
    }


def instance_from_dict(data: dict, strict: bool = True) -> Instance:
    """
    Parse the JSON instance layout.

    :param data: decoded JSON object
    :param strict: raise when the parsed instance violates an invariant
    :return: the instance
    """
    try:
        universe_size = int(data["universe_size"])
        raw_sets = sorted(data["sets"], key=lambda s: int(s["id"]))
        ids = [int(s["id"]) for s in raw_sets]
        if ids != list(range(len(raw_sets))):
            raise InvalidInputError(f"set ids must be exactly 0..{len(raw_sets) - 1}, got {ids}")
        system = SetSystem.from_lists(
            universe_size,
            ((map(int, s["elements"]), Fraction(str(s["cost"]))) for s in raw_sets),
        )
        requests = tuple(int(e) for e in data.get("requests", []))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        if isinstance(e, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed instance: {e}") from e

    instance = Instance(system=system, requests=requests)
    if strict:
        violations = validate(instance)
        if violations:
            raise InvalidInputError("invalid instance: " + "; ".join(violations))
    return instance


def dump_instance(instance: Instance, path: Optional[Union[str, Path]] = None) -> str:
    text = json.dumps(instance_to_dict(instance), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote instance to {path}", extra={"event_type": "instance_written", "path": str(path)})
    return text


def load_instance(source: Union[str, Path], strict: bool = True) -> Instance:
    """
    Read an instance from a JSON file, or from JSON text when ``source`` starts with ``{``.

    :param source: path or JSON text
    :param strict: reject invalid instances
    :return: the instance
    """
    if isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as e:
            raise InvalidInputError(f"cannot read instance file {source}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"instance is not valid JSON: {e}") from e
    return instance_from_dict(data, strict=strict)
