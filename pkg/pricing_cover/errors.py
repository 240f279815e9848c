from typing import Optional, Sequence


class PricingCoverError(Exception):
    """Base class for everything this package raises on purpose."""


class InvalidInputError(PricingCoverError, ValueError):
    pass


class CapacityError(PricingCoverError):
    pass


class ProtocolViolationError(PricingCoverError, RuntimeError):
    pass


class NotMonotoneError(PricingCoverError):
    """
    A preference graph contains a directed cycle.

    :param witness: cycle as a vertex sequence whose first and last entries are equal
    """

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = list(witness) if witness is not None else None


class UnpriceableStepError(NotMonotoneError):
    def __init__(self, step: int, witness: Sequence[int]):
        super().__init__(
            f"unpriceable step {step}: preference graph has cycle {list(witness)}",
            witness,
        )
        self.step = step


class PricingInvariantError(PricingCoverError, AssertionError):
    pass
