from .manager import PricingCoverManager
from .model import CoverState, Instance, SetSystem, WeightedSet, load_instance

__all__ = ["PricingCoverManager", "CoverState", "Instance", "SetSystem", "WeightedSet", "load_instance"]
