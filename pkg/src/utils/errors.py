"""
Exception hierarchy for placement, map handling and the experiment harness
"""

from typing import Optional


class PlacementError(Exception):
    """Base class for every error raised by this package"""


class InvalidCapacityError(PlacementError, ValueError):
    """A capacity or capacity unit is not strictly positive"""


class NodeAlreadyPresentError(PlacementError, KeyError):
    """The node id is already part of the map, ring or straw set"""


class NodeNotFoundError(PlacementError, KeyError):
    """The node id is not part of the map"""


class EmptyMapError(PlacementError):
    """A lookup was attempted against an empty map, ring or straw set"""


class InsufficientNodesError(PlacementError, ValueError):
    """More replicas were requested than there are distinct nodes"""


class DegenerateMapError(PlacementError, ValueError):
    """Parameters for the draw-count model describe no usable number line"""


class ExtensionLimitError(PlacementError):
    """Extension mode ran out of doublings without finding an addition number"""


class NumberSourceExhaustedError(PlacementError):
    """An injected number sequence ended before the lookup finished"""


class InvalidChurnError(PlacementError, ValueError):
    """A churn scenario would leave the cluster empty or references unknown nodes"""


class InvariantViolationError(PlacementError):
    """The harness observed a broken placement property"""


class MapFormatError(PlacementError, ValueError):
    """A map file could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
