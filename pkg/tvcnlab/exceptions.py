"""
Exception types raised by tvcnlab.

Every error derives from ``TVCNError`` and from the builtin the operation would
otherwise raise, so ``except KeyError`` and ``except TVCNError`` both work.
"""

from typing import Any, List, Optional

__all__ = [
    "TVCNError",
    "GraphInvariantError",
    "DuplicateNode",
    "UnknownNode",
    "SelfLoop",
    "DuplicateEdge",
    "UnknownEdge",
    "EmptyGraph",
    "IsolatedNode",
    "ZeroDenominator",
    "DegenerateDistribution",
    "BudgetInfeasible",
    "TooSmall",
    "NoConvergence",
    "UndefinedThreshold",
    "DegenerateVariance",
    "Unreachable",
    "PathExplosion",
    "ZeroBetweenness",
    "ZeroCapacity",
    "InvalidRoute",
    "NonPositiveRate",
    "EmptySubnetwork",
    "ConfigError",
]


class TVCNError(Exception):
    """Base class of all tvcnlab errors."""


class GraphInvariantError(TVCNError, AssertionError):
    pass


### Graph mutation


class DuplicateNode(TVCNError, KeyError):
    pass


class UnknownNode(TVCNError, KeyError):
    pass


class SelfLoop(TVCNError, ValueError):
    pass


class DuplicateEdge(TVCNError, ValueError):
    pass


class UnknownEdge(TVCNError, KeyError):
    pass


### Growth models


class EmptyGraph(TVCNError, ValueError):
    pass


class IsolatedNode(TVCNError, ValueError):
    pass


class ZeroDenominator(TVCNError, ArithmeticError):
    pass


class DegenerateDistribution(TVCNError, ValueError):
    pass


class BudgetInfeasible(TVCNError, ValueError):
    pass


### Metrics


class TooSmall(TVCNError, ValueError):
    pass


class NoConvergence(TVCNError, RuntimeError):
    """Power iteration did not converge, the last iterate is kept on ``iterate``."""

    def __init__(self, message: str, iterate: Optional[Any] = None):
        super().__init__(message)
        self.iterate = iterate


class UndefinedThreshold(TVCNError, ValueError):
    pass


class DegenerateVariance(TVCNError, ValueError):
    pass


### Routing and traffic


class Unreachable(TVCNError, ValueError):
    pass


class PathExplosion(TVCNError, ValueError):
    pass


class ZeroBetweenness(TVCNError, ArithmeticError):
    pass


class ZeroCapacity(TVCNError, ArithmeticError):
    pass


class InvalidRoute(TVCNError, ValueError):
    pass


class NonPositiveRate(TVCNError, ValueError):
    pass


class EmptySubnetwork(TVCNError, ValueError):
    pass


### Configuration


class ConfigError(TVCNError, ValueError):
    """A config file could not be parsed or validated, ``diagnostics`` holds one line per problem."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = message + "\n" + "\n".join(self.diagnostics)
        super().__init__(message)
