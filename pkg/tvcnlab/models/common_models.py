"""
Common models for tvcnlab
"""
from enum import Enum
from typing import Any

from qcelemental.models import AutodocBaseSettings, ProtoModel  # noqa: F401

__all__ = [
    "ProtoModel",
    "AutodocBaseSettings",
    "GrowthModelEnum",
    "RoutingStrategyEnum",
    "TrafficModeEnum",
    "CorrelationEnum",
    "ExperimentEnum",
]


class _CaseInsensitiveEnum(str, Enum):
    @classmethod
    def _missing_(cls, value: Any):
        if isinstance(value, str):
            lowered = value.strip().lower()
            for member in cls:
                if member.value == lowered:
                    return member
        return None


class GrowthModelEnum(_CaseInsensitiveEnum):
    """
    The growth model used to build a network.
    """

    ba = "ba"
    tvcn = "tvcn"
    dtvcn = "dtvcn"


class RoutingStrategyEnum(_CaseInsensitiveEnum):
    """
    How a route is picked among the shortest paths of a user: lowest or highest
    summed betweenness, or uniformly at random.
    """

    wg_min = "wg_min"
    wg_max = "wg_max"
    random_sp = "random_sp"


class TrafficModeEnum(_CaseInsensitiveEnum):
    """
    Where packets come from: every node towards random destinations (global), or only
    along the fixed routes of the users (users).
    """

    global_ = "global"
    users = "users"


class CorrelationEnum(_CaseInsensitiveEnum):
    """
    Pairwise degree correlation used by the disassortative growth model.
    """

    degree_ratio = "degree_ratio"
    degree_difference = "degree_difference"


class ExperimentEnum(_CaseInsensitiveEnum):
    """
    The experiments the runner knows how to reproduce.
    """

    lambda_c_vs_beta = "lambda_c_vs_beta"
    theta_vs_lambda = "theta_vs_lambda"
    t_vs_lambda = "t_vs_lambda"
    structure_vs_n = "structure_vs_n"
    demo_routes = "demo_routes"
