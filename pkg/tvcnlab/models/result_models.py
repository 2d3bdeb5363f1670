"""
Output models: structural metrics, user routes and traffic results.
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field, validator

from .common_models import ExperimentEnum, ProtoModel, RoutingStrategyEnum

__all__ = ["RichClubReport", "MetricsReport", "User", "Route", "TrafficResult", "CheckResult"]

METRICS_COLUMNS = ["t", "N", "E", "g_max_norm", "apl", "diameter", "rc", "clc", "assortativity"]
ROUTE_COLUMNS = ["user", "s", "d", "strategy", "path_len", "k_count", "w_g", "path"]
TRAFFIC_COLUMNS = [
    "model",
    "strategy",
    "N",
    "seed",
    "alpha",
    "beta",
    "lambda_total",
    "cap_total",
    "theta",
    "mean_T",
    "analytic_T",
    "lambda_c_theory",
    "lambda_c_sub",
]
CHECK_COLUMNS = ["experiment", "criterion", "passed", "detail"]


def _to_list(v: Any) -> Any:
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


class RichClubReport(ProtoModel):
    """
    Rich-club profile phi(k) and its null-model normalisation at k* = ceil(<k>).
    """

    profile: Dict[int, float] = Field(..., description="phi(k) for every k with at least two nodes of degree > k.")
    k_star: int = Field(..., description="Threshold degree of the scalar summary.")
    phi: Optional[float] = Field(None, description="phi(k*) of the graph itself.")
    phi_random: Optional[float] = Field(None, description="Mean phi(k*) over the degree-preserving randomizations.")
    rc: Optional[float] = Field(None, description="phi(k*) / phi_random(k*); None when undefined.")


class MetricsReport(ProtoModel):
    """
    Structural metrics of one snapshot. Per-node lists follow the graph's node order.
    """

    t: int = Field(0, description="Time instant of the snapshot.")
    N: int
    E: int
    bc_raw: List[float] = Field(..., description="Shortest-path betweenness as pair counts.")
    bc_norm: List[float] = Field(..., description="Betweenness divided by (N-1)(N-2)/2.")
    evc: List[float] = Field(..., description="Eigenvector centrality normalized to unit sum.")
    clc: float = Field(..., description="Average local clustering coefficient.")
    apl: float = Field(..., description="Average shortest path length over connected pairs.")
    diameter: int = Field(..., description="Largest finite shortest-path distance.")
    rich_club: Optional[RichClubReport] = None
    assortativity: Optional[float] = Field(None, description="Newman degree assortativity; None for regular graphs.")

    _to_list = validator("bc_raw", "bc_norm", "evc", pre=True, allow_reuse=True)(_to_list)

    @property
    def g_max_norm(self) -> float:
        return max(self.bc_norm) if self.bc_norm else 0.0

    @property
    def rc(self) -> Optional[float]:
        return None if self.rich_club is None else self.rich_club.rc

    def to_row(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "N": self.N,
            "E": self.E,
            "g_max_norm": self.g_max_norm,
            "apl": self.apl,
            "diameter": self.diameter,
            "rc": self.rc,
            "clc": self.clc,
            "assortativity": self.assortativity,
        }


class User(ProtoModel):
    """
    A user wanting to send data from ``s`` to ``d``.
    """

    id: int
    s: int
    d: int

    @validator("d")
    def _check_distinct(cls, v, values):
        if "s" in values and v == values["s"]:
            raise ValueError(f"Source and destination must differ, both are {v}.")
        return v


class Route(ProtoModel):
    """
    The shortest path chosen for a user, with its summed betweenness W_g.
    """

    user: User
    strategy: RoutingStrategyEnum
    path: Tuple[int, ...] = Field(..., description="Node sequence from s to d.")
    weight: float = Field(..., description="Sum of normalized betweenness over every node of the path.")
    k_count: int = Field(..., ge=1, description="Number of shortest paths the route was chosen from.")

    @validator("path")
    def _check_path(cls, v, values):
        if len(v) < 2:
            raise ValueError("A route needs at least two nodes.")
        if len(set(v)) != len(v):
            raise ValueError(f"Route {v} visits a node twice.")
        user = values.get("user")
        if user is not None and (v[0] != user.s or v[-1] != user.d):
            raise ValueError(f"Route {v} does not join {user.s} to {user.d}.")
        return tuple(v)

    @property
    def path_len(self) -> int:
        return len(self.path) - 1

    def to_row(self) -> Dict[str, Any]:
        return {
            "user": self.user.id,
            "s": self.user.s,
            "d": self.user.d,
            "strategy": self.strategy.value,
            "path_len": self.path_len,
            "k_count": self.k_count,
            "w_g": self.weight,
            "path": "-".join(str(n) for n in self.path),
        }


class TrafficResult(ProtoModel):
    """
    Outcome of one traffic simulation. ``mean_T`` is None when no packet was delivered.
    """

    theta: float = Field(..., ge=0.0, description="Order parameter (C / lambda) * max(0, drift).")
    mean_T: Optional[float] = Field(None, description="Measured average travel time of delivered packets.")
    analytic_T: Optional[float] = Field(None, description="Travel time estimate from the user routes.")
    lambda_total: float = Field(..., description="Network load, the sum of generation rates.")
    cap_total: float = Field(..., description="Network capacity, the sum of node capacities.")
    congested_nodes: List[int] = Field([], description="Nodes whose generation rate exceeds their capacity.")
    growth_rate: float = Field(0.0, description="Least-squares slope of the packet count over the final window.")
    generated: int = Field(0, ge=0)
    delivered: int = Field(0, ge=0)
    packet_trace: List[int] = Field([], description="Packets in the network at the end of each step.")

    model: Optional[str] = None
    strategy: Optional[RoutingStrategyEnum] = None
    N: Optional[int] = None
    seed: Optional[int] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    lambda_c_theory: Optional[float] = None
    lambda_c_sub: Optional[float] = None

    _to_list = validator("packet_trace", "congested_nodes", pre=True, allow_reuse=True)(_to_list)

    @property
    def in_network(self) -> int:
        return self.generated - self.delivered

    def to_row(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "strategy": None if self.strategy is None else self.strategy.value,
            "N": self.N,
            "seed": self.seed,
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda_total": self.lambda_total,
            "cap_total": self.cap_total,
            "theta": self.theta,
            "mean_T": self.mean_T,
            "analytic_T": self.analytic_T,
            "lambda_c_theory": self.lambda_c_theory,
            "lambda_c_sub": self.lambda_c_sub,
        }


class CheckResult(ProtoModel):
    """
    Outcome of one expected qualitative result of an experiment.
    """

    experiment: ExperimentEnum
    criterion: str = Field(..., description="What is compared, e.g. 'g_max: dtvcn < ba < tvcn'.")
    passed: bool
    detail: str = Field("", description="The groups that broke the criterion, or how many were checked.")

    def to_row(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment.value,
            "criterion": self.criterion,
            "passed": self.passed,
            "detail": self.detail,
        }
