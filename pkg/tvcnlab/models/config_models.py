"""
Input models: growth configuration, traffic parameters and experiment specifications.
"""
import math
from typing import List, Optional

from pydantic import Field, root_validator, validator

from .common_models import (
    CorrelationEnum,
    ExperimentEnum,
    GrowthModelEnum,
    ProtoModel,
    RoutingStrategyEnum,
    TrafficModeEnum,
)
from .model_utils import hash_dictionary, recursive_normalizer

__all__ = [
    "GrowthConfig",
    "TrafficParams",
    "ExperimentSpec",
    "MetricsRunConfig",
    "RoutesRunConfig",
    "TrafficRunConfig",
]

_all_models = [GrowthModelEnum.ba, GrowthModelEnum.tvcn, GrowthModelEnum.dtvcn]
_all_strategies = [RoutingStrategyEnum.wg_min, RoutingStrategyEnum.random_sp, RoutingStrategyEnum.wg_max]


def _floor(x: float) -> int:
    # Budgets such as (1 - 0.7) * 10 land a hair below the integer they denote
    return int(math.floor(x + 1e-9))


def _check_window(cls, values):
    if values["warmup"] + values["window"] > values["steps"]:
        raise ValueError(
            f"warmup ({values['warmup']}) + window ({values['window']}) exceeds steps ({values['steps']})."
        )
    return values


class GrowthConfig(ProtoModel):
    """
    Parameters of one growth run. The final network holds ``n0 + T`` nodes.
    """

    model: GrowthModelEnum = Field(..., description=str(GrowthModelEnum.__doc__))
    n0: int = Field(5, ge=2, description="Number of seed nodes, arranged in a ring.")
    T: int = Field(195, ge=0, description="Number of growth steps; one node arrives per step.")
    M: int = Field(5, ge=1, description="Links handled per step (TVCN and DTVCN), at most n0.")
    vartheta: float = Field(
        0.6, gt=0.0, lt=1.0, description="Fraction of M used for the links of the arriving node."
    )
    gamma: float = Field(
        1.0,
        gt=0.5,
        le=1.0,
        description="Fraction of the alteration budget (1 - vartheta) M that rewires links; the rest removes links.",
    )
    m_ba: int = Field(3, ge=1, description="Links per arriving node in the BA model.")
    rng_seed: int = Field(0, ge=0, description="Seed of the random generator; the run is a pure function of it.")
    correlation: CorrelationEnum = Field(CorrelationEnum.degree_ratio, description=str(CorrelationEnum.__doc__))
    invert_zeta: bool = Field(
        False,
        description="Replace the normalized disassortativeness zeta_v by 1 - zeta_v in the DTVCN probabilities.",
    )
    max_attempts: int = Field(
        10, ge=1, description="Resampling attempts before a rewire or removal that would disconnect the network is skipped."
    )

    @root_validator(skip_on_failure=True)
    def _check_budget(cls, values):
        model = values["model"]
        if model is GrowthModelEnum.ba:
            if values["m_ba"] >= values["n0"]:
                raise ValueError(f"m_ba ({values['m_ba']}) must be smaller than n0 ({values['n0']}).")
            return values

        if values["M"] > values["n0"]:
            raise ValueError(f"M ({values['M']}) may not exceed n0 ({values['n0']}).")
        if _floor(values["vartheta"] * values["M"]) < 1:
            raise ValueError(
                f"vartheta * M = {values['vartheta'] * values['M']:g} leaves the arriving node without links."
            )
        return values

    @property
    def final_size(self) -> int:
        return self.n0 + self.T

    @property
    def n_add(self) -> int:
        """Links brought by each arriving node."""
        if self.model is GrowthModelEnum.ba:
            return self.m_ba
        return _floor(self.vartheta * self.M)

    @property
    def n_alter(self) -> int:
        if self.model is GrowthModelEnum.ba:
            return 0
        return _floor((1.0 - self.vartheta) * self.M)

    @property
    def n_rewire(self) -> int:
        return _floor(self.gamma * self.n_alter)

    @property
    def n_remove(self) -> int:
        return self.n_alter - self.n_rewire


class TrafficParams(ProtoModel):
    """
    Controls of one traffic simulation.
    """

    alpha: float = Field(..., gt=0.0, description="Generation-rate control; total load is alpha * D * N.")
    beta: float = Field(..., gt=0.0, description="Capacity control; total capacity is beta * N.")
    steps: int = Field(5000, ge=1, description="Total simulated time steps.")
    warmup: int = Field(1000, ge=0, description="Initial steps excluded from travel-time statistics.")
    window: int = Field(1000, ge=2, description="Length of the final window used to measure packet drift.")
    mode: TrafficModeEnum = Field(TrafficModeEnum.global_, description=str(TrafficModeEnum.__doc__))
    path_cap: int = Field(10 ** 4, ge=1, description="Maximum number of shortest paths enumerated per pair.")

    _check_window = root_validator(skip_on_failure=True, allow_reuse=True)(_check_window)


class ExperimentSpec(ProtoModel):
    """
    One experiment sweep. Realization ``i`` uses seed ``base_seed + i`` for every grid cell.
    """

    experiment: ExperimentEnum = Field(..., description=str(ExperimentEnum.__doc__))
    models: List[GrowthModelEnum] = Field(_all_models, description="Growth models to compare.")
    strategies: List[RoutingStrategyEnum] = Field(_all_strategies, description="Routing strategies to compare.")
    sizes: List[int] = Field([200], description="Network sizes |N|.")
    betas: List[float] = Field([0.5], description="Capacity controls.")
    alphas: List[float] = Field([0.1], description="Generation-rate controls.")
    realizations: int = Field(10, ge=1, description="Independent realizations averaged per cell.")
    users_R: int = Field(20, ge=1, description="Number of users drawn per realization.")
    base_seed: int = Field(0, ge=0, description="Seed of realization 0.")

    n0: int = Field(5, ge=2)
    M: int = Field(5, ge=1)
    vartheta: float = Field(0.6, gt=0.0, lt=1.0)
    gamma: float = Field(1.0, gt=0.5, le=1.0)
    m_ba: int = Field(3, ge=1)
    correlation: CorrelationEnum = CorrelationEnum.degree_ratio
    invert_zeta: bool = False

    steps: int = Field(5000, ge=1)
    warmup: int = Field(1000, ge=0)
    window: int = Field(1000, ge=2)
    traffic_mode: TrafficModeEnum = TrafficModeEnum.global_
    path_cap: int = Field(10 ** 4, ge=1)
    rich_club_randomizations: int = Field(10, ge=1, description="Null-model graphs per rich-club normalisation.")

    @validator("models", "strategies", "sizes", "betas", "alphas")
    def _check_grid(cls, v, field):
        if len(v) == 0:
            raise ValueError(f"Grid '{field.name}' may not be empty.")
        return v

    @validator("betas", "alphas", each_item=True)
    def _check_positive(cls, v):
        if v <= 0:
            raise ValueError(f"Grid values must be positive, found {v}.")
        return v

    @root_validator(skip_on_failure=True)
    def _check_sizes(cls, values):
        small = [n for n in values["sizes"] if n <= values["n0"]]
        if small:
            raise ValueError(f"Sizes {small} must exceed n0 ({values['n0']}).")
        if values["warmup"] + values["window"] > values["steps"]:
            raise ValueError(
                f"warmup ({values['warmup']}) + window ({values['window']}) exceeds steps ({values['steps']})."
            )
        return values

    def seeds(self) -> List[int]:
        return [self.base_seed + i for i in range(self.realizations)]

    def get_hash(self) -> str:
        """A fingerprint of the sweep, stable under float noise below 1e-10."""
        return hash_dictionary(recursive_normalizer(self.dict(encoding="json")))

    def growth_config(self, model: GrowthModelEnum, size: int, seed: int) -> GrowthConfig:
        return GrowthConfig(
            model=model,
            n0=self.n0,
            T=size - self.n0,
            M=self.M,
            vartheta=self.vartheta,
            gamma=self.gamma,
            m_ba=self.m_ba,
            rng_seed=seed,
            correlation=self.correlation,
            invert_zeta=self.invert_zeta,
        )

    def traffic_params(self, alpha: float, beta: float) -> TrafficParams:
        return TrafficParams(
            alpha=alpha,
            beta=beta,
            steps=self.steps,
            warmup=self.warmup,
            window=self.window,
            mode=self.traffic_mode,
            path_cap=self.path_cap,
        )


### Flat configs of the single-purpose CLI commands


class MetricsRunConfig(GrowthConfig):
    stride: Optional[int] = Field(
        None, ge=1, description="Report every stride-th snapshot plus the final one; None reports the final only."
    )
    rich_club_randomizations: int = Field(10, ge=1)


class RoutesRunConfig(GrowthConfig):
    users_R: int = Field(20, ge=1)
    strategies: List[RoutingStrategyEnum] = Field(_all_strategies)
    path_cap: int = Field(10 ** 4, ge=1)


class TrafficRunConfig(GrowthConfig):
    alpha: float = Field(..., gt=0.0)
    beta: float = Field(..., gt=0.0)
    steps: int = Field(5000, ge=1)
    warmup: int = Field(1000, ge=0)
    window: int = Field(1000, ge=2)
    traffic_mode: TrafficModeEnum = TrafficModeEnum.global_
    strategies: List[RoutingStrategyEnum] = Field(_all_strategies)
    users_R: int = Field(20, ge=1)
    path_cap: int = Field(10 ** 4, ge=1)

    _check_window = root_validator(skip_on_failure=True, allow_reuse=True)(_check_window)

    def traffic_params(self) -> TrafficParams:
        return TrafficParams(
            alpha=self.alpha,
            beta=self.beta,
            steps=self.steps,
            warmup=self.warmup,
            window=self.window,
            mode=self.traffic_mode,
            path_cap=self.path_cap,
        )
