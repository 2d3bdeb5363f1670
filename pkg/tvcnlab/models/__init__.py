"""
Data models of tvcnlab
"""

from .common_models import (
    CorrelationEnum,
    ExperimentEnum,
    GrowthModelEnum,
    AutodocBaseSettings,
    ProtoModel,
    RoutingStrategyEnum,
    TrafficModeEnum,
)
from .config_models import (
    ExperimentSpec,
    GrowthConfig,
    MetricsRunConfig,
    RoutesRunConfig,
    TrafficParams,
    TrafficRunConfig,
)
from .model_utils import hash_dictionary, recursive_normalizer
from .result_models import CheckResult, MetricsReport, RichClubReport, Route, TrafficResult, User
