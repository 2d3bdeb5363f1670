"""
tvcnlab: time-varying communication network growth, structure and traffic
"""

from . import data, models, util
from ._version import __version__
from .exceptions import TVCNError
from .graph import Graph, SnapshotSequence
from .models import ExperimentSpec, GrowthConfig, TrafficParams
