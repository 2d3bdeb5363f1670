"""
Utility functions shared across tvcnlab.
"""
from typing import Dict, Mapping, Sequence, Union

import numpy as np

__all__ = ["as_generator", "by_label"]

RandomState = Union[None, int, np.random.Generator]


def as_generator(rng: RandomState) -> np.random.Generator:
    """
    Returns ``rng`` if it already is a numpy Generator, otherwise seeds a new one with it.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def by_label(
    nodes: Sequence[int], values: Union[Mapping[int, float], Sequence[float], np.ndarray]
) -> Dict[int, float]:
    """
    Keys per-node values by node label.

    Mappings are taken to be keyed by label already; sequences follow the order of ``nodes``.
    """
    if isinstance(values, Mapping):
        return {n: float(values[n]) for n in nodes}

    if len(values) != len(nodes):
        raise ValueError(f"Expected {len(nodes)} per-node values, got {len(values)}.")
    return {n: float(v) for n, v in zip(nodes, values)}
