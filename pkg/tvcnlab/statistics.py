"""A module for statistical quantities.
"""
from typing import Callable, Dict, Sequence

import numpy as np
import pandas as pd

# Aggregators skip undefined (NaN) realizations


def _defined(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return arr[~np.isnan(arr)]


def mean(values, **kwargs):
    arr = _defined(values)
    return float(arr.mean()) if len(arr) else np.nan


def sample_std(values, **kwargs):
    arr = _defined(values)
    return float(arr.std(ddof=1)) if len(arr) > 1 else np.nan


def minimum(values, **kwargs):
    arr = _defined(values)
    return float(arr.min()) if len(arr) else np.nan


def maximum(values, **kwargs):
    arr = _defined(values)
    return float(arr.max()) if len(arr) else np.nan


# Stats wrapped in a dictionary:
_stats_dict: Dict[str, Callable] = {}
_stats_dict["mean"] = mean
_stats_dict["std"] = sample_std
_stats_dict["min"] = minimum
_stats_dict["max"] = maximum

DEFAULT_STATS = ("mean", "std", "min", "max")


def linear_drift(trace) -> float:
    """
    Least-squares slope of ``trace`` against its step index.
    """
    y = np.asarray(trace, dtype=float)
    if len(y) < 2:
        return 0.0
    slope, _ = np.polyfit(np.arange(len(y), dtype=float), y, 1)
    return float(slope)


def aggregate(
    frame: pd.DataFrame, keys: Sequence[str], columns: Sequence[str], stats: Sequence[str] = DEFAULT_STATS
) -> pd.DataFrame:
    """
    Collapses realizations sharing ``keys`` into one row per key.

    Each of ``columns`` becomes ``<column>_<stat>`` for every requested stat. Rows are
    sorted by the keys.

    Parameters
    ----------
    frame : pd.DataFrame
        One row per realization
    keys : Sequence[str]
        Columns identifying a cell of the experiment grid
    columns : Sequence[str]
        Numeric columns to summarize; missing values are skipped
    stats : Sequence[str], optional
        Names from the statistics registry

    Returns
    -------
    pd.DataFrame
        The aggregated table
    """
    unknown = set(stats) - set(_stats_dict)
    if unknown:
        raise KeyError(f"Statistics {sorted(unknown)} are not understood, choose from {sorted(_stats_dict)}.")

    keys = list(keys)
    columns = list(columns)
    numeric = frame[keys].copy()
    for col in columns:
        numeric[col] = pd.to_numeric(frame[col], errors="coerce")

    grouped = numeric.groupby(keys, sort=True)
    parts = []
    for name in stats:
        part = grouped[columns].agg(_stats_dict[name])
        part.columns = [f"{col}_{name}" for col in columns]
        parts.append(part)

    ret = pd.concat(parts, axis=1)
    ret = ret[[f"{col}_{name}" for col in columns for name in stats]]
    return ret.reset_index()
