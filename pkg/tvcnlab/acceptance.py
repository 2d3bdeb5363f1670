"""
Checks of the qualitative results an experiment sweep should reproduce.

Every check reads the raw per-realization table an experiment writes, averages over
seeds and compares models, strategies or grid values within each group of the
remaining keys. Checks that need a model or strategy missing from the table are
skipped.
"""

import json
import logging
import os
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .exceptions import ConfigError
from .experiments import write_csv
from .models import CheckResult, ExperimentEnum
from .models.result_models import CHECK_COLUMNS

__all__ = [
    "check_structure",
    "check_lambda_c",
    "check_theta",
    "check_travel_time",
    "check_experiment",
    "checks_frame",
    "run_check",
]

logger = logging.getLogger(__name__)

APL_RANGE = (2.0, 3.5)

# Mean theta above which a cell counts as congested
THETA_ONSET = 0.01

_STRATEGY_ORDER = ["wg_min", "random_sp", "wg_max"]


### Helpers


def _label(keys: Sequence[str], name) -> str:
    if not isinstance(name, tuple):
        name = (name,)
    return ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in zip(keys, name))


def _chain(values: pd.Series, order: Sequence[str], strict: bool) -> bool:
    seq = [values[k] for k in order]
    if any(np.isnan(v) for v in seq):
        return False
    if strict:
        return all(a < b for a, b in zip(seq[:-1], seq[1:]))
    return all(a <= b for a, b in zip(seq[:-1], seq[1:]))


def _result(experiment: ExperimentEnum, criterion: str, bad: List[str], n_groups: int) -> CheckResult:
    if bad:
        detail = "; ".join(bad)
    else:
        detail = f"{n_groups} group(s) checked"
    return CheckResult(experiment=experiment, criterion=criterion, passed=not bad, detail=detail)


def _ordering(
    experiment: ExperimentEnum,
    raw: pd.DataFrame,
    keys: List[str],
    by: str,
    column: str,
    order: Sequence[str],
    strict: bool = True,
) -> Optional[CheckResult]:
    """Means of ``column`` must follow ``order`` across the values of ``by`` within every group of ``keys``."""
    if raw.empty or not set(order) <= set(raw[by].unique()):
        return None

    sign = " < " if strict else " <= "
    criterion = f"{column}: {sign.join(order)}"

    table = raw.groupby(keys + [by])[column].mean().unstack(by)
    table = table.dropna(how="all", subset=list(order))
    bad = [
        f"{_label(keys, name)}: " + " ".join(f"{k}={row[k]:.4g}" for k in order)
        for name, row in table.iterrows()
        if not _chain(row, order, strict)
    ]
    return _result(experiment, criterion, bad, len(table))


def _monotone(
    experiment: ExperimentEnum,
    raw: pd.DataFrame,
    keys: List[str],
    along: str,
    column: str,
    increasing: bool,
    tol: Optional[float] = None,
) -> Optional[CheckResult]:
    """
    Means of ``column`` must move one way along the sorted values of ``along``.

    Without ``tol`` the change must be strict; with it, steps against the direction
    up to ``tol`` are tolerated.
    """
    if raw.empty or raw[along].nunique() < 2:
        return None

    word = "increases" if increasing else "decreases"
    if tol is not None:
        word = "does not decrease" if increasing else "does not increase"
    criterion = f"{column} {word} with {along}"

    table = raw.groupby(keys + [along])[column].mean().unstack(along).sort_index(axis=1)
    bad = []
    for name, row in table.iterrows():
        values = row.dropna()
        if len(values) < 2:
            continue
        steps = np.diff(values.to_numpy(dtype=float))
        if not increasing:
            steps = -steps
        ok = np.all(steps > 0) if tol is None else np.all(steps >= -tol)
        if not ok:
            trend = " ".join(f"{x:g}:{y:.4g}" for x, y in values.items())
            bad.append(f"{_label(keys, name)}: {trend}")
    return _result(experiment, criterion, bad, len(table))


def _keep(results: Sequence[Optional[CheckResult]]) -> List[CheckResult]:
    return [r for r in results if r is not None]


### Checks per experiment


def check_structure(raw: pd.DataFrame) -> List[CheckResult]:
    """
    Orderings of the structural metrics between models at every size, the APL range,
    and the trends of clustering and APL with the network size.
    """
    exp = ExperimentEnum.structure_vs_n
    results = [
        _ordering(exp, raw, ["N"], "model", "g_max", ["dtvcn", "ba", "tvcn"]),
        _ordering(exp, raw, ["N"], "model", "rc", ["dtvcn", "ba", "tvcn"]),
        _ordering(exp, raw, ["N"], "model", "clc", ["ba", "dtvcn", "tvcn"]),
        _ordering(exp, raw, ["N"], "model", "assortativity", ["dtvcn", "tvcn"], strict=False),
        _monotone(exp, raw, ["model"], "N", "clc", increasing=False),
        _monotone(exp, raw, ["model"], "N", "apl", increasing=True),
    ]

    if not raw.empty:
        low, high = APL_RANGE
        apl = raw.groupby(["N", "model"])["apl"].mean()
        bad = [f"{_label(['N', 'model'], name)}: apl={v:.4g}" for name, v in apl.items() if not low <= v <= high]
        results.append(_result(exp, f"apl in [{low:g}, {high:g}]", bad, len(apl)))

    return _keep(results)


def check_lambda_c(raw: pd.DataFrame) -> List[CheckResult]:
    """The critical rate grows with beta and is ordered TVCN < BA < DTVCN at every beta."""
    exp = ExperimentEnum.lambda_c_vs_beta
    return _keep(
        [
            _monotone(exp, raw, ["model", "N"], "beta", "lambda_c", increasing=True),
            _ordering(exp, raw, ["N", "beta"], "model", "lambda_c", ["tvcn", "ba", "dtvcn"]),
        ]
    )


def _congested(raw: pd.DataFrame, keys: List[str], within: List[str]) -> pd.DataFrame:
    """Rows of the groups of ``keys`` in which every cell of ``within`` is congested."""
    cells = raw.groupby(keys + within)["theta"].mean()
    congested = (cells > THETA_ONSET).groupby(level=list(range(len(keys)))).all()
    index = raw.set_index(keys).index
    return raw[index.isin(congested[congested].index)]


def check_theta(raw: pd.DataFrame) -> List[CheckResult]:
    """
    Once every strategy congests, WG_MIN < RANDOM_SP < WG_MAX; once every cell congests,
    DTVCN with WG_MIN has the smallest theta. Theta never drops as alpha grows.
    """
    exp = ExperimentEnum.theta_vs_lambda
    results = [
        _monotone(exp, raw, ["model", "strategy", "N", "beta"], "alpha", "theta", increasing=True, tol=THETA_ONSET)
    ]
    if raw.empty:
        return _keep(results)

    if set(_STRATEGY_ORDER) <= set(raw["strategy"].unique()):
        keys = ["model", "N", "beta", "alpha"]
        above = _congested(raw, keys, ["strategy"])
        if above.empty:
            results.append(
                CheckResult(
                    experiment=exp,
                    criterion="theta: " + " < ".join(_STRATEGY_ORDER),
                    passed=False,
                    detail="no alpha above the congestion onset",
                )
            )
        else:
            results.append(_ordering(exp, above, keys, "strategy", "theta", _STRATEGY_ORDER))

    best = ("dtvcn", "wg_min")
    cells = raw.groupby(["N", "beta", "alpha", "model", "strategy"])["theta"].mean().unstack(["model", "strategy"])
    if best in cells.columns and cells.shape[1] > 1:
        criterion = "theta: dtvcn with wg_min is the smallest cell"
        table = cells[(cells > THETA_ONSET).all(axis=1)]
        bad = []
        for name, row in table.iterrows():
            others = row.drop(best)
            if not row[best] < others.min():
                rival = others.idxmin()
                bad.append(
                    f"{_label(['N', 'beta', 'alpha'], name)}: dtvcn/wg_min={row[best]:.4g} "
                    f"{rival[0]}/{rival[1]}={others.min():.4g}"
                )
        if table.empty:
            results.append(
                CheckResult(experiment=exp, criterion=criterion, passed=False, detail="no alpha congests every cell")
            )
        else:
            results.append(_result(exp, criterion, bad, len(table)))

    return _keep(results)


def check_travel_time(raw: pd.DataFrame) -> List[CheckResult]:
    """Measured and analytic travel times follow the strategy order; TVCN is slower than BA and DTVCN."""
    exp = ExperimentEnum.t_vs_lambda
    keys = ["model", "N", "beta", "alpha"]
    cells = ["strategy", "N", "beta", "alpha"]
    return _keep(
        [
            _ordering(exp, raw, keys, "strategy", "mean_T", _STRATEGY_ORDER, strict=False),
            _ordering(exp, raw, keys, "strategy", "analytic_T", _STRATEGY_ORDER, strict=False),
            _ordering(exp, raw, cells, "model", "mean_T", ["ba", "tvcn"]),
            _ordering(exp, raw, cells, "model", "mean_T", ["dtvcn", "tvcn"]),
        ]
    )


_checks: Dict[ExperimentEnum, Callable[[pd.DataFrame], List[CheckResult]]] = {
    ExperimentEnum.structure_vs_n: check_structure,
    ExperimentEnum.lambda_c_vs_beta: check_lambda_c,
    ExperimentEnum.theta_vs_lambda: check_theta,
    ExperimentEnum.t_vs_lambda: check_travel_time,
}


def check_experiment(experiment: ExperimentEnum, raw: pd.DataFrame) -> List[CheckResult]:
    """Every check that applies to ``experiment``; experiments without expectations give none."""
    check = _checks.get(ExperimentEnum(experiment))
    if check is None:
        return []
    return check(raw)


def checks_frame(results: Sequence[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in results], columns=CHECK_COLUMNS)


def run_check(out_dir: str) -> Tuple[List[CheckResult], str]:
    """
    Checks the results an experiment wrote into ``out_dir`` and writes ``checks.csv`` next to them.

    Returns
    -------
    Tuple[List[CheckResult], str]
        The outcomes and the path of the written table
    """
    manifest_path = os.path.join(out_dir, "manifest.json")
    if not os.path.isfile(manifest_path):
        raise ConfigError(f"{out_dir} holds no manifest.json; run an experiment into it first.")

    with open(manifest_path, "r") as handle:
        manifest = json.load(handle)

    try:
        experiment = ExperimentEnum(manifest["experiment"])
    except (KeyError, ValueError):
        raise ConfigError(f"{manifest_path} does not name a known experiment.")

    raw = pd.DataFrame()
    if experiment in _checks:
        raw_path = os.path.join(out_dir, f"{experiment.value}_raw.csv")
        if not os.path.isfile(raw_path):
            raise ConfigError(f"{raw_path} is missing.")
        raw = pd.read_csv(raw_path, na_values=["NA"])

    results = check_experiment(experiment, raw)
    n_failed = sum(not r.passed for r in results)
    logger.info(f"{len(results) - n_failed} of {len(results)} check(s) passed for {experiment.value}")

    path = write_csv(checks_frame(results), os.path.join(out_dir, "checks.csv"))
    return results, path
