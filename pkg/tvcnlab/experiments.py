"""
Seeded, multi-realization experiment sweeps and the single-purpose run commands.

Every sweep is cut into independent units, one per (model, size, seed). Units run in
a process pool, their rows are merged, sorted canonically and written as CSV next to
an aggregated table of means, sample standard deviations, minima and maxima.
"""

import json
import logging
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ._version import __version__
from .exceptions import TooSmall
from .graph import Graph
from .metrics import compute_metrics, metrics_frame
from .models import (
    ExperimentEnum,
    ExperimentSpec,
    GrowthConfig,
    GrowthModelEnum,
    MetricsRunConfig,
    RoutesRunConfig,
    RoutingStrategyEnum,
    TrafficRunConfig,
)
from .models.result_models import TRAFFIC_COLUMNS
from .netgen import generate, grow
from .routing import draw_users, route_users, routes_frame, select_route
from .statistics import aggregate
from .traffic import Centralities, evaluate_traffic, lambda_c_theoretical

__all__ = [
    "run_experiment",
    "demo_routes",
    "run_generate",
    "run_metrics",
    "run_routes",
    "run_traffic",
    "write_csv",
]

logger = logging.getLogger(__name__)

# Salts separating the random streams derived from one realization seed
_METRICS_STREAM = 1
_TRAFFIC_STREAM = 2

Unit = Tuple[ExperimentSpec, GrowthModelEnum, int, int]


def write_csv(frame: pd.DataFrame, path: str) -> str:
    """Writes ``frame`` with the fixed float format and ``NA`` for missing values."""
    frame.to_csv(path, index=False, float_format="%.10g", na_rep="NA")
    logger.info(f"Wrote {path}")
    return path


def _grow_quietly(cfg: GrowthConfig) -> Tuple[Graph, int]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        g = grow(cfg)
    return g, len(caught)


### Units of work


def _structure_unit(spec: ExperimentSpec, model: GrowthModelEnum, size: int, seed: int) -> List[Dict[str, Any]]:
    g, n_warn = _grow_quietly(spec.growth_config(model, size, seed))
    report = compute_metrics(
        g,
        t=size - spec.n0,
        rng=np.random.default_rng([seed, _METRICS_STREAM]),
        n_random=spec.rich_club_randomizations,
    )
    return [
        {
            "N": size,
            "model": model.value,
            "seed": seed,
            "g_max": report.g_max_norm,
            "apl": report.apl,
            "rc": report.rc,
            "clc": report.clc,
            "diameter": report.diameter,
            "assortativity": report.assortativity,
            "warnings": n_warn,
        }
    ]


def _lambda_c_unit(spec: ExperimentSpec, model: GrowthModelEnum, size: int, seed: int) -> List[Dict[str, Any]]:
    g, n_warn = _grow_quietly(spec.growth_config(model, size, seed))
    cent = Centralities.of(g)
    return [
        {
            "model": model.value,
            "N": size,
            "beta": beta,
            "seed": seed,
            "lambda_c": lambda_c_theoretical(g, beta, bc_raw=cent.bc_raw, evc=cent.evc),
            "g_max_raw": float(cent.bc_raw.max()),
            "warnings": n_warn,
        }
        for beta in spec.betas
    ]


def _traffic_unit(spec: ExperimentSpec, model: GrowthModelEnum, size: int, seed: int) -> List[Dict[str, Any]]:
    g, n_warn = _grow_quietly(spec.growth_config(model, size, seed))
    cent = Centralities.of(g)

    n_pairs = size * (size - 1) // 2
    users = draw_users(g, min(spec.users_R, n_pairs), np.random.default_rng([seed, _TRAFFIC_STREAM]))

    rows = []
    cell = 0
    for beta in spec.betas:
        for alpha in spec.alphas:
            params = spec.traffic_params(alpha, beta)
            for strategy in spec.strategies:
                cell += 1
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always", RuntimeWarning)
                    result = evaluate_traffic(
                        g,
                        strategy,
                        params,
                        rng=np.random.default_rng([seed, _TRAFFIC_STREAM, cell]),
                        centralities=cent,
                        users=users,
                    )
                row = result.copy(update={"model": model.value, "seed": seed}).to_row()
                row["warnings"] = n_warn + len(caught)
                rows.append(row)
    return rows


_unit_runners: Dict[ExperimentEnum, Callable[..., List[Dict[str, Any]]]] = {
    ExperimentEnum.structure_vs_n: _structure_unit,
    ExperimentEnum.lambda_c_vs_beta: _lambda_c_unit,
    ExperimentEnum.theta_vs_lambda: _traffic_unit,
    ExperimentEnum.t_vs_lambda: _traffic_unit,
}

# (grouping keys, aggregated columns) per experiment
_layouts: Dict[ExperimentEnum, Tuple[List[str], List[str]]] = {
    ExperimentEnum.structure_vs_n: (["N", "model"], ["g_max", "apl", "rc", "clc"]),
    ExperimentEnum.lambda_c_vs_beta: (["model", "N", "beta"], ["lambda_c"]),
    ExperimentEnum.theta_vs_lambda: (
        ["model", "strategy", "N", "beta", "alpha"],
        ["lambda_total", "theta", "lambda_c_theory", "lambda_c_sub"],
    ),
    ExperimentEnum.t_vs_lambda: (
        ["model", "strategy", "N", "beta", "alpha"],
        ["lambda_total", "mean_T", "analytic_T"],
    ),
}


def _run_unit(unit: Unit) -> List[Dict[str, Any]]:
    spec, model, size, seed = unit
    return _unit_runners[spec.experiment](spec, model, size, seed)


def _units(spec: ExperimentSpec) -> List[Unit]:
    return [(spec, model, size, seed) for model in spec.models for size in spec.sizes for seed in spec.seeds()]


def _map_units(units: List[Unit], jobs: int, progress: bool) -> List[List[Dict[str, Any]]]:
    bar = tqdm(total=len(units), unit="run", disable=not progress)
    ret = []
    try:
        if jobs == 1:
            for unit in units:
                ret.append(_run_unit(unit))
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                for rows in executor.map(_run_unit, units):
                    ret.append(rows)
                    bar.update(1)
    finally:
        bar.close()
    return ret


### Experiments


def demo_routes(n: int = 20, m: int = 2, users: int = 2, seed: int = 0) -> pd.DataFrame:
    """
    Routes a few users on a small BA network under every strategy.

    Parameters
    ----------
    n : int, optional
        Network size, at least 4
    m : int, optional
        Links per arriving node; mean degree approaches 2m
    users : int, optional
        Number of users
    seed : int, optional
        Seed of the network, the users and the random routes

    Returns
    -------
    pd.DataFrame
        One row per (user, strategy) with path length, path count, W_g and the path
    """
    if n < 4:
        raise TooSmall(f"The demonstration network needs at least 4 nodes, got {n}.")

    n0 = min(5, n - 1)
    g = grow(GrowthConfig(model=GrowthModelEnum.ba, n0=n0, T=n - n0, m_ba=min(m, n0 - 1), rng_seed=seed))
    cent = Centralities.of(g)

    rng = np.random.default_rng([seed, _TRAFFIC_STREAM])
    routes = []
    for user in draw_users(g, users, rng):
        for strategy in (RoutingStrategyEnum.wg_min, RoutingStrategyEnum.random_sp, RoutingStrategyEnum.wg_max):
            routes.append(select_route(g, user, strategy, cent.bc_norm, rng=rng))
    return routes_frame(routes)


def _write_manifest(spec: ExperimentSpec, out_dir: str, files: Sequence[str], extra: Dict[str, Any]) -> str:
    manifest = {
        "experiment": spec.experiment.value,
        "spec": json.loads(spec.json()),
        "hash": spec.get_hash(),
        "version": __version__,
        "files": [os.path.basename(f) for f in files],
    }
    manifest.update(extra)

    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def run_experiment(spec: ExperimentSpec, out_dir: str, jobs: int = 1, progress: bool = True) -> List[str]:
    """
    Runs every realization of ``spec`` and writes its tables into ``out_dir``.

    Parameters
    ----------
    spec : ExperimentSpec
        The sweep
    out_dir : str
        Output directory, created when missing
    jobs : int, optional
        Worker processes; 1 runs inline
    progress : bool, optional
        Show a progress bar

    Returns
    -------
    List[str]
        Paths of the files written, manifest last
    """
    os.makedirs(out_dir, exist_ok=True)
    name = spec.experiment.value
    logger.info(f"Running {name} with {spec.realizations} realization(s) on {jobs} worker(s)")

    if spec.experiment is ExperimentEnum.demo_routes:
        frame = demo_routes(n=spec.sizes[0], m=spec.m_ba, users=spec.users_R, seed=spec.base_seed)
        files = [write_csv(frame, os.path.join(out_dir, f"{name}.csv"))]
        files.append(_write_manifest(spec, out_dir, files, {"warnings": 0}))
        return files

    results = _map_units(_units(spec), jobs, progress)
    raw = pd.DataFrame([row for rows in results for row in rows])

    keys, columns = _layouts[spec.experiment]
    raw = raw.sort_values(keys + ["seed"], kind="mergesort").reset_index(drop=True)
    if spec.experiment in (ExperimentEnum.theta_vs_lambda, ExperimentEnum.t_vs_lambda):
        raw = raw[TRAFFIC_COLUMNS + ["warnings"]]

    n_warn = int(raw["warnings"].sum())
    if n_warn:
        logger.info(f"{n_warn} recoverable warning(s) were raised and counted in the raw table")

    files = [
        write_csv(aggregate(raw, keys, columns), os.path.join(out_dir, f"{name}.csv")),
        write_csv(raw, os.path.join(out_dir, f"{name}_raw.csv")),
    ]
    files.append(_write_manifest(spec, out_dir, files, {"warnings": n_warn}))
    return files


### Single-purpose commands


def run_generate(cfg: GrowthConfig, out_dir: str) -> List[str]:
    """Writes every snapshot as ``snap_<t>.edges`` plus the growth counters."""
    seq = generate(cfg)
    files = seq.save(out_dir)

    path = os.path.join(out_dir, "growth_stats.json")
    with open(path, "w") as handle:
        json.dump({"config": json.loads(cfg.json()), "stats": seq.stats}, handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info(f"Wrote {len(files)} snapshots to {out_dir}")
    return files + [path]


def run_metrics(cfg: MetricsRunConfig, out_dir: str) -> List[str]:
    """Metrics of the final snapshot, or of every ``stride``-th one plus the final."""
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng([cfg.rng_seed, _METRICS_STREAM])

    if cfg.stride is None:
        g = grow(cfg)
        reports = [compute_metrics(g, t=cfg.T, rng=rng, n_random=cfg.rich_club_randomizations)]
    else:
        seq = generate(cfg)
        times = sorted(set(range(0, seq.tau, cfg.stride)) | {seq.tau - 1})
        reports = [compute_metrics(seq[t], t=t, rng=rng, n_random=cfg.rich_club_randomizations) for t in times]

    return [write_csv(metrics_frame(reports), os.path.join(out_dir, "metrics.csv"))]


def run_routes(cfg: RoutesRunConfig, out_dir: str) -> List[str]:
    """Routes ``users_R`` users on the final snapshot with every configured strategy."""
    os.makedirs(out_dir, exist_ok=True)
    g = grow(cfg)
    cent = Centralities.of(g)

    rng = np.random.default_rng([cfg.rng_seed, _TRAFFIC_STREAM])
    users = draw_users(g, cfg.users_R, rng)
    routes = []
    for strategy in cfg.strategies:
        routes.extend(route_users(g, users, strategy, cent.bc_norm, rng=rng, cap=cfg.path_cap))
    routes.sort(key=lambda r: (r.user.id, cfg.strategies.index(r.strategy)))

    return [write_csv(routes_frame(routes), os.path.join(out_dir, "routes.csv"))]


def run_traffic(cfg: TrafficRunConfig, out_dir: str, keep_trace: bool = False) -> List[str]:
    """One traffic evaluation per configured strategy on the final snapshot."""
    os.makedirs(out_dir, exist_ok=True)
    g = grow(cfg)
    cent = Centralities.of(g)
    params = cfg.traffic_params()

    n = g.number_of_nodes()
    users = draw_users(g, min(cfg.users_R, n * (n - 1) // 2), np.random.default_rng([cfg.rng_seed, _TRAFFIC_STREAM]))

    rows = []
    traces = {}
    for k, strategy in enumerate(cfg.strategies):
        result = evaluate_traffic(
            g,
            strategy,
            params,
            rng=np.random.default_rng([cfg.rng_seed, _TRAFFIC_STREAM, k + 1]),
            keep_trace=keep_trace,
            centralities=cent,
            users=users,
        )
        result = result.copy(update={"model": cfg.model.value, "seed": cfg.rng_seed})
        rows.append(result.to_row())
        traces[strategy.value] = result.packet_trace

    files = [write_csv(pd.DataFrame(rows, columns=TRAFFIC_COLUMNS), os.path.join(out_dir, "traffic.csv"))]
    if keep_trace:
        frame = pd.DataFrame(traces)
        frame.insert(0, "t", np.arange(len(frame)))
        files.append(write_csv(frame, os.path.join(out_dir, "packet_trace.csv")))
    return files
