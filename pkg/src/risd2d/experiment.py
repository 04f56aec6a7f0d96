"""Sweep execution: evaluate every (axis value, method) cell and emit CSV rows.

Per-point seeds are derived deterministically from the base seed and the axis
index, so results do not depend on how many points run in parallel.
"""

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from datetime import datetime, timezone

from .config import ExperimentSpec
from .errors import BudgetExceededError
from .montecarlo import ergodic_rate_mc
from .optimize import exhaustive_search, ga_optimize, random_phases
from .rate import (RateReport, optimal_single_pair_phases, rate_general,
                   rate_no_ris_hwi, rate_no_transceiver_hwi)

import numpy as np

CSV_COLUMNS = ("axis_name", "axis_value", "method", "pair_index",
               "rate_bps_hz", "ci_half_width", "wall_ms", "note")

_SEED_STRIDE = 7919  # keeps per-point substreams disjoint

_SHARED_PHASE_METHODS = {"closed-general", "closed-nris", "closed-nthwi", "mc"}


def _report_rows(spec, value, method, report: RateReport, wall_ms, note=""):
    rows = []
    for i, rate in enumerate(report.per_pair):
        ci = "" if report.ci_half_width is None else f"{report.ci_half_width[i]:.10g}"
        rows.append({"axis_name": spec.axis, "axis_value": value, "method": method,
                     "pair_index": str(i), "rate_bps_hz": f"{rate:.10g}",
                     "ci_half_width": ci, "wall_ms": f"{wall_ms:.3f}", "note": note})
    sum_ci = "" if report.sum_ci_half_width is None else f"{report.sum_ci_half_width:.10g}"
    rows.append({"axis_name": spec.axis, "axis_value": value, "method": method,
                 "pair_index": "sum", "rate_bps_hz": f"{report.sum_rate:.10g}",
                 "ci_half_width": sum_ci, "wall_ms": f"{wall_ms:.3f}", "note": note})
    return rows


def _skipped_row(spec, value, method, reason):
    return [{"axis_name": spec.axis, "axis_value": value, "method": method,
             "pair_index": "skipped", "rate_bps_hz": "", "ci_half_width": "",
             "wall_ms": "", "note": reason}]


def _run_point(spec: ExperimentSpec, idx: int, value, base_seed: int | None):
    cfg = spec.config_at(value)
    bits = cfg.phase_bits
    mc_seed = (spec.mc.seed if base_seed is None else base_seed) + _SEED_STRIDE * idx
    ga_seed = (spec.ga.seed if base_seed is None else base_seed) + _SEED_STRIDE * idx
    mc_params = replace(spec.mc, seed=mc_seed)
    ga_params = replace(spec.ga, seed=ga_seed)

    shared_phases = None
    if _SHARED_PHASE_METHODS & set(spec.methods):
        shared_phases = ga_optimize(cfg, "general", bits, ga_params).phases

    rows = []
    for method in spec.methods:
        t0 = time.perf_counter()
        note = ""
        if method == "closed-general":
            report = rate_general(cfg, shared_phases)
        elif method == "closed-nris":
            report = rate_no_ris_hwi(cfg, shared_phases)
        elif method == "closed-nthwi":
            report = rate_no_transceiver_hwi(cfg, shared_phases)
        elif method == "mc":
            report = ergodic_rate_mc(cfg, shared_phases, mc_params)
        elif method == "ga-cps":
            res = ga_optimize(cfg, "general", None, ga_params)
            report = rate_general(cfg, res.phases)
        elif method == "ga-dps":
            if bits is None:
                rows += _skipped_row(spec, value, method, "phase_bits not set")
                continue
            res = ga_optimize(cfg, "general", bits, ga_params)
            report = rate_general(cfg, res.phases)
        elif method == "exhaustive":
            if bits is None:
                rows += _skipped_row(spec, value, method, "phase_bits not set")
                continue
            try:
                res = exhaustive_search(cfg, "general", bits, spec.exhaustive_budget)
            except BudgetExceededError as exc:
                rows += _skipped_row(spec, value, method, str(exc))
                continue
            report = rate_general(cfg, res.phases)
        elif method == "random":
            rng = np.random.default_rng(mc_seed + 1)
            report = rate_general(cfg, random_phases(cfg.n_elements, bits, rng))
        elif method == "analytic-single":
            if cfg.n_pairs != 1:
                rows += _skipped_row(spec, value, method,
                                     f"needs K=1, scenario has K={cfg.n_pairs}")
                continue
            report = rate_general(cfg, optimal_single_pair_phases(cfg.geometry, bits=bits))
        else:  # unreachable: parse_spec validates methods
            rows += _skipped_row(spec, value, method, "unknown method")
            continue
        wall_ms = (time.perf_counter() - t0) * 1e3
        rows += _report_rows(spec, value, method, report, wall_ms, note)
    return rows


def run_experiment(spec: ExperimentSpec, seed: int | None = None,
                   out_path: str | None = None, threads: int = 1) -> list[dict]:
    """Evaluate the full sweep; returns rows and optionally writes the CSV.

    Rows are ordered by axis value then method then pair index regardless of
    the parallelism degree, and all numeric columns except wall_ms are
    reproducible from (spec, seed).
    """
    points = list(enumerate(spec.values))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(
                lambda item: _run_point(spec, item[0], item[1], seed), points))
    else:
        chunks = [_run_point(spec, idx, value, seed) for idx, value in points]
    rows = [row for chunk in chunks for row in chunk]
    target = out_path or spec.output
    if target:
        write_csv(target, rows)
    return rows


def write_csv(path: str, rows: list[dict]):
    """CSV with a timestamp comment line followed by the fixed column schema."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# generated: {datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
