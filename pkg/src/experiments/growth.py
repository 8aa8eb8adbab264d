#!/usr/bin/env python3
"""
Longest-path and growth experiments: the patience-sorting oracle checks,
the Ulam constant, local Poisson structure of the empty-start process,
the axis departure of optimal weak paths and the V_t table.
"""

import math
from functools import partial
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from ..analysis.stat_tests import (
    chi2_uniform_1d,
    forward_gaps,
    ks_exponential,
    mean_within_se,
    v_measure_diagnostic,
)
from ..core.engine import evolve, extract_boundary, path_count_box
from ..core.models import PlotSeries, PlotSpec, TestReport
from ..core.paths import (
    WeakPathInstance,
    check_lis_equals_crossings,
    lis_bruteforce,
    lis_patience,
    weak_axis_departure,
)
from ..core.point_process import Interval, Points1D, Points2D, Rect, UnitStream, transpose_points
from .base import BaseExperiment
from .replication import sample_empty_start, sample_stationary

PERMUTATION_EXAMPLE = (5, 3, 6, 2, 8, 7, 1, 4, 9)
PERMUTATION_LIS = 4
ORACLE_MAX_POINTS = 12
ULAM_BAND = (1.80, 2.00)
VT_RELATIVE_BAND = 0.10


def permutation_points(perm: Sequence[int]) -> Points2D:
    """(i, perm[i]) for i = 1..n inside [0, n + 1]^2"""
    n = len(perm)
    pts = np.column_stack((np.arange(1, n + 1, dtype=float), np.asarray(perm, dtype=float)))
    return Points2D(pts, Rect.box(n + 1, n + 1))


def _oracle_one(stream: UnitStream) -> bool:
    rng = stream.generator()
    n = int(rng.integers(0, ORACLE_MAX_POINTS + 1))
    p = Points2D(rng.random((n, 2)), Rect.box(1.0, 1.0))
    longest = lis_patience(p)
    return longest == lis_bruteforce(p) and longest == lis_patience(transpose_points(p))


def _crossings_one(t1: float, t2: float, lambdas: Sequence[float], stream: UnitStream) -> Tuple[float, bool]:
    lam = lambdas[stream.stream_id % len(lambdas)]
    inp = sample_stationary(t1, t2, lam, stream)
    return lam, check_lis_equals_crossings(inp.alphas, inp.sources, inp.sinks, inp.box)


class LisExperiment(BaseExperiment):
    """Patience sorting against a known value, against brute force, and against simulated path counts"""

    name = "lis"
    description = "Longest increasing subsequence oracle and crossing equivalence"
    defaults = {"t1": 20.0, "t2": 20.0, "trials": 10_000, "lambdas": [0.5, 1.0, 2.0]}

    def execute(self):
        cfg = self.config
        example = permutation_points(PERMUTATION_EXAMPLE)
        found = lis_patience(example)
        self.report(TestReport.pathwise(
            "permutation example", int(found != PERMUTATION_LIS or lis_bruteforce(example) != PERMUTATION_LIS),
            1, cfg.alpha, notes=f"lis {found}, expected {PERMUTATION_LIS}",
        ))

        oracle = self.replicate(_oracle_one, cfg.trials)
        self.report(TestReport.pathwise("patience equals brute force", oracle.count(False), len(oracle), cfg.alpha))

        lambdas = tuple(cfg.lambdas or [cfg.lam])
        crossings = self.replicate(partial(_crossings_one, cfg.t1, cfg.t2, lambdas), cfg.trials)
        frame = pd.DataFrame(crossings, columns=["lambda", "ok"])
        for lam in lambdas:
            subset = frame[frame["lambda"] == lam]
            self.report(TestReport.pathwise(f"weak path length equals crossings lambda={lam:g}",
                                            int((~subset["ok"]).sum()), len(subset), cfg.alpha))
        self.table("checks", pd.DataFrame([
            {"check": "permutation example", "trials": 1, "violations": int(found != PERMUTATION_LIS)},
            {"check": "patience equals brute force", "trials": len(oracle), "violations": oracle.count(False)},
            {"check": "weak path length equals crossings", "trials": len(frame),
             "violations": int((~frame["ok"]).sum())},
        ]))


def _ulam_one(t: float, lam: float, stream: UnitStream) -> Dict[str, float]:
    empty = sample_empty_start(t, t, stream.child(0))
    stationary = sample_stationary(t, t, lam, stream.child(1))
    log = evolve(stationary)
    return {
        "empty": lis_patience(empty.alphas),
        "weak": path_count_box(log, t, t),
        "sinks": len(stationary.sinks),
        "north": int(log.final_positions.size),
    }


def _log_log_slope(ts: Sequence[float], values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float)
    if len(ts) < 2 or np.any(values <= 0):
        return float("nan")
    return float(np.polyfit(np.log(ts), np.log(values), 1)[0])


class UlamExperiment(BaseExperiment):
    """
    E L(t, t) / t for the empty-start process (increasing towards 2) and the
    stationary weak-path length, whose mean is exactly (lambda + 1/lambda) t.
    Also tabulates variances, their log-log growth exponents and the
    correlation between the West-side sink count and the North exit count.
    """

    name = "ulam"
    description = "Mean longest path L(t,t)/t for empty-start and stationary processes"
    defaults = {"lambda_": 1.0, "replications": 200, "t_values": [250.0, 500.0, 1000.0]}

    def execute(self):
        cfg = self.config
        lam = cfg.lam
        ts = sorted(cfg.t_values or [cfg.t1])
        rows = []
        for t in ts:
            runs = pd.DataFrame(self.replicate(partial(_ulam_one, t, lam), cfg.replications))
            expected = (lam + 1.0 / lam) * t
            if len(runs) > 1:
                self.report(mean_within_se(runs["weak"], expected, name=f"stationary weak length t={t:g}",
                                           alpha=cfg.alpha))
            corr = runs["sinks"].corr(runs["north"]) if len(runs) > 2 else float("nan")
            rows.append({
                "t": t,
                "mean_empty": runs["empty"].mean() / t,
                "se_empty": runs["empty"].std(ddof=1) / t / math.sqrt(len(runs)) if len(runs) > 1 else np.nan,
                "var_empty": runs["empty"].var(ddof=1),
                "mean_weak": runs["weak"].mean() / t,
                "var_weak": runs["weak"].var(ddof=1),
                "corr_sinks_north": corr,
            })
        table = pd.DataFrame(rows)

        decreases = int(np.sum(np.diff(table["mean_empty"].to_numpy()) <= 0))
        self.report(TestReport.pathwise("empty-start mean increasing in t", decreases, len(ts), cfg.alpha))
        self.report(TestReport.band(f"empty-start L(t,t)/t at t={ts[-1]:g}", float(table["mean_empty"].iloc[-1]),
                                    *ULAM_BAND, cfg.replications, cfg.alpha))

        self.table("ulam", table)
        self.table("variance_exponent", pd.DataFrame([
            {"process": "empty", "exponent": _log_log_slope(ts, table["var_empty"])},
            {"process": "stationary", "exponent": _log_log_slope(ts, table["var_weak"])},
        ]))
        self.figure(PlotSpec(
            name="mean_curve", title="Mean L(t, t) / t", xlabel="t", ylabel="L(t, t) / t",
            series=[
                PlotSeries(label="empty start", x=ts, y=table["mean_empty"].tolist(), style="line"),
                PlotSeries(label="limit 2", x=[ts[0], ts[-1]], y=[2.0, 2.0]),
            ],
        ))


def _window_one(t: float, a: float, w: float, stream: UnitStream) -> Points1D:
    # the configuration on [0, t + w] at time a t only depends on alpha-points in that box
    log = evolve(sample_empty_start(t + w, a * t, stream))
    pos = log.final_positions
    return Points1D(pos[(pos > t - w) & (pos <= t + w)], Interval(t - w, t + w))


class LocalPoissonExperiment(BaseExperiment):
    """
    Particles of the empty-start process at time a t in the window
    [t - w, t + w] (t is t1, w the window) look like a Poisson process of
    intensity sqrt(a): pooled forward gaps are tested against Exp(sqrt(a)).
    """

    name = "local-poisson"
    description = "Local Poisson structure of the empty-start process around (t, a t)"
    defaults = {"a": 1.0, "t1": 1000.0, "window": 50.0, "replications": 100}

    def execute(self):
        cfg = self.config
        t, a, w = cfg.t1, cfg.a, cfg.window
        if w >= t:
            w = t / 2.0
            self.logger.warning("window wider than t, shrinking", window=w)
        rate = math.sqrt(a)
        windows = self.replicate(partial(_window_one, t, a, w), cfg.replications)

        gaps = np.concatenate([forward_gaps(s) for s in windows])
        gaps = gaps[gaps > 0]
        self.report(ks_exponential(gaps, rate, cfg.alpha, name="window gap K-S"))
        pooled = Points1D(np.unique(np.concatenate([s.pts for s in windows])), Interval(t - w, t + w))
        bins = min(10, len(pooled) // 5)
        if bins >= 2:
            self.report(chi2_uniform_1d(pooled, bins, cfg.alpha, name="window uniformity chi2"))

        counts = np.array([len(s) for s in windows], dtype=float)
        self.table("window_counts", pd.DataFrame({"replication": range(len(windows)), "count": counts}))
        self.table("window_summary", pd.DataFrame([{
            "t": t, "a": a, "window": w, "intensity": rate,
            "mean_density": counts.mean() / (2 * w),
            "variance_to_mean": counts.var(ddof=1) / counts.mean() if counts.size > 1 and counts.mean() > 0 else np.nan,
            "gaps": int(gaps.size),
        }]))
        self.table("gaps", pd.DataFrame({"gap": gaps}))


def _departure_one(t: float, lam: float, stream: UnitStream) -> float:
    inp = sample_stationary(t, t, lam, stream)
    return weak_axis_departure(WeakPathInstance.from_inputs(inp)) / t


class WeakPathExperiment(BaseExperiment):
    """The last axis point used by optimal weak paths is o(t): its median share of t decreases"""

    name = "weak-path"
    description = "Axis departure of optimal weak paths in the stationary process"
    defaults = {"lambda_": 1.0, "replications": 100, "t_values": [200.0, 2000.0]}

    def execute(self):
        cfg = self.config
        ts = sorted(cfg.t_values or [cfg.t1])
        rows = []
        samples: List[np.ndarray] = []
        for t in ts:
            values = np.array(self.replicate(partial(_departure_one, t, cfg.lam), cfg.replications))
            samples.append(values)
            rows.append({"t": t, "median": float(np.median(values)), "mean": float(values.mean()),
                         "q25": float(np.quantile(values, 0.25)), "q75": float(np.quantile(values, 0.75))})
        table = pd.DataFrame(rows)
        if len(ts) > 1:
            shrinks = table["median"].iloc[-1] < table["median"].iloc[0]
            self.report(TestReport.pathwise(
                "departure median shrinks", int(not shrinks), len(ts), cfg.alpha,
                notes=f"median {table['median'].iloc[0]:.4g} at t={ts[0]:g}, "
                      f"{table['median'].iloc[-1]:.4g} at t={ts[-1]:g}",
            ))
        self.table("departure", table)
        self.table("departure_samples", pd.DataFrame({
            "t": np.repeat(ts, [s.size for s in samples]), "departure_over_t": np.concatenate(samples),
        }))


def _vt_one(t: float, grid: Sequence[Tuple[float, float]], stream: UnitStream) -> List[float]:
    values = []
    for j, (x, y) in enumerate(grid):
        inp = sample_empty_start(t * x, t * y, stream.child(j))
        beta = extract_boundary(evolve(inp)).beta
        values.append(float(v_measure_diagnostic(inp.alphas, beta, t, [(x, y)])["value"].iloc[0]))
    return values


class VtExperiment(BaseExperiment):
    """(#alpha - #beta in [0, tx] x [0, ty]) / t against 2 sqrt(xy), with t taken from t1"""

    name = "vt"
    description = "V_t table of the empty-start process"
    defaults = {"t1": 1000.0, "replications": 10, "grid": [(1.0, 1.0), (4.0, 1.0), (1.0, 4.0)]}

    def execute(self):
        cfg = self.config
        t = cfg.t1
        grid = [tuple(p) for p in (cfg.grid or [(1.0, 1.0)])]
        values = np.array(self.replicate(partial(_vt_one, t, tuple(grid)), cfg.replications), dtype=float)
        rows = []
        for j, (x, y) in enumerate(grid):
            reference = 2.0 * math.sqrt(x * y)
            column = values[:, j]
            mean = float(column.mean())
            self.report(TestReport.band(
                f"V_t at ({x:g}, {y:g})", mean, reference * (1 - VT_RELATIVE_BAND),
                reference * (1 + VT_RELATIVE_BAND), column.size, cfg.alpha,
            ))
            rows.append({"x": x, "y": y, "value": mean,
                         "se": float(column.std(ddof=1) / math.sqrt(column.size)) if column.size > 1 else np.nan,
                         "reference": reference, "relative_error": mean / reference - 1.0})
        self.table("vt", pd.DataFrame(rows))
