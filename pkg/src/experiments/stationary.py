#!/usr/bin/env python3
"""
Experiments on the stationary process: raw simulation dumps, the Burke
property of the boundary processes and beta-points, the time-reversal
involution and the generator/adjoint duality.
"""

from functools import partial
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from ..analysis.stat_tests import dispersion_test, independence_corr, mean_within_se, poisson_report
from ..core.engine import (
    ParticlePath,
    adjoint_apply_batch,
    check_beta_tally,
    check_conservation,
    config_at,
    configs_at,
    evolve,
    extract_boundary,
    generator_apply_batch,
    path_count_box,
    sample_mu,
    space_time_paths,
    time_reverse_check,
)
from ..core.functionals import ConstantFunctional, ExponentialFunctional
from ..core.models import PlotSeries, PlotSpec, TestReport
from ..core.paths import WeakPathInstance, lis_weak
from ..core.point_process import Interval, UnitStream
from .base import BaseExperiment
from .replication import sample_stationary

DUALITY_RATES = (0.5, 1.0)
CONSTANT_TOLERANCE = 1e-12
# (x, t) as fractions of (t1, t2) where the configuration count is checked
STATIONARITY_WINDOWS = ((0.5, 0.25), (1.0, 0.5), (0.25, 0.75))


def _simulate_one(t1: float, t2: float, lam: float, stream: UnitStream):
    return evolve(sample_stationary(t1, t2, lam, stream))


def _path_series(path: ParticlePath, t2: float) -> PlotSeries:
    """Space-time polyline: horizontal jumps at event times, vertical holds in between"""
    xs: List[float] = []
    ts: List[float] = []
    end = path.exit_time if path.exit_time is not None else t2
    for i, (t, x) in enumerate(zip(path.times, path.positions)):
        xs.append(x)
        ts.append(t)
        until = path.times[i + 1] if i + 1 < len(path.times) else end
        xs.append(x)
        ts.append(until)
    if path.exit_time is not None and xs:
        xs.append(0.0)
        ts.append(path.exit_time)
    return PlotSeries(label="", x=xs, y=ts, style="line")


class SimulateExperiment(BaseExperiment):
    """Dump the event log and boundary processes of stationary runs, checking the bookkeeping identities"""

    name = "simulate"
    description = "Simulate stationary runs and dump events.csv plus boundary processes"
    defaults = {"lambda_": 1.0, "t1": 10.0, "t2": 10.0, "seed": 7, "replications": 1}

    def execute(self):
        cfg = self.config
        logs = self.replicate(partial(_simulate_one, cfg.t1, cfg.t2, cfg.lam), cfg.replications)

        counts = []
        conservation = beta_tally = monotone = replay = crossings = 0
        for rep, log in enumerate(logs):
            row = {"replication": rep, "stream_id": self.stream_ids[rep], "sources": len(log.inputs.sources)}
            row.update(log.counts())
            row["final"] = int(log.final_positions.size)
            counts.append(row)
            conservation += not check_conservation(log)
            beta_tally += not check_beta_tally(log)
            monotone += not all(p.is_nonincreasing() for p in space_time_paths(log))
            replay += config_at(log, log.inputs.t2) != log.final_config
            weak = lis_weak(WeakPathInstance.from_inputs(log.inputs))
            crossings += path_count_box(log, log.inputs.t1, log.inputs.t2) != weak

        n = len(logs)
        alpha = cfg.alpha
        self.report(
            TestReport.pathwise("particle conservation", conservation, n, alpha),
            TestReport.pathwise("beta-point tally", beta_tally, n, alpha),
            TestReport.pathwise("paths move left", monotone, n, alpha),
            TestReport.pathwise("replay matches final configuration", replay, n, alpha),
            TestReport.pathwise("crossings equal weak path length", crossings, n, alpha),
        )

        first = logs[0]
        self.table("events", first.to_frame())
        self.table("sources", first.inputs.sources.to_frame())
        self.table("sinks", first.inputs.sinks.to_frame())
        self.table("alphas", first.inputs.alphas.to_frame())
        for name, frame in extract_boundary(first).to_frames().items():
            self.table(name, frame)
        self.table("counts", pd.DataFrame(counts))
        self.figure(PlotSpec(
            name="paths",
            title=f"Space-time paths, lambda={cfg.lam:g}",
            xlabel="x",
            ylabel="t",
            series=[_path_series(p, first.inputs.t2) for p in space_time_paths(first) if p.times],
        ))


def _burke_one(t1: float, t2: float, lam: float, stream: UnitStream) -> Dict[str, Any]:
    log = evolve(sample_stationary(t1, t2, lam, stream))
    tally = extract_boundary(log)
    return {
        "tally": tally,
        "windows": [c.count_in(0.0, fx * t1) for c, (fx, _) in
                    zip(configs_at(log, [ft * t2 for _, ft in STATIONARITY_WINDOWS]), STATIONARITY_WINDOWS)],
        "consumed": len(tally.consumed_sink_times),
        "void": len(tally.void_sink_times),
    }


class BurkeExperiment(BaseExperiment):
    """
    Burke property of the stationary process: beta-points are a rate-1
    Poisson process, East entries rate 1/lambda, North exits rate lambda,
    and the three are independent.
    """

    name = "burke"
    description = "Poisson and independence tests for beta-points and boundary processes"
    defaults = {"lambda_": 1.0, "t1": 50.0, "t2": 50.0, "replications": 200}

    def execute(self):
        cfg = self.config
        lam, alpha = cfg.lam, cfg.alpha
        runs = self.replicate(partial(_burke_one, cfg.t1, cfg.t2, lam), cfg.replications)
        tallies = [r["tally"] for r in runs]
        box = tallies[0].beta.rect

        self.extend(poisson_report([t.beta for t in tallies], box, 1.0, alpha, label="beta-points"))
        self.extend(poisson_report([t.east_entries for t in tallies], Interval(0.0, cfg.t2), 1.0 / lam, alpha,
                                   label="east entries"))
        self.extend(poisson_report([t.north_exits for t in tallies], Interval(0.0, cfg.t1), lam, alpha,
                                   label="north exits"))

        beta_n = [len(t.beta) for t in tallies]
        east_n = [len(t.east_entries) for t in tallies]
        north_n = [len(t.north_exits) for t in tallies]
        if len(tallies) >= 30:
            self.report(
                independence_corr(beta_n, east_n, alpha, name="independence beta vs east"),
                independence_corr(beta_n, north_n, alpha, name="independence beta vs north"),
                independence_corr(east_n, north_n, alpha, name="independence east vs north"),
            )
        else:
            self.logger.warning("too few replications for independence tests", replications=len(tallies))
        window_counts = {}
        for j, (fx, ft) in enumerate(STATIONARITY_WINDOWS):
            x, t = fx * cfg.t1, ft * cfg.t2
            counts = [r["windows"][j] for r in runs]
            window_counts[f"count x={x:g} t={t:g}"] = counts
            self.report(dispersion_test(counts, lam * x, alpha, name=f"configuration count x={x:g} t={t:g}"))

        for name, frame in tallies[0].to_frames().items():
            self.table(name, frame)
        self.table("summary", pd.DataFrame({
            "replication": range(len(runs)),
            "stream_id": self.stream_ids[:len(runs)],
            "beta": beta_n,
            "east": east_n,
            "north": north_n,
            "consumed": [r["consumed"] for r in runs],
            "void": [r["void"] for r in runs],
            **window_counts,
        }))


def _reverse_one(t1: float, t2: float, lambdas: Sequence[float], stream: UnitStream) -> Dict[str, Any]:
    lam = lambdas[stream.stream_id % len(lambdas)]
    log = evolve(sample_stationary(t1, t2, lam, stream))
    return {"lambda": lam, "events": len(log), "ok": time_reverse_check(log)}


class ReverseExperiment(BaseExperiment):
    """Running a stationary run upside down from its outputs reproduces its inputs"""

    name = "reverse"
    description = "Time-reversal involution sweep over stationary runs"
    defaults = {"t1": 30.0, "t2": 30.0, "trials": 1000, "lambdas": [0.5, 1.0, 2.0]}

    def execute(self):
        cfg = self.config
        lambdas = cfg.lambdas or [cfg.lam]
        rows = self.replicate(partial(_reverse_one, cfg.t1, cfg.t2, tuple(lambdas)), cfg.trials)
        frame = pd.DataFrame(rows)
        frame.insert(0, "trial", range(len(rows)))
        for lam in lambdas:
            subset = frame[frame["lambda"] == lam]
            self.report(TestReport.pathwise(f"time reversal lambda={lam:g}", int((~subset["ok"]).sum()),
                                            len(subset), cfg.alpha))
        self.table("trials", frame)


def _mu_chunk(lam: float, t1: float, sizes: Sequence[int], stream: UnitStream) -> List[np.ndarray]:
    return [sample_mu(lam, t1, stream.child(j)).positions for j in range(sizes[stream.stream_id])]


class DualityExperiment(BaseExperiment):
    """
    Monte-Carlo check that E[Gf g] = E[f G*g] under the Poisson(lambda)
    configuration law, for exponential functionals f and g.
    """

    name = "duality"
    description = "Generator/adjoint duality under the stationary configuration law"
    defaults = {"lambda_": 1.0, "t1": 2.0, "samples": 100_000, "replications": 100}

    def execute(self):
        cfg = self.config
        lam, t1 = cfg.lam, cfg.t1
        chunks = min(cfg.replications, cfg.samples)
        sizes = [cfg.samples // chunks + (i < cfg.samples % chunks) for i in range(chunks)]
        chunked = self.replicate(partial(_mu_chunk, lam, t1, tuple(sizes)), chunks, start=0)
        samples = [c for chunk in chunked for c in chunk]

        groups: Dict[int, np.ndarray] = {}
        for n in sorted({c.size for c in samples}):
            groups[n] = np.stack([c for c in samples if c.size == n])

        one = ConstantFunctional(1.0)
        g_one = np.concatenate([generator_apply_batch(one, x, lam, t1) for x in groups.values()])
        adj_one = np.concatenate([adjoint_apply_batch(one, x, lam, t1) for x in groups.values()])
        self.report(
            TestReport.pathwise("generator kills constants", int(np.sum(np.abs(g_one) > CONSTANT_TOLERANCE)),
                                g_one.size, cfg.alpha, notes=f"max |G1| {np.abs(g_one).max():.3g}"),
            TestReport.pathwise("adjoint kills constants", int(np.sum(np.abs(adj_one) > CONSTANT_TOLERANCE)),
                                adj_one.size, cfg.alpha, notes=f"max |G*1| {np.abs(adj_one).max():.3g}"),
        )

        rows = []
        for a in DUALITY_RATES:
            for b in DUALITY_RATES:
                f, g = ExponentialFunctional(a), ExponentialFunctional(b)
                diffs = np.concatenate([
                    generator_apply_batch(f, x, lam, t1) * g(x) - f(x) * adjoint_apply_batch(g, x, lam, t1)
                    for x in groups.values()
                ])
                report = mean_within_se(diffs, 0.0, name=f"duality a={a:g} b={b:g}", alpha=cfg.alpha)
                self.report(report)
                rows.append({"a": a, "b": b, "mean": float(diffs.mean()),
                             "se": float(diffs.std(ddof=1) / np.sqrt(diffs.size)), "z": report.statistic,
                             "n": int(diffs.size)})
        self.table("duality", pd.DataFrame(rows))
        self.table("particle_counts", pd.DataFrame({
            "n": list(groups), "samples": [x.shape[0] for x in groups.values()],
        }))
