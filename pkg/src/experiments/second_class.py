#!/usr/bin/env python3
"""
Second-class particle experiments

* ``scp``: asymptotic speeds of the isolated second-class particle X and of
  its left-to-right counterpart X'.
* ``flux``: the speeds of Z_t and Z'_x and the flux table.
* ``couplings``: the pathwise statements (domination, Z <= X,
  X(X'(x)) <= x, agreement right of X, flux bracket and monotonicity) on
  many small boxes.
"""

import math
from functools import partial
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from ..analysis.stat_tests import mean_within_se, slope_band_report, slope_estimate
from ..core.coupling import (
    Trajectory,
    check_flux_monotone,
    check_z_below_x,
    flux_bracket,
    flux_many,
    isolated_second_class,
    make_coupled_pair,
    second_class_lr,
    track_z,
    track_z_prime,
    verify_domination,
    verify_lemma22,
    verify_ordering,
)
from ..core.engine import SimInputs, evolve
from ..core.errors import InvalidParameterError
from ..core.models import CouplingSpec, PlotSeries, PlotSpec, TestReport
from ..core.point_process import Points1D, UnitStream
from .base import BaseExperiment
from .replication import sample_stationary

# acceptance bands for mean X_t / t keyed by the limiting speed
SLOPE_BANDS = {1.0: (0.95, 1.05), 0.25: (0.22, 0.28), 4.0: (3.6, 4.4)}
DEFAULT_RELATIVE_BAND = 0.10
CURVE_POINTS = 20
OVERLAY_LIMIT = 10


def slope_band(target: float) -> Tuple[float, float]:
    for speed, band in SLOPE_BANDS.items():
        if math.isclose(speed, target, rel_tol=1e-9):
            return band
    return target * (1.0 - DEFAULT_RELATIVE_BAND), target * (1.0 + DEFAULT_RELATIVE_BAND)


def _finite_series(traj: Trajectory, label: str = "") -> PlotSeries:
    frame = traj.to_frame()
    frame = frame[np.isfinite(frame["x"])]
    return PlotSeries(label=label, x=frame["t"].tolist(), y=frame["x"].tolist(), style="step")


def mean_slope_curve(trajs: Sequence[Trajectory], horizon: float, points: int = CURVE_POINTS) -> pd.DataFrame:
    """Mean of traj(t)/t over uncensored trajectories on a grid of times"""
    ts = np.linspace(horizon / points, horizon, points)
    values = np.array([traj.values_at(ts) for traj in trajs], dtype=float) / ts
    finite = np.isfinite(values)
    counts = finite.sum(axis=0)
    means = np.where(counts > 0, np.where(finite, values, 0.0).sum(axis=0) / np.maximum(counts, 1), np.nan)
    return pd.DataFrame({"t": ts, "mean_slope": means, "n": counts})


def _scp_one(horizon: float, lam: float, margin: float, stream: UnitStream) -> Tuple[Trajectory, Trajectory]:
    # X travels at speed 1/lam^2, X' at speed lam^2; the boxes leave room for both
    inp = sample_stationary(margin * horizon / lam ** 2, horizon, lam, stream.child(0))
    x_traj = isolated_second_class(evolve(inp))
    inp_lr = sample_stationary(horizon, margin * horizon * lam ** 2, lam, stream.child(1))
    return x_traj, second_class_lr(inp_lr)


class ScpExperiment(BaseExperiment):
    """
    Mean X_t / t against 1/lambda^2 and mean X'_x / x against lambda^2.

    The horizon is t2; each run's box is oversized by box_margin along the
    direction the particle travels. Trajectories that leave through the
    East side are dropped and reported as censored; a speed check fails
    when more than 5% of its replications were censored.
    """

    name = "scp"
    description = "Speeds of the isolated second-class particles X and X'"
    defaults = {"t2": 2000.0, "replications": 100, "lambdas": [1.0, 2.0, 0.5]}

    def execute(self):
        cfg = self.config
        horizon = cfg.t2
        rows = []
        curves = []
        overlays: List[PlotSeries] = []
        for i, lam in enumerate(cfg.lambdas or [cfg.lam]):
            pairs = self.replicate(partial(_scp_one, horizon, lam, cfg.box_margin), cfg.replications)
            x_trajs = [p[0] for p in pairs]
            xp_trajs = [p[1] for p in pairs]
            for kind, trajs, target in (("X", x_trajs, 1.0 / lam ** 2), ("X'", xp_trajs, lam ** 2)):
                est = slope_estimate(trajs, horizon)
                lo, hi = slope_band(target)
                self.report(slope_band_report(f"{kind} speed lambda={lam:g}", est, lo, hi, target, cfg.alpha))
                rows.append({"lambda": lam, "particle": kind, "slope": est.slope, "stderr": est.stderr,
                             "n": est.n, "censored": est.censored, "target": target, "lo": lo, "hi": hi})
                curve = mean_slope_curve(trajs, horizon)
                curve.insert(0, "particle", kind)
                curve.insert(0, "lambda", lam)
                curves.append(curve)
            if i == 0:
                self.table("trajectory", x_trajs[0].to_frame())
                self.table("trajectory_lr", xp_trajs[0].to_frame())
                overlays = [_finite_series(t) for t in x_trajs[:OVERLAY_LIMIT]]
                overlays.append(PlotSeries(label=f"t / {lam:g}^2", x=[0.0, horizon],
                                           y=[0.0, horizon / lam ** 2]))

        curve_frame = pd.concat(curves, ignore_index=True)
        self.table("slopes", pd.DataFrame(rows))
        self.table("mean_slope", curve_frame)
        self.figure(PlotSpec(name="trajectories", title="Isolated second-class particle", xlabel="t",
                             ylabel="X_t", series=overlays))
        self.figure(PlotSpec(
            name="mean_slope", title="Mean X_t / t", xlabel="t", ylabel="mean X_t / t",
            series=[
                PlotSeries(label=f"lambda={lam:g}", x=g["t"].tolist(), y=g["mean_slope"].tolist())
                for lam, g in curve_frame[curve_frame["particle"] == "X"].groupby("lambda", sort=False)
            ],
        ))


def _flux_one(horizon: float, gamma: float, delta: float, xs: Sequence[float], margin: float,
              stream: UnitStream) -> Dict[str, Any]:
    width = max(max(xs) * horizon, margin * horizon / (gamma * delta))
    base = sample_stationary(width, horizon, gamma, stream.child(0))
    pair = make_coupled_pair(base, CouplingSpec(gamma=gamma, delta=delta), stream.child(1))
    logs = pair.evolve()
    # thinning a rate-delta run down to gamma; Z' climbs the t axis at speed gamma delta
    thin_base = sample_stationary(horizon, margin * horizon * gamma * delta, delta, stream.child(2))
    thin = make_coupled_pair(thin_base, CouplingSpec.for_rates(delta, gamma), stream.child(3))
    return {
        "z": track_z(pair, logs),
        "z_prime": track_z_prime(thin),
        "flux": flux_many(logs, [x * horizon for x in xs], horizon) / horizon,
        "sets": {**pair.boundary_frames(), **thin.boundary_frames()},
    }


class FluxExperiment(BaseExperiment):
    """
    Z_t / t against 1/(gamma delta), Z'_x / x against gamma delta and the
    flux F(nx, n)/n against (1/delta - 1/gamma) + x (delta - gamma), with n
    the horizon t2.

    Z' comes from the thin coupling that takes a rate-delta run down to
    gamma, so both speeds share the product gamma delta.
    """

    name = "flux"
    description = "Speeds of Z_t and Z'_x and the flux table of a thickened coupling"
    defaults = {"gamma": 1.0, "delta": 1.5, "t2": 2000.0, "replications": 100,
                "x_values": [0.25, 0.5, 1.0, 2.0]}

    def execute(self):
        cfg = self.config
        gamma, delta, horizon = cfg.gamma, cfg.delta, cfg.t2
        if not delta > gamma:
            raise InvalidParameterError(f"flux needs delta > gamma, got gamma={gamma}, delta={delta}")
        xs = cfg.x_values or [1.0]
        results = self.replicate(partial(_flux_one, horizon, gamma, delta, tuple(xs), cfg.box_margin),
                                 cfg.replications)
        z_trajs = [r["z"] for r in results]
        z_prime_trajs = [r["z_prime"] for r in results]
        values = np.vstack([r["flux"] for r in results])

        for name, trajs, target in (("Z speed", z_trajs, 1.0 / (gamma * delta)),
                                    ("Z' speed", z_prime_trajs, gamma * delta)):
            lo, hi = target * (1 - DEFAULT_RELATIVE_BAND), target * (1 + DEFAULT_RELATIVE_BAND)
            self.report(slope_band_report(name, slope_estimate(trajs, horizon), lo, hi, target, cfg.alpha))

        rows = []
        for j, x in enumerate(xs):
            expected = (1.0 / delta - 1.0 / gamma) + x * (delta - gamma)
            column = values[:, j]
            self.report(mean_within_se(column, expected, name=f"flux x={x:g}", alpha=cfg.alpha))
            rows.append({"x": x, "mean": float(column.mean()),
                         "se": float(column.std(ddof=1) / np.sqrt(column.size)) if column.size > 1 else np.nan,
                         "expected": expected})
        self.table("flux", pd.DataFrame(rows))
        self.table("z_trajectory", z_trajs[0].to_frame())
        self.table("z_mean_slope", mean_slope_curve(z_trajs, horizon))
        self.table("z_prime_trajectory", z_prime_trajs[0].to_frame())
        self.table("z_prime_mean_slope", mean_slope_curve(z_prime_trajs, horizon))
        for name, frame in results[0]["sets"].items():
            self.table(name, frame)
        overlays = [_finite_series(t) for t in z_trajs[:OVERLAY_LIMIT]]
        overlays.append(PlotSeries(label=f"t / {gamma * delta:g}", x=[0.0, horizon],
                                   y=[0.0, horizon / (gamma * delta)]))
        self.figure(PlotSpec(name="z_trajectories", title="Z_t of the coupled pair", xlabel="t", ylabel="Z_t",
                             series=overlays))


COUPLING_CHECKS = ("domination", "z below x", "ordering", "agreement right of x", "flux bracket",
                   "flux monotone", "thin domination")
# fractions of t2 at which the flux profile is checked
FLUX_TIMES = (0.25, 0.5, 0.75, 1.0)


def _couplings_one(t1: float, t2: float, lambdas: Sequence[float], ratio: float,
                   stream: UnitStream) -> Tuple[Dict[str, Any], Dict[str, pd.DataFrame]]:
    lam = lambdas[stream.stream_id % len(lambdas)]
    base = sample_stationary(t1, t2, lam, stream.child(0))
    eta = evolve(base)
    x = isolated_second_class(eta)

    thick = make_coupled_pair(base, CouplingSpec.for_rates(lam, lam * ratio), stream.child(1))
    logs = (eta, evolve(thick.sigma_inputs))
    z = track_z(thick, logs)
    z_end = z.value_at(t2)
    bracket = True
    if 0.0 < z_end < math.inf:
        before, at = flux_bracket(logs, z_end, t2)
        bracket = before < 0 <= at

    bare = SimInputs(t1, t2, base.sources, Points1D.empty(base.box.t), base.alphas, lam)

    thin = make_coupled_pair(base, CouplingSpec.for_rates(lam, lam / ratio), stream.child(2))
    thin_sigma = evolve(thin.sigma_inputs)
    z_prime = track_z_prime(thin)

    row = {
        "lambda": lam,
        "x_end": x.value_at(t2),
        "z_end": z_end,
        "z_prime_end": z_prime.value_at(t1),
        "domination": verify_domination(logs),
        "z below x": check_z_below_x(z, x),
        "ordering": verify_ordering(x, second_class_lr(base)),
        "agreement right of x": verify_lemma22(eta, evolve(bare), x),
        "flux bracket": bracket,
        "flux monotone": check_flux_monotone(logs, [f * t2 for f in FLUX_TIMES]),
        "thin domination": verify_domination((thin_sigma, eta)),
    }
    return row, {**thick.boundary_frames(), **thin.boundary_frames()}


class CouplingsExperiment(BaseExperiment):
    """
    Pathwise coupling statements on many stationary boxes; delta/gamma sets
    the thickening ratio. The realized added and removed boundary points of
    the first trial are written next to the trial table.
    """

    name = "couplings"
    description = "Pathwise checks of the coupled runs and second-class particles"
    defaults = {"t1": 30.0, "t2": 30.0, "trials": 1000, "lambdas": [0.5, 1.0, 2.0]}

    def execute(self):
        cfg = self.config
        ratio = cfg.delta / cfg.gamma
        if ratio == 1.0:
            raise InvalidParameterError("couplings needs delta != gamma")
        ratio = max(ratio, 1.0 / ratio)
        lambdas = tuple(cfg.lambdas or [cfg.gamma])
        results = self.replicate(partial(_couplings_one, cfg.t1, cfg.t2, lambdas, ratio), cfg.trials)
        frame = pd.DataFrame([row for row, _ in results])
        frame.insert(0, "trial", range(len(results)))
        for check in COUPLING_CHECKS:
            self.report(TestReport.pathwise(check, int((~frame[check].astype(bool)).sum()), len(frame),
                                            cfg.alpha))
        self.table("trials", frame)
        for name, points in results[0][1].items():
            self.table(name, points)
