#!/usr/bin/env python3
"""
Second-class particles and coupled runs

Two runs share their alpha-points and differ only on the boundary. Their
discrepancies behave like second-class particles: they move right, they
keep their order and they can leave through the East side of the box.

* ``isolated_second_class``: the discrepancy created by removing the first
  sink of a run, started at the origin.
* ``second_class_lr``: the same particle for the process read from left to
  right (axes swapped).
* ``make_coupled_pair`` / ``track_z`` / ``flux``: a run and its thick/thin
  modification, the flux of discrepancies through x and the particle Z_t
  sitting where the flux changes sign.

Exits through the East side are recorded as a jump to +inf.
"""

from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from .engine import AC, AJ, SC, SV, EventLog, SimInputs, configs_at, evolve
from .errors import InvalidInputError, InvalidParameterError
from .models import CouplingSpec
from .point_process import Points1D, UnitStream, sample_poisson_1d, superpose, thin, transpose_points

logger = structlog.get_logger()

INF = float("inf")
PairLogs = Tuple[EventLog, EventLog]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Right-continuous nondecreasing step function starting at 0 at time 0"""
    times: np.ndarray
    positions: np.ndarray
    label: str = ""

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        positions = np.array(self.positions, dtype=float).reshape(-1)
        if times.shape != positions.shape:
            raise InvalidInputError("trajectory needs one position per jump time")
        if times.size:
            if np.any(np.diff(times) <= 0) or times[0] < 0:
                raise InvalidInputError("trajectory jump times must be strictly increasing")
            if np.any(np.diff(positions) <= 0) or positions[0] <= 0:
                raise InvalidInputError("trajectory positions must increase strictly from 0")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)

    def __len__(self) -> int:
        return int(self.times.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return np.array_equal(self.times, other.times) and np.array_equal(self.positions, other.positions)

    def __repr__(self) -> str:
        return f"Trajectory({list(zip(self.times.tolist(), self.positions.tolist()))})"

    def value_at(self, t: float) -> float:
        i = int(np.searchsorted(self.times, t, side="right"))
        return float(self.positions[i - 1]) if i else 0.0

    def values_at(self, ts: Sequence[float]) -> np.ndarray:
        idx = np.searchsorted(self.times, np.asarray(ts, dtype=float), side="right")
        padded = np.concatenate(([0.0], self.positions))
        return padded[idx]

    def value_before(self, t: float) -> float:
        """Left limit at t"""
        i = int(np.searchsorted(self.times, t, side="left"))
        return float(self.positions[i - 1]) if i else 0.0

    @property
    def escaped(self) -> bool:
        return bool(self.positions.size) and np.isinf(self.positions[-1])

    def to_frame(self) -> pd.DataFrame:
        """Columns t,x starting with the origin row"""
        return pd.DataFrame({
            "t": np.concatenate(([0.0], self.times)),
            "x": np.concatenate(([0.0], self.positions)),
        })


class _TrajectoryBuilder:
    def __init__(self, label: str = ""):
        self.label = label
        self.times: List[float] = []
        self.positions: List[float] = []
        self.current = 0.0

    def move(self, t: float, x: float):
        if x > self.current:
            if self.times and self.times[-1] == t:
                self.positions[-1] = x
            else:
                self.times.append(t)
                self.positions.append(x)
            self.current = x
        elif x < self.current:
            logger.warning("second-class particle moved left; position held", label=self.label,
                           time=t, current=self.current, proposed=x)

    def build(self) -> Trajectory:
        return Trajectory(np.array(self.times), np.array(self.positions), self.label)


def isolated_second_class(log: EventLog) -> Trajectory:
    """
    Track the discrepancy between a run and the same run with its first sink removed.

    The particle waits at 0 until the first sink. A consuming sink whose
    victim lies right of X moves X there; an alpha jump from -> to with
    to <= X < from moves X to from; a creation at or left of X, or a void
    sink, sends X out through the East side.
    """
    builder = _TrajectoryBuilder("X")
    x = 0.0
    started = False
    for t, kind, frm, to in zip(log.times.tolist(), log.kinds.tolist(),
                                log.from_x.tolist(), log.to_x.tolist()):
        if kind == SC:
            if not started or x < frm:
                x = frm
            started = True
        elif kind == SV:
            x = INF
            started = True
        elif not started:
            continue
        elif kind == AJ:
            if to <= x < frm:
                x = frm
        elif kind == AC and to <= x:
            x = INF
        builder.move(t, x)
        if x == INF:
            break
    return builder.build()


def transpose_inputs(inp: SimInputs) -> SimInputs:
    """Swap the axes: sources and sinks trade places, alpha-points are transposed"""
    return SimInputs(
        t1=inp.t2,
        t2=inp.t1,
        sources=inp.sinks,
        sinks=inp.sources,
        alphas=transpose_points(inp.alphas),
        lambda_meta=None if inp.lambda_meta is None else 1.0 / inp.lambda_meta,
    )


def second_class_lr(inp: SimInputs) -> Trajectory:
    """x -> X'_x: the isolated second-class particle of the left-to-right process"""
    traj = isolated_second_class(evolve(transpose_inputs(inp)))
    return Trajectory(traj.times, traj.positions, "X'")


@dataclass(frozen=True)
class CoupledPair:
    """A base run (eta) and its thick/thin modification (sigma) on the same alpha-points"""
    eta_inputs: SimInputs
    sigma_inputs: SimInputs
    removed_sinks: Points1D
    added_sources: Points1D
    spec: CouplingSpec
    removed_sources: Optional[Points1D] = None
    added_sinks: Optional[Points1D] = None

    def __post_init__(self):
        if not self.eta_inputs.alphas == self.sigma_inputs.alphas:
            raise InvalidInputError("coupled runs must share their alpha-points")
        eta, sigma = self.eta_inputs, self.sigma_inputs
        removed_sources = len(self.removed_sources) if self.removed_sources is not None else 0
        added_sinks = len(self.added_sinks) if self.added_sinks is not None else 0
        if len(sigma.sources) != len(eta.sources) + len(self.added_sources) - removed_sources:
            raise InvalidInputError("sigma sources do not match eta sources and the added/removed sets")
        if len(sigma.sinks) != len(eta.sinks) - len(self.removed_sinks) + added_sinks:
            raise InvalidInputError("sigma sinks do not match eta sinks and the added/removed sets")

    def evolve(self) -> PairLogs:
        return evolve(self.eta_inputs), evolve(self.sigma_inputs)

    def boundary_frames(self) -> Dict[str, pd.DataFrame]:
        """The realized point sets that turn eta's boundary into sigma's"""
        if self.spec.mode == "thicken_sources":
            return {
                "added_sources": self.added_sources.to_frame(),
                "removed_sinks": self.removed_sinks.to_frame(),
            }
        box = self.eta_inputs.box
        removed = self.removed_sources if self.removed_sources is not None else Points1D.empty(box.x)
        added = self.added_sinks if self.added_sinks is not None else Points1D.empty(box.t)
        return {"removed_sources": removed.to_frame(), "added_sinks": added.to_frame()}


def make_coupled_pair(base: SimInputs, spec: CouplingSpec, stream: UnitStream) -> CoupledPair:
    """
    Modify a stationary rate-gamma run into a rate-delta one on the same alpha-points.

    thicken_sources: add Poisson(delta - gamma) sources, keep each sink with
    probability gamma/delta. thin_sources: keep each source with probability
    delta/gamma, add Poisson(1/delta - 1/gamma) sinks.
    """
    if base.lambda_meta is not None and not np.isclose(base.lambda_meta, spec.gamma):
        raise InvalidParameterError(
            f"base run has source rate {base.lambda_meta}, coupling expects gamma={spec.gamma}"
        )
    gamma, delta = spec.gamma, spec.delta
    box = base.box
    if spec.mode == "thicken_sources":
        added = sample_poisson_1d(box.x, delta - gamma, stream.child(0))
        kept, removed = thin(base.sinks, gamma / delta, stream.child(1))
        sigma = SimInputs(base.t1, base.t2, superpose(base.sources, added), kept, base.alphas, delta)
        return CoupledPair(base, sigma, removed_sinks=removed, added_sources=added, spec=spec)

    kept, removed = thin(base.sources, delta / gamma, stream.child(0))
    added = sample_poisson_1d(box.t, 1.0 / delta - 1.0 / gamma, stream.child(1))
    sigma = SimInputs(base.t1, base.t2, kept, superpose(base.sinks, added), base.alphas, delta)
    return CoupledPair(
        base, sigma,
        removed_sinks=Points1D.empty(box.t),
        added_sources=Points1D.empty(box.x),
        spec=spec,
        removed_sources=removed,
        added_sinks=added,
    )


def transpose_pair(pair: CoupledPair) -> CoupledPair:
    """Reflect a pair in the diagonal; a thin_sources pair becomes a thicken_sources pair with rates 1/gamma, 1/delta"""
    spec = CouplingSpec.for_rates(1.0 / pair.spec.gamma, 1.0 / pair.spec.delta)
    on_new_x = Points1D.empty(pair.eta_inputs.box.t)
    on_new_t = Points1D.empty(pair.eta_inputs.box.x)
    return CoupledPair(
        eta_inputs=transpose_inputs(pair.eta_inputs),
        sigma_inputs=transpose_inputs(pair.sigma_inputs),
        removed_sinks=pair.removed_sources if pair.removed_sources is not None else on_new_t,
        added_sources=pair.added_sinks if pair.added_sinks is not None else on_new_x,
        spec=spec,
        removed_sources=pair.removed_sinks,
        added_sinks=pair.added_sources,
    )


def _check_pair(pair_logs: PairLogs):
    eta, sigma = pair_logs
    if (eta.inputs.t1, eta.inputs.t2) != (sigma.inputs.t1, sigma.inputs.t2):
        raise InvalidInputError("coupled logs must live on the same box")
    if not eta.inputs.alphas == sigma.inputs.alphas:
        raise InvalidInputError("coupled logs must share their alpha-points")


def _paths_through(log: EventLog, config_positions: np.ndarray, xs: np.ndarray, t: float) -> np.ndarray:
    """Particles in (0, x] at time t plus consumed sinks up to t, for every x"""
    upto = int(np.searchsorted(log.times, t, side="right"))
    consumed = int(np.count_nonzero(log.kinds[:upto] == SC))
    below = np.searchsorted(config_positions, xs, side="right") - np.searchsorted(config_positions, 0.0, side="right")
    return below + consumed


def flux_many(pair_logs: PairLogs, xs: Sequence[float], t: float) -> np.ndarray:
    """F(x, t) for several x at one time"""
    _check_pair(pair_logs)
    eta, sigma = pair_logs
    xs = np.asarray(xs, dtype=float)
    if xs.size and (xs.min() < 0 or xs.max() > eta.inputs.t1):
        raise InvalidInputError(f"x must lie in [0, {eta.inputs.t1}]")
    (eta_cfg,) = configs_at(eta, [t])
    (sigma_cfg,) = configs_at(sigma, [t])
    return (_paths_through(sigma, sigma_cfg.positions, xs, t)
            - _paths_through(eta, eta_cfg.positions, xs, t))


def flux(pair_logs: PairLogs, x: float, t: float) -> int:
    """Net number of discrepancies passed through x by time t (exited particles count at zero)"""
    return int(flux_many(pair_logs, [x], t)[0])


def flux_profile(pair_logs: PairLogs, t: float) -> pd.DataFrame:
    """The step function x -> F(x, t), one row per breakpoint (value holds from x on)"""
    _check_pair(pair_logs)
    eta, sigma = pair_logs
    (eta_cfg,) = configs_at(eta, [t])
    (sigma_cfg,) = configs_at(sigma, [t])
    xs = np.unique(np.concatenate(([0.0], eta_cfg.positions, sigma_cfg.positions)))
    values = (_paths_through(sigma, sigma_cfg.positions, xs, t)
              - _paths_through(eta, eta_cfg.positions, xs, t))
    return pd.DataFrame({"x": xs, "flux": values})


def check_flux_monotone(pair_logs: PairLogs, ts: Sequence[float]) -> bool:
    """x -> F(x, t) is nondecreasing at every t in ts"""
    for t in ts:
        values = flux_profile(pair_logs, t)["flux"].to_numpy()
        if np.any(np.diff(values) < 0):
            return False
    return True


def flux_bracket(pair_logs: PairLogs, z: float, t: float) -> Tuple[int, int]:
    """(F(z-, t), F(z, t)) for a finite positive z"""
    profile = flux_profile(pair_logs, t)
    xs = profile["x"].to_numpy()
    values = profile["flux"].to_numpy()
    at = int(np.searchsorted(xs, z, side="right")) - 1
    before = int(np.searchsorted(xs, z, side="left")) - 1
    return int(values[max(before, 0)]), int(values[at])


def track_z(pair: CoupledPair, logs: Optional[PairLogs] = None) -> Trajectory:
    """
    Z_t for a thicken_sources pair.

    xi = sigma minus eta holds the discrepancies; k counts eta consumes minus
    sigma consumes. Z_t is the k-th smallest discrepancy (0 while k <= 0,
    +inf once fewer than k discrepancies remain in the box).
    """
    if pair.spec.mode != "thicken_sources":
        raise InvalidParameterError("track_z needs a thicken_sources pair; use track_z_prime for thin_sources")
    eta, sigma = logs if logs is not None else pair.evolve()
    _check_pair((eta, sigma))

    xi: List[float] = sorted(pair.added_sources.pts.tolist())
    k = 0
    builder = _TrajectoryBuilder("Z")

    e_t, e_k, e_f = eta.times.tolist(), eta.kinds.tolist(), eta.from_x.tolist()
    s_t, s_k, s_f = sigma.times.tolist(), sigma.kinds.tolist(), sigma.from_x.tolist()
    i = j = 0
    n_eta, n_sigma = len(e_t), len(s_t)

    def swap(out: Optional[float], into: Optional[float]):
        # a discrepancy at `out` disappears, one appears at `into` (None: East side)
        if out is not None:
            pos = bisect_left(xi, out)
            if pos == len(xi) or xi[pos] != out:
                raise InvalidInputError(f"position {out} is not a discrepancy of the pair")
            del xi[pos]
        if into is not None:
            insort(xi, into)

    while i < n_eta or j < n_sigma:
        te = e_t[i] if i < n_eta else INF
        ts = s_t[j] if j < n_sigma else INF
        if te == ts:
            t = te
            ke, ks = e_k[i], s_k[j]
            fe = None if ke in (AC, SV) else e_f[i]
            fs = None if ks in (AC, SV) else s_f[j]
            if ke in (AJ, AC):
                if fe != fs:
                    swap(fs, fe)
            else:
                if ke == SC:
                    k += 1
                if ks == SC:
                    k -= 1
                if fe != fs:
                    swap(fs, fe)
            i += 1
            j += 1
        elif te < ts:
            t = te
            if e_k[i] == SC:
                k += 1
                swap(None, e_f[i])
            elif e_k[i] != SV:
                raise InvalidInputError("eta has an alpha event missing from sigma")
            i += 1
        else:
            raise InvalidInputError("sigma has an event missing from eta; not a thicken_sources pair")

        if k > 0:
            builder.move(t, xi[k - 1] if k <= len(xi) else INF)
        if builder.current == INF:
            break

    if not pair.removed_sinks.pts.size:
        logger.debug("no removed sinks; Z stays at the origin")
    return builder.build()


def track_z_prime(pair: CoupledPair) -> Trajectory:
    """Z'_t for a thin_sources pair, computed as Z of the pair reflected in the diagonal"""
    if pair.spec.mode != "thin_sources":
        raise InvalidParameterError("track_z_prime needs a thin_sources pair")
    traj = track_z(transpose_pair(pair))
    return Trajectory(traj.times, traj.positions, "Z'")


def verify_domination(pair_logs: PairLogs) -> bool:
    """eta_t(0, x] <= sigma_t(0, x] for every x at every event time of either run"""
    _check_pair(pair_logs)
    eta, sigma = pair_logs
    ts = np.union1d(np.concatenate(([0.0], eta.times)), sigma.times)
    for e_cfg, s_cfg in zip(configs_at(eta, ts), configs_at(sigma, ts)):
        e, s = e_cfg.positions, s_cfg.positions
        if s.size < e.size or np.any(s[:e.size] > e):
            return False
    return True


def check_z_below_x(z: Trajectory, x: Trajectory) -> bool:
    """Z_t <= X_t at every jump time of either trajectory"""
    ts = np.union1d(z.times, x.times)
    return bool(np.all(z.values_at(ts) <= x.values_at(ts)))


def _event_table(log: EventLog, x_traj: Trajectory) -> Dict[float, Tuple[int, Optional[float], Optional[float]]]:
    """Events located strictly right of X(t), keyed by time"""
    location = np.where(np.isin(log.kinds, (AJ, AC)), log.to_x,
                        np.where(log.kinds == SC, log.from_x, np.nan))
    right_of = location > x_traj.values_at(log.times)
    table = {}
    for idx in np.flatnonzero(right_of).tolist():
        f, to = log.from_x[idx], log.to_x[idx]
        table[float(log.times[idx])] = (
            int(log.kinds[idx]),
            None if np.isnan(f) else float(f),
            None if np.isnan(to) else float(to),
        )
    return table


def verify_lemma22(log_full: EventLog, log_nosinks: EventLog, traj: Trajectory) -> bool:
    """Both runs have the same events strictly right of the isolated second-class particle"""
    if len(log_nosinks.inputs.sinks):
        raise InvalidInputError("the comparison run must not have sinks")
    full, bare = log_full.inputs, log_nosinks.inputs
    if not (full.sources == bare.sources and full.alphas == bare.alphas):
        raise InvalidInputError("the two runs must share sources and alpha-points")

    full_events = _event_table(log_full, traj)
    bare_events = _event_table(log_nosinks, traj)
    if full_events == bare_events:
        return True
    mismatched = set(full_events.items()) ^ set(bare_events.items())
    logger.info("paths differ right of the second-class particle", mismatches=len(mismatched))
    return False


def verify_ordering(x_traj: Trajectory, xprime_traj: Trajectory) -> bool:
    """X(X'(x)) <= x at x = 0, every jump abscissa of X' and every finite position of X"""
    grid = np.concatenate(([0.0], xprime_traj.times, x_traj.positions[np.isfinite(x_traj.positions)]))
    grid = np.unique(grid)
    when = xprime_traj.values_at(grid)
    finite = np.isfinite(when)
    reached = x_traj.values_at(when[finite])
    return bool(np.all(reached <= grid[finite]))
