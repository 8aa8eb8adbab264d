#!/usr/bin/env python3
"""
Hammersley's process with sources and sinks on a finite box [0, t1] x [0, t2]

The state is a finite configuration of particles on [0, t1]. Two kinds of
events drive it:

* an alpha-point (u, s) pulls the nearest particle at or right of u onto u
  (or creates a particle at u when there is none, the path entering through
  the East side);
* a sink at time s removes the leftmost particle (exit through the West
  side), or, on an empty configuration, is a horizontal path crossing the
  whole box.

``evolve`` replays the merged event stream once and keeps the result as an
``EventLog`` of column arrays. Everything else in this module (replay,
boundary processes, path counts, the time-reversal check) reads that log.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from .errors import DuplicateEventTimeError, EvaluationError, InvalidInputError, InvalidParameterError
from .point_process import (
    Interval,
    Points1D,
    Points2D,
    Rect,
    UnitStream,
    coordinates_match,
    planar_sets_match,
    reflect_1d,
    rotate180,
    sample_poisson_1d,
    sample_poisson_2d,
)

logger = structlog.get_logger()

GAUSS_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


class EventKind(str, Enum):
    ALPHA_JUMP = "AJ"
    ALPHA_CREATE = "AC"
    SINK_CONSUME = "SC"
    SINK_VOID = "SV"


KIND_ORDER = (EventKind.ALPHA_JUMP, EventKind.ALPHA_CREATE, EventKind.SINK_CONSUME, EventKind.SINK_VOID)
AJ, AC, SC, SV = range(4)


@dataclass(frozen=True)
class Event:
    """One step of the evolution; from_x / to_x are None where not applicable"""
    time: float
    kind: EventKind
    from_x: Optional[float] = None
    to_x: Optional[float] = None

    @property
    def location(self) -> Optional[float]:
        """Where the event happens on the particle axis"""
        if self.kind in (EventKind.ALPHA_JUMP, EventKind.ALPHA_CREATE):
            return self.to_x
        if self.kind is EventKind.SINK_CONSUME:
            return self.from_x
        return None


@dataclass(frozen=True, eq=False)
class ParticleConfig:
    """Nondecreasing particle positions inside [0, t1]"""
    positions: np.ndarray
    t1: float

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float).reshape(-1)
        if positions.size:
            if np.any(np.diff(positions) < 0):
                raise InvalidInputError("particle positions must be nondecreasing")
            if positions[0] < 0 or positions[-1] > self.t1:
                raise InvalidInputError(f"particle positions must lie in [0, {self.t1}]")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @classmethod
    def empty(cls, t1: float) -> "ParticleConfig":
        return cls(np.empty(0), t1)

    def __len__(self) -> int:
        return int(self.positions.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParticleConfig):
            return NotImplemented
        return self.t1 == other.t1 and np.array_equal(self.positions, other.positions)

    def __repr__(self) -> str:
        return f"ParticleConfig({self.positions.tolist()}, t1={self.t1})"

    def count_in(self, lo: float, hi: float) -> int:
        """Particles in the half-open interval (lo, hi]"""
        p = self.positions
        return int(np.searchsorted(p, hi, side="right") - np.searchsorted(p, lo, side="right"))


class ParticleStore:
    """
    Sorted particle positions with a moving head.

    Successor lookup is a bisection from the head (O(log n)), removing the
    leftmost particle advances the head (O(1)), a jump overwrites a slot in
    place and a creation appends. Replacing the successor of u by u keeps the
    list sorted, so no insertion into the middle ever happens.
    """

    _COMPACT_AT = 4096

    def __init__(self, positions: Sequence[float] = (), identities: Optional[Sequence[int]] = None):
        self._xs: List[float] = list(positions)
        self._head = 0
        self._ids: Optional[List[int]] = list(identities) if identities is not None else None
        self._next_id = len(self._xs)

    def __len__(self) -> int:
        return len(self._xs) - self._head

    def alpha(self, at: float) -> Optional[float]:
        """Apply an alpha-point at ``at``; returns the jumping particle's old position or None on creation"""
        xs = self._xs
        i = bisect_left(xs, at, self._head)
        if i < len(xs):
            previous = xs[i]
            xs[i] = at
            return previous
        xs.append(at)
        if self._ids is not None:
            self._ids.append(self._next_id)
            self._next_id += 1
        return None

    def alpha_with_identity(self, at: float) -> Tuple[Optional[float], int]:
        """Like alpha(), also returning the identity of the moved or created particle"""
        i = bisect_left(self._xs, at, self._head)
        previous = self.alpha(at)
        return previous, self._ids[i]

    def pop_leftmost(self) -> Optional[float]:
        if self._head == len(self._xs):
            return None
        x = self._xs[self._head]
        self._head += 1
        if self._head >= self._COMPACT_AT and self._head * 2 >= len(self._xs):
            del self._xs[:self._head]
            if self._ids is not None:
                del self._ids[:self._head]
            self._head = 0
        return x

    def leftmost_identity(self) -> Optional[int]:
        if self._ids is None or self._head == len(self._xs):
            return None
        return self._ids[self._head]

    def positions(self) -> np.ndarray:
        return np.array(self._xs[self._head:], dtype=float)

    def identities(self) -> List[int]:
        return list(self._ids[self._head:]) if self._ids is not None else []


@dataclass(frozen=True)
class SimInputs:
    """Sources on [0, t1], sinks on [0, t2] and alpha-points in the box"""
    t1: float
    t2: float
    sources: Points1D
    sinks: Points1D
    alphas: Points2D
    lambda_meta: Optional[float] = None

    def __post_init__(self):
        if not (self.t1 >= 0 and self.t2 >= 0):
            raise InvalidInputError("box sides must be non-negative")
        box = self.box
        if len(self.sources) and (self.sources.pts[0] < 0 or self.sources.pts[-1] > self.t1):
            raise InvalidInputError("sources must lie in [0, t1]")
        if len(self.sinks) and (self.sinks.pts[0] < 0 or self.sinks.pts[-1] > self.t2):
            raise InvalidInputError("sinks must lie in [0, t2]")
        if len(self.alphas):
            inside = box.x.contains(self.alphas.x) & box.t.contains(self.alphas.t)
            if not np.all(inside):
                raise InvalidInputError("alpha-points must lie in [0, t1] x [0, t2]")
        times = np.sort(np.concatenate((self.alphas.t, self.sinks.pts)))
        if times.size > 1:
            clash = np.flatnonzero(times[1:] == times[:-1])
            if clash.size:
                t = float(times[clash[0]])
                raise DuplicateEventTimeError(f"two events share time {t!r}", t)

    @property
    def box(self) -> Rect:
        return Rect.box(self.t1, self.t2)

    @classmethod
    def build(cls, t1: float, t2: float, sources: Sequence[float] = (), sinks: Sequence[float] = (),
              alphas: Sequence[Tuple[float, float]] = (), lambda_meta: Optional[float] = None) -> "SimInputs":
        """Convenience constructor from plain sequences"""
        box = Rect.box(t1, t2)
        return cls(
            t1=float(t1),
            t2=float(t2),
            sources=Points1D(np.sort(np.asarray(sources, dtype=float)), box.x),
            sinks=Points1D(np.sort(np.asarray(sinks, dtype=float)), box.t),
            alphas=Points2D(np.asarray(alphas, dtype=float).reshape(-1, 2), box),
            lambda_meta=lambda_meta,
        )


def stationary_inputs(t1: float, t2: float, lam: float, stream: UnitStream) -> SimInputs:
    """Poisson(lam) sources, Poisson(1/lam) sinks, rate-1 alpha-points"""
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    box = Rect.box(t1, t2)
    return SimInputs(
        t1=box.x.hi,
        t2=box.t.hi,
        sources=sample_poisson_1d(box.x, lam, stream.child(0)),
        sinks=sample_poisson_1d(box.t, 1.0 / lam, stream.child(1)),
        alphas=sample_poisson_2d(box, 1.0, stream.child(2)),
        lambda_meta=lam,
    )


def empty_start_inputs(t1: float, t2: float, stream: UnitStream) -> SimInputs:
    """Alpha-points only: no sources, no sinks"""
    box = Rect.box(t1, t2)
    return SimInputs(
        t1=box.x.hi,
        t2=box.t.hi,
        sources=Points1D.empty(box.x),
        sinks=Points1D.empty(box.t),
        alphas=sample_poisson_2d(box, 1.0, stream.child(2)),
    )


@dataclass(frozen=True, eq=False)
class EventLog:
    """
    Time-ordered record of one run, stored column-wise.

    ``kinds`` holds codes into KIND_ORDER; ``from_x`` is the previous position
    of the moving or exiting particle (NaN for creations and void sinks) and
    ``to_x`` the alpha-point abscissa (NaN for sink events).
    """
    inputs: SimInputs
    times: np.ndarray
    kinds: np.ndarray
    from_x: np.ndarray
    to_x: np.ndarray
    final_positions: np.ndarray
    _events: List[Event] = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def final_config(self) -> ParticleConfig:
        return ParticleConfig(self.final_positions, self.inputs.t1)

    @property
    def events(self) -> List[Event]:
        if not self._events and len(self):
            for t, k, f, to in zip(self.times.tolist(), self.kinds.tolist(),
                                   self.from_x.tolist(), self.to_x.tolist()):
                self._events.append(Event(
                    time=t,
                    kind=KIND_ORDER[k],
                    from_x=None if f != f else f,
                    to_x=None if to != to else to,
                ))
        return self._events

    def counts(self) -> Dict[str, int]:
        tally = np.bincount(self.kinds, minlength=4)
        return {kind.value: int(n) for kind, n in zip(KIND_ORDER, tally)}

    def mask(self, *codes: int) -> np.ndarray:
        return np.isin(self.kinds, codes)

    def to_frame(self) -> pd.DataFrame:
        """Columns time,kind,from_x,to_x; missing coordinates become empty fields"""
        return pd.DataFrame({
            "time": self.times,
            "kind": np.array([k.value for k in KIND_ORDER])[self.kinds],
            "from_x": self.from_x,
            "to_x": self.to_x,
        })


@dataclass(frozen=True)
class BoundaryTally:
    """beta-points and the three boundary processes of one run"""
    east_entries: Points1D
    north_exits: Points1D
    consumed_sink_times: Points1D
    beta: Points2D
    void_sink_times: Points1D

    def to_frames(self) -> Dict[str, pd.DataFrame]:
        return {
            "beta": self.beta.to_frame(),
            "east": self.east_entries.to_frame(),
            "north": self.north_exits.to_frame(),
            "consumed": self.consumed_sink_times.to_frame(),
        }


def _check_coordinate(at: float, t1: float):
    if not 0.0 <= at <= t1:
        raise InvalidInputError(f"alpha-point abscissa {at} outside [0, {t1}]")


def apply_alpha(c: ParticleConfig, at: float, time: float) -> Tuple[ParticleConfig, Event]:
    """Nearest particle at or right of ``at`` jumps to ``at``; otherwise a particle is created there"""
    _check_coordinate(at, c.t1)
    positions = c.positions.copy()
    i = int(np.searchsorted(positions, at, side="left"))
    if i < positions.size:
        previous = float(positions[i])
        positions[i] = at
        return ParticleConfig(positions, c.t1), Event(time, EventKind.ALPHA_JUMP, previous, float(at))
    return ParticleConfig(np.append(positions, at), c.t1), Event(time, EventKind.ALPHA_CREATE, None, float(at))


def apply_sink(c: ParticleConfig, time: float) -> Tuple[ParticleConfig, Event]:
    """Leftmost particle leaves; an empty configuration is left alone"""
    if not len(c):
        return c, Event(time, EventKind.SINK_VOID)
    return ParticleConfig(c.positions[1:], c.t1), Event(time, EventKind.SINK_CONSUME, float(c.positions[0]))


def evolve(inp: SimInputs) -> EventLog:
    """Run the process from the sources through all alpha and sink events"""
    alpha_t = inp.alphas.t
    alpha_x = inp.alphas.x
    n_alpha = alpha_t.size
    times = np.concatenate((alpha_t, inp.sinks.pts))
    order = np.argsort(times, kind="stable")
    is_sink = order >= n_alpha

    store = ParticleStore(inp.sources.pts.tolist())
    from_x = np.full(order.size, np.nan)
    xs = alpha_x.tolist()
    for k, idx in enumerate(order.tolist()):
        moved = store.alpha(xs[idx]) if idx < n_alpha else store.pop_leftmost()
        if moved is not None:
            from_x[k] = moved

    vacant = np.isnan(from_x)
    kinds = np.where(is_sink, np.where(vacant, SV, SC), np.where(vacant, AC, AJ)).astype(np.int8)
    to_x = np.concatenate((alpha_x, np.full(inp.sinks.pts.size, np.nan)))[order]

    log = EventLog(
        inputs=inp,
        times=times[order],
        kinds=kinds,
        from_x=from_x,
        to_x=to_x,
        final_positions=store.positions(),
    )
    for column in (log.times, log.kinds, log.from_x, log.to_x, log.final_positions):
        column.setflags(write=False)
    logger.debug("evolve complete", events=len(log), particles=len(store), **log.counts())
    return log


def _replay(log: EventLog, n_events: int, store: Optional[ParticleStore] = None) -> ParticleStore:
    store = store or ParticleStore(log.inputs.sources.pts.tolist())
    to_x = log.to_x[:n_events].tolist()
    for kind, at in zip(log.kinds[:n_events].tolist(), to_x):
        if kind in (AJ, AC):
            store.alpha(at)
        else:
            store.pop_leftmost()
    return store


def config_at(log: EventLog, t: float) -> ParticleConfig:
    """Configuration right after every event with time <= t"""
    if not 0.0 <= t <= log.inputs.t2:
        raise InvalidInputError(f"time {t} outside [0, {log.inputs.t2}]")
    n_events = int(np.searchsorted(log.times, t, side="right"))
    return ParticleConfig(_replay(log, n_events).positions(), log.inputs.t1)


def configs_at(log: EventLog, ts: Sequence[float]) -> List[ParticleConfig]:
    """config_at for many times with a single replay"""
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts.min() < 0 or ts.max() > log.inputs.t2):
        raise InvalidInputError(f"times must lie in [0, {log.inputs.t2}]")
    order = np.argsort(ts, kind="stable")
    out: List[Optional[ParticleConfig]] = [None] * ts.size
    store = ParticleStore(log.inputs.sources.pts.tolist())
    done = 0
    for j in order.tolist():
        upto = int(np.searchsorted(log.times, ts[j], side="right"))
        if upto > done:
            sub = _slice(log, done, upto)
            _replay(sub, upto - done, store)
            done = upto
        out[j] = ParticleConfig(store.positions(), log.inputs.t1)
    return out


def _slice(log: EventLog, start: int, stop: int) -> EventLog:
    return EventLog(log.inputs, log.times[start:stop], log.kinds[start:stop],
                    log.from_x[start:stop], log.to_x[start:stop], log.final_positions)


def extract_boundary(log: EventLog) -> BoundaryTally:
    """beta-points at jump and consume corners, East entries, North exits, consumed sink times"""
    box = log.inputs.box
    corner = log.mask(AJ, SC)
    entering = log.mask(AC, SV)
    return BoundaryTally(
        east_entries=Points1D(log.times[entering], box.t),
        north_exits=Points1D(log.final_positions, box.x),
        consumed_sink_times=Points1D(log.times[log.kinds == SC], box.t),
        beta=Points2D(np.column_stack((log.from_x[corner], log.times[corner])), box),
        void_sink_times=Points1D(log.times[log.kinds == SV], box.t),
    )


def path_count_box(log: EventLog, x: float, t: float) -> int:
    """Space-time paths meeting [0, x] x [0, t]: West exits by time t plus particles in (0, x] at t"""
    if not 0.0 <= x <= log.inputs.t1:
        raise InvalidInputError(f"x={x} outside [0, {log.inputs.t1}]")
    config = config_at(log, t)
    upto = int(np.searchsorted(log.times, t, side="right"))
    sinks_so_far = int(np.count_nonzero(np.isin(log.kinds[:upto], (SC, SV))))
    return sinks_so_far + config.count_in(0.0, x)


@dataclass
class ParticlePath:
    """Polyline of one particle identity: positions hold from each time on"""
    identity: int
    times: List[float]
    positions: List[float]
    exit_time: Optional[float] = None

    def is_nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.positions, self.positions[1:]))


def space_time_paths(log: EventLog) -> List[ParticlePath]:
    """Per-identity polylines; jumps keep the identity, creations mint a new one"""
    sources = log.inputs.sources.pts.tolist()
    store = ParticleStore(sources, identities=range(len(sources)))
    paths: Dict[int, ParticlePath] = {
        i: ParticlePath(i, [0.0], [x]) for i, x in enumerate(sources)
    }
    for time, kind, at in zip(log.times.tolist(), log.kinds.tolist(), log.to_x.tolist()):
        if kind in (AJ, AC):
            _, identity = store.alpha_with_identity(at)
            path = paths.setdefault(identity, ParticlePath(identity, [], []))
            path.times.append(time)
            path.positions.append(at)
        elif kind == SC:
            identity = store.leftmost_identity()
            store.pop_leftmost()
            paths[identity].exit_time = time
    return [paths[i] for i in sorted(paths)]


def check_conservation(log: EventLog) -> bool:
    counts = log.counts()
    return log.final_positions.size == len(log.inputs.sources) + counts["AC"] - counts["SC"]


def check_beta_tally(log: EventLog) -> bool:
    counts = log.counts()
    return len(extract_boundary(log).beta) == counts["AJ"] + counts["SC"]


# --- generator and adjoint -------------------------------------------------

Functional = Callable[[np.ndarray], np.ndarray]


def _evaluate(f: Functional, configs: np.ndarray) -> np.ndarray:
    values = np.asarray(f(configs), dtype=float).reshape(-1)
    if values.size != configs.shape[0]:
        raise EvaluationError(f"functional returned {values.size} values for {configs.shape[0]} configurations")
    if not np.all(np.isfinite(values)):
        raise EvaluationError("functional returned a non-finite value")
    return values


def _segment_integral(f: Functional, build: Callable[[np.ndarray], np.ndarray],
                      lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Gauss-Legendre integral over [lo, hi] per row; build maps nodes (m, q) to configs (m, q, k)"""
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_NODES[None, :]
    configs = build(nodes)
    m, q, k = configs.shape
    values = _evaluate(f, configs.reshape(m * q, k)).reshape(m, q)
    return half * (values @ _GL_WEIGHTS)


def _check_batch(configs: np.ndarray, lam: float, t1: float) -> np.ndarray:
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    configs = np.asarray(configs, dtype=float)
    if configs.ndim != 2:
        raise InvalidInputError("configurations must form an (m, n) array")
    if configs.size and (configs.min() < 0 or configs.max() > t1 or np.any(np.diff(configs, axis=1) < 0)):
        raise InvalidInputError(f"configurations must be nondecreasing rows inside [0, {t1}]")
    return configs


def generator_apply_batch(f: Functional, configs: np.ndarray, lam: float, t1: float) -> np.ndarray:
    """
    G f for m configurations with the same particle count n.

    G f(x) = int_0^t1 f(R_t x) dt + f(L x) / lam - (1/lam + t1) f(x), where
    R_t replaces the first particle >= t by t (or appends t) and L removes
    the leftmost particle. The integral splits at the particles: on
    (x_{i-1}, x_i] the i-th particle is replaced, on (x_n, t1] t is appended.
    """
    configs = _check_batch(configs, lam, t1)
    m, n = configs.shape
    zeros = np.zeros(m)
    total = np.zeros(m)
    for i in range(n):
        lo = configs[:, i - 1] if i else zeros
        hi = configs[:, i]

        def replace(nodes, i=i):
            out = np.repeat(configs[:, None, :], nodes.shape[1], axis=1)
            out[:, :, i] = nodes
            return out

        total += _segment_integral(f, replace, lo, hi)

    def append(nodes):
        base = np.repeat(configs[:, None, :], nodes.shape[1], axis=1)
        return np.concatenate((base, nodes[:, :, None]), axis=2)

    total += _segment_integral(f, append, configs[:, -1] if n else zeros, np.full(m, t1))
    exit_left = configs[:, 1:] if n else configs
    total += _evaluate(f, exit_left) / lam
    total -= (1.0 / lam + t1) * _evaluate(f, configs)
    return total


def adjoint_apply_batch(g: Functional, configs: np.ndarray, lam: float, t1: float) -> np.ndarray:
    """
    G* g for m configurations with the same particle count n.

    G* g(y) = int_0^t1 g(L_s y) ds + g(R y) / lam - (1/lam + t1) g(y), where
    L_s prepends s when s < y_1 and otherwise replaces the last particle <= s
    by s, and R removes the rightmost particle.
    """
    configs = _check_batch(configs, lam, t1)
    m, n = configs.shape
    ends = np.full(m, t1)

    def prepend(nodes):
        base = np.repeat(configs[:, None, :], nodes.shape[1], axis=1)
        return np.concatenate((nodes[:, :, None], base), axis=2)

    total = _segment_integral(g, prepend, np.zeros(m), configs[:, 0] if n else ends)
    for i in range(n):
        lo = configs[:, i]
        hi = configs[:, i + 1] if i + 1 < n else ends

        def replace(nodes, i=i):
            out = np.repeat(configs[:, None, :], nodes.shape[1], axis=1)
            out[:, :, i] = nodes
            return out

        total += _segment_integral(g, replace, lo, hi)

    exit_right = configs[:, :-1] if n else configs
    total += _evaluate(g, exit_right) / lam
    total -= (1.0 / lam + t1) * _evaluate(g, configs)
    return total


def generator_apply(f: Functional, c: ParticleConfig, lam: float, t1: float) -> float:
    return float(generator_apply_batch(f, c.positions[None, :], lam, t1)[0])


def adjoint_apply(g: Functional, c: ParticleConfig, lam: float, t1: float) -> float:
    return float(adjoint_apply_batch(g, c.positions[None, :], lam, t1)[0])


def sample_mu(lam: float, t1: float, stream: UnitStream) -> ParticleConfig:
    """Poisson(lam) configuration on [0, t1]"""
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    return ParticleConfig(sample_poisson_1d(Interval(0.0, t1), lam, stream).pts, t1)


# --- time reversal ---------------------------------------------------------

def reversed_inputs(log: EventLog, tally: Optional[BoundaryTally] = None) -> SimInputs:
    """Inputs of the run seen upside down: North exits become sources, East entries sinks, beta-points alphas"""
    tally = tally or extract_boundary(log)
    inp = log.inputs
    return SimInputs(
        t1=inp.t1,
        t2=inp.t2,
        sources=reflect_1d(tally.north_exits),
        sinks=reflect_1d(tally.east_entries),
        alphas=rotate180(tally.beta, inp.box),
        lambda_meta=inp.lambda_meta,
    )


def time_reverse_check(log: EventLog) -> bool:
    """The reversed run's beta-points, East entries and North exits are the rotated alphas, sinks and sources"""
    inp = log.inputs
    box = inp.box
    tol = box.tolerance
    try:
        rev = evolve(reversed_inputs(log))
    except DuplicateEventTimeError as err:
        logger.warning("reversed inputs collapsed two event times", time=err.time)
        return False
    rev_tally = extract_boundary(rev)

    beta_ok = planar_sets_match(rev_tally.beta, rotate180(inp.alphas, box), tol)
    east_ok = coordinates_match(rev_tally.east_entries.pts, (box.t.hi + box.t.lo) - inp.sinks.pts, tol)
    north_ok = coordinates_match(rev_tally.north_exits.pts, (box.x.hi + box.x.lo) - inp.sources.pts, tol)
    if not (beta_ok and east_ok and north_ok):
        logger.info("time reversal mismatch", beta=beta_ok, east=east_ok, north=north_ok)
    return beta_ok and east_ok and north_ok
