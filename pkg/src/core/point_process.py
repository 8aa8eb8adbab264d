#!/usr/bin/env python3
"""
Poisson point sets on intervals and rectangles

Sampling (exponential gaps in 1D, Poisson count + uniform placement in 2D),
the thinning / superposition couplings used by the second-class particle
constructions, and the two planar symmetries (180 degree rotation of a box,
transposition of the axes).

Random numbers come from a UnitStream. A stream is a value: it holds a seed,
a replication index and an optional branch path, and every call to
``generator()`` rebuilds the same numpy Generator from
``SeedSequence(entropy=seed, spawn_key=(stream_id, *branch))``. SeedSequence
is the hash-mix that turns (seed, stream_id) into PCG64 state; it is
specified bit-exactly by numpy, so runs reproduce across machines.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np
import pandas as pd

from .errors import InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)

_UINT64_MASK = (1 << 64) - 1
CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class UnitStream:
    """Reproducible source of uniform variates for one replication"""
    seed: int
    stream_id: int = 0
    branch: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.stream_id < 0 or any(b < 0 for b in self.branch):
            raise InvalidParameterError("stream_id and branch entries must be non-negative")

    def generator(self) -> np.random.Generator:
        """Fresh Generator positioned at the start of this stream"""
        seq = np.random.SeedSequence(
            entropy=self.seed & _UINT64_MASK,
            spawn_key=(self.stream_id & _UINT64_MASK,) + tuple(self.branch),
        )
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, index: int) -> "UnitStream":
        """Independent sub-stream, e.g. one per point set of a run"""
        return UnitStream(self.seed, self.stream_id, self.branch + (index,))


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]"""
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInputError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise InvalidInputError(f"interval requires lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        return (values >= self.lo) & (values <= self.hi)


@dataclass(frozen=True)
class Rect:
    """Space-time box: x is the particle axis, t the time axis"""
    x: Interval
    t: Interval

    @classmethod
    def box(cls, t1: float, t2: float) -> "Rect":
        """The box [0, t1] x [0, t2]"""
        return cls(Interval(0.0, float(t1)), Interval(0.0, float(t2)))

    @property
    def area(self) -> float:
        return self.x.length * self.t.length

    def transposed(self) -> "Rect":
        return Rect(self.t, self.x)

    @property
    def tolerance(self) -> float:
        """Absolute tolerance for comparing coordinates computed by reflection"""
        scale = max(abs(self.x.lo), abs(self.x.hi), abs(self.t.lo), abs(self.t.hi), 1.0)
        return 64.0 * np.finfo(float).eps * scale


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Points1D:
    """Strictly increasing point set inside an interval"""
    pts: np.ndarray
    interval: Interval

    def __post_init__(self):
        pts = np.array(self.pts, dtype=float).reshape(-1)
        if pts.size:
            if not np.all(np.diff(pts) > 0):
                raise InvalidInputError("points must be strictly increasing")
            if pts[0] < self.interval.lo or pts[-1] > self.interval.hi:
                raise InvalidInputError(
                    f"points outside [{self.interval.lo}, {self.interval.hi}]"
                )
        object.__setattr__(self, "pts", _frozen(pts))

    @classmethod
    def empty(cls, interval: Interval) -> "Points1D":
        return cls(np.empty(0), interval)

    def __len__(self) -> int:
        return int(self.pts.size)

    def __iter__(self) -> Iterator[float]:
        return iter(self.pts.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Points1D):
            return NotImplemented
        return self.interval == other.interval and np.array_equal(self.pts, other.pts)

    def __repr__(self) -> str:
        return f"Points1D(n={len(self)}, interval=[{self.interval.lo}, {self.interval.hi}])"

    def count_in(self, lo: float, hi: float) -> int:
        """Number of points in the half-open interval (lo, hi]"""
        return int(np.searchsorted(self.pts, hi, side="right") - np.searchsorted(self.pts, lo, side="right"))

    def gaps(self) -> np.ndarray:
        """Inter-point gaps, including the gap from the left end to the first point"""
        if not len(self):
            return np.empty(0)
        return np.diff(np.concatenate(([self.interval.lo], self.pts)))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.pts})


@dataclass(frozen=True, eq=False)
class Points2D:
    """Planar point set inside a rectangle, stored sorted by t then x"""
    pts: np.ndarray
    rect: Rect

    def __post_init__(self):
        pts = np.array(self.pts, dtype=float).reshape(-1, 2)
        if pts.shape[0]:
            order = np.lexsort((pts[:, 0], pts[:, 1]))
            pts = pts[order]
            inside = self.rect.x.contains(pts[:, 0]) & self.rect.t.contains(pts[:, 1])
            if not np.all(inside):
                raise InvalidInputError("points outside the declared rectangle")
            if pts.shape[0] > 1 and np.any(np.all(pts[1:] == pts[:-1], axis=1)):
                raise InvalidInputError("duplicate points")
        object.__setattr__(self, "pts", _frozen(pts))

    @classmethod
    def empty(cls, rect: Rect) -> "Points2D":
        return cls(np.empty((0, 2)), rect)

    def __len__(self) -> int:
        return int(self.pts.shape[0])

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        return iter(map(tuple, self.pts.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Points2D):
            return NotImplemented
        return self.rect == other.rect and np.array_equal(self.pts, other.pts)

    def __repr__(self) -> str:
        return f"Points2D(n={len(self)}, rect={self.rect})"

    @property
    def x(self) -> np.ndarray:
        return self.pts[:, 0]

    @property
    def t(self) -> np.ndarray:
        return self.pts[:, 1]

    def count_in_box(self, x: float, t: float) -> int:
        """Number of points in [0, x] x [0, t] (anchored at the rectangle corner)"""
        mask = (self.x >= self.rect.x.lo) & (self.x <= x) & (self.t >= self.rect.t.lo) & (self.t <= t)
        return int(np.count_nonzero(mask))

    def restrict(self, rect: Rect) -> "Points2D":
        """Points falling inside a sub-rectangle"""
        mask = rect.x.contains(self.x) & rect.t.contains(self.t)
        return Points2D(self.pts[mask], rect)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "t": self.t})


PointSet = Union[Points1D, Points2D]


def _check_rate(rate: float, what: str = "rate"):
    if not math.isfinite(rate) or rate < 0:
        raise InvalidParameterError(f"{what} must be a finite non-negative number, got {rate}")


def sample_poisson_1d(iv: Interval, rate: float, stream: UnitStream) -> Points1D:
    """Homogeneous Poisson process on an interval, built from exponential gaps"""
    _check_rate(rate)
    length = iv.length
    if rate == 0 or length == 0:
        return Points1D.empty(iv)

    rng = stream.generator()
    mean = rate * length
    batch = int(mean + 4.0 * math.sqrt(mean) + 16)
    chunks = []
    reached = 0.0
    while reached <= length:
        arrivals = reached + np.cumsum(rng.exponential(1.0 / rate, size=batch))
        chunks.append(arrivals)
        reached = float(arrivals[-1])
    arrivals = np.concatenate(chunks)
    arrivals = arrivals[arrivals < length]
    return Points1D(iv.lo + arrivals, iv)


def sample_poisson_2d(r: Rect, rate: float, stream: UnitStream) -> Points2D:
    """Homogeneous Poisson process on a rectangle: Poisson count, then uniform placement"""
    _check_rate(rate)
    if rate == 0 or r.area == 0:
        return Points2D.empty(r)

    rng = stream.generator()
    n = int(rng.poisson(rate * r.area))
    x = rng.uniform(r.x.lo, r.x.hi, size=n)
    t = rng.uniform(r.t.lo, r.t.hi, size=n)
    return Points2D(np.column_stack((x, t)), r)


def thin(p: Points1D, keep_prob: float, stream: UnitStream) -> Tuple[Points1D, Points1D]:
    """Keep each point independently with probability keep_prob; returns (kept, removed)"""
    if not (0.0 <= keep_prob <= 1.0):
        raise InvalidParameterError(f"keep_prob must lie in [0, 1], got {keep_prob}")
    keep = stream.generator().random(len(p)) < keep_prob
    return Points1D(p.pts[keep], p.interval), Points1D(p.pts[~keep], p.interval)


def superpose(a: Points1D, b: Points1D) -> Points1D:
    """Sorted union of two point sets on the same interval"""
    if a.interval != b.interval:
        raise InvalidInputError("superpose requires point sets on the same interval")
    return Points1D(np.sort(np.concatenate((a.pts, b.pts))), a.interval)


def rotate180(p: Points2D, r: Rect) -> Points2D:
    """Reflect through the centre of r: (x, t) -> (x_hi + x_lo - x, t_hi + t_lo - t)"""
    inside = r.x.contains(p.x) & r.t.contains(p.t)
    if not np.all(inside):
        raise InvalidInputError("rotate180: point outside the rectangle")
    x = (r.x.hi + r.x.lo) - p.x
    t = (r.t.hi + r.t.lo) - p.t
    # rounding can push a reflected boundary point a hair outside
    x = np.clip(x, r.x.lo, r.x.hi)
    t = np.clip(t, r.t.lo, r.t.hi)
    return Points2D(np.column_stack((x, t)), r)


def transpose_points(p: Points2D) -> Points2D:
    """Swap the roles of the axes: (x, t) -> (t, x)"""
    return Points2D(p.pts[:, ::-1], p.rect.transposed())


def reflect_1d(p: Points1D) -> Points1D:
    """Mirror a 1D point set inside its interval"""
    iv = p.interval
    mirrored = np.clip((iv.hi + iv.lo) - p.pts[::-1], iv.lo, iv.hi)
    return Points1D(mirrored, iv)


def coordinates_match(a: np.ndarray, b: np.ndarray, tolerance: float) -> bool:
    """Sorted coordinate arrays agree elementwise up to an absolute tolerance"""
    a = np.sort(np.asarray(a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(b, dtype=float).reshape(-1))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tolerance))


def planar_sets_match(a: Points2D, b: Points2D, tolerance: float) -> bool:
    """Two planar sets agree point for point up to an absolute tolerance"""
    if len(a) != len(b):
        return False
    if not len(a):
        return True
    # both are sorted by (t, x); tolerance-sized perturbations cannot reorder Poisson samples
    return bool(np.all(np.abs(a.pts - b.pts) <= tolerance))


def write_points_csv(points: PointSet, path: Union[str, Path]) -> Path:
    """One point per line, columns x or x,t, 17 significant digits"""
    path = Path(path)
    points.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def read_points1d_csv(path: Union[str, Path], iv: Interval) -> Points1D:
    frame = pd.read_csv(path)
    if list(frame.columns) != ["x"]:
        raise InvalidInputError(f"{path}: expected a single column 'x', got {list(frame.columns)}")
    return Points1D(frame["x"].to_numpy(dtype=float), iv)


def read_points2d_csv(path: Union[str, Path], rect: Rect) -> Points2D:
    frame = pd.read_csv(path)
    if list(frame.columns) != ["x", "t"]:
        raise InvalidInputError(f"{path}: expected columns 'x,t', got {list(frame.columns)}")
    return Points2D(frame[["x", "t"]].to_numpy(dtype=float), rect)
