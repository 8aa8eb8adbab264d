#!/usr/bin/env python3
"""
Longest North-East paths

Strict chains through planar points (patience sorting), weak paths that
first walk along one axis collecting sources or sinks, the axis departure
point of optimal weak paths, and the cross-check against the number of
space-time paths of a simulated run.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from .engine import SimInputs, evolve, path_count_box
from .errors import InvalidInputError, SizeLimitError
from .point_process import (
    Interval,
    Points1D,
    Points2D,
    Rect,
    read_points1d_csv,
    read_points2d_csv,
    write_points_csv,
)

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 20


@dataclass(frozen=True)
class WeakPathInstance:
    """Interior points, axis points and the target corner (x, t)"""
    interior: Points2D
    sources: Points1D
    sinks: Points1D
    target: Tuple[float, float]

    def __post_init__(self):
        x, t = self.target
        pts = self.interior.pts
        if pts.size and (pts[:, 0].min() < 0 or pts[:, 0].max() > x or pts[:, 1].min() < 0 or pts[:, 1].max() > t):
            raise InvalidInputError(f"interior points outside [0, {x}] x [0, {t}]")
        if len(self.sources) and (self.sources.pts[0] < 0 or self.sources.pts[-1] > x):
            raise InvalidInputError(f"sources outside [0, {x}]")
        if len(self.sinks) and (self.sinks.pts[0] < 0 or self.sinks.pts[-1] > t):
            raise InvalidInputError(f"sinks outside [0, {t}]")

    @classmethod
    def from_inputs(cls, inp: SimInputs) -> "WeakPathInstance":
        return cls(inp.alphas, inp.sources, inp.sinks, (inp.t1, inp.t2))


def _chain_lengths(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Length of the longest strict chain ending at each point"""
    # x ascending, t descending within equal x, so equal abscissae never chain
    order = np.lexsort((-t, x))
    lengths = np.empty(x.size, dtype=np.int64)
    tails: List[float] = []
    for idx, value in zip(order.tolist(), t[order].tolist()):
        pos = bisect_left(tails, value)
        if pos == len(tails):
            tails.append(value)
        else:
            tails[pos] = value
        lengths[idx] = pos + 1
    return lengths


def lis_patience(p: Points2D) -> int:
    """Longest chain with x and t both strictly increasing"""
    if not len(p):
        return 0
    order = np.lexsort((-p.t, p.x))
    tails: List[float] = []
    for value in p.t[order].tolist():
        pos = bisect_left(tails, value)
        if pos == len(tails):
            tails.append(value)
        else:
            tails[pos] = value
    return len(tails)


def lis_bruteforce(p: Points2D) -> int:
    """Quadratic longest-chain DP, refused above BRUTEFORCE_LIMIT points"""
    n = len(p)
    if n > BRUTEFORCE_LIMIT:
        raise SizeLimitError(f"brute force limited to {BRUTEFORCE_LIMIT} points, got {n}", n, BRUTEFORCE_LIMIT)
    pts = p.pts.tolist()
    best = [1] * n
    for i, (xi, ti) in enumerate(pts):
        for j, (xj, tj) in enumerate(pts):
            if xj < xi and tj < ti:
                best[i] = max(best[i], best[j] + 1)
    return max(best, default=0)


def _departure_candidates(w: WeakPathInstance) -> Tuple[int, List[float]]:
    """Optimal weak length and the last axis coordinate of every optimal axis-using path"""
    x, t = w.interior.x, w.interior.t
    # longest chain starting at each point = longest chain ending there after a 180 degree turn
    up = _chain_lengths(-x, -t) if x.size else np.empty(0, dtype=np.int64)
    best = lis_patience(w.interior)

    def best_beyond(coord: np.ndarray, cuts: np.ndarray) -> np.ndarray:
        # max of up over interior points with coord strictly greater than each cut
        if not coord.size:
            return np.zeros(cuts.size, dtype=np.int64)
        order = np.argsort(coord, kind="stable")
        suffix = np.maximum.accumulate(up[order][::-1])[::-1]
        suffix = np.append(suffix, 0)
        return suffix[np.searchsorted(coord[order], cuts, side="right")]

    scores = []
    for axis_pts, coord in ((w.sources.pts, x), (w.sinks.pts, t)):
        if axis_pts.size:
            totals = np.arange(1, axis_pts.size + 1) + best_beyond(coord, axis_pts)
            scores.append((axis_pts, totals))
            best = max(best, int(totals.max()))

    departures = [float(c) for axis_pts, totals in scores for c in axis_pts[totals == best]]
    return best, departures


def lis_weak(w: WeakPathInstance) -> int:
    """Longest weakly North-East path: axis points from one axis, then a strict chain"""
    best, _ = _departure_candidates(w)
    return best


def weak_axis_departure(w: WeakPathInstance) -> float:
    """Largest last-axis-point coordinate over all optimal weak paths (0 if none uses an axis)"""
    _, departures = _departure_candidates(w)
    return max(departures, default=0.0)


def check_lis_equals_crossings(interior: Points2D, sources: Points1D, sinks: Points1D, box: Rect) -> bool:
    """lis_weak of the instance equals the number of space-time paths crossing the box"""
    if box.x.lo != 0 or box.t.lo != 0:
        raise InvalidInputError("the box must be anchored at the origin")
    inp = SimInputs(
        t1=box.x.hi,
        t2=box.t.hi,
        sources=Points1D(sources.pts, box.x),
        sinks=Points1D(sinks.pts, box.t),
        alphas=Points2D(interior.pts, box),
    )
    crossings = path_count_box(evolve(inp), box.x.hi, box.t.hi)
    longest = lis_weak(WeakPathInstance.from_inputs(inp))
    if crossings != longest:
        logger.warning("path count %d differs from weak path length %d", crossings, longest)
    return crossings == longest


def write_instance(w: WeakPathInstance, directory: Union[str, Path]) -> List[Path]:
    """interior.csv, sources.csv and sinks.csv in one directory"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [
        write_points_csv(w.interior, directory / "interior.csv"),
        write_points_csv(w.sources, directory / "sources.csv"),
        write_points_csv(w.sinks, directory / "sinks.csv"),
    ]


def read_instance(directory: Union[str, Path], target: Tuple[float, float]) -> WeakPathInstance:
    directory = Path(directory)
    x, t = target
    box = Rect.box(x, t)
    return WeakPathInstance(
        interior=read_points2d_csv(directory / "interior.csv", box),
        sources=read_points1d_csv(directory / "sources.csv", Interval(0.0, x)),
        sinks=read_points1d_csv(directory / "sinks.csv", Interval(0.0, t)),
        target=(x, t),
    )
