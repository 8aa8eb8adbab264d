#!/usr/bin/env python3
"""
Seeded replication fan-out

Replication i always draws from ``UnitStream(seed, i)``; joblib hands the
results back in submission order, so the worker count never changes what an
experiment computes.
"""

import logging
from functools import partial
from typing import Callable, List, Sequence, TypeVar

import structlog
from joblib import Parallel, delayed

from ..core.engine import SimInputs, empty_start_inputs, stationary_inputs
from ..core.errors import DuplicateEventTimeError
from ..core.point_process import UnitStream
from .logging_setup import configure_logging

logger = structlog.get_logger()

T = TypeVar("T")

MAX_RESAMPLES = 8
# child index reserved for redraws, clear of the 0/1/2 children used by the samplers
RESAMPLE_BRANCH = 1000


def _in_worker(fn: Callable[[UnitStream], T], log_level: int, stream: UnitStream) -> T:
    configure_logging(log_level)
    return fn(stream)


def run_replications(fn: Callable[[UnitStream], T], seed: int, stream_ids: Sequence[int],
                     n_jobs: int = 1, log_level: int = logging.INFO) -> List[T]:
    """fn(UnitStream(seed, i)) for every i, in the order of stream_ids"""
    streams = [UnitStream(seed, i) for i in stream_ids]
    if n_jobs == 1 or len(streams) < 2:
        return [fn(s) for s in streams]
    logger.debug("dispatching replications", n=len(streams), n_jobs=n_jobs)
    return Parallel(n_jobs=n_jobs)(delayed(_in_worker)(fn, log_level, s) for s in streams)


def resampled(sampler: Callable[[UnitStream], SimInputs], stream: UnitStream) -> SimInputs:
    """
    Draw inputs, redrawing on a fresh child stream when two event times
    coincide (a probability-zero event that floating point can still hit).
    """
    current = stream
    for attempt in range(MAX_RESAMPLES):
        try:
            return sampler(current)
        except DuplicateEventTimeError as e:
            logger.warning("duplicate event time, resampling", stream_id=stream.stream_id,
                           attempt=attempt + 1, time=e.time)
            current = stream.child(RESAMPLE_BRANCH + attempt)
    return sampler(current)


def sample_stationary(t1: float, t2: float, lam: float, stream: UnitStream) -> SimInputs:
    return resampled(partial(stationary_inputs, t1, t2, lam), stream)


def sample_empty_start(t1: float, t2: float, stream: UnitStream) -> SimInputs:
    return resampled(partial(empty_start_inputs, t1, t2), stream)
