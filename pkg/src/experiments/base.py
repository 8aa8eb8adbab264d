#!/usr/bin/env python3
"""
Abstract base experiment
Defines the lifecycle shared by every subcommand: build the config echo,
run the replications, collect reports, tables and figures into a manifest.
"""

import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Callable, ClassVar, Dict, List, Optional, Sequence, TypeVar

import pandas as pd
import structlog

from ..core.errors import HammersleyError
from ..core.models import ExperimentConfig, PlotSpec, RunManifest, TestReport
from ..core.point_process import UnitStream
from .replication import run_replications

T = TypeVar("T")


class BaseExperiment(ABC):
    """Abstract base class for all experiment recipes"""

    name: ClassVar[str] = ""
    description: ClassVar[str] = ""
    # layered above the model defaults and below the config file
    defaults: ClassVar[Dict[str, Any]] = {}

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.logger = structlog.get_logger().bind(experiment=self.name, seed=config.seed)
        self.reports: List[TestReport] = []
        self.tables: Dict[str, pd.DataFrame] = {}
        self.figures: List[PlotSpec] = []
        self.stream_ids: List[int] = []

    @abstractmethod
    def execute(self):
        """Run the replications and record reports, tables and figures"""
        pass

    def replicate(self, fn: Callable[[UnitStream], T], n: int, start: Optional[int] = None) -> List[T]:
        """fn on n consecutive streams; ids continue from the last batch unless start is given"""
        if start is None:
            start = max(self.stream_ids) + 1 if self.stream_ids else 0
        ids = list(range(start, start + n))
        results = run_replications(fn, self.config.seed, ids, n_jobs=self.config.n_jobs,
                                   log_level=logging.getLogger().getEffectiveLevel())
        self.stream_ids.extend(ids)
        return results

    def report(self, *reports: TestReport):
        for r in reports:
            self.reports.append(r)
            self.logger.info("check", check=r.name, statistic=round(r.statistic, 6),
                             p_value=round(r.p_value, 6), passed=r.passed)

    def extend(self, reports: Sequence[TestReport]):
        self.report(*reports)

    def table(self, name: str, frame: pd.DataFrame):
        self.tables[name] = frame

    def figure(self, spec: PlotSpec):
        self.figures.append(spec)

    def run(self) -> RunManifest:
        """Execute the recipe and wrap everything it produced in a manifest"""
        self.logger.info("experiment started", replications=self.config.replications, n_jobs=self.config.n_jobs)
        started = time.time()
        try:
            self.execute()
        except HammersleyError as e:
            self.logger.error("experiment failed", error=str(e), error_type=type(e).__name__)
            raise
        elapsed = time.time() - started
        manifest = RunManifest(
            experiment=self.name,
            config=self.config.echo(),
            stream_ids=sorted(set(self.stream_ids)),
            reports=self.reports,
            tables=self.tables,
            figures=self.figures,
        )
        self.logger.info(
            "experiment finished",
            seconds=round(elapsed, 2),
            checks=len(self.reports),
            failed=sum(not r.passed for r in self.reports),
            passed=manifest.passed,
        )
        return manifest
