#!/usr/bin/env python3
"""
Data models for the Hammersley process laboratory
"""

import math
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .errors import InvalidParameterError


class CouplingSpec(BaseModel):
    """Thick/thin modification of a stationary run with source rate gamma"""
    gamma: float = Field(..., description="Source intensity of the base run")
    delta: float = Field(..., description="Source intensity of the modified run")
    mode: Literal["thicken_sources", "thin_sources"] = Field(
        "thicken_sources", description="Whether the modified run gains or loses sources"
    )

    @model_validator(mode="after")
    def _check_mode(self) -> "CouplingSpec":
        if not (self.gamma > 0 and self.delta > 0) or not math.isfinite(self.gamma + self.delta):
            raise InvalidParameterError(f"gamma and delta must be positive, got {self.gamma}, {self.delta}")
        if self.mode == "thicken_sources" and self.delta < self.gamma:
            raise InvalidParameterError("thicken_sources requires delta >= gamma")
        if self.mode == "thin_sources" and self.delta > self.gamma:
            raise InvalidParameterError("thin_sources requires delta <= gamma")
        return self

    @classmethod
    def for_rates(cls, gamma: float, delta: float) -> "CouplingSpec":
        """Pick the mode implied by the ordering of the two rates"""
        mode = "thicken_sources" if delta >= gamma else "thin_sources"
        return cls(gamma=gamma, delta=delta, mode=mode)


class TestReport(BaseModel):
    """Outcome of one statistical or pathwise check"""
    __test__: ClassVar[bool] = False
    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., description="Check label")
    statistic: float = Field(..., description="Test statistic or violation count")
    p_value: float = Field(..., ge=0.0, le=1.0, description="p-value (1 or 0 for pathwise checks)")
    passed: bool = Field(..., alias="pass", description="p_value >= alpha")
    alpha: float = Field(0.01, gt=0.0, lt=1.0, description="Significance level")
    n: int = Field(..., ge=0, description="Sample size")
    notes: str = Field("", description="Free-form context")

    @model_validator(mode="after")
    def _pass_matches_p(self) -> "TestReport":
        if self.passed != (self.p_value >= self.alpha):
            raise ValueError("pass flag must equal p_value >= alpha")
        return self

    @classmethod
    def from_p(cls, name: str, statistic: float, p_value: float, n: int,
               alpha: float = 0.01, notes: str = "") -> "TestReport":
        p_value = float(p_value)
        p_value = min(max(p_value, 0.0), 1.0) if math.isfinite(p_value) else 0.0
        return cls(name=name, statistic=float(statistic), p_value=p_value,
                   passed=p_value >= alpha, alpha=alpha, n=int(n), notes=notes)

    @classmethod
    def pathwise(cls, name: str, violations: int, n: int, alpha: float = 0.01,
                 notes: str = "") -> "TestReport":
        """Exact check: p = 1 when nothing was violated, 0 otherwise"""
        return cls.from_p(name, violations, 1.0 if violations == 0 else 0.0, n, alpha, notes)

    @classmethod
    def band(cls, name: str, value: float, lo: float, hi: float, n: int,
             alpha: float = 0.01, notes: str = "") -> "TestReport":
        """Acceptance band check reported in the same shape as a test"""
        inside = math.isfinite(value) and lo <= value <= hi
        detail = f"band [{lo:g}, {hi:g}]"
        notes = f"{detail}; {notes}" if notes else detail
        return cls.from_p(name, value, 1.0 if inside else 0.0, n, alpha, notes)


class ExperimentConfig(BaseModel):
    """Parameters of one experiment run"""
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    experiment: str = Field(..., description="Subcommand name")
    lambda_: float = Field(1.0, alias="lambda", description="Source intensity (sinks use 1/lambda)")
    gamma: float = Field(1.0, description="Base source intensity of a coupled pair")
    delta: float = Field(1.5, description="Modified source intensity of a coupled pair")
    t1: float = Field(50.0, description="Box width")
    t2: float = Field(50.0, description="Box height")
    a: float = Field(1.0, description="Ray slope for local statistics")
    replications: int = Field(100, description="Number of replications")
    seed: int = Field(20240101, description="Base seed")
    output_dir: Optional[Path] = Field(None, description="Output directory (default results/<experiment>)")
    alpha: float = Field(0.01, description="Significance level")

    t_values: List[float] = Field(default_factory=list, description="Time scales for sweeps")
    x_values: List[float] = Field(default_factory=list, description="Flux table abscissae")
    lambdas: List[float] = Field(default_factory=list, description="Intensity sweep")
    grid: List[Tuple[float, float]] = Field(default_factory=list, description="V_t grid points")
    window: float = Field(50.0, description="Half-width of the local-poisson window")
    trials: int = Field(1000, description="Pathwise sweep size")
    samples: int = Field(100_000, description="Monte-Carlo samples for duality")
    n_jobs: int = Field(1, description="joblib workers")
    box_margin: float = Field(1.3, description="Box oversizing factor for second-class runs")

    @field_validator("lambda_", "gamma", "delta", "t1", "t2", "a", "window", "box_margin")
    @classmethod
    def _positive(cls, value: float, info) -> float:
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{info.field_name} must be positive")
        return value

    @field_validator("replications", "trials", "samples")
    @classmethod
    def _at_least_one(cls, value: int, info) -> int:
        if value < 1:
            raise ValueError(f"{info.field_name} must be >= 1")
        return value

    @field_validator("alpha")
    @classmethod
    def _significance(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        return value

    @field_validator("n_jobs")
    @classmethod
    def _workers(cls, value: int) -> int:
        if value == 0:
            raise ValueError("n_jobs must be nonzero")
        return value

    @field_validator("t_values", "x_values", "lambdas")
    @classmethod
    def _positive_list(cls, values: List[float], info) -> List[float]:
        if any(not (math.isfinite(v) and v > 0) for v in values):
            raise ValueError(f"{info.field_name} entries must be positive")
        return values

    @field_validator("grid")
    @classmethod
    def _positive_grid(cls, values: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        if any(not (x > 0 and y > 0) for x, y in values):
            raise ValueError("grid entries must be positive")
        return values

    @property
    def lam(self) -> float:
        return self.lambda_

    @property
    def out_dir(self) -> Path:
        return self.output_dir if self.output_dir is not None else Path("results") / self.experiment

    def echo(self) -> Dict[str, Any]:
        """JSON-friendly copy with the user-facing key names"""
        return self.model_dump(mode="json", by_alias=True)


class PlotSeries(BaseModel):
    label: str
    x: List[float]
    y: List[float]
    style: Literal["step", "line", "scatter"] = "line"


class PlotSpec(BaseModel):
    """One SVG figure"""
    name: str = Field(..., description="File stem")
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "y"
    series: List[PlotSeries] = Field(default_factory=list)


class RunManifest(BaseModel):
    """Everything one experiment produced"""
    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    experiment: str = Field(..., description="Subcommand name")
    config: Dict[str, Any] = Field(default_factory=dict, description="Config echo")
    stream_ids: List[int] = Field(default_factory=list, description="Per-replication stream ids")
    files: List[str] = Field(default_factory=list, description="Produced files, relative to output_dir")
    reports: List[TestReport] = Field(default_factory=list)

    tables: Dict[str, pd.DataFrame] = Field(default_factory=dict, exclude=True)
    figures: List[PlotSpec] = Field(default_factory=list, exclude=True)

    @computed_field(alias="pass")
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def report_document(self) -> Dict[str, Any]:
        """The report.json body"""
        return {
            "experiment": self.experiment,
            "config": self.config,
            "reports": [r.model_dump(by_alias=True) for r in self.reports],
            "pass": self.passed,
        }
