#!/usr/bin/env python3
"""
Experiments package for the Hammersley process laboratory
"""

from typing import Dict, List, Type

from ..core.models import ExperimentConfig
from .base import BaseExperiment
from .growth import LisExperiment, LocalPoissonExperiment, UlamExperiment, VtExperiment, WeakPathExperiment
from .second_class import CouplingsExperiment, FluxExperiment, ScpExperiment
from .stationary import BurkeExperiment, DualityExperiment, ReverseExperiment, SimulateExperiment

# Registry of available experiments, in CLI order
AVAILABLE_EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    cls.name: cls
    for cls in (
        SimulateExperiment,
        BurkeExperiment,
        ScpExperiment,
        FluxExperiment,
        CouplingsExperiment,
        ReverseExperiment,
        DualityExperiment,
        LisExperiment,
        UlamExperiment,
        LocalPoissonExperiment,
        WeakPathExperiment,
        VtExperiment,
    )
}


def get_experiment_class(name: str) -> Type[BaseExperiment]:
    if name not in AVAILABLE_EXPERIMENTS:
        raise ValueError(f"Unknown experiment: {name}")
    return AVAILABLE_EXPERIMENTS[name]


def get_experiment(name: str, config: ExperimentConfig) -> BaseExperiment:
    """Get an experiment instance for the specified subcommand"""
    return get_experiment_class(name)(config)


def list_available_experiments() -> List[str]:
    """List all available experiment names"""
    return list(AVAILABLE_EXPERIMENTS.keys())
