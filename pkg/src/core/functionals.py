#!/usr/bin/env python3
"""
Configuration functionals for the generator and its adjoint.

A functional takes an (m, n) array, m configurations of n particles each,
and returns m values. Working on whole batches lets the quadrature in
``engine.generator_apply_batch`` evaluate every node of every sample in one
call.
"""

from abc import ABC, abstractmethod

import numpy as np

from .errors import InvalidParameterError


class ConfigFunctional(ABC):
    """Bounded function on finite point configurations"""

    @abstractmethod
    def __call__(self, configs: np.ndarray) -> np.ndarray:
        pass


class ConstantFunctional(ConfigFunctional):
    def __init__(self, value: float = 1.0):
        self.value = float(value)

    def __call__(self, configs: np.ndarray) -> np.ndarray:
        return np.full(configs.shape[0], self.value)

    def __repr__(self) -> str:
        return f"ConstantFunctional({self.value})"


class CountFunctional(ConfigFunctional):
    """Number of particles"""

    def __call__(self, configs: np.ndarray) -> np.ndarray:
        return np.full(configs.shape[0], float(configs.shape[1]))

    def __repr__(self) -> str:
        return "CountFunctional()"


class ExponentialFunctional(ConfigFunctional):
    """exp(-a * sum of positions)"""

    def __init__(self, a: float):
        if not a > 0:
            raise InvalidParameterError(f"exponential rate must be positive, got {a}")
        self.a = float(a)

    def __call__(self, configs: np.ndarray) -> np.ndarray:
        return np.exp(-self.a * configs.sum(axis=1))

    def __repr__(self) -> str:
        return f"ExponentialFunctional({self.a})"
