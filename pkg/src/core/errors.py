#!/usr/bin/env python3
"""
Exception hierarchy for the Hammersley process laboratory
"""

from typing import Optional


class HammersleyError(Exception):
    """Base exception for simulator and experiment errors"""
    pass


class InvalidParameterError(HammersleyError):
    """A rate, probability or intensity is outside its allowed range"""
    pass


class InvalidInputError(HammersleyError):
    """Input data violates a domain, ordering or pairing requirement"""
    pass


class DuplicateEventTimeError(InvalidInputError):
    """Two events of a simulation share a time value"""
    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class EvaluationError(HammersleyError):
    """A configuration functional produced a non-finite value"""
    pass


class SizeLimitError(HammersleyError):
    """A brute-force oracle was asked for an instance above its cap"""
    def __init__(self, message: str, size: int, limit: int):
        super().__init__(message)
        self.size = size
        self.limit = limit


class ConfigParseError(HammersleyError):
    """Malformed experiment configuration"""
    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class OutputError(HammersleyError):
    """Experiment outputs could not be written"""
    pass
