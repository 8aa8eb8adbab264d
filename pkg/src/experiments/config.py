#!/usr/bin/env python3
"""
Experiment configuration loading

Config files are plain ``key=value`` lines with ``#`` comments, read with
python-dotenv's stream parser so malformed lines can be reported by number.
Precedence: model defaults < experiment defaults < file < command-line flags.
"""

import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from dotenv.parser import parse_stream
from pydantic import ValidationError

from ..core.errors import ConfigParseError
from ..core.models import ExperimentConfig

logger = logging.getLogger(__name__)

KEY_ALIASES = {
    "lambda": "lambda_",
    "reps": "replications",
    "out": "output_dir",
    "output": "output_dir",
    "jobs": "n_jobs",
}
LIST_KEYS = ("t_values", "x_values", "lambdas")
GRID_KEYS = ("grid",)


def normalize_key(key: str) -> str:
    key = key.strip().lower().replace("-", "_")
    return KEY_ALIASES.get(key, key)


def parse_float_list(text: str) -> List[float]:
    """'250, 500,1000' -> [250.0, 500.0, 1000.0]"""
    return [float(part) for part in text.replace(";", ",").split(",") if part.strip()]


def parse_grid(text: str) -> List[Tuple[float, float]]:
    """'1:1;4:1' -> [(1.0, 1.0), (4.0, 1.0)]"""
    grid = []
    for item in text.split(";"):
        if not item.strip():
            continue
        x, y = item.split(":")
        grid.append((float(x), float(y)))
    return grid


def coerce_value(key: str, value: Any) -> Any:
    """Strings for list-valued keys become lists; everything else is left to pydantic"""
    if not isinstance(value, str):
        return value
    if key in LIST_KEYS:
        return parse_float_list(value)
    if key in GRID_KEYS:
        return parse_grid(value)
    return value.strip()


def binding_line(binding) -> int:
    """Line of the first non-blank character; dotenv folds leading blank lines into the next binding"""
    text = binding.original.string
    leading = text[:len(text) - len(text.lstrip())]
    return binding.original.line + leading.count("\n")


def parse_config_text(text: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Values and the line each key was set on"""
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    known = set(ExperimentConfig.model_fields)
    for binding in parse_stream(io.StringIO(text)):
        line = binding_line(binding)
        if binding.error:
            raise ConfigParseError(f"cannot parse {binding.original.string.strip()!r}", line)
        if binding.key is None:
            continue
        key = normalize_key(binding.key)
        if key not in known:
            raise ConfigParseError(f"unknown key {binding.key!r}", line)
        if binding.value is None:
            raise ConfigParseError(f"key {binding.key!r} has no value", line)
        try:
            values[key] = coerce_value(key, binding.value)
        except ValueError as e:
            raise ConfigParseError(f"bad value for {binding.key!r}: {e}", line) from e
        lines[key] = line
    return values, lines


def load_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None,
                experiment: str = "simulate", defaults: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Merge experiment defaults, an optional config file and flag overrides into an ExperimentConfig"""
    merged: Dict[str, Any] = {normalize_key(k): v for k, v in (defaults or {}).items()}
    lines: Dict[str, int] = {}

    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigParseError(f"cannot read config file {path}: {e}") from e
        file_values, lines = parse_config_text(text)
        file_experiment = file_values.pop("experiment", experiment)
        if file_experiment != experiment:
            raise ConfigParseError(
                f"config file is for {file_experiment!r}, not {experiment!r}", lines.get("experiment")
            )
        merged.update(file_values)
        logger.info("loaded %d keys from %s", len(file_values), path)

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = normalize_key(key)
        try:
            merged[key] = coerce_value(key, value)
        except ValueError as e:
            raise ConfigParseError(f"bad value for --{key.rstrip('_').replace('_', '-')}: {e}") from e
        lines.pop(key, None)

    explicit = set(lines) | {normalize_key(k) for k, v in (overrides or {}).items() if v is not None}
    if "lambda_" in explicit and "lambdas" not in explicit and "lambdas" in merged:
        # a single intensity replaces a default sweep
        merged["lambdas"] = [merged["lambda_"]]

    merged["experiment"] = experiment
    try:
        return ExperimentConfig(**merged)
    except ValidationError as e:
        first = e.errors()[0]
        field = normalize_key(str(first["loc"][0])) if first["loc"] else ""
        raise ConfigParseError(f"{field}: {first['msg']}", lines.get(field)) from e
