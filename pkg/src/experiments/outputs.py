#!/usr/bin/env python3
"""
Writing experiment artifacts: one CSV per table, report.json, one SVG per
figure and manifest.json listing every produced file.

Identical manifests produce byte-identical files: CSVs use a fixed float
format, JSON keeps insertion order, and SVGs carry a fixed hash salt and no
date.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, List, Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..core.errors import OutputError  # noqa: E402
from ..core.models import PlotSpec, RunManifest  # noqa: E402
from ..core.point_process import CSV_FLOAT_FORMAT  # noqa: E402

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
MANIFEST_FILE = "manifest.json"
SVG_HASH_SALT = "hammersley"


def _json_safe(value: Any) -> Any:
    """NaN and infinities become null so the documents stay strict JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _write_json(document: Any, path: Path):
    path.write_text(json.dumps(_json_safe(document), indent=2, allow_nan=False) + "\n", encoding="utf-8")


def render_figure(spec: PlotSpec, path: Path):
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 5))
        try:
            for series in spec.series:
                if series.style == "step":
                    ax.step(series.x, series.y, where="post", label=series.label, linewidth=0.8)
                elif series.style == "scatter":
                    ax.scatter(series.x, series.y, s=4, label=series.label)
                else:
                    ax.plot(series.x, series.y, label=series.label, linewidth=1.0)
            ax.set_title(spec.title)
            ax.set_xlabel(spec.xlabel)
            ax.set_ylabel(spec.ylabel)
            if any(s.label for s in spec.series):
                ax.legend(fontsize="small")
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)


def emit_outputs(manifest: RunManifest, output_dir: Optional[Union[str, Path]] = None) -> List[Path]:
    """Write every artifact of a finished run and return the paths written"""
    output_dir = Path(output_dir if output_dir is not None else manifest.config.get("output_dir") or "results")
    written: List[Path] = []
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        for name, frame in manifest.tables.items():
            path = output_dir / f"{name}.csv"
            frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
            written.append(path)
        for spec in manifest.figures:
            path = output_dir / f"{spec.name}.svg"
            render_figure(spec, path)
            written.append(path)

        report_path = output_dir / REPORT_FILE
        _write_json(manifest.report_document(), report_path)
        written.append(report_path)

        manifest_path = output_dir / MANIFEST_FILE
        manifest.files = [p.name for p in written] + [MANIFEST_FILE]
        _write_json(manifest.model_dump(mode="json", by_alias=True), manifest_path)
        written.append(manifest_path)
    except OSError as e:
        raise OutputError(f"cannot write outputs to {output_dir}: {e}") from e

    logger.info("wrote %d files to %s", len(written), output_dir)
    return written
