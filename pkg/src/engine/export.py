"""
Result writers: curvature CSVs, experiment series, histograms and stats tables.
Every file carries a '#'-prefixed meta header (CSV) or a "meta" object (JSON).
"""

import json
import logging
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

import pandas as pd

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import KAPPA_DIGITS, __version__
from engine.experiments import ExperimentSeries, Histogram
from engine.ricci import CurvatureMap

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def format_kappa(value: Fraction, digits: int = KAPPA_DIGITS) -> str:
    """Fixed-point decimal with exactly `digits` fractional digits, rounded exactly."""
    scale = 10 ** digits
    scaled = round(Fraction(value) * scale)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _prepare(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _with_version(meta: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(meta)
    out.setdefault("version", __version__)
    return out


def _write_frame(frame: pd.DataFrame, meta: Dict[str, Any], path: str, fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    _prepare(path)
    meta = _with_version(meta)
    if fmt == "json":
        payload = {"meta": meta, "columns": list(frame.columns),
                   "rows": frame.to_dict(orient="records")}
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(payload, handle, indent=2, default=str)
            handle.write("\n")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for key in sorted(meta):
            handle.write(f"# {key}: {meta[key]}\n")
        frame.to_csv(handle, index=False, lineterminator="\n")


def curvature_frame(cmap: CurvatureMap) -> pd.DataFrame:
    """src, dst, kappa rows in canonical edge order, with original labels."""
    g = cmap.graph
    rows = {
        "src": [g.label(u) for u, _ in cmap.edge_values],
        "dst": [g.label(v) for _, v in cmap.edge_values],
        "kappa": [format_kappa(k) for k in cmap.edge_values.values()],
    }
    if g.edge_attrs:
        rows["backbone"] = [g.edge_attrs.get(e, "") for e in cmap.edge_values]
    return pd.DataFrame(rows)


def write_curvatures(cmap: CurvatureMap, path: str, fmt: str = "csv",
                     meta: Dict[str, Any] = None) -> None:
    """
    Write one row per edge.

    Args:
        cmap: Curvature map
        path: Output file
        fmt: 'csv' or 'json'
        meta: Extra header fields (graph source, seed)
    """
    meta = dict(meta or {})
    meta.update({"alpha": str(cmap.alpha), "fingerprint": cmap.graph.fingerprint(),
                 "edges": len(cmap)})
    _write_frame(curvature_frame(cmap), meta, path, fmt)
    logger.info("wrote %d curvatures to %s", len(cmap), path)


def read_curvatures(path: str) -> List[Tuple[str, str, str]]:
    """(src, dst, kappa-string) rows of a curvature CSV."""
    # only the leading meta block is skipped; labels may contain '#'
    frame = pd.read_csv(path, skiprows=len(read_meta(path)), dtype=str, keep_default_na=False)
    return list(frame[["src", "dst", "kappa"]].itertuples(index=False, name=None))


def series_frame(result: Union[ExperimentSeries, Histogram]) -> pd.DataFrame:
    if isinstance(result, Histogram):
        return pd.DataFrame({
            "bin_lo": result.bin_edges[:-1],
            "bin_hi": result.bin_edges[1:],
            "count": result.counts,
        })
    columns: Dict[str, Sequence[float]] = {result.x_label: result.xs}
    columns.update(result.extra)
    columns[result.y_label] = result.ys
    return pd.DataFrame(columns)


def write_series(result: Union[ExperimentSeries, Histogram], path: str, fmt: str = "csv") -> None:
    """
    Write an experiment series or histogram.

    Args:
        result: ExperimentSeries or Histogram
        path: Output file
        fmt: 'csv' or 'json'
    """
    meta = dict(result.meta)
    if isinstance(result, ExperimentSeries):
        meta.setdefault("kind", result.kind)
    else:
        meta.setdefault("kind", "histogram")
    _write_frame(series_frame(result), meta, path, fmt)
    logger.info("wrote %s to %s", meta["kind"], path)


def write_table(rows: List[Dict[str, Any]], path: str, fmt: str = "csv",
                meta: Dict[str, Any] = None) -> None:
    """Write stats rows (one dict per row)."""
    _write_frame(pd.DataFrame(rows), meta or {"kind": "stats"}, path, fmt)


def read_meta(path: str) -> Dict[str, str]:
    """Meta header of a CSV written by this module."""
    meta = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition(": ")
            meta[key] = value
    return meta
