"""
Input readers: whitespace edge lists and geolocation CSVs.
"""

import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd
from pydantic import ValidationError

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from engine.experiments import NodeGeo
from engine.graph_core import Graph, GraphError, build_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IngestReport:
    graph: Graph
    lines: int
    loops_dropped: int
    duplicates_dropped: int

    def summary(self) -> str:
        return (f"{self.lines} edge lines -> {self.graph.n} nodes, {self.graph.edge_count} edges "
                f"({self.loops_dropped} loops, {self.duplicates_dropped} duplicates dropped)")


@dataclass
class GeoReport:
    """Coordinates by label; labels not found in the graph are listed, not fatal."""
    coords: Dict[str, NodeGeo]
    unmatched: List[str] = field(default_factory=list)

    def by_node(self, g: Graph) -> Dict[int, NodeGeo]:
        index = {g.label(v): v for v in range(g.n)}
        return {index[label]: geo for label, geo in self.coords.items() if label in index}


def load_edge_list(path: str) -> IngestReport:
    """
    Read a whitespace-separated edge list.

    One 'u v' pair per line, optionally followed by an edge attribute.
    Lines starting with '#' and blank lines are skipped.

    Args:
        path: File path

    Returns:
        IngestReport with the graph and line/drop counts
    """
    raw_edges = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            tokens = text.split()
            if len(tokens) not in (2, 3):
                raise GraphError(f"line {lineno}: expected 2 or 3 columns, got {len(tokens)}")
            raw_edges.append(tuple(tokens))

    if not raw_edges:
        raise GraphError(f"no edges in {path}")
    built = build_graph(raw_edges)
    report = IngestReport(graph=built.graph, lines=len(raw_edges),
                          loops_dropped=built.loops_dropped,
                          duplicates_dropped=built.duplicates_dropped)
    logger.info("%s: %s", path, report.summary())
    return report


def load_geo(path: str, graph: Optional[Graph] = None) -> GeoReport:
    """
    Read a 'label,lat,lon' CSV with a header row.

    Args:
        path: File path
        graph: When given, labels absent from the graph are reported

    Returns:
        GeoReport
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.ParserError as exc:
        raise GraphError(f"malformed geo file {path}: {exc}")
    except pd.errors.EmptyDataError:
        raise GraphError(f"geo file {path} is empty")
    if frame.shape[1] != 3:
        raise GraphError(f"geo file needs 3 columns (label,lat,lon), got {frame.shape[1]}")

    coords: Dict[str, NodeGeo] = {}
    for row, (label, lat, lon) in enumerate(frame.itertuples(index=False, name=None), start=1):
        label = label.strip()
        if not label:
            raise GraphError(f"row {row}: missing label")
        try:
            lat_value, lon_value = float(lat), float(lon)
        except ValueError:
            raise GraphError(f"row {row}: coordinates must be numbers, got ({lat!r}, {lon!r})")
        try:
            coords[label] = NodeGeo(label=label, lat=lat_value, lon=lon_value)
        except ValidationError:
            raise GraphError(f"row {row}: coordinate out of range ({lat_value}, {lon_value})")

    unmatched: List[str] = []
    if graph is not None:
        known = {graph.label(v) for v in range(graph.n)}
        unmatched = sorted(label for label in coords if label not in known)
        if unmatched:
            logger.warning("%d geo labels do not match any node", len(unmatched))
    return GeoReport(coords=coords, unmatched=unmatched)
