"""Vertex-interplay (VI) and edge-interplay (EI) tables.

VI: for each vertex-measure value ``c``, statistics over the vertices with
that value of the minimum and maximum edge measure among their incident
edges. EI: for each unordered pair of endpoint values, the mean edge
measure of the edges joining them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import CoreResult, TrussResult
from .graph import Graph

__all__ = [
    "EDGE_MEASURES",
    "VERTEX_MEASURES",
    "EICell",
    "MeasureSelection",
    "VIRow",
    "edge_measure_values",
    "ei_table",
    "incident_min_max",
    "vertex_measure_values",
    "vi_table",
]

VERTEX_MEASURES = ("core", "degree")
EDGE_MEASURES = ("truss", "triangle_support")
_EDGE_ALIASES = {"triangles": "triangle_support"}


@dataclass(frozen=True)
class MeasureSelection:
    vertex_measure: str = "core"
    edge_measure: str = "truss"

    def __post_init__(self):
        em = _EDGE_ALIASES.get(self.edge_measure, self.edge_measure)
        object.__setattr__(self, "edge_measure", em)
        if self.vertex_measure not in VERTEX_MEASURES:
            raise ValueError(f"vertex_measure must be one of {VERTEX_MEASURES}")
        if em not in EDGE_MEASURES:
            raise ValueError(f"edge_measure must be one of {EDGE_MEASURES}")


@dataclass(frozen=True)
class VIRow:
    value: int
    population: int
    min_mean: float
    min_q1: float
    min_q3: float
    max_mean: float
    max_q1: float
    max_q3: float


@dataclass(frozen=True)
class EICell:
    value_lo: int
    value_hi: int
    population: int
    mean: float


def vertex_measure_values(g: Graph, core: CoreResult | None, measure: str) -> np.ndarray:
    if measure == "degree":
        return g.degrees
    if core is None:
        raise ValueError("core measure requested without a CoreResult")
    return np.asarray(core.core_numbers)


def edge_measure_values(g: Graph, truss: TrussResult | None, measure: str) -> np.ndarray:
    measure = _EDGE_ALIASES.get(measure, measure)
    if truss is None:
        if measure == "triangle_support":
            from .decomposition import triangle_supports
            return triangle_supports(g)
        raise ValueError("truss measure requested without a TrussResult")
    if measure == "truss":
        return np.asarray(truss.truss_numbers)
    return np.asarray(truss.triangle_support)


def incident_min_max(g: Graph, edge_values: np.ndarray):
    """(vertices with d > 0, min, max) of ``edge_values`` over incident edges."""
    deg = g.degrees
    verts = np.flatnonzero(deg > 0)
    if len(verts) == 0:
        empty = np.zeros(0, dtype=np.asarray(edge_values).dtype)
        return verts, empty, empty
    vals = np.asarray(edge_values)[g.adj_edge_ids]
    starts = g.indptr[verts]
    return verts, np.minimum.reduceat(vals, starts), np.maximum.reduceat(vals, starts)


def vi_table(g: Graph, core: CoreResult | None, truss: TrussResult | None,
             sel: MeasureSelection = MeasureSelection()) -> list[VIRow]:
    """One :class:`VIRow` per vertex-measure value, ascending.

    Quartiles are linearly interpolated between order statistics.
    Isolated vertices are skipped.
    """
    vv = vertex_measure_values(g, core, sel.vertex_measure)
    ev = edge_measure_values(g, truss, sel.edge_measure)
    verts, lo, hi = incident_min_max(g, ev)
    if len(verts) == 0:
        return []
    cls = vv[verts]
    order = np.argsort(cls, kind="stable")
    cls, lo, hi = cls[order], lo[order], hi[order]
    values, starts = np.unique(cls, return_index=True)
    bounds = np.append(starts, len(cls))
    rows = []
    for c, a, b in zip(values.tolist(), bounds[:-1], bounds[1:]):
        mn = lo[a:b].astype(np.float64)
        mx = hi[a:b].astype(np.float64)
        q_mn = np.percentile(mn, [25, 75])
        q_mx = np.percentile(mx, [25, 75])
        rows.append(VIRow(int(c), int(b - a),
                          float(mn.mean()), float(q_mn[0]), float(q_mn[1]),
                          float(mx.mean()), float(q_mx[0]), float(q_mx[1])))
    return rows


def ei_table(g: Graph, core: CoreResult | None, truss: TrussResult | None,
             sel: MeasureSelection = MeasureSelection()) -> list[EICell]:
    """Mean edge measure per unordered endpoint-value pair, sorted by pair."""
    if g.num_edges == 0:
        return []
    vv = vertex_measure_values(g, core, sel.vertex_measure)
    ev = np.asarray(edge_measure_values(g, truss, sel.edge_measure), dtype=np.float64)
    a = vv[g.edges[:, 0]]
    b = vv[g.edges[:, 1]]
    pairs = np.column_stack([np.minimum(a, b), np.maximum(a, b)])
    keys, inv, counts = np.unique(pairs, axis=0, return_inverse=True, return_counts=True)
    sums = np.bincount(inv.ravel(), weights=ev, minlength=len(keys))
    return [EICell(int(lo), int(hi), int(n), float(s / n))
            for (lo, hi), n, s in zip(keys.tolist(), counts.tolist(), sums.tolist())]
