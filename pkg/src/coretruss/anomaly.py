"""Core-truss discrepancy detection.

Vertices are described by their truss-profile (the distribution of truss
numbers over incident edges), clustered with k-means, and flagged when
their core number is a Z-score outlier inside their cluster.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .decomposition import CoreResult, TrussResult, core_decompose, truss_decompose
from .graph import Graph

__all__ = [
    "AnomalyReport",
    "ClusterModel",
    "ClusterSummary",
    "DDOptions",
    "OutlierRecord",
    "classify_structure",
    "core_threshold",
    "core_truss_dd",
    "elbow_from_curve",
    "elbow_select",
    "kmeans",
    "max_incident_truss",
    "truss_profiles",
    "zscore_outliers",
]

log = logging.getLogger(__name__)

CLIQUE_LIKE = "clique_like"
GATEKEEPER = "gatekeeper"
OTHER = "other"


def truss_profiles(g: Graph, truss: TrussResult, vertices=None, sparse: bool = False):
    """Truss-profiles of ``vertices`` (default: all).

    Returns ``(vertices, P)`` where row ``i`` of ``P`` is the profile of
    ``vertices[i]``, of length ``truss_degeneracy + 1``. Vertices without
    incident edges have no profile and are dropped with a warning.
    """
    deg = g.degrees
    if vertices is None:
        vertices = np.arange(g.num_vertices)
    vertices = np.asarray(vertices, dtype=np.int64)
    isolated = deg[vertices] == 0
    if isolated.any():
        log.warning("dropping %d isolated vertices without a truss-profile", int(isolated.sum()))
        vertices = vertices[~isolated]
    width = int(truss.truss_degeneracy) + 1
    d = deg[vertices]
    rows = np.repeat(np.arange(len(vertices)), d)
    offsets = np.arange(d.sum()) - np.repeat(np.cumsum(d) - d, d)
    slots = np.repeat(g.indptr[vertices], d) + offsets
    cols = np.asarray(truss.truss_numbers)[g.adj_edge_ids[slots]]
    vals = 1.0 / np.repeat(d, d).astype(np.float64)
    P = sp.csr_matrix((vals, (rows, cols)), shape=(len(vertices), width))
    P.sum_duplicates()
    if not sparse:
        P = P.toarray()
    return vertices, P


def max_incident_truss(g: Graph, truss: TrussResult) -> np.ndarray:
    """Largest truss number among each vertex's edges (-1 for isolated vertices)."""
    out = np.full(g.num_vertices, -1, dtype=np.int64)
    deg = g.degrees
    verts = np.flatnonzero(deg > 0)
    if len(verts):
        vals = np.asarray(truss.truss_numbers)[g.adj_edge_ids]
        out[verts] = np.maximum.reduceat(vals, g.indptr[verts])
    return out


def core_threshold(core_numbers, fraction: float = 0.25) -> int:
    """Core value at index ``floor(fraction * |V|)`` of the ascending core numbers."""
    if isinstance(core_numbers, CoreResult):
        core_numbers = core_numbers.core_numbers
    k = np.sort(np.asarray(core_numbers))
    if len(k) == 0:
        raise ValueError("empty graph has no core threshold")
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must lie in [0, 1)")
    return int(k[int(np.floor(fraction * len(k)))])


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    sse: float
    sse_history: list[float]
    n_iter: int


def _sq_dists(X, x_sq, C):
    # squared Euclidean distances, (n, k)
    cross = X @ C.T
    if sp.issparse(cross):
        cross = cross.toarray()
    d = x_sq[:, None] - 2.0 * np.asarray(cross) + (C * C).sum(axis=1)[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def _row_sq_norms(X):
    if sp.issparse(X):
        return np.asarray(X.multiply(X).sum(axis=1)).ravel()
    return (X * X).sum(axis=1)


def _rows(X, idx):
    r = X[idx]
    return r.toarray() if sp.issparse(r) else np.asarray(r, dtype=np.float64)


def _kmeanspp(X, x_sq, k, rng):
    n = X.shape[0]
    first = int(rng.integers(n))
    C = _rows(X, [first])
    closest = _sq_dists(X, x_sq, C)[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            nxt = int(rng.integers(n))
        c = _rows(X, [nxt])
        C = np.vstack([C, c])
        np.minimum(closest, _sq_dists(X, x_sq, c)[:, 0], out=closest)
    return C


def _centroids(X, labels, k, dim):
    counts = np.bincount(labels, minlength=k)
    ind = sp.csr_matrix((np.ones(len(labels)), (labels, np.arange(len(labels)))),
                        shape=(k, len(labels)))
    sums = ind @ X
    sums = sums.toarray() if sp.issparse(sums) else np.asarray(sums)
    C = np.zeros((k, dim))
    nz = counts > 0
    C[nz] = sums[nz] / counts[nz, None]
    return C, counts


def kmeans(profiles, k: int, seed: int = 0, max_iters: int = 100, tol: float = 1e-8) -> ClusterModel:
    """Lloyd's algorithm with seeded k-means++ initialisation.

    An empty cluster is re-seeded at the point farthest from its current
    centroid (lowest index on ties, each point used at most once).
    ``sse_history`` holds the SSE after every assignment step.
    """
    X = profiles if sp.issparse(profiles) else np.asarray(profiles, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("profiles must be a 2-D array")
    n, dim = X.shape
    if k < 1 or k > n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    x_sq = _row_sq_norms(X)
    C = _kmeanspp(X, x_sq, k, rng)
    history: list[float] = []
    labels = None
    it = 0
    for it in range(1, max_iters + 1):
        D = _sq_dists(X, x_sq, C)
        new_labels = D.argmin(axis=1)
        point_d = D[np.arange(n), new_labels]
        history.append(float(point_d.sum()))
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        C_new, counts = _centroids(X, labels, k, dim)
        empty = np.flatnonzero(counts == 0)
        if len(empty):
            far = point_d.copy()
            for c in empty:
                j = int(far.argmax())
                C_new[c] = _rows(X, [j])[0]
                far[j] = -1.0
        shift = float(np.sqrt(((C_new - C) ** 2).sum(axis=1)).max())
        C = C_new
        if shift < tol:
            break
    else:
        it = max_iters
    # final assignment against the returned centroids
    D = _sq_dists(X, x_sq, C)
    labels = D.argmin(axis=1)
    final = float(D[np.arange(n), labels].sum())
    if final != history[-1]:
        history.append(final)
    return ClusterModel(k, C, labels, history[-1], history, it)


def elbow_from_curve(sse_curve, rel_improvement: float = 0.05) -> int:
    """Smallest k whose step to k+1 cuts SSE by less than ``rel_improvement``."""
    curve = list(sse_curve)
    for i in range(len(curve) - 1):
        base = curve[i]
        gain = (base - curve[i + 1]) / base if base > 0 else 0.0
        if gain < rel_improvement:
            return i + 1
    return len(curve)


def elbow_select(profiles, k_max: int = 30, seed: int = 0, rel_improvement: float = 0.05,
                 max_iters: int = 100, tol: float = 1e-8):
    """Run k-means for k = 1..k_max (seed + k each) and apply :func:`elbow_from_curve`."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    n = profiles.shape[0]
    curve = [kmeans(profiles, k, seed + k, max_iters, tol).sse
             for k in range(1, min(k_max, n) + 1)]
    return elbow_from_curve(curve, rel_improvement), curve


def zscore_outliers(values, cutoff: float = 2.0):
    """Indices with ``|z| > cutoff`` and their Z-scores (population sigma)."""
    x = np.asarray(values, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("empty cluster")
    sigma = float(x.std())
    if sigma == 0.0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    z = (x - x.mean()) / sigma
    idx = np.flatnonzero(np.abs(z) > cutoff)
    return idx, z[idx]


def classify_structure(core: int, max_truss: int, clique_gap: int = 2,
                       gatekeeper_ratio: float = 0.5) -> str:
    if core - max_truss <= clique_gap:
        return CLIQUE_LIKE
    if max_truss <= gatekeeper_ratio * core:
        return GATEKEEPER
    return OTHER


@dataclass
class DDOptions:
    seed: int = 0
    clusters: int | None = None
    kmax: int = 30
    threshold_fraction: float = 0.25
    z_cutoff: float = 2.0
    elbow_improvement: float = 0.05
    clique_gap: int = 2
    gatekeeper_ratio: float = 0.5
    max_iters: int = 100
    tol: float = 1e-8


@dataclass
class ClusterSummary:
    id: int
    size: int
    mu: float
    sigma: float
    histogram: dict[int, int]


@dataclass
class OutlierRecord:
    vertex: int
    label: object
    cluster: int
    core: int
    z: float
    max_truss: int
    structure_class: str


@dataclass
class AnomalyReport:
    threshold: int
    k: int
    clusters: list[ClusterSummary]
    outliers: list[OutlierRecord]
    sse_curve: list[float] = field(default_factory=list)
    assignments: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """JSON-ready dict following the report schema."""
        return {
            "threshold": self.threshold,
            "k": self.k,
            "clusters": [
                {"id": c.id, "size": c.size, "mu": c.mu, "sigma": c.sigma,
                 "histogram": {str(k): v for k, v in sorted(c.histogram.items())}}
                for c in self.clusters
            ],
            "outliers": [
                {"label": str(o.label), "vertex": o.vertex, "cluster": o.cluster, "core": o.core,
                 "z": o.z, "max_truss": o.max_truss, "class": o.structure_class}
                for o in self.outliers
            ],
            "sse_curve": list(self.sse_curve),
        }


def core_truss_dd(g: Graph, options: DDOptions | None = None, core: CoreResult | None = None,
                  truss: TrussResult | None = None) -> AnomalyReport:
    """Run the full detection pipeline and return an :class:`AnomalyReport`."""
    opt = options or DDOptions()
    core = core or core_decompose(g)
    truss = truss or truss_decompose(g)
    K = np.asarray(core.core_numbers)
    thr = core_threshold(K, opt.threshold_fraction)
    keep = np.flatnonzero((K >= thr) & (g.degrees > 0))
    if len(keep) == 0:
        return AnomalyReport(thr, 0, [], [])
    verts, P = truss_profiles(g, truss, keep, sparse=True)

    curve: list[float] = []
    if opt.clusters is None:
        k, curve = elbow_select(P, opt.kmax, opt.seed, opt.elbow_improvement,
                                opt.max_iters, opt.tol)
    else:
        k = int(opt.clusters)
    model = kmeans(P, k, opt.seed + k, opt.max_iters, opt.tol)

    maxT = max_incident_truss(g, truss)
    summaries: list[ClusterSummary] = []
    outliers: list[OutlierRecord] = []
    for c in range(k):
        members = verts[model.assignments == c]
        if len(members) == 0:
            continue
        kc = K[members]
        summaries.append(ClusterSummary(
            c, int(len(members)), float(kc.mean()), float(kc.std()),
            {int(a): int(b) for a, b in sorted(Counter(kc.tolist()).items())}))
        idx, z = zscore_outliers(kc, opt.z_cutoff)
        for i, zi in zip(idx.tolist(), z.tolist()):
            v = int(members[i])
            outliers.append(OutlierRecord(
                v, g.labels[v], c, int(K[v]), float(zi), int(maxT[v]),
                classify_structure(int(K[v]), int(maxT[v]), opt.clique_gap,
                                   opt.gatekeeper_ratio)))
    outliers.sort(key=lambda o: o.vertex)
    assignments = dict(zip(verts.tolist(), model.assignments.tolist()))
    return AnomalyReport(thr, k, summaries, outliers, curve, assignments)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["threshold", "clusters", "outliers", "sse_curve"],
    "properties": {
        "threshold": {"type": "integer"},
        "k": {"type": "integer", "minimum": 0},
        "clusters": {"type": "array", "items": {
            "type": "object",
            "required": ["id", "size", "mu", "sigma", "histogram"],
            "properties": {
                "id": {"type": "integer"},
                "size": {"type": "integer", "minimum": 1},
                "mu": {"type": "number"},
                "sigma": {"type": "number", "minimum": 0},
                "histogram": {"type": "object",
                              "additionalProperties": {"type": "integer", "minimum": 1}},
            }}},
        "outliers": {"type": "array", "items": {
            "type": "object",
            "required": ["label", "cluster", "core", "z", "max_truss", "class"],
            "properties": {
                "label": {"type": "string"},
                "cluster": {"type": "integer"},
                "core": {"type": "integer"},
                "z": {"type": "number"},
                "max_truss": {"type": "integer"},
                "class": {"enum": [CLIQUE_LIKE, GATEKEEPER, OTHER]},
            }}},
        "sse_curve": {"type": "array", "items": {"type": "number", "minimum": 0}},
    },
}
