"""scikit-learn style wrappers around the decompositions and the detector."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, OutlierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .anomaly import DDOptions, core_truss_dd, kmeans
from .decomposition import core_decompose, truss_decompose
from .graph import Graph
from .interplay import incident_min_max

__all__ = ["CoreTrussDD", "CoreTrussDecomposer", "LloydKMeans", "check_graph"]


def check_graph(X) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a Graph, an ``(m, 2)`` array-like of integer edges (vertex
    count is ``max id + 1``) or any object with an ``edges()`` method
    (e.g. a networkx graph, whose node labels are kept).
    """
    if isinstance(X, Graph):
        return X
    if hasattr(X, "edges") and callable(X.edges) and hasattr(X, "nodes"):
        g = Graph.from_edges(X.edges())
        missing = [v for v in X.nodes() if v not in g.label_map]
        if missing:
            labels = list(g.labels) + missing
            return Graph(len(labels), g.edges, labels)
        return g
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (m, 2) edge array, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("edge array must hold integer vertex ids")
    if arr.size and arr.min() < 0:
        raise ValueError("vertex ids must be nonnegative")
    n = int(arr.max()) + 1 if arr.size else 0
    return Graph(n, arr)


class CoreTrussDecomposer(TransformerMixin, BaseEstimator):
    """Per-vertex core/truss features.

    ``transform`` returns one row per vertex:
    ``[core, degree, min incident truss, max incident truss]``
    (truss columns are -1 for isolated vertices).
    """

    def fit(self, X, y=None):
        g = check_graph(X)
        self.graph_ = g
        self.core_ = core_decompose(g)
        self.truss_ = truss_decompose(g)
        self.core_numbers_ = self.core_.core_numbers
        self.truss_numbers_ = self.truss_.truss_numbers
        self.core_degeneracy_ = self.core_.core_degeneracy
        self.truss_degeneracy_ = self.truss_.truss_degeneracy
        return self

    def transform(self, X):
        check_is_fitted(self, "core_")
        g = check_graph(X)
        if g is not self.graph_:
            core, truss = core_decompose(g), truss_decompose(g)
        else:
            core, truss = self.core_, self.truss_
        out = np.full((g.num_vertices, 4), -1, dtype=np.int64)
        out[:, 0] = core.core_numbers
        out[:, 1] = g.degrees
        verts, lo, hi = incident_min_max(g, truss.truss_numbers)
        out[verts, 2] = lo
        out[verts, 3] = hi
        return out


class LloydKMeans(ClusterMixin, BaseEstimator):
    def __init__(self, n_clusters=8, random_state=0, max_iter=100, tol=1e-8):
        self.n_clusters = n_clusters
        self.random_state = random_state
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        model = kmeans(X, self.n_clusters, self.random_state, self.max_iter, self.tol)
        self.cluster_centers_ = model.centroids
        self.labels_ = model.assignments
        self.inertia_ = model.sse
        self.sse_history_ = model.sse_history
        self.n_iter_ = model.n_iter
        return self

    def predict(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = np.asarray(X, dtype=np.float64)
        d = ((X[:, None, :] - self.cluster_centers_[None, :, :]) ** 2).sum(axis=2)
        return d.argmin(axis=1)


class CoreTrussDD(OutlierMixin, BaseEstimator):
    """Core-truss discrepancy detector.

    ``fit_predict`` returns -1 for flagged vertices and 1 otherwise.
    ``n_clusters=None`` picks the cluster count with the elbow rule.
    """

    def __init__(self, n_clusters=None, kmax=30, threshold_fraction=0.25, z_cutoff=2.0,
                 random_state=0, clique_gap=2, gatekeeper_ratio=0.5):
        self.n_clusters = n_clusters
        self.kmax = kmax
        self.threshold_fraction = threshold_fraction
        self.z_cutoff = z_cutoff
        self.random_state = random_state
        self.clique_gap = clique_gap
        self.gatekeeper_ratio = gatekeeper_ratio

    def _options(self):
        return DDOptions(seed=self.random_state, clusters=self.n_clusters, kmax=self.kmax,
                         threshold_fraction=self.threshold_fraction, z_cutoff=self.z_cutoff,
                         clique_gap=self.clique_gap, gatekeeper_ratio=self.gatekeeper_ratio)

    def fit(self, X, y=None):
        g = check_graph(X)
        self.graph_ = g
        self.report_ = core_truss_dd(g, self._options())
        self.threshold_ = self.report_.threshold
        self.n_clusters_ = self.report_.k
        labels = np.full(g.num_vertices, -1, dtype=np.int64)
        for v, c in self.report_.assignments.items():
            labels[v] = c
        self.labels_ = labels
        self.outlier_vertices_ = np.array([o.vertex for o in self.report_.outliers], dtype=np.int64)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "report_")
        if X is not None and check_graph(X) is not self.graph_:
            raise ValueError("the detector is transductive; predict only on the fitted graph")
        out = np.ones(self.graph_.num_vertices, dtype=np.int64)
        out[self.outlier_vertices_] = -1
        return out

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()
