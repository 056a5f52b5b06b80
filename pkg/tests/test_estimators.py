import numpy as np
import pytest
from sklearn.base import clone

from coretruss.estimators import CoreTrussDD, CoreTrussDecomposer, LloydKMeans, check_graph
from coretruss.graph import Graph
from conftest import clique, gatekeeper_edges


def test_check_graph_inputs():
    g = Graph(3, [(0, 1)])
    assert check_graph(g) is g
    h = check_graph(np.array([[0, 1], [1, 2], [2, 0]]))
    assert (h.num_vertices, h.num_edges) == (3, 3)
    with pytest.raises(ValueError):
        check_graph(np.zeros((3, 3), dtype=int))
    with pytest.raises(ValueError):
        check_graph(np.array([[0.5, 1.0]]))
    with pytest.raises(ValueError):
        check_graph(np.array([[-1, 1]]))


def test_check_graph_networkx_keeps_isolated_nodes():
    nx = pytest.importorskip("networkx")
    G = nx.Graph([("a", "b"), ("b", "c")])
    G.add_node("z")
    g = check_graph(G)
    assert g.num_vertices == 4 and g.num_edges == 2
    assert set(g.labels) == {"a", "b", "c", "z"}


def test_decomposer_features():
    n, e = gatekeeper_edges()
    g = Graph(n, e)
    est = CoreTrussDecomposer().fit(g)
    assert est.core_degeneracy_ == 3 and est.truss_degeneracy_ == 2
    X = est.transform(g)
    assert np.array_equal(X, CoreTrussDecomposer().fit_transform(g))
    assert X.shape == (13, 4)
    assert X[12].tolist() == [3, 3, 0, 0]
    assert X[0].tolist() == [3, 4, 0, 2]


def test_decomposer_transform_other_graph():
    est = CoreTrussDecomposer().fit(np.array(clique(4)))
    X = est.transform(np.array([[0, 1], [1, 2]]))
    assert X[:, 0].tolist() == [1, 1, 1]


def test_params_and_clone():
    est = CoreTrussDD(n_clusters=3, z_cutoff=2.5)
    assert est.get_params()["n_clusters"] == 3
    c = clone(est).set_params(kmax=10)
    assert c.kmax == 10 and c.z_cutoff == 2.5
    assert LloydKMeans(n_clusters=2).get_params()["n_clusters"] == 2


def test_lloyd_kmeans_estimator():
    X = np.repeat(np.eye(3), 5, axis=0)
    km = LloydKMeans(n_clusters=3, random_state=1).fit(X)
    assert km.inertia_ == pytest.approx(0.0)
    assert np.array_equal(km.predict(X), km.labels_)
    assert len(set(km.fit_predict(X).tolist())) == 3


def test_detector_fit_predict():
    n, edges = gatekeeper_edges()
    edges = edges + [(n + 2 * i, n + 2 * i + 1) for i in range(60)]
    g = Graph(n + 120, edges)
    det = CoreTrussDD(n_clusters=2)
    pred = det.fit_predict(g)
    assert pred[12] == -1
    assert set(pred.tolist()) <= {-1, 1}
    assert (pred == -1).sum() == len(det.report_.outliers)
    assert det.labels_.shape == (g.num_vertices,)
    with pytest.raises(ValueError):
        det.predict(Graph(2, [(0, 1)]))
