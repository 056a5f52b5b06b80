"""Core and truss decompositions, their interplay, null models and
core-truss discrepancy detection."""

__version__ = "0.1.0"

from .anomaly import (AnomalyReport, DDOptions, core_threshold, core_truss_dd, elbow_select,
                      kmeans, truss_profiles, zscore_outliers)
from .decomposition import (CoreResult, TrussResult, core_decompose, k_core_components,
                            k_truss_components, triangle_supports, truss_decompose)
from .estimators import CoreTrussDD, CoreTrussDecomposer, LloydKMeans, check_graph
from .graph import Graph, load_edge_list, subgraph_induced_by_edges, validate_graph, write_edge_list
from .interplay import MeasureSelection, ei_table, vi_table
from .randgen import (GeneratorSpec, extract_reference_stats, generate, generate_bter,
                      generate_config, generate_er)
