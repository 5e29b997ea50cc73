"""Approximate distance oracles and spanners for vertex-labeled graphs."""

from .dynamic_oracle import (DynamicOracle, LabelHeap, build_dynamic,
                             dynamic_from_components, dynamic_query, update_label)
from .exact import ExactLabelTable, build_exact, exact_query, label_distance_maps
from .generators import ExperimentConfig, generate
from .graph import (INF, DistanceMap, Graph, GraphError, LabelAssignment, ball,
                    dijkstra, extract_path, hop_bounded_distances, parse_graph_text,
                    format_graph_text, read_graph, remove_nodes, write_graph)
from .spanner import (CoverRun, SpannerError, SpannerResult, as_subgraph,
                      build_unweighted_spanner, build_weighted_spanner,
                      graph_diameter, vl_cover, wvl_cover)
from .static_oracle import (BunchSet, LevelSampling, OracleError, StaticOracle,
                            build_bunches, build_static_oracle, dump_static_oracle,
                            load_static_oracle, sample_levels, static_query)
from .verify import VerifyReport, parse_script, verify_oracle, verify_spanner

__version__ = "0.1.0"
