"""seplab: a laboratory for separation profiles of graphs.

Measure how hard it is to chop balls, spheres, and glued-sheet complexes
into balanced pieces: exact small-graph separators with certificates,
flow-based Menger lower bounds, sphere projection machinery, and growth
classification of the resulting profiles.
"""
from ._version import __version__
from .errors import (BudgetExceeded, ConfigError, DeltaConnectivityError,
                     DomainError, GenerationError, GeodesicError, InputError,
                     ResourceError, SepLabError, VerificationError)
from .graph import (BfsRoot, Graph, bfs_distances, bfs_root,
                    connected_components, ecc_endpoint, induced_subgraph,
                    neighborhood, project, project_many)
from .generate import (TessellationDisk, TessellationSpec, grid,
                       random_regular, regular_tree, tessellation_ball,
                       tessellation_disk)
from .io import (from_edge_list, from_json, load_graph, save_graph,
                 to_dot, to_edge_list, to_json)
from .flow import max_vertex_disjoint_paths, verify_paths
from .separator import (CutBounds, SeparatorCertificate, cut_bounds,
                        cut_exact, cut_exact_subsets, cut_lower_flow,
                        cut_upper, greedy_refine, verify_certificate,
                        verify_separator)
from .spheres import (SectorStats, ShadowIndex, SphereGraph,
                      SphereSeparationReport, WidthDefaults, WIDTHS,
                      bounded_sphere_separation_test, delta_hat, p_set,
                      project_separator, sector_stats, shadow_index,
                      sphere_graph)
from .profile import (FAMILY_KINDS, GrowthClass, ProfileComparison,
                      ProfileCurve, ProfilePoint, classify_growth,
                      compare_profiles, fit_against_log, profile_estimate,
                      sep_exact_bruteforce)
from .amalgam import (ComplexSpec, GeodesicLine, LineFamily, SheetAttachment,
                      VolumeReport, XMeta, build_X, cut_X_experiment,
                      enumerate_lines, verify_geodesic, volume_report)
from .experiment import ExperimentConfig, run, verify

__all__ = [name for name in dir() if not name.startswith("_")]
