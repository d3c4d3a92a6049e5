"""Streaming spectral sparsification for graphs and hypergraphs."""

from .graph import (DisconnectedError, Graph, IncidenceRow, KernelMismatchError,
                    SolverConfig, SpectralSketch, WeightedEdge,
                    effective_resistance, incidence_matrix, laplacian,
                    leverage, leverages, pseudo_inverse, pseudo_solve,
                    rayleigh_error, ridge_leverage)
from .offline import OfflineSampleConfig, er_sparsify, keep_probabilities
from .online import (OnlineSamplerState, default_c, exact_online_leverages,
                     online_sparsify)
from .merge_reduce import (MergeReduceTree, OnlineConfig, StreamPipelineConfig,
                           StreamSparsifier, TreeConfig, eps_per_level,
                           mr_sparsify, stream_sparsify)
from .hypergraph import (Hyperedge, Hypergraph, HyperSamplerConfig,
                         HyperSamplerState, associated_graph,
                         balanced_hyper_sparsify_step, balanced_rho,
                         fast_hyper_sparsify_step, fast_rho, hyper_energy,
                         hyper_sparsify, quantize_weight)
from .balance import (BalanceConfig, BalanceError, WeightAssignment,
                      augmented_graph, clique_pairs, gamma_ok,
                      get_weight_assignment, is_balanced, st_potential)
from .window import (SlidingWindowConfig, SlidingWindowState, sw_push,
                     sw_query)
from .mincut import (CapabilityError, Cut, MinCutPipelineConfig, cut_value,
                     enumerate_near_min_cuts, exact_mincut, stoer_wagner,
                     stream_mincut)
from .robust import (AdversaryScript, RobustHyperWrapperState,
                     RobustWrapperState, Transcript, play_game,
                     robust_hyper_step, robust_step)
from .bench import ExperimentConfig, ResultRow, gen_synthetic, run_experiment
from .io import (ParseError, load_edge_list, load_hyperedge_list, load_snap,
                 save_edge_list, save_hyperedge_list)

__version__ = "0.1.0"
