"""Noisy random geometric graphs: simulation, exact clique statistics,
and evaluable clique-number bounds.

Pipeline: sample a cloud (model), connect at radius r, perturb with
deletion probability p and insertion probability q, then measure (clique,
scan, wscp) and compare against predicted bands (theory) over parameter
sweeps (harness).
"""
from .errors import ArgumentError, CapabilityError, NumericError
from .geometry import Norm, distance, min_set_distance, unit_ball_volume
from .rng import combine, mix64, uniforms, uniforms_at
from .model import (EdgeLabel, GeometricGraph, PerturbedGraph, PointCloud,
                    Regime, RegimeParams, build_geometric_graph, empty_base,
                    edge_distances, expected_degree, identity_perturbation,
                    long_edges, pair_index, pair_unindex, perturb,
                    radius_for_regime, read_graph, read_points_csv,
                    sample_uniform_cube, write_graph, write_points_csv)
from .clique import (CliqueResult, DenoiseResult, denoise,
                     edge_clique_number, is_clique, max_clique,
                     max_edge_clique_number)
from .scan import (OccupancyResult, ScanMethod, ScanQuery, ScanResult,
                   count_within, occupancy_check, scan_exact,
                   scan_point_centered)
from .wscp import (CliquePartitionFamily, PackingFamily, WSCPReport,
                   build_wscp, dump_wscp, greedy_packing_family, verify_wscp)
from .theory import (BandEvaluation, Condition, Form, Model, PredictParams,
                     Quantity, SpecialConstants, Window, H,
                     auto_denoise_threshold, binomial_tail_sandwich,
                     chernoff_tail, er_clique_lower, m_w_bound, phi_thermo,
                     predict_omega, solve_eta, solve_tau, special_constants,
                     T_threshold)
from .harness import (ConfigModel, ExperimentConfig, Measure, SweepResult,
                      TrialRow, config_from_dict, load_config, ratio_fit,
                      run_sweep, run_trial, summarize)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "CapabilityError", "NumericError",
    "Norm", "distance", "min_set_distance", "unit_ball_volume",
    "combine", "mix64", "uniforms", "uniforms_at",
    "EdgeLabel", "GeometricGraph", "PerturbedGraph", "PointCloud",
    "Regime", "RegimeParams", "build_geometric_graph", "empty_base",
    "edge_distances", "expected_degree", "identity_perturbation",
    "long_edges", "pair_index", "pair_unindex", "perturb",
    "radius_for_regime", "read_graph", "read_points_csv",
    "sample_uniform_cube", "write_graph", "write_points_csv",
    "CliqueResult", "DenoiseResult", "denoise", "edge_clique_number",
    "is_clique", "max_clique", "max_edge_clique_number",
    "OccupancyResult", "ScanMethod", "ScanQuery", "ScanResult",
    "count_within", "occupancy_check", "scan_exact", "scan_point_centered",
    "CliquePartitionFamily", "PackingFamily", "WSCPReport", "build_wscp",
    "dump_wscp", "greedy_packing_family", "verify_wscp",
    "BandEvaluation", "Condition", "Form", "Model", "PredictParams",
    "Quantity", "SpecialConstants", "Window", "H", "auto_denoise_threshold",
    "binomial_tail_sandwich", "chernoff_tail", "er_clique_lower", "m_w_bound",
    "phi_thermo", "predict_omega", "solve_eta", "solve_tau",
    "special_constants", "T_threshold",
    "ConfigModel", "ExperimentConfig", "Measure", "SweepResult", "TrialRow",
    "config_from_dict", "load_config", "ratio_fit", "run_sweep", "run_trial",
    "summarize",
]
