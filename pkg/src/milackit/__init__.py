"""Analog linear precoding/combining networks for MIMO links.

Models reconfigurable lossless port networks as simple graphs, synthesizes
susceptance matrices that realize capacity-achieving precoders and combiners
on both stem-connected and fully-connected topologies, and checks — per
channel realization — that the achieved rate equals the water-filling
capacity while counting the tunable components each topology needs.
"""

from .archgraph import (
    ArchitectureMask,
    CircuitComplexity,
    GraphError,
    MilacGraph,
    center_graph,
    circuit_complexity,
    complete_complexity_count,
    complete_graph,
    center_complexity_count,
    mask_from_graph,
    mask_membership,
    rx_stem_graph,
    stem_complexity_count,
    tx_stem_graph,
)
from .campaign import (
    CSV_SCHEMA_HEADER,
    CampaignConfig,
    CampaignSummary,
    ConfigError,
    TrialRecord,
    VerifyOnlyResult,
    complexity_table,
    mix_seed,
    parse_config,
    run_campaign,
    verify_only,
)
from .chancap import (
    ChannelRealization,
    achievable_rate,
    capacity,
    rayleigh_channel,
    truncated_svd,
    water_filling,
)
from .fileio import (
    load_matrix_bin,
    load_matrix_csv,
    load_real_matrix_csv,
    matrix_from_csv_text,
    matrix_to_csv_text,
    save_matrix_bin,
    save_matrix_csv,
)
from .netcore import (
    DEFAULT_Y0,
    IllConditionedError,
    LosslessReport,
    SusceptanceMatrix,
    admittance_from_scattering,
    assemble_admittance,
    check_lossless_reciprocal,
    combiner_from_admittance,
    lossless_admittance,
    precoder_from_admittance,
    scattering_from_admittance,
)
from .stemopt import (
    DegeneratePhaseError,
    DegenerateTargetError,
    NoSymmetricSolutionError,
    SolvabilityReport,
    SynthesisResult,
    VerificationReport,
    optimize_rx_fully,
    optimize_rx_stem,
    optimize_tx_fully,
    optimize_tx_stem,
    solve_symmetric_lineq_general,
    solve_symmetric_lineq_tall,
    synthesize_rx,
    synthesize_tx,
    verify_rx,
    verify_tx,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # archgraph
    "GraphError",
    "MilacGraph",
    "ArchitectureMask",
    "CircuitComplexity",
    "complete_graph",
    "center_graph",
    "tx_stem_graph",
    "rx_stem_graph",
    "mask_from_graph",
    "mask_membership",
    "circuit_complexity",
    "complete_complexity_count",
    "center_complexity_count",
    "stem_complexity_count",
    # netcore
    "DEFAULT_Y0",
    "IllConditionedError",
    "SusceptanceMatrix",
    "LosslessReport",
    "assemble_admittance",
    "lossless_admittance",
    "scattering_from_admittance",
    "admittance_from_scattering",
    "precoder_from_admittance",
    "combiner_from_admittance",
    "check_lossless_reciprocal",
    # chancap
    "ChannelRealization",
    "truncated_svd",
    "rayleigh_channel",
    "water_filling",
    "achievable_rate",
    "capacity",
    # stemopt
    "NoSymmetricSolutionError",
    "DegenerateTargetError",
    "DegeneratePhaseError",
    "SolvabilityReport",
    "SynthesisResult",
    "VerificationReport",
    "solve_symmetric_lineq_general",
    "solve_symmetric_lineq_tall",
    "optimize_tx_stem",
    "optimize_rx_stem",
    "optimize_tx_fully",
    "optimize_rx_fully",
    "synthesize_tx",
    "synthesize_rx",
    "verify_tx",
    "verify_rx",
    # fileio
    "matrix_to_csv_text",
    "matrix_from_csv_text",
    "save_matrix_csv",
    "load_matrix_csv",
    "load_real_matrix_csv",
    "save_matrix_bin",
    "load_matrix_bin",
    # campaign
    "CSV_SCHEMA_HEADER",
    "ConfigError",
    "CampaignConfig",
    "TrialRecord",
    "CampaignSummary",
    "parse_config",
    "mix_seed",
    "run_campaign",
    "complexity_table",
    "VerifyOnlyResult",
    "verify_only",
]
