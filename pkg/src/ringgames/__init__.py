"""Exact profit moments for spatially dependent coin games on a ring.

The package splits into a generic finite-chain engine (:mod:`.chain`), the
ring-game constructors (:mod:`.games`), orbit quotients that shrink the
2^N configuration space (:mod:`.reduction`), a Monte Carlo cross-check
(:mod:`.simulate`), study-level tables/sweeps/volumes (:mod:`.analysis`)
and a command-line front end (:mod:`.cli`).
"""

from .chain import (
    ChainTriple,
    ErgodicityReport,
    MomentResult,
    SolverError,
    StationaryDistribution,
    StructuralError,
    capital_dependent_fixture,
    ergodicity_check,
    fundamental_matrix,
    mean_mu,
    moments,
    pattern_mean,
    pattern_variance,
    stationary_distribution,
    variance_sigma2,
)
from .games import (
    SpatialParams,
    aug_index,
    build_augmented,
    build_game,
    build_game_a,
    build_game_a_prime,
    build_game_b,
    build_reduced,
    mix,
    neighborhood_index,
    profit_alphabet,
    reflect,
    rotate,
)
from .reduction import (
    QuotientMap,
    check_g_invariance,
    check_lumpability,
    lift_stationary,
    lump,
    necklace_count,
    orbits,
)
from .simulate import Schedule, TrajectorySummary, empirical_moments, play, play_chain
from .analysis import (
    ConvergenceRow,
    ErgReport,
    RegionPoint,
    StabilizationReport,
    VolumeEstimate,
    condition_volume,
    convergence_table,
    erg_condition,
    parrondo_region_sweep,
    stabilization_report,
)

__version__ = "0.1.0"

__all__ = [
    "ChainTriple",
    "ConvergenceRow",
    "ErgReport",
    "ErgodicityReport",
    "MomentResult",
    "QuotientMap",
    "RegionPoint",
    "Schedule",
    "SolverError",
    "SpatialParams",
    "StabilizationReport",
    "StationaryDistribution",
    "StructuralError",
    "TrajectorySummary",
    "VolumeEstimate",
    "aug_index",
    "build_augmented",
    "build_game",
    "build_game_a",
    "build_game_a_prime",
    "build_game_b",
    "build_reduced",
    "capital_dependent_fixture",
    "check_g_invariance",
    "check_lumpability",
    "condition_volume",
    "convergence_table",
    "erg_condition",
    "ergodicity_check",
    "empirical_moments",
    "fundamental_matrix",
    "lift_stationary",
    "lump",
    "mean_mu",
    "mix",
    "moments",
    "necklace_count",
    "neighborhood_index",
    "orbits",
    "parrondo_region_sweep",
    "pattern_mean",
    "pattern_variance",
    "play",
    "play_chain",
    "profit_alphabet",
    "reflect",
    "rotate",
    "stabilization_report",
    "stationary_distribution",
    "variance_sigma2",
]
