"""Probe propagation and off-axis optical vortices in double-Raman gain media.

Closed-form propagators for the singlet and doublet pump schemes, an
independent RK4 oracle for cross-validation, phase-singularity detection,
and a config-driven batch CLI.
"""

__version__ = "0.1.0"

from .doublet import (
    DoubletParams,
    MatchingReport,
    default_doublet_params,
    group_slowdown_doublet,
    grouped_strengths,
    kappa_doublet,
    propagate_doublet,
    reconstruct_doublet,
    superpose_doublet,
    superposition_beam_doublet,
    validate_matching,
    vortex_exchange_doublet,
)
from .fieldgrid import (
    BeamSpec,
    ComplexField,
    GridSpec,
    PhaseMap,
    bilinear_sample,
    envelope,
    make_beam,
    phase_map,
    total_strength,
    uniform_field,
)
from .oracle import (
    AtomicAmplitudes,
    IntegratorConfig,
    integrate_doublet,
    integrate_exact_singlet,
    integrate_singlet,
    solve_stationary_atoms,
    subsample,
)
from .singlet import (
    ModePair,
    SingletParams,
    group_slowdown,
    kappa,
    propagate,
    reconstruct,
    superpose,
    superposition_beam,
    uniform_probe_modes,
    vortex_exchange,
)
from .vortex import (
    PeripheralPrediction,
    RingStats,
    VortexCore,
    WindingMap,
    detect_cores,
    net_charge,
    predict_peripheral,
    ring_statistics,
    winding_map,
)

__all__ = [
    "__version__",
    "BeamSpec",
    "ComplexField",
    "GridSpec",
    "PhaseMap",
    "bilinear_sample",
    "envelope",
    "make_beam",
    "phase_map",
    "total_strength",
    "uniform_field",
    "SingletParams",
    "ModePair",
    "superpose",
    "reconstruct",
    "propagate",
    "kappa",
    "vortex_exchange",
    "group_slowdown",
    "superposition_beam",
    "uniform_probe_modes",
    "DoubletParams",
    "MatchingReport",
    "default_doublet_params",
    "validate_matching",
    "grouped_strengths",
    "kappa_doublet",
    "superpose_doublet",
    "reconstruct_doublet",
    "propagate_doublet",
    "vortex_exchange_doublet",
    "group_slowdown_doublet",
    "superposition_beam_doublet",
    "IntegratorConfig",
    "AtomicAmplitudes",
    "integrate_singlet",
    "integrate_doublet",
    "integrate_exact_singlet",
    "solve_stationary_atoms",
    "subsample",
    "VortexCore",
    "RingStats",
    "WindingMap",
    "PeripheralPrediction",
    "winding_map",
    "detect_cores",
    "net_charge",
    "ring_statistics",
    "predict_peripheral",
]
