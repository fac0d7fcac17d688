"""Stability of a harmonically trapped Bose-Einstein condensate.

Gaussian variational analysis (stationary widths, stable/unstable branches,
critical atom number for attractive 3D gases) cross-validated by a
grid-based mean-field energy minimizer, plus sweep and CLI front ends.
"""

from .units import (
    ATOMIC_MASS,
    HBAR,
    Dimension,
    DimensionlessProblem,
    OscillatorScales,
    PhysicalSetup,
    derive_scales,
    n_from_gamma,
    parse_config,
    reduce,
    setup_from_mapping,
)
from .variational import (
    GAMMA_CRITICAL_3D,
    S_MIN_3D,
    CriticalNumber,
    CriticalPoint,
    EnergyBreakdown,
    GaussianAnsatz,
    PointKind,
    Regime,
    StabilityReport,
    StationaryPoint,
    ansatz_energy,
    critical_3d,
    denergy,
    energy_1d,
    energy_3d,
    gamma_of_width,
    n_max_physical,
    n_of_sigma,
    stationary_points,
    total_energy_si,
)
from .gpe import (
    GridSpec,
    GridState,
    critical_scan,
    discrete_energy,
    dump_profile,
    gaussian_state,
    measured_width,
    minimize,
    sample_gaussian,
    state_from_values,
)
from .sweep import CSV_HEADER, SweepRow, emit_csv, parse_csv, sweep

__version__ = "0.1.0"

__all__ = [
    "ATOMIC_MASS",
    "HBAR",
    "Dimension",
    "DimensionlessProblem",
    "OscillatorScales",
    "PhysicalSetup",
    "derive_scales",
    "n_from_gamma",
    "parse_config",
    "reduce",
    "setup_from_mapping",
    "GAMMA_CRITICAL_3D",
    "S_MIN_3D",
    "CriticalNumber",
    "CriticalPoint",
    "EnergyBreakdown",
    "GaussianAnsatz",
    "PointKind",
    "Regime",
    "StabilityReport",
    "StationaryPoint",
    "ansatz_energy",
    "critical_3d",
    "denergy",
    "energy_1d",
    "energy_3d",
    "gamma_of_width",
    "n_max_physical",
    "n_of_sigma",
    "stationary_points",
    "total_energy_si",
    "GridSpec",
    "GridState",
    "critical_scan",
    "discrete_energy",
    "dump_profile",
    "gaussian_state",
    "measured_width",
    "minimize",
    "sample_gaussian",
    "state_from_values",
    "CSV_HEADER",
    "SweepRow",
    "emit_csv",
    "parse_csv",
    "sweep",
]
