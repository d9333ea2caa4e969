"""Deterministic simulator and analysis toolkit for a finite-time two-level
Otto heat engine: gap-drive propagators, two-point-measurement work and heat
statistics, cycle figures of merit (efficiency, lag, entropy production,
power), process-matrix diagnostics, and a CSV/JSON command-line front end.
"""

from ._kernels import BACKEND as _KERNEL_BACKEND
from .config import (
    DEFAULT_TAU_GRID_US,
    HOT_PRESETS_PEV,
    ConfigError,
    RunConfig,
    apply_overrides,
    parse_config,
    serialize_config,
    to_cycle_config,
)
from .cycle import (
    MONTE_CARLO_FIELDS,
    CycleConfig,
    CycleReport,
    UncertaintyEstimate,
    cycle_with_uncertainty,
    efficiency_closed_form,
    efficiency_lag,
    endpoint_hamiltonians,
    entropy_production_drive,
    extraction_bound,
    monte_carlo_uncertainty,
    relative_entropy,
    run_cycle,
    sweep_tau,
)
from .process import (
    BASIS,
    ProcessMatrix,
    apply_process,
    choi_from_unitary,
    depolarizing_process,
    identity_process,
    mix_processes,
    process_from_kraus,
    process_trace_distance,
    unitality_defect,
)
from .propagator import (
    CONVERGENCE_TOLERANCE,
    DEFAULT_N_STEPS,
    ConvergenceError,
    UnitaryMap,
    evolve_unitary,
    propagate_state,
    transition_probability,
)
from .spin import (
    IDENTITY,
    KHZ_US,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PLANCK_PEV_PER_KHZ,
    DriveProtocol,
    Phase,
    ThermalParams,
    drive_hamiltonian,
    eigensystem,
    gap_frequency,
    gibbs_state,
    polarization,
    spin_temperature,
    thermal_populations,
)
from .tpm import (
    MERGE_TOLERANCE_PEV,
    CharacteristicSamples,
    EnergyDistribution,
    TrajectoryHistory,
    characteristic_function,
    conjugate_u_grid,
    convolve,
    endpoint_spectra,
    engine_heat_distribution,
    engine_work_distribution,
    enumerate_histories,
    heat_distribution,
    invert_characteristic,
    lorentzian_broaden,
    mean,
    mean_heat_cold_closed_form,
    mean_heat_hot_closed_form,
    mean_work_closed_form,
    post_expansion_populations,
    stroke_work_distribution,
    transition_matrix,
    work_distribution,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Which slice-product backend is active: ``"cython"`` or ``"python"``."""
    return _KERNEL_BACKEND


__all__ = [
    "BASIS",
    "CONVERGENCE_TOLERANCE",
    "DEFAULT_N_STEPS",
    "DEFAULT_TAU_GRID_US",
    "HOT_PRESETS_PEV",
    "IDENTITY",
    "KHZ_US",
    "MERGE_TOLERANCE_PEV",
    "MONTE_CARLO_FIELDS",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PLANCK_PEV_PER_KHZ",
    "CharacteristicSamples",
    "ConfigError",
    "ConvergenceError",
    "CycleConfig",
    "CycleReport",
    "DriveProtocol",
    "EnergyDistribution",
    "Phase",
    "ProcessMatrix",
    "RunConfig",
    "ThermalParams",
    "TrajectoryHistory",
    "UncertaintyEstimate",
    "UnitaryMap",
    "apply_overrides",
    "apply_process",
    "characteristic_function",
    "choi_from_unitary",
    "conjugate_u_grid",
    "convolve",
    "cycle_with_uncertainty",
    "depolarizing_process",
    "drive_hamiltonian",
    "efficiency_closed_form",
    "efficiency_lag",
    "eigensystem",
    "endpoint_hamiltonians",
    "endpoint_spectra",
    "engine_heat_distribution",
    "engine_work_distribution",
    "entropy_production_drive",
    "enumerate_histories",
    "evolve_unitary",
    "extraction_bound",
    "gap_frequency",
    "gibbs_state",
    "heat_distribution",
    "identity_process",
    "invert_characteristic",
    "kernel_backend",
    "lorentzian_broaden",
    "mean",
    "mean_heat_cold_closed_form",
    "mean_heat_hot_closed_form",
    "mean_work_closed_form",
    "mix_processes",
    "monte_carlo_uncertainty",
    "parse_config",
    "polarization",
    "post_expansion_populations",
    "process_from_kraus",
    "process_trace_distance",
    "propagate_state",
    "relative_entropy",
    "run_cycle",
    "serialize_config",
    "spin_temperature",
    "stroke_work_distribution",
    "sweep_tau",
    "thermal_populations",
    "to_cycle_config",
    "transition_matrix",
    "transition_probability",
    "unitality_defect",
    "work_distribution",
]
