"""Spin-vector Langevin annealing toolkit.

Thin Python layer over the C++ core: Langevin integration of classical
rotor chains through annealing schedules, kink statistics, Kibble-Zurek
scaling analysis, and the transfer-matrix equilibrium solver.
"""

from svlsim._core import (
    EPSILON_CRITICAL,
    KAPPA21_REFERENCE,
    KAPPA31_REFERENCE,
    AnnealSchedule,
    BathParams,
    Boundary,
    EpsilonParam,
    FrozenSchedule,
    InitStrategy,
    IsingProblem,
    NoiseStream,
    PhaseSpaceState,
    Schedule,
    count_kinks,
    cumulants,
    default_grid_size,
    energy,
    equilibrium_point,
    find_maxima,
    fit_nu,
    fit_power_law,
    freeze_out_time,
    gaussian_spectrum,
    gradient,
    histogram,
    initialize_state,
    kzm_alpha,
    order_parameter,
    pair_energy,
    run_ensemble,
    simulate_trajectory,
)

__all__ = [
    "EPSILON_CRITICAL",
    "KAPPA21_REFERENCE",
    "KAPPA31_REFERENCE",
    "AnnealSchedule",
    "BathParams",
    "Boundary",
    "EpsilonParam",
    "FrozenSchedule",
    "InitStrategy",
    "IsingProblem",
    "NoiseStream",
    "PhaseSpaceState",
    "Schedule",
    "count_kinks",
    "cumulants",
    "default_grid_size",
    "energy",
    "equilibrium_point",
    "find_maxima",
    "fit_nu",
    "fit_power_law",
    "freeze_out_time",
    "gaussian_spectrum",
    "gradient",
    "histogram",
    "initialize_state",
    "kzm_alpha",
    "order_parameter",
    "pair_energy",
    "run_ensemble",
    "simulate_trajectory",
]

__version__ = "0.1.0"
