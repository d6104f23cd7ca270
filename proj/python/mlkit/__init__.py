"""Mittag-Leffler functions, fractional PDE solvers and photon-count statistics."""

from ._core import (
    CountDistribution,
    DomainError,
    Method,
    MomentSummary,
    NonConvergenceError,
    PreconditionError,
    RangeError,
    SeriesResult,
    coherent_amplitude_laskin,
    count_distribution,
    e_sab,
    generating_function_value,
    hermitian_square_amplitude,
    laguerre_exp,
    laskin_moments,
    log_gamma,
    ml_binomial,
    ml_compose_power,
    ml_e,
    ml_gaussian_integral,
    ml_semigroup_sum,
    ml_stretched_integral,
    ml_trig,
    ml_via_borel,
    p_m_laskin,
    p_m_schrodinger,
    reciprocal_gamma,
    run_cli,
    sample_counts,
    schrodinger_moments,
    solve_drift_pde,
    solve_fractional_diffusion,
    table_moments,
    wright,
)

__version__ = "0.1.0"


def main() -> None:
    import sys

    sys.exit(run_cli(sys.argv[1:]))
