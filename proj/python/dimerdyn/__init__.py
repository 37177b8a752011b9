"""Relaxation and decoherence of a donor-acceptor dimer in harmonic reservoirs."""

from ._core import (
    BathSpectrum,
    ConfigError,
    ConvergenceError,
    DimensionlessParams,
    DimerParams,
    DomainError,
    KernelSet,
    RegimeError,
    SpectralModel,
    __version__,
    decoherence_factor,
    digamma,
    equilibrium_population,
    from_dimensionless,
    gamma_exact,
    gamma_from_level_shift,
    gamma_infinity,
    gamma_marcus_dimensionless,
    gamma_marcus_generalized,
    hurwitz_zeta,
    marcus_upper_bound,
    rate_dimensionless,
    run,
    simulate_dephasing,
    to_dimensionless,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
