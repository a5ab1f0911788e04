"""Thermal P(phi)_2 on the cylinder: kernels, lattice sampling and the Fock oracle."""

from ._thermal_cylinder import (
    BasisError,
    CheckReport,
    DomainError,
    Error,
    FormatError,
    InvalidParameter,
    LatticeSpec,
    ModelParams,
    NumericalError,
    OracleResult,
    Polynomial,
    RunManifest,
    Verdict,
    bessel_k0,
    dispersion,
    exact_lattice_covariance,
    free_euclidean_propagator,
    free_wightman,
    lattice_eigenvalues,
    matsubara_covariance,
    parse_manifest,
    run_oracle,
    run_simulation,
    sample_gff,
    thermal_covariance_kernel,
    wick_constant,
    wick_order,
)

from ._thermal_cylinder import __version__

__all__ = [name for name in dir() if not name.startswith("_")]
