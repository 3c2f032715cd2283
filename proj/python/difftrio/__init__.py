"""1D diffusion solvers (RC networks, finite differences, Chebyshev-Tau) and their benchmark harness."""

from ._core import (
    BenchReport,
    ConfigurationError,
    DifftrioError,
    IngestionError,
    OracleDivergenceError,
    RunConfig,
    StabilityError,
    certify,
    cfl_max_step,
    cheb_eval,
    derivative_coeffs_first,
    derivative_coeffs_second,
    load_config,
    parse_config,
    preset,
    read_bc_csv,
    run_case,
    sweep,
    synth_annual_bc,
    write_synth_bc,
)

__all__ = [
    "BenchReport",
    "ConfigurationError",
    "DifftrioError",
    "IngestionError",
    "OracleDivergenceError",
    "RunConfig",
    "StabilityError",
    "certify",
    "cfl_max_step",
    "cheb_eval",
    "derivative_coeffs_first",
    "derivative_coeffs_second",
    "load_config",
    "parse_config",
    "preset",
    "read_bc_csv",
    "run_case",
    "sweep",
    "synth_annual_bc",
    "write_synth_bc",
]
__version__ = "0.1.0"
