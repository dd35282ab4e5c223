from ._core import (
    CapabilityError,
    IoError,
    NumericalError,
    PerturbationPair,
    ValidationError,
    __version__,
    duhamel_residual,
    fit_expansion,
    make_pair,
    relative_determinant,
    relative_heat_trace,
    relative_index,
    run_config,
    verify,
    zeta_pipeline,
)

__all__ = [
    "CapabilityError",
    "IoError",
    "NumericalError",
    "PerturbationPair",
    "ValidationError",
    "__version__",
    "duhamel_residual",
    "fit_expansion",
    "make_pair",
    "relative_determinant",
    "relative_heat_trace",
    "relative_index",
    "run_config",
    "verify",
    "zeta_pipeline",
]
