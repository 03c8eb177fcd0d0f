"""Python bindings for the sdlab core."""

from ._sdlab import (
    SdlabError,
    catalog_names,
    epstein_zeta,
    integrate,
    lattice_sum,
    partition_function,
    pathology,
    run,
    theta,
    theta_product,
    torus_zeta_zero,
    weights,
)

__all__ = [
    "SdlabError",
    "catalog_names",
    "epstein_zeta",
    "integrate",
    "lattice_sum",
    "partition_function",
    "pathology",
    "run",
    "theta",
    "theta_product",
    "torus_zeta_zero",
    "weights",
]
