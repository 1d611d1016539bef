"""Conditional inference for regression and location-scale models."""

from ._core import (
    CmseQuadratic,
    CondinfError,
    bioptimal,
    cmse_quadratic,
    fit,
    interval,
    log_density,
    marginal_g_t,
    minimax,
    normals,
    plugin_quantities,
    sample,
    score,
    theorem1_quantities,
    uniforms,
)

__all__ = [
    "CmseQuadratic",
    "CondinfError",
    "bioptimal",
    "cmse_quadratic",
    "fit",
    "interval",
    "log_density",
    "marginal_g_t",
    "minimax",
    "normals",
    "plugin_quantities",
    "sample",
    "score",
    "theorem1_quantities",
    "uniforms",
]
