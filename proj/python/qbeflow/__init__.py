"""Pseudo-spectral laboratory for the coupled order-tensor / velocity system.

The heavy lifting lives in the compiled extension; this package re-exports
its operations: potential hypothesis checks, the run driver (JSON config
text in, record columns out), the stationary gradient flow, and the scalar
decay oracles.
"""

from ._core import (
    ConfigurationError,
    bootstrap_cascade,
    config_defaults,
    duhamel_tail_ratio,
    gradient_flow,
    hypotheses,
    kernel_small_r_limit,
    low_freq_envelope_constant,
    low_freq_heat_mass,
    potential_value,
    projected_gradient,
    resume,
    run,
    shell_schedule,
    weighted_decay_sup,
)

__all__ = [
    "ConfigurationError",
    "bootstrap_cascade",
    "config_defaults",
    "duhamel_tail_ratio",
    "gradient_flow",
    "hypotheses",
    "kernel_small_r_limit",
    "low_freq_envelope_constant",
    "low_freq_heat_mass",
    "potential_value",
    "projected_gradient",
    "resume",
    "run",
    "shell_schedule",
    "weighted_decay_sup",
]
