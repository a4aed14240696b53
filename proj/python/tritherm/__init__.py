"""Steady-state heat currents of a three-qubit quantum thermal device."""

from ._tritherm import (
    Configuration,
    Terminal,
    TrithermError,
    __version__,
    amplification,
    configuration,
    eigensystem,
    liouvillian_oracle,
    load_config,
    rectification,
    stabilizer,
    steady,
    sweep,
    switch_threshold,
    validate,
    valve_crossings,
)

__all__ = [
    "Configuration",
    "Terminal",
    "TrithermError",
    "__version__",
    "amplification",
    "configuration",
    "eigensystem",
    "liouvillian_oracle",
    "load_config",
    "rectification",
    "stabilizer",
    "steady",
    "sweep",
    "switch_threshold",
    "validate",
    "valve_crossings",
]
