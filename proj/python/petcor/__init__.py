"""Event-triggered cooperative output regulation simulator.

The heavy lifting lives in the compiled ``petcor._core`` module; this package
re-exports its surface.
"""

from petcor._core import (
    Config,
    ConfigError,
    ContractViolation,
    SamplingBound,
    SimulationFault,
    Trace,
    __version__,
    decay_fit,
    emit_outputs,
    expm,
    leader_state,
    load_config,
    load_preset,
    lyapunov_q,
    parse_config,
    preset_names,
    preset_text,
    run,
    sampling_bound,
    spectral_norm,
)

__all__ = [
    "Config",
    "ConfigError",
    "ContractViolation",
    "SamplingBound",
    "SimulationFault",
    "Trace",
    "__version__",
    "decay_fit",
    "emit_outputs",
    "expm",
    "leader_state",
    "load_config",
    "load_preset",
    "lyapunov_q",
    "parse_config",
    "preset_names",
    "preset_text",
    "run",
    "sampling_bound",
    "spectral_norm",
]
