"""Neuromorphic half-centre oscillator controller for a damped pendulum."""

from ._neuropend import (
    ConfigError,
    OutputError,
    SimulationFault,
    builtin_scenarios,
    compute_prc,
    free_hco_period,
    mechanical_energy,
    motor_torque,
    neuron_rhs,
    pendulum_rhs,
    read_summary,
    scenario_config,
    simulate,
    sweep,
    synapse_current,
    wrap_angle,
)

__all__ = [
    "ConfigError",
    "OutputError",
    "SimulationFault",
    "builtin_scenarios",
    "compute_prc",
    "free_hco_period",
    "mechanical_energy",
    "motor_torque",
    "neuron_rhs",
    "pendulum_rhs",
    "read_summary",
    "scenario_config",
    "simulate",
    "sweep",
    "synapse_current",
    "wrap_angle",
]
