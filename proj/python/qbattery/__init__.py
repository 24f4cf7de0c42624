"""Charging energetics of cluster-Ising quantum batteries."""

from ._qbattery import (
    QBatteryError,
    coefficients,
    energy_curve,
    fit_power_law,
    maximize_power,
    oracle_energy,
    stored_energy,
    sweep,
)

DEFAULT_PHI_B = 0.0
DEFAULT_PHI_C = 1.5707963267948966 - 0.3

__all__ = [
    "QBatteryError",
    "coefficients",
    "energy_curve",
    "fit_power_law",
    "maximize_power",
    "oracle_energy",
    "stored_energy",
    "sweep",
    "DEFAULT_PHI_B",
    "DEFAULT_PHI_C",
]
