"""Casimir energies of dilute dielectric balls and polarizable pairs."""

from ._core import (
    NumericalError,
    dielectric,
    finite_part_prediction,
    kernels_k,
    kernels_r,
    matsubara_sum,
    oscillator_sum_closed,
    pair_energy,
    pair_energy_kspace,
    self_energy,
    sphere_energy,
    sphere_energy_hardcore_sweep,
    sphere_energy_exponential_sweep,
)

__all__ = [
    "NumericalError",
    "dielectric",
    "finite_part_prediction",
    "kernels_k",
    "kernels_r",
    "matsubara_sum",
    "oscillator_sum_closed",
    "pair_energy",
    "pair_energy_kspace",
    "self_energy",
    "sphere_energy",
    "sphere_energy_hardcore_sweep",
    "sphere_energy_exponential_sweep",
]
