"""Laboratory units <-> model couplings.

Frequencies quoted in GHz or kHz are ordinary frequencies and pick up a
factor 2*pi on conversion to angular units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

HBAR = constants.hbar
AMU = constants.physical_constants["atomic mass constant"][0]

SPECIES_MASS_KG = {"K39": 38.963706487 * AMU}

# van der Waals coefficient inverted from |V'(5 um)| = 6.76e-3 GHz/um.
DEFAULT_C6_GHZ_UM6 = 88.0

_GHZ = 1e9
_UM = 1e-6


@dataclass(frozen=True)
class PhysicalParams:
    mass: float  # kg
    trap_omega: float  # rad/s
    spacing_d: float  # m
    c6: float  # GHz um^6 (ordinary frequency)
    species: str = ""

    def __post_init__(self):
        for name in ("mass", "trap_omega", "spacing_d"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.c6 < 0:
            raise ValueError("c6 must be non-negative")

    @classmethod
    def from_lab(cls, *, trap_hz: float, spacing_um: float, c6_ghz_um6: float = DEFAULT_C6_GHZ_UM6,
                 species: str | None = None, mass_kg: float | None = None) -> "PhysicalParams":
        if mass_kg is None:
            if species not in SPECIES_MASS_KG:
                raise KeyError(f"unknown species {species!r}; give mass_kg instead")
            mass_kg = SPECIES_MASS_KG[species]
        return cls(mass_kg, 2 * math.pi * trap_hz, spacing_um * _UM, c6_ghz_um6, species or "")

    @property
    def x_ho(self) -> float:
        """Oscillator length sqrt(hbar / (m omega)) in metres."""
        return math.sqrt(HBAR / (self.mass * self.trap_omega))

    @property
    def spacing_um(self) -> float:
        return self.spacing_d / _UM


def vdw_gradient(p: PhysicalParams) -> float:
    """|V'(d)| = 6 C6 / d^7 in GHz/um (ordinary frequency)."""
    return 6.0 * p.c6 / p.spacing_um**7


def _gradient_angular_si(p: PhysicalParams) -> float:
    """|V'(d)| / hbar in rad s^-1 m^-1."""
    return 2 * math.pi * vdw_gradient(p) * _GHZ / _UM


def kappa_from_physical(p: PhysicalParams) -> tuple[float, float]:
    """(kappa in rad/s, kappa / omega)."""
    kappa = p.x_ho / math.sqrt(2.0) * _gradient_angular_si(p)
    return kappa, kappa / p.trap_omega


def classical_distortion(p: PhysicalParams) -> float:
    """|dr| = |V'(d)| / (m omega^2) in metres."""
    return HBAR * _gradient_angular_si(p) / (p.mass * p.trap_omega**2)


def facilitation_detuning(p: PhysicalParams) -> float:
    """Detuning (rad/s) cancelling the pair shift: Delta = -2 pi C6 / d^6."""
    return -2 * math.pi * p.c6 / p.spacing_um**6 * _GHZ


def report(p: PhysicalParams) -> dict:
    _, k_over_w = kappa_from_physical(p)
    return {
        "x_ho_nm": p.x_ho * 1e9,
        "kappa_over_omega": k_over_w,
        "distortion_nm": classical_distortion(p) * 1e9,
        "detuning_mhz": facilitation_detuning(p) / (2 * math.pi) / 1e6,
        "vdw_gradient_ghz_per_um": vdw_gradient(p),
    }
