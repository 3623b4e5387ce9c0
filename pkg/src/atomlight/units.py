"""Unit conventions and physical constants.

Everything downstream works in natural units hbar = c = eps0 = 1 with
energies in eV (lengths and times in 1/eV).  The only convention choice is
the size of the squared charge:

* ``hl`` (Heaviside-Lorentz): e^2 = 4*pi*alpha, the convention under which
  the textbook hydrogen 2p -> 1s rate comes out at 6.27e8 /s.
* ``paper`` (Gaussian-like): e^2 = 1/137 exactly, i.e. alpha absorbed into
  the charge; used to reproduce vacuum-excitation curves computed with
  e = 137**-0.5 literally.

Rates computed in eV are converted to 1/s via 1 eV / hbar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

__all__ = [
    "ChargeConvention",
    "UnitSystem",
    "AtomParameters",
    "seconds_inverse_from_ev",
    "standard_hydrogen",
    "HBAR_EV_S",
    "SECONDS_INVERSE_PER_EV",
    "ELECTRON_MASS_EV",
    "PROTON_MASS_EV",
    "INVERSE_FINE_STRUCTURE",
]

# CODATA 2018
HBAR_EV_S = 6.582119569e-16          # reduced Planck constant, eV s
SECONDS_INVERSE_PER_EV = 1.0 / HBAR_EV_S
ELECTRON_MASS_EV = 5.1099895000e5    # m_e c^2
PROTON_MASS_EV = 9.3827208816e8      # m_p c^2
INVERSE_FINE_STRUCTURE = 137.035999


class ChargeConvention(str, Enum):
    HEAVISIDE_LORENTZ = "hl"
    PAPER_GAUSSIAN = "paper"


@dataclass(frozen=True)
class UnitSystem:
    """Natural-unit system with an explicit charge convention."""

    charge_convention: ChargeConvention = ChargeConvention.HEAVISIDE_LORENTZ
    hbar: float = 1.0
    c: float = 1.0
    eps0: float = 1.0

    def __post_init__(self):
        if (self.hbar, self.c, self.eps0) != (1.0, 1.0, 1.0):
            raise DomainError("natural units are fixed: hbar = c = eps0 = 1")

    @property
    def e_squared(self) -> float:
        if self.charge_convention is ChargeConvention.PAPER_GAUSSIAN:
            return 1.0 / 137.0
        return 4.0 * math.pi / INVERSE_FINE_STRUCTURE

    @property
    def fine_structure(self) -> float:
        return self.e_squared / (4.0 * math.pi * self.eps0 * self.hbar * self.c)

    def as_dict(self) -> dict:
        return {
            "hbar": self.hbar,
            "c": self.c,
            "eps0": self.eps0,
            "charge_convention": self.charge_convention.value,
            "e_squared": self.e_squared,
            "energy_unit": "eV",
            "rate_unit": "1/s",
            "seconds_inverse_per_ev": SECONDS_INVERSE_PER_EV,
        }


def seconds_inverse_from_ev(x: float) -> float:
    """Convert a rate/energy in eV to 1/s (multiplies by 1 eV / hbar)."""
    return x * SECONDS_INVERSE_PER_EV


@dataclass(frozen=True)
class AtomParameters:
    """Hydrogen-like atom in natural units (energies in eV).

    a0 is the Bohr radius built with the *reduced* mass, in 1/eV.  omega is
    the transition angular frequency of the pair of internal levels under
    study; a negative omega describes the excitation direction of the same
    pair.  The non-relativistic internal-energy regime |omega|/M < 1e-4 is
    assumed throughout the rate machinery.
    """

    a0: float
    M: float
    mu: float
    omega: float
    delta_m_over_M: float

    def __post_init__(self):
        if not (self.a0 > 0 and self.M > 0 and 0 < self.mu < self.M):
            raise DomainError("need a0 > 0, M > 0 and 0 < mu < M")
        if not abs(self.delta_m_over_M) < 1.0:
            raise DomainError("|delta_m/M| must be < 1")
        if not abs(self.omega) / self.M < 1e-4:
            raise DomainError(
                "hbar*omega/(M c^2) must stay below 1e-4 (non-relativistic internal energies)"
            )

    @property
    def recoil_ratio(self) -> float:
        """hbar*omega / (M c^2), the small recoil parameter."""
        return self.omega / self.M

    def with_omega(self, omega: float) -> "AtomParameters":
        return AtomParameters(self.a0, self.M, self.mu, omega, self.delta_m_over_M)

    def as_dict(self) -> dict:
        return {
            "a0_per_ev": self.a0,
            "M_ev": self.M,
            "mu_ev": self.mu,
            "omega_ev": self.omega,
            "delta_m_over_M": self.delta_m_over_M,
        }


def standard_hydrogen(omega: float = 10.2, a0: float | None = None) -> AtomParameters:
    """CODATA hydrogen with a configurable transition frequency.

    The default omega = 10.2 eV is the 1s-2p (Lyman-alpha) gap.  The Bohr
    radius defaults to the reduced-mass value 1/(mu * alpha) ~ 2.68e-4 /eV;
    pass ``a0`` to override.
    """
    M = ELECTRON_MASS_EV + PROTON_MASS_EV
    mu = ELECTRON_MASS_EV * PROTON_MASS_EV / M
    if a0 is None:
        a0 = INVERSE_FINE_STRUCTURE / mu
    delta = (PROTON_MASS_EV - ELECTRON_MASS_EV) / M
    return AtomParameters(a0=a0, M=M, mu=mu, omega=omega, delta_m_over_M=delta)
