"""Spontaneous-emission rates for an atom with a delocalized center of mass.

Golden-rule pipeline in natural units (energies in eV):

* the energy-conservation delta  delta(k^2/(2M) - P k z / M + k - omega)
  is eliminated exactly through its positive root
  k* = M (kappa - (1 - P z / M)),  kappa = sqrt((1 - P z / M)^2 + 2 omega / M),
  with Jacobian kappa (recoil + Doppler shift of the emitted mode);
* the polarization sum is contracted down to a quadratic polynomial in k
  and fed through the root formula per angular node;
* the resulting kernel g(P) is averaged over a Gaussian momentum spread
  and multiplied by the squared dipole matrix element.

The exact kernel and the quoted quadratic expansion of it disagree at
order (P/Mc)^2 (coefficient 4/3 from the exact integral vs the quoted
2/3); both are provided, the closed-rate formula keeps the quoted
coefficient as its contract.  See the validation suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hydrogen
from .errors import DomainError, NumericalError
from .units import AtomParameters, UnitSystem, seconds_inverse_from_ev

__all__ = [
    "GaussianMomentumDistribution",
    "DeltaRootSolution",
    "energy_delta_root",
    "delta_radial_integral",
    "trace_polynomial",
    "rate_kernel_exact",
    "rate_kernel_series",
    "reference_momentum_sq",
    "base_rate",
    "emission_rate_closed",
    "emission_rate_numeric",
    "self_energy_shift",
]

MOMENTUM_GUARD = 0.3  # |P| < 0.3 Mc keeps the COM non-relativistic


@dataclass(frozen=True)
class GaussianMomentumDistribution:
    """Isotropic Gaussian COM momentum state with per-component spread sigma_p.

    amplitude(P) = (2 pi sigma^2)^(-3/4) exp(-P^2 / (4 sigma^2)), so that
    the squared amplitude integrates to one over d^3P and each Cartesian
    momentum component has variance sigma_p^2.
    """

    sigma_p: float

    def __post_init__(self):
        if self.sigma_p < 0:
            raise DomainError("sigma_p must be non-negative")

    def amplitude(self, P):
        P = np.asarray(P, dtype=float)
        s2 = self.sigma_p**2
        return (2.0 * math.pi * s2) ** (-0.75) * np.exp(-(P**2) / (4.0 * s2))

    def density(self, P):
        """|amplitude|^2, the 3D momentum probability density at |P| = P."""
        P = np.asarray(P, dtype=float)
        s2 = self.sigma_p**2
        return (2.0 * math.pi * s2) ** (-1.5) * np.exp(-(P**2) / (2.0 * s2))

    def validate_for(self, params: AtomParameters):
        if self.sigma_p >= MOMENTUM_GUARD * params.M:
            raise DomainError("sigma_p must stay below 0.3 Mc for a non-relativistic COM")


@dataclass(frozen=True)
class DeltaRootSolution:
    """Positive root of the emission energy-conservation condition."""

    kappa: float
    k_star: float
    jacobian: float
    in_support: bool

    def residual(self, P: float, z: float, omega: float, params: AtomParameters) -> float:
        k = self.k_star
        return k * k / (2.0 * params.M) - P * k * z / params.M + k - omega


def energy_delta_root(P: float, z: float, omega: float, params: AtomParameters) -> DeltaRootSolution:
    """Solve k^2/(2M) - P k z/M + k - omega = 0 for the positive root.

    Uses k* = 2 omega / (kappa + b) with b = 1 - P z / M, which is exact
    and free of the cancellation of the naive M (kappa - b) form when
    omega/M is tiny.  Out-of-support configurations (no positive real
    root, as for every excitation attempt with |P| <= 0.3 Mc) are flagged
    rather than raised.
    """
    if abs(z) > 1.0 + 1e-12:
        raise DomainError("need |z| <= 1")
    z = min(1.0, max(-1.0, z))
    if P < 0:
        raise DomainError("P is a magnitude, need P >= 0")
    M = params.M
    b = 1.0 - P * z / M
    disc = b * b + 2.0 * omega / M
    if disc < 0.0:
        return DeltaRootSolution(kappa=0.0, k_star=0.0, jacobian=0.0, in_support=False)
    kappa = math.sqrt(disc)
    denom = kappa + b
    if denom <= 0.0:
        return DeltaRootSolution(kappa=kappa, k_star=0.0, jacobian=0.0, in_support=False)
    k_star = 2.0 * omega / denom
    if k_star <= 0.0:
        # boundary k* = 0 carries zero weight (k^3 factor); treat as empty
        return DeltaRootSolution(kappa=kappa, k_star=0.0, jacobian=kappa, in_support=False)
    return DeltaRootSolution(kappa=kappa, k_star=k_star, jacobian=kappa, in_support=True)


def delta_radial_integral(
    P: float, z: float, omega: float, poly: tuple[float, float, float], params: AtomParameters
) -> float:
    """Exact value of Int_0^inf dk k^3 delta(k^2/(2M) - Pkz/M + k - omega)
    (a0 + a1 k + a2 k^2); zero when the delta has no positive root."""
    root = energy_delta_root(P, z, omega, params)
    if not root.in_support:
        return 0.0
    a0, a1, a2 = poly
    k = root.k_star
    return k**3 * (a0 + a1 * k + a2 * k * k) / root.jacobian


def trace_polynomial(P: float, z: float, params: AtomParameters) -> tuple[float, float, float]:
    """Trace of the polarization sum as a quadratic in k.

    tr sum_s alpha (x) alpha = 2 (b + k/(2M))^2 + p^2 (1 - z^2) with
    b = 1 - p z, p = P/M; returned as (a0, a1, a2) coefficients of k^0..2.
    """
    M = params.M
    p = P / M
    b = 1.0 - p * z
    return (2.0 * b * b + p * p * (1.0 - z * z), 2.0 * b / M, 1.0 / (2.0 * M * M))


def reference_momentum_sq(params: AtomParameters) -> float:
    """P0^2 = (omega/M)^3 M^2, the leading value of the rate kernel (eV^2)."""
    w = params.omega / params.M
    return w**3 * params.M**2


def rate_kernel_exact(
    P: float, params: AtomParameters, n_angular: int = 32, enforce_guard: bool = True
) -> float:
    """Momentum-dependent rate kernel g(P) from the exact root evaluation.

    g(P) = (1/(4M)) Int_{-1}^{1} dz k*^3 (a0 + a1 k* + a2 k*^2) / kappa
    with the trace polynomial coefficients; Gauss-Legendre in z = e_P.e_k
    (the azimuthal integral is trivial for an isotropic momentum state).
    Exactly zero for omega < 0: the delta argument is positive for every
    |P| <= 0.3 Mc.  ``enforce_guard=False`` lets the Gaussian averaging
    evaluate the formal far tail of the momentum distribution; validity is
    then governed by sigma_p, not by individual tail nodes.
    """
    if enforce_guard and P >= MOMENTUM_GUARD * params.M:
        raise DomainError("P must stay below 0.3 Mc")
    zs, wz = np.polynomial.legendre.leggauss(n_angular)
    acc = 0.0
    for z, w in zip(zs, wz):
        acc += w * delta_radial_integral(P, z, params.omega, trace_polynomial(P, z, params), params)
    return acc / (4.0 * params.M)


def rate_kernel_series(P: float, params: AtomParameters) -> float:
    """Quoted quadratic expansion P0^2 (1 - 3/2 omega/M + 2/3 (P/M)^2).

    This keeps the published subleading coefficients as stated; the exact
    kernel carries 4/3 (P/Mc)^2 instead of 2/3 (see module docstring).
    """
    w = params.omega / params.M
    p = P / params.M
    return reference_momentum_sq(params) * (1.0 - 1.5 * w + (2.0 / 3.0) * p * p)


def _dipole_norm_sq(a, b, params: AtomParameters) -> float:
    d = hydrogen.dipole_matrix_element(a, b, params)
    norm = float(np.sum(np.abs(d) ** 2))
    if norm < 1e-20 * params.a0**2:
        raise DomainError(f"transition {a} -> {b} is dipole-forbidden")
    return norm


def base_rate(a, b, params: AtomParameters, units: UnitSystem) -> float:
    """Uncorrected dipole rate Gamma_0 = e^2 omega^3 |<a|r|b>|^2 / (3 pi), in 1/s."""
    gamma_ev = (
        units.e_squared * abs(params.omega) ** 3 * _dipole_norm_sq(a, b, params) / (3.0 * math.pi)
    )
    return seconds_inverse_from_ev(gamma_ev)


def emission_rate_closed(
    dist: GaussianMomentumDistribution, a, b, params: AtomParameters, units: UnitSystem
) -> float:
    """Closed-form corrected rate Gamma_0 (1 - 3/2 omega/M + 2/3 (sigma_p/M)^2), 1/s."""
    dist.validate_for(params)
    w = params.omega / params.M
    s = dist.sigma_p / params.M
    return base_rate(a, b, params, units) * (1.0 - 1.5 * w + (2.0 / 3.0) * s * s)


def emission_rate_numeric(
    dist: GaussianMomentumDistribution,
    a,
    b,
    params: AtomParameters,
    units: UnitSystem,
    n_radial: int = 64,
) -> float:
    """Full golden-rule rate: Gaussian momentum average of the exact kernel.

    Gamma = e^2/(8 pi^2) |d|^2 (32 pi^2 M / 3) Int_0^inf dP P^2 |phi(P)|^2 g(P),
    no series expansion anywhere.  The radial average uses Gauss-Hermite
    nodes (even extension) scaled by sigma_p; sigma_p = 0 collapses to the
    exact P = 0 kernel.  Returns exactly 0 for an excitation (omega < 0).
    """
    dist.validate_for(params)
    norm_sq = _dipole_norm_sq(a, b, params)
    pref = units.e_squared / (8.0 * math.pi**2) * norm_sq * (32.0 * math.pi**2 * params.M / 3.0)
    if dist.sigma_p == 0.0:
        radial_avg = rate_kernel_exact(0.0, params) / (4.0 * math.pi)
    else:
        x, wx = np.polynomial.hermite.hermgauss(2 * n_radial)
        pos = x > 0
        x, wx = x[pos], wx[pos]
        s = dist.sigma_p
        # Int_0^inf P^2 |phi|^2 g dP = (2 pi s^2)^{-3/2} Int_0^inf P^2 e^{-P^2/2s^2} g dP,
        # P = s sqrt(2) x maps the weight onto e^{-x^2} (Gauss-Hermite, even half)
        ps = s * math.sqrt(2.0) * x
        kernel = np.array([rate_kernel_exact(float(p), params, enforce_guard=False) for p in ps])
        radial_avg = (
            (2.0 * math.pi * s * s) ** (-1.5)
            * (s * math.sqrt(2.0)) ** 3
            * math.fsum(wx * x * x * kernel)
        )
    return seconds_inverse_from_ev(pref * radial_avg)


def self_energy_shift(q, k_uv: float, params: AtomParameters, units: UnitSystem) -> float:
    """Cutoff-regularized Coulombic self-energy of level q, in eV.

    e^2 k_uv^3/(18 pi^2) [ <r^2> + (dm/(2M))^2 <r^4> / 5 ]; the cutoff must
    stay below the reduced-mass Compton scale for the non-relativistic
    description to hold.
    """
    if not 0.0 < k_uv <= params.mu:
        raise DomainError("need 0 < k_uv <= mu c (Compton-scale cutoff guard)")
    r2 = hydrogen.radial_moment(q, 2, params)
    r4 = hydrogen.radial_moment(q, 4, params)
    half_dm = params.delta_m_over_M / 2.0
    bracket = r2 + half_dm**2 * r4 / 5.0
    return units.e_squared * k_uv**3 / (18.0 * math.pi**2) * bracket
