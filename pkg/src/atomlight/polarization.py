"""Momentum-space electromagnetic tensor algebra.

Transverse polarization bases, the recoil/Doppler-corrected coupling
vectors of a moving atom, their closed-form polarization sum, the
transverse projector, and the momentum-space kernel of a boosted electric
field correlator (the M matrix).  Everything here is c-number 3-vector /
3x3-tensor algebra; no field operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .units import AtomParameters

__all__ = [
    "BoostParameters",
    "EPSILON",
    "polarization_basis",
    "polarization_basis_many",
    "effective_polarization",
    "effective_polarization_cross_form",
    "polarization_sum",
    "polarization_sum_direct",
    "transverse_projector",
    "boost_matrix",
]

# Levi-Civita symbol as a dense (3,3,3) array for einsum contractions.
EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_i, _k, _j] = -1.0

Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class BoostParameters:
    """Boost speed (units of c) and direction; 0 <= v < 1."""

    v: float
    direction: np.ndarray = field(default_factory=lambda: Z_AXIS.copy())

    def __post_init__(self):
        if not 0.0 <= self.v < 1.0:
            raise DomainError("boost speed must satisfy 0 <= v < 1")
        d = np.asarray(self.direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0.0:
            raise DomainError("boost direction must be a nonzero vector")
        object.__setattr__(self, "direction", d / norm)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v**2)

    @property
    def rapidity(self) -> float:
        return math.atanh(self.v)

    @property
    def velocity(self) -> np.ndarray:
        return self.v * self.direction

    def is_z_aligned(self, tol: float = 1e-12) -> bool:
        return bool(np.linalg.norm(self.direction - Z_AXIS) < tol)


def _unit_k(k) -> tuple[float, np.ndarray]:
    k = np.asarray(k, dtype=float)
    mag = float(np.linalg.norm(k))
    if mag == 0.0:
        raise DomainError("wavevector must be nonzero")
    return mag, k / mag


def polarization_basis(k):
    """Deterministic right-handed transverse basis (eps1, eps2) for k.

    The coordinate axis least aligned with e_k is Gram-Schmidt projected to
    give eps1; eps2 = e_k x eps1 completes the right-handed triad.  Stable
    away from branch flips because the chosen axis is never nearly parallel
    to e_k.
    """
    _, e = _unit_k(k)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(e)))] = 1.0
    u = axis - np.dot(axis, e) * e
    eps1 = u / np.linalg.norm(u)
    eps2 = np.cross(e, eps1)
    return eps1, eps2


def polarization_basis_many(ks: np.ndarray):
    """Vectorized polarization_basis for an (N, 3) array of wavevectors."""
    ks = np.asarray(ks, dtype=float)
    mags = np.linalg.norm(ks, axis=1)
    if np.any(mags == 0.0):
        raise DomainError("wavevectors must be nonzero")
    e = ks / mags[:, None]
    axes = np.eye(3)[np.argmin(np.abs(e), axis=1)]
    u = axes - np.sum(axes * e, axis=1, keepdims=True) * e
    eps1 = u / np.linalg.norm(u, axis=1, keepdims=True)
    eps2 = np.cross(e, eps1)
    return eps1, eps2


def _check_momentum_guard(P: np.ndarray, params: AtomParameters):
    if np.linalg.norm(P) >= 0.3 * params.M:
        raise DomainError(
            "|P| >= 0.3 Mc violates the non-relativistic center-of-mass assumption"
        )


def effective_polarization(k, s: int, P, params: AtomParameters) -> np.ndarray:
    """Coupling vector of mode (k, s) for an atom with COM momentum P.

    eps_s [1 - (P.e_k - |k|/2)/M] + e_k (P.eps_s)/M  in natural units; the
    |k|/2 piece is the photon-recoil shift of the COM momentum, the rest is
    the Doppler/aberration correction of the transverse polarization.
    """
    if s not in (0, 1):
        raise DomainError("polarization index must be 0 or 1")
    P = np.asarray(P, dtype=float)
    _check_momentum_guard(P, params)
    kmag, e = _unit_k(k)
    eps = polarization_basis(k)[s]
    M = params.M
    return eps * (1.0 - (np.dot(P, e) - kmag / 2.0) / M) + e * (np.dot(P, eps) / M)


def effective_polarization_cross_form(k, s: int, P, params: AtomParameters) -> np.ndarray:
    """Equivalent cross-product form eps - (e_k x eps) x (P - k/2) / M."""
    if s not in (0, 1):
        raise DomainError("polarization index must be 0 or 1")
    P = np.asarray(P, dtype=float)
    _check_momentum_guard(P, params)
    k = np.asarray(k, dtype=float)
    kmag, e = _unit_k(k)
    eps = polarization_basis(k)[s]
    return eps - np.cross(np.cross(e, eps), P - k / 2.0) / params.M


def transverse_projector(k) -> np.ndarray:
    """delta_ij - e_k^i e_k^j."""
    _, e = _unit_k(k)
    return np.eye(3) - np.outer(e, e)


def polarization_sum(k, P, params: AtomParameters) -> np.ndarray:
    """Closed form of sum_s alpha_s (x) alpha_s, organized in powers of
    h = |k|/(2M) and p = |P|/M.

    This is an exact algebraic identity with the direct basis summation,
    not an expansion; the grouping in powers only fixes the accumulation
    order (smallest terms last summed via fsum per entry).
    """
    P = np.asarray(P, dtype=float)
    _check_momentum_guard(P, params)
    kmag, e = _unit_k(k)
    M = params.M
    h = kmag / (2.0 * M)
    pmag = float(np.linalg.norm(P))
    p = pmag / M
    if pmag > 0:
        ep = P / pmag
        z = float(np.dot(ep, e))
    else:
        ep = np.zeros(3)
        z = 0.0
    proj = np.eye(3) - np.outer(e, e)
    mixed = 2.0 * z * np.eye(3) - np.outer(ep, e) - np.outer(e, ep)
    terms = (
        h * h * proj,
        h * (2.0 * proj - p * mixed),
        proj - p * mixed,
        p * p * (z * (z * np.eye(3) - np.outer(ep, e) - np.outer(e, ep)) + np.outer(e, e)),
    )
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            # fsum is exactly rounded, so the power grouping cannot lose
            # the small recoil terms against the O(1) projector
            out[i, j] = math.fsum(t[i, j] for t in terms)
    return out


def polarization_sum_direct(k, P, params: AtomParameters) -> np.ndarray:
    """sum_s alpha_s (x) alpha_s by explicit basis summation (oracle route)."""
    a0 = effective_polarization(k, 0, P, params)
    a1 = effective_polarization(k, 1, P, params)
    return np.outer(a0, a0) + np.outer(a1, a1)


def boost_matrix(k, boost: BoostParameters) -> np.ndarray:
    """Momentum-space kernel M of the boosted electric-field correlator.

    Valid for a boost along +z (rotate inputs first for other directions):

        M = [[g^2 (1 - e3 v)^2 - e1 e1,  -e1 e2,               g e1 (v - e3)],
             [-e1 e2,                g^2 (1 - e3 v)^2 - e2 e2,  g e2 (v - e3)],
             [g e1 (v - e3),         g e2 (v - e3),             1 - e3 e3   ]]

    with g = gamma and e the unit wavevector.  At v = 0 this is the
    transverse projector.
    """
    if not boost.is_z_aligned():
        raise DomainError("boost_matrix is defined for z-aligned boosts; rotate inputs first")
    _, e = _unit_k(k)
    v = boost.v
    g = boost.gamma
    e1, e2, e3 = e
    diag = g * g * (1.0 - e3 * v) ** 2
    m = np.array(
        [
            [diag - e1 * e1, -e1 * e2, g * e1 * (v - e3)],
            [-e1 * e2, diag - e2 * e2, g * e2 * (v - e3)],
            [g * e1 * (v - e3), g * e2 * (v - e3), 1.0 - e3 * e3],
        ]
    )
    return m
