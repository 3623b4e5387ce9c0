"""Electromagnetic vacuum two-point (Wightman) tensors.

Momentum representation with the t - t' -> t - t' - i*eps pole
prescription, evaluated in closed form: after the angular reduction in
spherical harmonics the radial k-integral reduces to elementary moments

    Int_0^inf k^n e^{-a k} {sin, cos}(k r) dk,   a = eps + i c (t - t'),

so the regulated tensor is exact for every eps > 0.  The eps -> 0 limits
off the light cone are the rational closed forms

    W_EE^ij = (1/(8 pi^2)) * 8 [r^2 (2 X^ij + d^ij) - u'^2 d^ij] / (r^2 - u'^2)^3,
    W_BE^ij = -(1/(8 pi^2)) * beta eps^{ijk} n_k,   beta = 16 u' r / (r^2 - u'^2)^3,

with u' = c (t2 - t1), n = (x1 - x2)/|x1 - x2|, X = n (x) n - identity,
W_BB = W_EE / c^2 and W_EB^ij = W_BE^ji.  Distributional light-cone terms
are never evaluated numerically; on-cone requests are refused.

Natural units hbar = c = eps0 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .polarization import EPSILON, BoostParameters

__all__ = [
    "Pairing",
    "SpacetimePointPair",
    "wightman_momentum",
    "wightman_closed",
    "boost_field_combination",
    "boost_wightman",
    "lorentz_map",
]


class Pairing(str, Enum):
    EE = "EE"
    BB = "BB"
    BE = "BE"
    EB = "EB"


@dataclass(frozen=True)
class SpacetimePointPair:
    """Two spacetime points (t1, x1) and (t2, x2); times in 1/eV, x in 1/eV."""

    t1: float
    x1: np.ndarray
    t2: float
    x2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=float).reshape(3))
        object.__setattr__(self, "x2", np.asarray(self.x2, dtype=float).reshape(3))

    @property
    def dt(self) -> float:
        return self.t1 - self.t2

    @property
    def dx(self) -> np.ndarray:
        return self.x1 - self.x2

    @property
    def r_tilde(self) -> float:
        return float(np.linalg.norm(self.dx))

    @property
    def interval(self) -> float:
        """r~^2 - (c dt)^2; zero on the light cone."""
        return self.r_tilde**2 - self.dt**2

    def is_off_lightcone(self, margin: float = 1e-9) -> bool:
        scale = max(self.r_tilde**2, self.dt**2)
        if scale == 0.0:
            return False  # coincident points
        return abs(self.interval) > margin * scale

    def separation_scale(self) -> float:
        vals = [v for v in (self.r_tilde, abs(self.dt)) if v > 0.0]
        if not vals:
            raise DomainError("coincident points: the self-energy divergence is not evaluated here")
        return min(vals)


def _moments(a: complex, r: float, n_max: int = 2):
    """S_n = Int k^n sin(kr) e^{-ak} dk and C_n analogue, n = 0..n_max."""
    factorial = (1.0, 1.0, 2.0, 6.0)
    s, c = [], []
    for n in range(n_max + 1):
        ip = factorial[n] / (a - 1j * r) ** (n + 1)
        im = factorial[n] / (a + 1j * r) ** (n + 1)
        s.append((ip - im) / 2j)
        c.append((ip + im) / 2.0)
    return s, c


def _default_epsilon(pair: SpacetimePointPair) -> float:
    """1e-3 times the smallest structure scale of the pair.

    The regulated moments have poles at a = -+ i (c dt -+ r); near the
    light cone the controlling scale is the cone distance | |c dt| - r |,
    not the separations themselves.
    """
    candidates = [
        v
        for v in (pair.r_tilde, abs(pair.dt), abs(abs(pair.dt) - pair.r_tilde))
        if v > 0.0
    ]
    if not candidates:
        raise DomainError("coincident points: the self-energy divergence is not evaluated here")
    return 1e-3 * min(candidates)


def wightman_momentum(
    pairing: Pairing | str, pair: SpacetimePointPair, epsilon: float | None = None
) -> np.ndarray:
    """Regulated momentum-representation Wightman tensor (complex 3x3).

    The k-integral of the field two-point function with dt -> dt - i eps;
    exact (closed form) for every eps > 0.  eps defaults to 1e-3 times the
    smallest nonzero separation scale of the pair.
    """
    pairing = Pairing(pairing)
    if epsilon is None:
        epsilon = _default_epsilon(pair)
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    a = epsilon + 1j * pair.dt
    r = pair.r_tilde

    if pairing in (Pairing.EE, Pairing.BB):
        if r == 0.0:
            # coincident spatial points: the angular average of the
            # transverse projector is (8 pi / 3) delta_ij, so
            # W = (1/(6 pi^2)) Int k^3 e^{-ak} dk = 1/(pi^2 a^4) per entry
            tensor = (1.0 / (math.pi**2 * a**4)) * np.eye(3)
        else:
            s, c = _moments(a, r)
            A = s[2] / r
            C = c[1] / r**2 - s[0] / r**3
            B = -A - 2.0 * C
            n = pair.dx / r
            tensor = (1.0 / (4.0 * math.pi**2)) * (
                (A + C) * np.eye(3) + (B - C) * np.outer(n, n)
            )
        return tensor  # c = 1: BB = EE / c^2 carries the same value

    # cross pairings: kernel -+ eps^{ijm} (e_k)_m; BE carries the minus sign
    if r == 0.0:
        return np.zeros((3, 3), dtype=complex)
    s, c = _moments(a, r)
    d_val = c[2] / r - s[1] / r**2  # Int k^3 j0'(kr) e^{-ak} dk
    n = pair.dx / r
    base = (1j / (4.0 * math.pi**2)) * d_val * np.einsum("ijm,m->ij", EPSILON, n)
    return base if pairing is Pairing.BE else -base


def _require_off_cone(pair: SpacetimePointPair):
    if not pair.is_off_lightcone():
        raise DomainError(
            "point pair is on (or too close to) the light cone; "
            "the distributional terms are not evaluated numerically"
        )


def wightman_closed(pairing: Pairing | str, pair: SpacetimePointPair) -> np.ndarray:
    """Off-cone closed-form Wightman tensor (the eps -> 0 boundary value)."""
    pairing = Pairing(pairing)
    _require_off_cone(pair)
    u = -pair.dt  # u' = c (t2 - t1)
    r = pair.r_tilde
    denom = (r * r - u * u) ** 3
    if pairing in (Pairing.EE, Pairing.BB):
        if r == 0.0:
            tensor = (1.0 / math.pi**2) * (1.0 / u**4) * np.eye(3)
            return tensor.astype(complex)
        n = pair.dx / r
        x_tensor = np.outer(n, n) - np.eye(3)
        tensor = (8.0 / (8.0 * math.pi**2)) * (
            r * r * (2.0 * x_tensor + np.eye(3)) - u * u * np.eye(3)
        ) / denom
        return tensor.astype(complex)
    if r == 0.0:
        return np.zeros((3, 3), dtype=complex)
    n = pair.dx / r
    beta = 16.0 * u * r / denom
    be = -(1.0 / (8.0 * math.pi**2)) * beta * np.einsum("ijm,m->ij", EPSILON, n)
    return (be if pairing is Pairing.BE else be.T).astype(complex)


def boost_field_combination(w_ee, w_bb, w_be, w_eb, velocity) -> np.ndarray:
    """Combine the four field correlators into the boosted E-E correlator.

    Implements the observer transformation E -> gamma (E + v x B) +
    (1 - gamma)(E . e_v) e_v applied to both field insertions, written with
    Levi-Civita contractions so that any boost direction is supported.
    """
    v = np.asarray(velocity, dtype=float)
    speed = float(np.linalg.norm(v))
    if speed >= 1.0:
        raise DomainError("boost speed must be < 1")
    if speed == 0.0:
        return np.asarray(w_ee)
    ev = v / speed
    gamma = 1.0 / math.sqrt(1.0 - speed**2)
    eps_v = np.einsum("abi,a->bi", EPSILON, v)  # (eps_v)_{bi} = eps_{abi} v^a
    term_g2 = (
        w_ee
        + np.einsum("bi,dj,bd->ij", eps_v, eps_v, w_bb)
        + np.einsum("bi,bj->ij", eps_v, w_be)
        + np.einsum("dj,id->ij", eps_v, w_eb)
    )
    scal = np.einsum("a,b,ab->", ev, ev, w_ee)
    term_1g2 = scal * np.outer(ev, ev)
    term_mix = (
        np.einsum("ia,a,j->ij", w_ee, ev, ev)
        + np.einsum("aj,a,i->ij", w_ee, ev, ev)
        + np.einsum("bi,bc,c,j->ij", eps_v, w_be, ev, ev)
        + np.einsum("dj,ad,a,i->ij", eps_v, w_eb, ev, ev)
    )
    return gamma**2 * term_g2 + (1.0 - gamma) ** 2 * term_1g2 + gamma * (1.0 - gamma) * term_mix


def boost_wightman(
    pairing: Pairing | str, pair: SpacetimePointPair, boost: BoostParameters
) -> np.ndarray:
    """E-E correlator as seen by a boosted observer, at unmapped coordinates.

    Only the EE pairing transforms this way; evaluated from the four
    closed-form tensors at the given (lab) pair.  Vacuum invariance makes
    this equal to wightman_closed(EE, lorentz_map(pair, boost)).
    """
    if Pairing(pairing) is not Pairing.EE:
        raise DomainError("boost_wightman is defined for the EE pairing")
    _require_off_cone(pair)
    w_ee = wightman_closed(Pairing.EE, pair)
    w_bb = wightman_closed(Pairing.BB, pair)
    w_be = wightman_closed(Pairing.BE, pair)
    w_eb = wightman_closed(Pairing.EB, pair)
    return boost_field_combination(w_ee, w_bb, w_be, w_eb, boost.velocity)


def lorentz_map(pair: SpacetimePointPair, boost: BoostParameters) -> SpacetimePointPair:
    """Coordinates of the same two events in the boosted observer's frame.

    t' = gamma (t - v . x),  x'_par = gamma (x_par - v t),  x'_perp = x_perp.
    """
    v = boost.velocity
    gamma = boost.gamma
    ev = boost.direction

    def map_one(t, x):
        par = float(np.dot(x, ev))
        tp = gamma * (t - boost.v * par)
        par_p = gamma * (par - boost.v * t)
        return tp, x + (par_p - par) * ev

    t1, x1 = map_one(pair.t1, pair.x1)
    t2, x2 = map_one(pair.t2, pair.x2)
    return SpacetimePointPair(t1, x1, t2, x2)
