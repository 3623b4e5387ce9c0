"""Hydrogenic bound states, dipole smearing vectors, and form factors.

Closed-form reduced-mass wavefunctions

    psi_{nlm}(r) = R_{nl}(|r|; a0) Y_{lm}(r/|r|),
    R_{nl}(r) = sqrt((2/(n a0))^3 (n-l-1)! / (2n (n+l)!))
                * exp(-rho/2) rho^l L_{n-l-1}^{2l+1}(rho),   rho = 2r/(n a0),

with the Condon-Shortley phase convention for the spherical harmonics.
The a0 stored in AtomParameters is already the reduced-mass Bohr radius.

The dipole weight between two levels is the smearing vector
F_ab(r) = r psi_a*(r) psi_b(r); its integral is the dipole matrix element
and its Fourier transform f_ab(k) is the form factor that controls which
field modes couple to the transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre, lpmv, spherical_jn

from .errors import DomainError, NumericalError
from .quadrature import integrate_1d, sphere_rule
from .units import AtomParameters

__all__ = [
    "QuantumNumbers",
    "SmearingVector",
    "spherical_harmonic",
    "radial_wavefunction",
    "wavefunction",
    "smearing_vector",
    "dipole_matrix_element",
    "radial_moment",
    "form_factor",
    "FormFactorTable",
    "parse_orbital",
    "orbital_dipole_matrix_element",
]

MAX_N = 6  # radial quadrature windows are validated up to n = 6


@dataclass(frozen=True)
class QuantumNumbers:
    """Hydrogenic level label (n, l, m)."""

    n: int
    l: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.l < 0 or self.l > self.n - 1 or abs(self.m) > self.l:
            raise DomainError(f"invalid quantum numbers (n={self.n}, l={self.l}, m={self.m})")
        if self.n > MAX_N:
            raise DomainError(f"n = {self.n} exceeds the supported range n <= {MAX_N}")

    def __str__(self):
        return f"(n={self.n}, l={self.l}, m={self.m})"


def spherical_harmonic(l: int, m: int, theta, phi):
    """Y_lm(theta, phi), Condon-Shortley phase, vectorized."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ma = abs(m)
    norm = math.sqrt(
        (2 * l + 1) / (4.0 * math.pi) * math.factorial(l - ma) / math.factorial(l + ma)
    )
    # lpmv carries the (-1)^m Condon-Shortley factor for m >= 0
    plm = lpmv(ma, l, np.cos(theta))
    y = norm * plm * np.exp(1j * ma * phi)
    if m < 0:
        y = (-1.0) ** ma * np.conj(y)
    return y


def radial_wavefunction(n: int, l: int, r, a0: float):
    """R_nl(r) for the reduced-mass Bohr radius a0 (r in 1/eV)."""
    r = np.asarray(r, dtype=float)
    rho = 2.0 * r / (n * a0)
    norm = math.sqrt(
        (2.0 / (n * a0)) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l))
    )
    return norm * np.exp(-rho / 2.0) * rho**l * eval_genlaguerre(n - l - 1, 2 * l + 1, rho)


def _angles(r):
    """Radius, polar angle, azimuth of points with shape (..., 3)."""
    r = np.asarray(r, dtype=float)
    rad = np.linalg.norm(r, axis=-1)
    safe = np.where(rad > 0, rad, 1.0)
    theta = np.arccos(np.clip(r[..., 2] / safe, -1.0, 1.0))
    phi = np.arctan2(r[..., 1], r[..., 0])
    return rad, theta, phi


def wavefunction(q: QuantumNumbers, r, params: AtomParameters):
    """psi_nlm at position(s) r with shape (..., 3); complex."""
    rad, theta, phi = _angles(r)
    return radial_wavefunction(q.n, q.l, rad, params.a0) * spherical_harmonic(
        q.l, q.m, theta, phi
    )


@dataclass(frozen=True)
class SmearingVector:
    """Spatial dipole weight F_ab(r) = r psi_a*(r) psi_b(r)."""

    a: QuantumNumbers
    b: QuantumNumbers
    params: AtomParameters

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        prod = np.conj(wavefunction(self.a, r, self.params)) * wavefunction(
            self.b, r, self.params
        )
        return r * prod[..., np.newaxis]


def smearing_vector(a: QuantumNumbers, b: QuantumNumbers, params: AtomParameters) -> SmearingVector:
    return SmearingVector(a, b, params)


def _radial_cutoff(a0: float, *ns: int) -> float:
    return 40.0 * max(ns) ** 2 * a0


def _radial_integral(f, r_max: float, rtol: float = 1e-12) -> float:
    """Adaptive radial integral on [0, r_max] with an exponential-tail check."""
    res = integrate_1d(f, 0.0, r_max, rtol=rtol)
    # wavefunction products decay at least like exp(-r/(n a0)); the residual
    # tail is bounded by |integrand(r_max)| * r_max, demanded negligible.
    tail = abs(float(np.max(np.abs(f(np.array([r_max])))))) * r_max
    scale = abs(res.value) if res.value != 0 else 1.0
    if tail > 1e-12 * scale:
        raise NumericalError(f"radial window too small: tail bound {tail:.3e} vs value {scale:.3e}")
    return float(np.real(res.value))


def radial_moment(q: QuantumNumbers, k: int, params: AtomParameters) -> float:
    """Expectation <q| |r|^k |q> in units of (1/eV)^k, k <= 6."""
    if k < 0 or k > 6:
        raise DomainError("radial moments supported for 0 <= k <= 6")
    a0 = params.a0

    def f(r):
        return radial_wavefunction(q.n, q.l, r, a0) ** 2 * r ** (2 + k)

    return _radial_integral(f, _radial_cutoff(a0, q.n))


@lru_cache(maxsize=256)
def _angular_dipole_coeffs(a: QuantumNumbers, b: QuantumNumbers) -> tuple:
    """G^j = Int dOmega conj(Y_a) n^j Y_b over the unit sphere (exact rule)."""
    dirs, w = sphere_rule(16)
    theta = np.arccos(np.clip(dirs[:, 2], -1, 1))
    phi = np.arctan2(dirs[:, 1], dirs[:, 0])
    ya = spherical_harmonic(a.l, a.m, theta, phi)
    yb = spherical_harmonic(b.l, b.m, theta, phi)
    g = np.tensordot(w * np.conj(ya) * yb, dirs, axes=([0], [0]))
    return tuple(g)


def dipole_matrix_element(a: QuantumNumbers, b: QuantumNumbers, params: AtomParameters):
    """<a| r |b> as a complex 3-vector in 1/eV."""
    a0 = params.a0

    def f(r):
        return (
            radial_wavefunction(a.n, a.l, r, a0)
            * radial_wavefunction(b.n, b.l, r, a0)
            * r**3
        )

    radial = _radial_integral(f, _radial_cutoff(a0, a.n, b.n))
    return radial * np.array(_angular_dipole_coeffs(a, b))


class FormFactorTable:
    """Separated spherical-harmonic expansion of the form factor f_ab(k).

    With e^{i k.r} = sum_lm 4 pi i^l j_l(kr) Y*_lm(e_k) Y_lm(e_r),

        f_ab(k) = sum_lm 4 pi i^l Y*_lm(e_k) rho_l(|k|) G_lm,
        rho_l(k) = Int dr r^3 R_a R_b j_l(kr),
        G_lm^j   = Int dOmega Y_lm conj(Y_a) n^j Y_b.

    The angular coefficients G terminate exactly at l = l_a + l_b + 1; the
    first omitted shell is evaluated once and asserted negligible instead of
    being assumed so.  Radial integrals are cached per |k|.
    """

    def __init__(self, a: QuantumNumbers, b: QuantumNumbers, params: AtomParameters):
        self.a, self.b, self.params = a, b, params
        self.l_max = a.l + b.l + 1
        dirs, w = sphere_rule(24)
        theta = np.arccos(np.clip(dirs[:, 2], -1, 1))
        phi = np.arctan2(dirs[:, 1], dirs[:, 0])
        ya = spherical_harmonic(a.l, a.m, theta, phi)
        yb = spherical_harmonic(b.l, b.m, theta, phi)
        core = (np.conj(ya) * yb)[:, None] * dirs  # (N, 3)
        self._g = {}
        for l in range(self.l_max + 2):
            for m in range(-l, l + 1):
                ylm = spherical_harmonic(l, m, theta, phi)
                g = np.tensordot(w * ylm, core, axes=([0], [0]))
                self._g[(l, m)] = g
        # truncation guard: the shell beyond l_max must vanish identically
        extra = max(
            np.max(np.abs(self._g[(self.l_max + 1, m)])) for m in range(-self.l_max - 1, self.l_max + 2)
        )
        if extra > 1e-13:
            raise NumericalError(
                f"spherical-harmonic truncation failed: |G| = {extra:.3e} at l = {self.l_max + 1}"
            )
        self._radial_cache: dict[tuple[int, float], float] = {}

    def radial(self, l: int, kmag: float) -> float:
        key = (l, float(kmag))
        if key not in self._radial_cache:
            a0 = self.params.a0

            def f(r):
                return (
                    radial_wavefunction(self.a.n, self.a.l, r, a0)
                    * radial_wavefunction(self.b.n, self.b.l, r, a0)
                    * r**3
                    * spherical_jn(l, kmag * r)
                )

            rmax = _radial_cutoff(a0, self.a.n, self.b.n)
            self._radial_cache[key] = float(
                np.real(integrate_1d(f, 0.0, rmax, rtol=1e-12).value)
            )
        return self._radial_cache[key]

    def evaluate(self, kmag: float, dirs) -> np.ndarray:
        """f_ab at |k| = kmag for unit direction(s) dirs (..., 3)."""
        dirs = np.asarray(dirs, dtype=float)
        single = dirs.ndim == 1
        d = dirs[None, :] if single else dirs
        if kmag == 0.0:
            out = np.broadcast_to(
                dipole_matrix_element(self.a, self.b, self.params), d.shape
            ).copy()
            return out[0] if single else out
        theta = np.arccos(np.clip(d[:, 2], -1, 1))
        phi = np.arctan2(d[:, 1], d[:, 0])
        out = np.zeros((len(d), 3), dtype=complex)
        for l in range(self.l_max + 1):
            rho = self.radial(l, kmag)
            if rho == 0.0:
                continue
            for m in range(-l, l + 1):
                g = self._g[(l, m)]
                if np.max(np.abs(g)) < 1e-15:
                    continue
                ylm = np.conj(spherical_harmonic(l, m, theta, phi))
                out += (4.0 * math.pi * (1j**l) * rho) * ylm[:, None] * g[None, :]
        return out[0] if single else out

    def transverse_square(self, kmag: float, dirs) -> np.ndarray:
        """|f|^2 - |f . e_k|^2 for unit direction(s) dirs."""
        dirs = np.asarray(dirs, dtype=float)
        single = dirs.ndim == 1
        d = dirs[None, :] if single else dirs
        f = self.evaluate(kmag, d)
        total = np.sum(np.abs(f) ** 2, axis=1)
        along = np.abs(np.sum(f * d, axis=1)) ** 2
        out = total - along
        return out[0] if single else out

    def total_square(self, kmag: float, dirs) -> np.ndarray:
        """|f|^2 for unit direction(s) dirs (scale reference, no cancellation)."""
        dirs = np.asarray(dirs, dtype=float)
        single = dirs.ndim == 1
        d = dirs[None, :] if single else dirs
        f = self.evaluate(kmag, d)
        out = np.sum(np.abs(f) ** 2, axis=1)
        return out[0] if single else out


def form_factor(a: QuantumNumbers, b: QuantumNumbers, k, params: AtomParameters):
    """Fourier transform of the smearing vector, f_ab(k) = Int e^{ik.r} F_ab(r) d^3r."""
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise DomainError("wavevector must be finite")
    kmag = float(np.linalg.norm(k))
    if kmag == 0.0:
        return dipole_matrix_element(a, b, params).astype(complex)
    return FormFactorTable(a, b, params).evaluate(kmag, k / kmag)


# -- spectroscopic labels -----------------------------------------------------

_REAL_ORBITALS = {
    "s": ((1.0, 0, 0),),
    "pz": ((1.0, 1, 0),),
    # p_x = (|1,-1> - |1,1>)/sqrt(2), p_y = i(|1,-1> + |1,1>)/sqrt(2)
    "px": ((1.0 / math.sqrt(2), 1, -1), (-1.0 / math.sqrt(2), 1, 1)),
    "py": ((1j / math.sqrt(2), 1, -1), (1j / math.sqrt(2), 1, 1)),
}


def parse_orbital(label: str):
    """Map a label like '1s', '2pz', '3px' or 'n,l,m' to [(coeff, QuantumNumbers)].

    Real p orbitals are the usual unit-norm combinations of m = +-1 states.
    """
    label = label.strip().lower()
    if "," in label:
        try:
            n, l, m = (int(p) for p in label.split(","))
        except ValueError:
            raise DomainError(f"cannot parse quantum numbers from {label!r}") from None
        return [(1.0, QuantumNumbers(n, l, m))]
    for suffix, terms in sorted(_REAL_ORBITALS.items(), key=lambda kv: -len(kv[0])):
        if label.endswith(suffix):
            head = label[: -len(suffix)]
            if head.isdigit():
                n = int(head)
                return [(c, QuantumNumbers(n, l, m)) for c, l, m in terms]
    supported = "1s, 2s, 2px, 2py, 2pz, ... or explicit 'n,l,m'"
    raise DomainError(f"unknown orbital label {label!r}; supported: {supported}")


def orbital_dipole_matrix_element(orb_a, orb_b, params: AtomParameters):
    """Dipole matrix element between (possibly real-orbital) superpositions."""
    out = np.zeros(3, dtype=complex)
    for ca, qa in orb_a:
        for cb, qb in orb_b:
            out += np.conj(ca) * cb * dipole_matrix_element(qa, qb, params)
    return out
