import math

import numpy as np
import pytest
import scipy.integrate
from scipy.special import eval_genlaguerre

from atomlight import hydrogen
from atomlight.errors import DomainError
from atomlight.hydrogen import (
    FormFactorTable,
    QuantumNumbers,
    dipole_matrix_element,
    form_factor,
    orbital_dipole_matrix_element,
    parse_orbital,
    radial_moment,
    radial_wavefunction,
    smearing_vector,
    wavefunction,
)

S1 = QuantumNumbers(1, 0, 0)
S2 = QuantumNumbers(2, 0, 0)
PZ2 = QuantumNumbers(2, 1, 0)


class TestQuantumNumbers:
    @pytest.mark.parametrize("n,l,m", [(0, 0, 0), (1, 1, 0), (2, 1, 2), (3, -1, 0)])
    def test_invalid(self, n, l, m):
        with pytest.raises(DomainError):
            QuantumNumbers(n, l, m)

    def test_valid_range(self):
        for n in range(1, 5):
            for l in range(n):
                for m in range(-l, l + 1):
                    QuantumNumbers(n, l, m)


class TestWavefunction:
    def test_ground_state_at_origin(self, hydrogen_params):
        val = wavefunction(S1, np.zeros(3), hydrogen_params)
        assert val == pytest.approx(1.0 / math.sqrt(math.pi * hydrogen_params.a0**3), rel=1e-12)

    def test_2p_against_series_definition(self, hydrogen_params):
        # independent radial-angular product at r = a0 on the polar axis
        a0 = hydrogen_params.a0
        radial = (
            (2.0 / (2 * a0)) ** 1.5
            * math.sqrt(math.factorial(0) / (4.0 * math.factorial(3)))
            * math.exp(-0.5)
            * 1.0
            * eval_genlaguerre(0, 3, 1.0)
        )
        angular = math.sqrt(3.0 / (4.0 * math.pi))
        val = wavefunction(PZ2, np.array([0.0, 0.0, a0]), hydrogen_params)
        assert complex(val) == pytest.approx(radial * angular, rel=1e-12)

    @pytest.mark.parametrize(
        "q", [QuantumNumbers(n, l, 0) for n in (1, 2, 3) for l in range(n)]
    )
    def test_radial_normalization(self, q, hydrogen_params):
        a0 = hydrogen_params.a0
        val, _ = scipy.integrate.quad(
            lambda r: radial_wavefunction(q.n, q.l, r, a0) ** 2 * r**2,
            0.0,
            200.0 * a0,
            epsabs=0.0,
            epsrel=1e-13,
        )
        assert abs(val - 1.0) < 1e-10

    def test_orthonormality_n_le_3(self, hydrogen_params):
        a0 = hydrogen_params.a0
        states = [QuantumNumbers(n, l, 0) for n in (1, 2, 3) for l in range(n)]
        for qa in states:
            for qb in states:
                if qa.l != qb.l:
                    continue  # angular part is exactly orthogonal
                val, _ = scipy.integrate.quad(
                    lambda r: radial_wavefunction(qa.n, qa.l, r, a0)
                    * radial_wavefunction(qb.n, qb.l, r, a0)
                    * r**2,
                    0.0,
                    300.0 * a0,
                    epsabs=1e-11,  # orthogonal pairs are roundoff-limited zeros
                    epsrel=1e-12,
                    limit=200,
                )
                assert abs(val - (1.0 if qa == qb else 0.0)) < 1e-9


class TestSmearingVector:
    def test_pointwise_definition(self, hydrogen_params, rng):
        sm = smearing_vector(S1, PZ2, hydrogen_params)
        pts = rng.normal(0.0, 2 * hydrogen_params.a0, size=(40, 3))
        expected = pts * (
            np.conj(wavefunction(S1, pts, hydrogen_params))
            * wavefunction(PZ2, pts, hydrogen_params)
        )[:, None]
        np.testing.assert_allclose(sm(pts), expected, rtol=1e-13)

    def test_conjugation_symmetry(self, hydrogen_params, rng):
        a = QuantumNumbers(2, 1, 1)
        fwd = smearing_vector(S1, a, hydrogen_params)
        rev = smearing_vector(a, S1, hydrogen_params)
        pts = rng.normal(0.0, 2 * hydrogen_params.a0, size=(25, 3))
        np.testing.assert_allclose(rev(pts), np.conj(fwd(pts)), rtol=1e-13)


class TestDipoleMatrixElement:
    def test_lyman_alpha_squared_norm(self, hydrogen_params):
        d = dipole_matrix_element(S1, PZ2, hydrogen_params)
        target = (2.0**15 / 3.0**10) * hydrogen_params.a0**2
        assert np.sum(np.abs(d) ** 2) == pytest.approx(target, rel=1e-10)

    def test_parity_selection(self, hydrogen_params):
        d = dipole_matrix_element(S1, S1, hydrogen_params)
        assert np.max(np.abs(d)) < 1e-12 * hydrogen_params.a0
        d = dipole_matrix_element(S1, S2, hydrogen_params)
        assert np.max(np.abs(d)) < 1e-12 * hydrogen_params.a0

    def test_2s_2p_element(self, hydrogen_params):
        d = dipole_matrix_element(S2, PZ2, hydrogen_params)
        assert abs(d[2]) ** 2 == pytest.approx(9.0 * hydrogen_params.a0**2, rel=1e-10)
        assert abs(d[0]) < 1e-12 * hydrogen_params.a0
        assert abs(d[1]) < 1e-12 * hydrogen_params.a0

    def test_rotational_symmetry_of_2p_orbitals(self, hydrogen_params):
        norms = []
        for label in ("2px", "2py", "2pz"):
            d = orbital_dipole_matrix_element(
                parse_orbital("1s"), parse_orbital(label), hydrogen_params
            )
            norms.append(float(np.sum(np.abs(d) ** 2)))
        assert norms[0] == pytest.approx(norms[2], rel=1e-12)
        assert norms[1] == pytest.approx(norms[2], rel=1e-12)


class TestRadialMoment:
    def test_normalization_moment(self, hydrogen_params):
        assert radial_moment(S1, 0, hydrogen_params) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("k,coeff", [(1, 1.5), (2, 3.0), (4, 22.5)])
    def test_ground_state_moments(self, k, coeff, hydrogen_params):
        # closed form <r^k>_1s = (k+2)!/2^{k+1} a0^k
        val = radial_moment(S1, k, hydrogen_params)
        assert val == pytest.approx(coeff * hydrogen_params.a0**k, rel=1e-11)
        assert coeff == math.factorial(k + 2) / 2 ** (k + 1)

    def test_rejects_large_power(self, hydrogen_params):
        with pytest.raises(DomainError):
            radial_moment(S1, 7, hydrogen_params)


def _brute_force_form_factor_z(a, b, kmag, params):
    """Direct 2D quadrature of the Fourier integral for k along z.

    Independent of the spherical-Bessel expansion route: integrates
    r^2 dr du (2 pi) e^{i k r u} F_z with F the smearing vector.
    """
    a0 = params.a0

    def inner(r):
        out = np.empty(len(r), dtype=complex)
        for i, ri in enumerate(r):
            def f_u(u):
                pts = np.column_stack(
                    [np.sqrt(1 - u**2) * ri, np.zeros_like(u), u * ri]
                )
                psi = np.conj(wavefunction(a, pts, params)) * wavefunction(b, pts, params)
                return np.exp(1j * kmag * ri * u) * (ri * u) * psi

            val = scipy.integrate.quad(
                lambda u: np.real(f_u(np.array([u]))[0]), -1, 1, epsabs=1e-30,
                epsrel=1e-12, limit=200,
            )[0] + 1j * scipy.integrate.quad(
                lambda u: np.imag(f_u(np.array([u]))[0]), -1, 1, epsabs=1e-30,
                epsrel=1e-12, limit=200,
            )[0]
            out[i] = val
        return out * 2.0 * np.pi * r**2

    re = scipy.integrate.quad(
        lambda r: np.real(inner(np.array([r]))[0]), 0, 60 * a0, epsabs=1e-30, epsrel=1e-11, limit=200
    )[0]
    im = scipy.integrate.quad(
        lambda r: np.imag(inner(np.array([r]))[0]), 0, 60 * a0, epsabs=1e-30, epsrel=1e-11, limit=200
    )[0]
    return re + 1j * im


class TestFormFactor:
    def test_zero_wavevector_is_dipole_element(self, hydrogen_params):
        f = form_factor(S1, PZ2, np.zeros(3), hydrogen_params)
        d = dipole_matrix_element(S1, PZ2, hydrogen_params)
        np.testing.assert_allclose(f, d, rtol=1e-12)

    def test_against_direct_quadrature(self, hydrogen_params):
        kmag = 1.0 / hydrogen_params.a0
        f = form_factor(S1, PZ2, np.array([0.0, 0.0, kmag]), hydrogen_params)
        brute = _brute_force_form_factor_z(S1, PZ2, kmag, hydrogen_params)
        assert abs(f[2] - brute) < 1e-8 * abs(brute)
        assert abs(f[0]) < 1e-13 * abs(brute)
        assert abs(f[1]) < 1e-13 * abs(brute)

    def test_transverse_square_profile(self, hydrogen_params, rng):
        # sum |f|^2 - |f.e_k|^2 times (4 a0^2 k^2 + 9)^6 is k-independent
        a0 = hydrogen_params.a0
        table = FormFactorTable(S1, PZ2, hydrogen_params)
        dirs = rng.normal(size=(6, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        ratios = []
        for kmag in (0.2 / a0, 0.7 / a0, 1.9 / a0):
            tsq = table.transverse_square(kmag, dirs)
            # direction dependence carries 1 - (e_k . z)^2; divide it out
            geom = 1.0 - dirs[:, 2] ** 2
            np.testing.assert_allclose(tsq / geom, tsq[0] / geom[0], rtol=1e-10)
            ratios.append(tsq[0] / geom[0] * (4 * a0**2 * kmag**2 + 9) ** 6)
        assert ratios[1] == pytest.approx(ratios[0], rel=1e-8)
        assert ratios[2] == pytest.approx(ratios[0], rel=1e-8)

    def test_hermiticity(self, hydrogen_params, rng):
        a = QuantumNumbers(2, 1, 1)
        k = rng.normal(size=3) / (2 * hydrogen_params.a0 * np.linalg.norm(rng.normal(size=3)))
        f_ab = form_factor(S1, a, k, hydrogen_params)
        f_ba = form_factor(a, S1, -k, hydrogen_params)
        np.testing.assert_allclose(f_ab, np.conj(f_ba), rtol=1e-10, atol=1e-18)

    def test_rejects_non_finite(self, hydrogen_params):
        with pytest.raises(DomainError):
            form_factor(S1, PZ2, np.array([np.nan, 0, 0]), hydrogen_params)


class TestOrbitalLabels:
    def test_pure_labels(self):
        assert parse_orbital("1s") == [(1.0, S1)]
        assert parse_orbital("2pz") == [(1.0, PZ2)]
        assert parse_orbital("3,2,-1") == [(1.0, QuantumNumbers(3, 2, -1))]

    def test_real_orbitals_are_unit_norm(self):
        for label in ("2px", "2py"):
            terms = parse_orbital(label)
            assert sum(abs(c) ** 2 for c, _ in terms) == pytest.approx(1.0)

    def test_unknown_label(self):
        with pytest.raises(DomainError):
            parse_orbital("5q")
