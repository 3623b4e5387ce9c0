import numpy as np
import pytest

from atomlight.errors import DomainError
from atomlight.polarization import (
    BoostParameters,
    boost_matrix,
    effective_polarization,
    effective_polarization_cross_form,
    polarization_basis,
    polarization_basis_many,
    polarization_sum,
    polarization_sum_direct,
    transverse_projector,
)

Z = np.array([0.0, 0.0, 1.0])


def _random_k_p(rng, params, n):
    ks = rng.normal(size=(n, 3)) * rng.uniform(0.1, 3.0, size=(n, 1)) / params.a0
    ps = rng.normal(size=(n, 3))
    ps *= (rng.uniform(0.0, 0.25, size=(n, 1)) * params.M) / np.linalg.norm(
        ps, axis=1, keepdims=True
    )
    return ks, ps


class TestPolarizationBasis:
    def test_z_axis_canonical(self):
        e1, e2 = polarization_basis(Z)
        np.testing.assert_allclose(e1, [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(e2, [0, 1, 0], atol=1e-15)

    def test_completeness_and_handedness(self, rng):
        for _ in range(200):
            k = rng.normal(size=3)
            e1, e2 = polarization_basis(k)
            e = k / np.linalg.norm(k)
            total = np.outer(e1, e1) + np.outer(e2, e2)
            np.testing.assert_allclose(total, np.eye(3) - np.outer(e, e), atol=1e-14)
            np.testing.assert_allclose(np.cross(e, e1), e2, atol=1e-14)
            np.testing.assert_allclose(np.cross(e, e2), -e1, atol=1e-14)

    def test_vectorized_matches_scalar(self, rng):
        ks = rng.normal(size=(50, 3))
        e1s, e2s = polarization_basis_many(ks)
        for i, k in enumerate(ks):
            a, b = polarization_basis(k)
            np.testing.assert_allclose(e1s[i], a, atol=1e-15)
            np.testing.assert_allclose(e2s[i], b, atol=1e-15)

    def test_zero_wavevector(self):
        with pytest.raises(DomainError):
            polarization_basis(np.zeros(3))


class TestEffectivePolarization:
    def test_static_limit(self, hydrogen_params):
        k = 1e-12 * Z
        for s in (0, 1):
            eps = polarization_basis(k)[s]
            alpha = effective_polarization(k, s, np.zeros(3), hydrogen_params)
            np.testing.assert_allclose(alpha, eps, atol=1e-12)

    def test_recoil_shift_at_rest(self, hydrogen_params):
        k = 3.0 * Z / hydrogen_params.a0
        kmag = np.linalg.norm(k)
        for s in (0, 1):
            eps = polarization_basis(k)[s]
            alpha = effective_polarization(k, s, np.zeros(3), hydrogen_params)
            np.testing.assert_allclose(
                alpha, eps * (1.0 + kmag / (2.0 * hydrogen_params.M)), rtol=1e-14
            )

    def test_both_algebraic_forms_agree(self, hydrogen_params, rng):
        ks, ps = _random_k_p(rng, hydrogen_params, 100)
        for k, P in zip(ks, ps):
            for s in (0, 1):
                a = effective_polarization(k, s, P, hydrogen_params)
                b = effective_polarization_cross_form(k, s, P, hydrogen_params)
                np.testing.assert_allclose(a, b, atol=1e-14)

    def test_momentum_guard(self, hydrogen_params):
        with pytest.raises(DomainError, match="non-relativistic"):
            effective_polarization(Z, 0, 0.5 * hydrogen_params.M * Z, hydrogen_params)


class TestPolarizationSum:
    def test_rest_collapse(self, hydrogen_params):
        k = 2.0 * Z / hydrogen_params.a0
        kmag = np.linalg.norm(k)
        t = polarization_sum(k, np.zeros(3), hydrogen_params)
        factor = (1.0 + kmag / (2.0 * hydrogen_params.M)) ** 2
        np.testing.assert_allclose(t, factor * np.diag([1.0, 1.0, 0.0]), atol=1e-15)

    def test_infinite_mass_limit(self, hydrogen_params, rng):
        k = rng.normal(size=3)
        heavy = type(hydrogen_params)(
            a0=hydrogen_params.a0,
            M=1e18,
            mu=hydrogen_params.mu,
            omega=hydrogen_params.omega,
            delta_m_over_M=hydrogen_params.delta_m_over_M,
        )
        t = polarization_sum(k, np.zeros(3), heavy)
        np.testing.assert_allclose(t, transverse_projector(k), atol=1e-9)

    def test_closed_form_equals_direct_summation(self, hydrogen_params, rng):
        ks, ps = _random_k_p(rng, hydrogen_params, 1000)
        worst = 0.0
        for k, P in zip(ks, ps):
            closed = polarization_sum(k, P, hydrogen_params)
            direct = polarization_sum_direct(k, P, hydrogen_params)
            worst = max(worst, float(np.max(np.abs(closed - direct))))
        assert worst <= 1e-13

    def test_basis_rotation_invariance(self, hydrogen_params, rng):
        # the sum over polarizations must not depend on the transverse basis
        k = rng.normal(size=3)
        P = 0.1 * hydrogen_params.M * rng.normal(size=3) / np.linalg.norm(rng.normal(size=3))
        e = k / np.linalg.norm(k)
        e1, e2 = polarization_basis(k)
        reference = polarization_sum_direct(k, P, hydrogen_params)
        M = hydrogen_params.M
        kmag = np.linalg.norm(k)
        for angle in (0.3, 1.2, 2.9):
            r1 = np.cos(angle) * e1 + np.sin(angle) * e2
            r2 = -np.sin(angle) * e1 + np.cos(angle) * e2
            total = np.zeros((3, 3))
            for eps in (r1, r2):
                alpha = eps * (1.0 - (np.dot(P, e) - kmag / 2.0) / M) + e * (np.dot(P, eps) / M)
                total += np.outer(alpha, alpha)
            np.testing.assert_allclose(total, reference, atol=1e-13)

    def test_symmetry(self, hydrogen_params, rng):
        ks, ps = _random_k_p(rng, hydrogen_params, 20)
        for k, P in zip(ks, ps):
            t = polarization_sum(k, P, hydrogen_params)
            np.testing.assert_allclose(t, t.T, atol=0.0)


class TestTransverseProjector:
    def test_z_axis(self):
        np.testing.assert_allclose(transverse_projector(Z), np.diag([1.0, 1.0, 0.0]), atol=0)

    def test_projector_algebra(self, rng):
        for _ in range(50):
            k = rng.normal(size=3)
            p = transverse_projector(k)
            np.testing.assert_allclose(p @ p, p, atol=1e-15)
            assert np.trace(p) == pytest.approx(2.0, abs=1e-14)
            np.testing.assert_allclose(p @ k, np.zeros(3), atol=1e-12 * np.linalg.norm(k))


class TestBoostMatrix:
    def test_identity_boost(self, rng):
        k = rng.normal(size=3)
        np.testing.assert_allclose(
            boost_matrix(k, BoostParameters(0.0)), transverse_projector(k), atol=0.0
        )

    def test_forward_wavevector(self):
        b = BoostParameters(0.5)
        m = boost_matrix(Z, b)
        g = b.gamma
        np.testing.assert_allclose(
            m, np.diag([g**2 * 0.25, g**2 * 0.25, 0.0]), atol=1e-15
        )

    def test_assembled_from_field_kernels(self, rng):
        # gamma^2 / gamma(1-gamma) / (1-gamma)^2 combination of the four
        # momentum-space field kernels must reproduce the displayed matrix
        from atomlight.polarization import EPSILON
        from atomlight.wightman import boost_field_combination

        for _ in range(25):
            k = rng.normal(size=3)
            e = k / np.linalg.norm(k)
            proj = np.eye(3) - np.outer(e, e)
            kern_be = -np.einsum("ijm,m->ij", EPSILON, e)
            kern_eb = +np.einsum("ijm,m->ij", EPSILON, e)
            v = rng.uniform(0.0, 0.8)
            assembled = boost_field_combination(
                proj, proj, kern_be, kern_eb, np.array([0.0, 0.0, v])
            )
            np.testing.assert_allclose(
                assembled, boost_matrix(k, BoostParameters(v)), atol=1e-13
            )

    def test_rejects_non_z_boost(self):
        with pytest.raises(DomainError):
            boost_matrix(Z, BoostParameters(0.5, direction=np.array([1.0, 0.0, 0.0])))

    def test_boost_parameter_validation(self):
        with pytest.raises(DomainError):
            BoostParameters(1.0)
        with pytest.raises(DomainError):
            BoostParameters(-0.1)
        b = BoostParameters(0.6)
        assert b.gamma == pytest.approx(1.25)
        assert b.rapidity == pytest.approx(np.arctanh(0.6))
