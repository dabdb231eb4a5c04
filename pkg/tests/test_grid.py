"""Finite-difference plumbing: operators Q and L, flux direction, dissipation."""

import math

import numpy as np
import pytest

from ptwa.equilibrium import ModelParams, gaussian_pdf, mu_pdf, von_mises_pdf
from ptwa.grid import (
    Grid2D,
    GridField,
    apply_L,
    apply_Q,
    dissipation,
    eval_H,
    flux_direction,
    residual_inf,
)

UNIT = ModelParams(1.0, 1.0)


def fine_grid(n_theta=64, n_kappa=101, half_width=5.0):
    return Grid2D(n_theta=n_theta, kappa_min=-half_width, kappa_max=half_width, n_kappa=n_kappa)


class TestGrid2D:
    def test_spacing(self):
        g = Grid2D(32, -5.0, 5.0, 51)
        assert g.d_theta == pytest.approx(2 * math.pi / 32)
        assert g.d_kappa == pytest.approx(0.2)
        assert g.theta[0] == pytest.approx(-math.pi)
        assert g.kappa[0] == -5.0 and g.kappa[-1] == 5.0

    def test_rejects_coarse(self):
        with pytest.raises(ValueError):
            Grid2D(4, -5.0, 5.0, 51)
        with pytest.raises(ValueError):
            Grid2D(32, -5.0, 5.0, 6)

    def test_interior_mask(self):
        g = Grid2D(16, -5.0, 5.0, 11)
        mask = g.interior_mask()
        assert not mask[:, 0].any() and not mask[:, -1].any()
        assert mask[:, 1:-1].all()


class TestEvalH:
    def test_values(self):
        assert eval_H(ModelParams(1.0, 1.0), 0.0, 0.0) == pytest.approx(-1.0)
        assert eval_H(ModelParams(1.0, 1.0), math.pi, 0.0) == pytest.approx(1.0)
        assert eval_H(ModelParams(2.0, 1.0), math.pi / 2, 2.0) == pytest.approx(2.0)


class TestFluxDirection:
    def test_equilibrium_points_along_theta_bar(self):
        g = fine_grid()
        for theta_bar in (0.0, math.pi / 3):
            f = GridField.sample(g, lambda th, ka: mu_pdf(UNIT, th - theta_bar, ka))
            assert flux_direction(f) == pytest.approx(theta_bar, abs=1e-6)

    def test_isotropic_returns_none(self):
        g = fine_grid()
        f = GridField.sample(g, lambda th, ka: np.ones_like(th) * gaussian_pdf(UNIT, ka))
        assert flux_direction(f) is None


class TestApplyQ:
    def test_zero_field(self):
        g = fine_grid(32, 51)
        f = GridField.sample(g, lambda th, ka: np.zeros_like(th))
        assert np.all(apply_Q(f, 0.3, UNIT).values == 0.0)

    def test_equilibrium_residual_second_order(self):
        # Q(rho mu_theta_bar) = 0 exactly; the discrete residual is O(Delta^2)
        sups = []
        for n_theta, n_kappa in [(32, 51), (64, 101)]:
            g = Grid2D(n_theta, -5.0, 5.0, n_kappa)
            f = GridField.sample(g, lambda th, ka: 1.7 * mu_pdf(UNIT, th - 0.4, ka))
            q = apply_Q(f, 0.4, UNIT)
            sups.append(np.max(np.abs(q.values[g.interior_mask()])))
        ratio = sups[0] / sups[1]
        assert 3.2 <= ratio <= 4.8

    def test_rotation_covariance(self):
        # shifting f by a whole number of grid cells shifts Q the same way
        g = fine_grid(32, 51)
        shift = 5
        phi = shift * g.d_theta
        f = GridField.sample(g, lambda th, ka: mu_pdf(UNIT, th, ka) * (1 + 0.2 * np.sin(th + ka)))
        q = apply_Q(f, 0.0, UNIT).values
        f_rot = GridField(g, np.roll(f.values, shift, axis=0))
        q_rot = apply_Q(f_rot, phi, UNIT).values
        assert np.allclose(np.roll(q, shift, axis=0), q_rot, atol=1e-12)

    def test_mass_conservation(self):
        g = fine_grid()
        f = GridField.sample(g, lambda th, ka: mu_pdf(UNIT, th, ka) * (1 + 0.3 * np.cos(th)))
        q = apply_Q(f, 0.0, UNIT)
        # integral of Q(f) vanishes up to O(Delta^2) boundary/truncation slack
        assert f.integrate(q.values) == pytest.approx(0.0, abs=1e-4)


class TestApplyL:
    def test_constant_in_kernel(self):
        g = fine_grid(32, 51)
        psi = GridField.sample(g, lambda th, ka: np.full_like(th, 2.5))
        assert np.allclose(apply_L(psi, UNIT).values, 0.0, atol=1e-12)

    def test_linear_kappa_closed_form(self):
        # L(kappa) = -lam sin(theta) - lam kappa, exact for the discrete stencil too
        p = ModelParams(1.3, 0.8)
        g = fine_grid(32, 51)
        th, ka = g.meshgrid()
        psi = GridField(g, ka.astype(float))
        expected = -p.lam * np.sin(th) - p.lam * ka
        got = apply_L(psi, p).values
        assert np.allclose(got[g.interior_mask()], expected[g.interior_mask()], atol=1e-10)

    def test_second_order_convergence_rate(self):
        p = ModelParams(1.0, 1.0)

        def psi_fn(th, ka):
            return np.sin(th) * np.exp(-(ka**2) / 8.0) + 0.3 * np.cos(2 * th) * ka

        def l_exact(th, ka):
            dth = np.cos(th) * np.exp(-(ka**2) / 8.0) - 0.6 * np.sin(2 * th) * ka
            dka = np.sin(th) * np.exp(-(ka**2) / 8.0) * (-ka / 4.0) + 0.3 * np.cos(2 * th)
            d2ka = np.sin(th) * np.exp(-(ka**2) / 8.0) * (ka**2 / 16.0 - 0.25)
            return ka * dth - p.lam * np.sin(th) * dka - p.lam * ka * dka + p.alpha**2 * d2ka

        errs = []
        for n_theta, n_kappa in [(32, 51), (64, 101)]:
            g = Grid2D(n_theta, -5.0, 5.0, n_kappa)
            th, ka = g.meshgrid()
            got = apply_L(GridField(g, psi_fn(th, ka)), p).values
            errs.append(np.max(np.abs((got - l_exact(th, ka))[g.interior_mask()])))
        rate = math.log2(errs[0] / errs[1])
        assert 1.8 <= rate <= 2.2

    def test_adjoint_structure(self):
        # integral Q(f) g = integral f L(g) for compactly supported smooth f, g
        g = fine_grid(64, 161, half_width=8.0)
        th, ka = g.meshgrid()
        bump = np.exp(-(ka**2) / 2.0)
        f = GridField(g, mu_pdf(UNIT, th, ka) * (1 + 0.3 * np.sin(th)) * bump)
        phi = GridField(g, np.cos(th) * bump)
        lhs = f.integrate(apply_Q(f, 0.0, UNIT).values * phi.values)
        rhs = f.integrate(f.values * apply_L(phi, UNIT).values)
        assert lhs == pytest.approx(rhs, abs=5e-3 * max(1.0, abs(lhs)))


class TestResidualInf:
    def test_closed_form_test_function(self):
        # psi = kappa gives |(-lam+1) sin(theta) - lam kappa|, maximized on the interior
        p = ModelParams(1.5, 1.0)
        g = Grid2D(32, -5.0, 5.0, 51)
        th, ka = g.meshgrid()
        psi = GridField(g, ka.astype(float))
        interior = g.interior_mask()
        expected = np.max(np.abs(((1 - p.lam) * np.sin(th) - p.lam * ka)[interior]))
        assert residual_inf(psi, p) == pytest.approx(expected, abs=1e-10)


class TestDissipation:
    def test_equilibrium_has_zero_dissipation(self):
        g = fine_grid()
        f = GridField.sample(g, lambda th, ka: mu_pdf(UNIT, th, ka))
        d = dissipation(f, UNIT)
        assert d == pytest.approx(0.0, abs=1e-4)

    def test_isotropic_returns_none(self):
        g = fine_grid()
        f = GridField.sample(g, lambda th, ka: np.ones_like(th) * gaussian_pdf(UNIT, ka))
        assert dissipation(f, UNIT) is None

    @pytest.mark.parametrize(
        "perturbation",
        [lambda th, ka: 1 + 0.3 * np.cos(ka), lambda th, ka: 1 + 0.1 * np.sin(th)],
    )
    def test_matches_entropy_identity(self, perturbation):
        # independent oracle: dissipation = -alpha^2 int (N/M) |d/dkappa (f/N)|^2
        g = fine_grid(64, 201, half_width=6.0)
        th, ka = g.meshgrid()
        f = GridField(g, mu_pdf(UNIT, th, ka) * perturbation(th, ka))
        lhs = dissipation(f, UNIT)
        ratio = f.values / gaussian_pdf(UNIT, ka)
        d_ratio = np.gradient(ratio, g.kappa, axis=1)
        rhs_integrand = (
            -UNIT.alpha**2 * gaussian_pdf(UNIT, ka) / von_mises_pdf(UNIT, th) * d_ratio**2
        )
        rhs = f.integrate(rhs_integrand)
        assert lhs <= 1e-6
        assert lhs == pytest.approx(rhs, rel=0.05, abs=1e-6)
