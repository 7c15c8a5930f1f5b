"""Nonlinearity, potential-coefficient and combined-operator checks."""

import numpy as np
import pytest

import ewinlse as ew
from ewinlse.physics import Nonlinearity, Potential

from conftest import random_field
from oracles import gauss_fourier_coeffs

OMEGA = (-16.0, 16.0)


class TestNonlinearityF:
    def test_power_values(self):
        assert Nonlinearity.power(-1.0, 0.1).f(1.0) == pytest.approx(-1.0)
        assert Nonlinearity.power(-1.0, 0.5).f(4.0) == pytest.approx(-2.0)

    def test_log_power_origin_limit(self):
        assert Nonlinearity.log_power(1.0, 1.0).f(0.0) == 0.0

    def test_negative_density_rejected(self):
        with pytest.raises(ew.ConfigurationError):
            Nonlinearity.power(-1.0, 0.5).f(-0.1)

    def test_realness(self, rng):
        rho = rng.uniform(0.0, 5.0, size=200)
        for nl in (
            Nonlinearity.power(-1.0, 0.3),
            Nonlinearity.two_power(1.0, 0.5, -2.0, 1.5),
            Nonlinearity.log_power(0.7, 0.6),
        ):
            out = nl.f(rho)
            assert out.dtype == np.float64
            assert np.all(np.isfinite(out))

    def test_g_vanishes_at_zero_for_every_kind(self):
        for nl in (
            Nonlinearity.none(),
            Nonlinearity.power(-1.0, 0.1),
            Nonlinearity.two_power(1.0, 0.5, 1.0, 1.0),
            Nonlinearity.log_power(1.0, 0.25),
        ):
            assert nl.G(0.0) == 0.0


class TestNonlinearityG:
    def test_cubic_value(self):
        nl = Nonlinearity.cubic()
        assert nl.G(1.0 + 1.0j) == pytest.approx(-2.0 - 2.0j)

    def test_unit_modulus_power(self):
        nl = Nonlinearity.power(-1.0, 0.1)
        assert nl.G(1.0j) == pytest.approx(-1.0j)

    def test_gauge_symmetry(self, rng):
        nl = Nonlinearity.power(-1.0, 0.4)
        thetas = rng.uniform(0, 2 * np.pi, size=1000)
        zs = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
        rotated = nl.G(np.exp(1j * thetas) * zs)
        expected = np.exp(1j * thetas) * nl.G(zs)
        assert np.max(np.abs(rotated - expected)) < 1e-13 * np.max(np.abs(expected))


class TestLipschitzBound:
    def test_reference_values(self):
        assert Nonlinearity.power(-1.0, 0.5).lipschitz_bound(1.0) == pytest.approx(2.0)
        assert Nonlinearity.cubic().lipschitz_bound(2.0) == pytest.approx(12.0)

    def test_zero_radius_for_every_kind(self):
        for nl in (
            Nonlinearity.none(),
            Nonlinearity.power(-1.0, 0.1),
            Nonlinearity.two_power(1.0, 0.5, 1.0, 1.0),
            Nonlinearity.log_power(1.0, 0.25),
        ):
            assert nl.lipschitz_bound(0.0) == 0.0

    def test_log_power_not_implemented(self):
        with pytest.raises(NotImplementedError):
            Nonlinearity.log_power(1.0, 1.0).lipschitz_bound(1.0)

    @pytest.mark.parametrize(
        "nl,M0",
        [
            (Nonlinearity.cubic(), 2.0),
            (Nonlinearity.power(-1.0, 0.5), 1.0),
            (Nonlinearity.power(2.0, 0.1), 3.0),
            (Nonlinearity.two_power(1.0, 0.5, -1.0, 1.5), 1.5),
        ],
    )
    def test_certificate_on_random_pairs(self, nl, M0):
        # 1e5 pairs drawn uniformly in the disk |z| <= M0; the bound must
        # hold as a hard inequality, no tolerance
        rng = np.random.default_rng(7)
        n = 100_000
        r = M0 * np.sqrt(rng.uniform(0, 1, size=(2, n)))
        ang = rng.uniform(0, 2 * np.pi, size=(2, n))
        z = r * np.exp(1j * ang)
        lhs = np.abs(nl.G(z[0]) - nl.G(z[1]))
        rhs = nl.lipschitz_bound(M0) * np.abs(z[0] - z[1])
        assert np.all(lhs <= rhs)


class TestPotential:
    def test_box_requires_interior_edges(self):
        V = Potential.box(-4.0, -2.0, 20.0)
        with pytest.raises(ew.ConfigurationError):
            V.validate_domain(*OMEGA)

    def test_power_law_matches_abs_power_on_symmetric_domain(self):
        V = Potential.power_law(0.76)
        xs = np.linspace(-16, 16, 37)
        assert np.allclose(V.evaluate(xs, *OMEGA), np.abs(xs) ** 0.76)

    def test_sup_norms(self):
        assert Potential.none().sup_norm(*OMEGA) == 0.0
        assert Potential.box(-4.0, -2.0, 2.0).sup_norm(*OMEGA) == 4.0
        assert Potential.power_law(0.76).sup_norm(*OMEGA) == pytest.approx(16.0**0.76)

    def test_sampled_round_trip(self):
        xs = np.linspace(-16, 16, 64, endpoint=False)
        V = Potential.sampled(np.cos(2 * np.pi * (xs + 16) / 32))
        out = V.evaluate(xs, *OMEGA)
        assert np.allclose(out, np.cos(2 * np.pi * (xs + 16) / 32), atol=1e-12)


class TestPotentialCoeffs:
    def test_none_is_zero(self):
        g = ew.PeriodicGrid(*OMEGA, 32)
        assert np.all(ew.potential_coeffs(Potential.none(), g, 64).coeffs == 0)

    def test_box_mean_value(self):
        g = ew.PeriodicGrid(*OMEGA, 32)
        table = ew.potential_coeffs(Potential.box(-4.0, -2.0, 2.0), g, 64)
        assert table.mode(0) == pytest.approx(-0.5)

    def test_box_closed_form_against_quadrature(self):
        g = ew.PeriodicGrid(*OMEGA, 32)
        V = Potential.box(-4.0, -2.0, 2.0)
        table = ew.potential_coeffs(V, g, 64)
        oracle = gauss_fourier_coeffs(
            lambda x: V.evaluate(x, *OMEGA).astype(complex), *OMEGA, 64,
            breakpoints=(-2.0, 2.0))
        assert np.max(np.abs(table.coeffs - oracle)) < 1e-12

    @pytest.mark.parametrize(
        "V", [Potential.box(-4.0, -2.0, 2.0), Potential.power_law(0.76)]
    )
    def test_conjugate_symmetry_for_real_potentials(self, V):
        g = ew.PeriodicGrid(*OMEGA, 64)
        table = ew.potential_coeffs(V, g, 128)
        for l in range(1, 64):
            assert abs(table.mode(-l) - np.conj(table.mode(l))) < 1e-13


class TestApplyB:
    def test_zero_operator(self, rng):
        g = ew.PeriodicGrid(*OMEGA, 16)
        psi = random_field(g, rng)
        out = ew.apply_B(Potential.none(), Nonlinearity.none(), psi)
        assert np.all(out.coeffs == 0)

    def test_constant_potential_scales(self, rng):
        g = ew.PeriodicGrid(*OMEGA, 16)
        psi = random_field(g, rng)
        out = ew.apply_B(Potential.constant(2.5), Nonlinearity.none(), psi)
        assert np.max(np.abs(out.coeffs - 2.5 * psi.coeffs)) < 1e-13

    @pytest.mark.parametrize("mode", ["collocation", "projection"])
    def test_cubic_on_constant_field(self, mode):
        g = ew.PeriodicGrid(*OMEGA, 16)
        psi = ew.SpectralField.pure_mode(g, 0, 2.0)
        out = ew.apply_B(Potential.none(), Nonlinearity.cubic(), psi,
                         nonlinear_mode=mode)
        assert out.mode(0) == pytest.approx(-8.0)
        assert np.max(np.abs(np.delete(out.coeffs, g.mode_index(0)))) < 1e-13
