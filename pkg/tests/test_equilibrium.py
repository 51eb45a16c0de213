# Copyright (c) 2025 Alibaba Group and its affiliates

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

from arcopuc.equilibrium.critical import conjectured_xi, edge_log_transform, xi_critical
from arcopuc.equilibrium.gfunction import g_function, g_prime, resolvent, sqrt_R
from arcopuc.equilibrium.measure import (
    band_edge,
    band_mass_I,
    dL_dxi,
    density_rho,
    density_table,
    equilibrium,
    euler_lagrange_residual,
    lagrange_by_potential,
    lagrange_multiplier_limit,
    log_transform_L,
    saturated_log_growth,
    tilde_wrappers,
    total_mass,
    unconstrained_arc_density,
    unconstrained_arc_log_transform,
    unconstrained_density,
)
from arcopuc.equilibrium.quadrature import (
    QuadratureSpec,
    integrate_complex,
    integrate_real,
)
from arcopuc.errors import NoBand, NoRoot, OnCut, OutOfDomain, QuadratureFailure

SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10)


@pytest.fixture(scope="module")
def eq():
    return equilibrium(math.pi / 2, 4.0, SPEC)


class TestQuadrature:
    def test_smooth_integral(self):
        value = integrate_real(math.sin, 0.0, math.pi, SPEC)
        assert value == pytest.approx(2.0, abs=1e-12)

    def test_empty_interval(self):
        assert integrate_real(math.sin, 1.0, 1.0) == 0.0

    def test_log_weight(self):
        value = integrate_real(
            lambda _x: 1.0, 0.0, 1.0, SPEC, weight="alg-loga", wvar=(0, 0)
        )
        assert value == pytest.approx(-1.0, abs=1e-12)

    def test_complex_integrand(self):
        value = integrate_complex(lambda x: complex(math.cos(x), math.sin(x)), 0, math.pi)
        assert value == pytest.approx(2j, abs=1e-12)

    def test_failure_after_retries(self):
        spec = QuadratureSpec(max_subdivisions=1, retry_attempts=2)
        with pytest.raises(QuadratureFailure):
            integrate_real(lambda x: math.sin(50.0 * x), 0.0, 10.0, spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(retry_attempts=0)
        spec = QuadratureSpec().with_tolerance(1e-6)
        assert (spec.abs_tol, spec.rel_tol) == (1e-6, 1e-6)


class TestBandEdge:
    def test_quarter_circle(self):
        beta = band_edge(math.pi / 2, 4.0)
        assert math.cos(beta) == pytest.approx(3.0 - 2.0 * math.sqrt(2.0), abs=1e-14)

    def test_full_circle_has_no_saturated_region(self):
        assert band_edge(math.pi, 4.0) == pytest.approx(math.pi, abs=1e-7)

    def test_beta_grows_with_xi(self):
        betas = [band_edge(2.0, xi) for xi in (2.0, 3.0, 6.0, 20.0)]
        assert betas == sorted(betas)
        assert betas[-1] < 2.0

    def test_no_band(self):
        with pytest.raises(NoBand) as exc:
            band_edge(math.pi / 2, 1.5)
        assert exc.value.exit_code == 2

    @pytest.mark.parametrize("alpha, xi", [(math.pi / 2, 1.0), (0.0, 3.0), (4.0, 3.0)])
    def test_out_of_domain(self, alpha, xi):
        with pytest.raises(OutOfDomain):
            band_edge(alpha, xi)


class TestDensity:
    def test_saturated_outside_band(self, eq):
        phi = 0.5 * (eq.beta + eq.alpha)
        assert density_rho(eq, phi) == eq.saturation == pytest.approx(4.0 / (2 * math.pi))
        assert density_rho(eq, -phi) == eq.saturation

    def test_bounded_by_constraint(self, eq):
        for k in range(40):
            theta = eq.beta * k / 40
            assert 0.0 < density_rho(eq, theta) <= eq.saturation

    def test_outside_arc(self, eq):
        with pytest.raises(OutOfDomain):
            density_rho(eq, eq.alpha + 0.01)

    def test_unit_mass(self, eq):
        assert total_mass(eq, SPEC) == pytest.approx(1.0, abs=1e-8)

    def test_band_mass(self, eq):
        assert band_mass_I(eq, eq.alpha, SPEC) == 0.0
        assert band_mass_I(eq, -eq.alpha, SPEC) == pytest.approx(1.0, abs=1e-14)
        assert band_mass_I(eq, 0.0, SPEC) == pytest.approx(0.5, abs=1e-8)

    def test_band_mass_on_saturated_region(self, eq):
        phi = 0.5 * (eq.beta + eq.alpha)
        assert band_mass_I(eq, phi) == pytest.approx(eq.saturation * (eq.alpha - phi))

    def test_large_xi_approaches_arc_measure(self):
        eq = equilibrium(math.pi / 2, 2000.0, SPEC)
        theta = 0.4
        expected = unconstrained_arc_density(eq.beta, theta)
        assert density_rho(eq, theta) == pytest.approx(expected, rel=1e-4)

    def test_unconstrained_density_in_sample_coordinate(self):
        b, x = 2.0, 0.2
        beta = math.pi / b
        expected = unconstrained_arc_density(beta, 2 * math.pi * x / b) * 2 * math.pi / b
        assert unconstrained_density(b, x) == pytest.approx(expected, rel=1e-13)
        assert unconstrained_density(b, -x) == unconstrained_density(b, x)
        with pytest.raises(OutOfDomain):
            unconstrained_density(b, 0.5)

    def test_table(self, eq):
        table = density_table(eq, [0.0, 0.7, eq.alpha], SPEC)
        assert list(table.columns) == ["phi", "rho", "I", "L"]
        assert len(table) == 3
        assert table["I"].iloc[-1] == 0.0


class TestLagrangeMultiplier:
    def test_negative(self, eq):
        assert eq.ell < 0.0

    def test_matches_potential(self, eq):
        assert lagrange_by_potential(eq, SPEC) == pytest.approx(eq.ell, abs=1e-7)

    @pytest.mark.parametrize("phi", [0.0, 0.6, 1.2])
    def test_euler_lagrange_on_band(self, eq, phi):
        assert euler_lagrange_residual(eq, phi, SPEC) == pytest.approx(0.0, abs=1e-7)

    def test_euler_lagrange_on_saturated_region(self, eq):
        phi = 0.5 * (eq.beta + eq.alpha)
        assert euler_lagrange_residual(eq, phi, SPEC) > 1e-6

    def test_saturated_growth_closed_form(self, eq):
        phi = 0.5 * (eq.beta + eq.alpha)
        direct = log_transform_L(eq, phi, SPEC) - eq.ell / 2
        assert saturated_log_growth(eq, phi, SPEC) == pytest.approx(direct, abs=1e-7)
        with pytest.raises(OutOfDomain):
            saturated_log_growth(eq, 0.5 * eq.beta, SPEC)

    @pytest.mark.parametrize("alpha", [math.pi / 3, math.pi / 2, 2 * math.pi / 3])
    def test_limit(self, alpha):
        expected = 2.0 * math.log(math.sin(alpha / 2))
        assert lagrange_multiplier_limit(alpha, SPEC) == pytest.approx(expected, abs=1e-8)

    def test_limit_of_full_circle(self):
        assert lagrange_multiplier_limit(math.pi) == 0.0

    def test_increases_towards_limit(self):
        values = [equilibrium(2.0, xi, SPEC).ell for xi in (2.0, 4.0, 16.0)]
        assert values == sorted(values)
        assert values[-1] < lagrange_multiplier_limit(2.0, SPEC)


class TestArcMeasure:
    BETA = 1.2

    @pytest.mark.parametrize("phi", [0.0, 0.5, -1.0])
    def test_constant_on_arc(self, phi):
        value = unconstrained_arc_log_transform(self.BETA, phi, SPEC)
        assert value == pytest.approx(math.log(math.sin(self.BETA / 2)), abs=1e-8)

    def test_larger_off_arc(self):
        value = unconstrained_arc_log_transform(self.BETA, 2.0, SPEC)
        assert value > math.log(math.sin(self.BETA / 2))

    def test_density_outside_arc(self):
        with pytest.raises(OutOfDomain):
            unconstrained_arc_density(self.BETA, self.BETA)


class TestXiDerivative:
    @pytest.mark.parametrize("phi", [0.3, 1.5])
    def test_matches_finite_difference(self, phi):
        alpha, xi, h = math.pi / 2, 4.0, 1e-3
        upper = log_transform_L(equilibrium(alpha, xi + h, SPEC), phi, SPEC)
        lower = log_transform_L(equilibrium(alpha, xi - h, SPEC), phi, SPEC)
        eq = equilibrium(alpha, xi, SPEC)
        assert dL_dxi(eq, phi, SPEC) == pytest.approx((upper - lower) / (2 * h), abs=1e-5)

    def test_band_value_increases(self, eq):
        assert dL_dxi(eq, 0.0, SPEC) > 0.0

    def test_tilde_wrappers(self):
        beta_t, L_t = tilde_wrappers(2, 2.0, 0.1, SPEC)
        eq = equilibrium(math.pi / 2, 4.0, SPEC)
        assert beta_t == pytest.approx(eq.beta / math.pi)
        assert L_t == pytest.approx(eq.ell / 2, abs=1e-7)
        with pytest.raises(OutOfDomain):
            tilde_wrappers(2, 2.0, 0.6)


class TestGFunction:
    @pytest.mark.parametrize("z", [2.0 + 0j, 0.3 + 0.2j, -0.5 - 1.5j])
    def test_derivative_matches_resolvent(self, eq, z):
        assert g_prime(eq, z) == pytest.approx(resolvent(eq, z, SPEC), abs=1e-8)

    @pytest.mark.parametrize("z", [1.7 + 0.4j, 0.3 + 0.2j])
    def test_derivative_of_g(self, eq, z):
        h = 1e-3
        numeric = (g_function(eq, z + h, SPEC) - g_function(eq, z - h, SPEC)) / (2 * h)
        assert g_prime(eq, z) == pytest.approx(numeric, abs=1e-6)

    def test_behaves_like_log_at_infinity(self, eq):
        z = 1e3 + 1e3j
        expected = complex(math.log(abs(z)), math.pi / 4)
        assert abs(g_function(eq, z, SPEC) - expected) < 1e-3

    def test_cuts(self, eq):
        with pytest.raises(OnCut):
            g_function(eq, -2.0)
        with pytest.raises(OnCut):
            g_prime(eq, complex(math.cos(0.2), math.sin(0.2)))
        with pytest.raises(OnCut):
            sqrt_R(eq, 1.0 + 0j)
        assert g_function(eq, -2.0, SPEC, upper_side=True).imag == pytest.approx(math.pi)

    def test_sqrt_branch(self, eq):
        assert sqrt_R(eq, 0j) == pytest.approx(-1.0, abs=1e-14)
        z = 1e6 + 0j
        assert sqrt_R(eq, z) / z == pytest.approx(1.0, abs=1e-5)


class TestCriticalRatio:
    def test_conjecture_formula(self):
        assert conjectured_xi(math.pi / 2) == pytest.approx(2.0)
        assert conjectured_xi(3 * math.pi / 4) == pytest.approx(4.0)

    def test_quarter_circle_root_at_threshold(self):
        assert edge_log_transform(math.pi / 2, 2.0, SPEC) == pytest.approx(0.0, abs=1e-9)
        assert xi_critical(math.pi / 2, SPEC) == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.slow
    def test_two_thirds_circle(self):
        alpha = 2 * math.pi / 3
        assert xi_critical(alpha, SPEC) == pytest.approx(conjectured_xi(alpha), abs=1e-3)

    def test_edge_transform_decreases(self):
        alpha = 2 * math.pi / 3
        values = [edge_log_transform(alpha, xi, SPEC) for xi in (1.6, 2.5, 5.0)]
        assert values == sorted(values, reverse=True)

    def test_no_root_for_narrow_arc(self):
        with pytest.raises(NoRoot) as exc:
            xi_critical(math.pi / 3, SPEC)
        assert exc.value.exit_code == 3

    def test_full_circle_rejected(self):
        with pytest.raises(OutOfDomain):
            xi_critical(math.pi)
