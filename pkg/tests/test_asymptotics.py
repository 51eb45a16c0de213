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

import cmath
import itertools
import math
import statistics
from fractions import Fraction

import pandas as pd
import pytest

from arcopuc.asymptotics.convergence import (
    COMPARE_COLUMNS,
    comparison_table,
    convergence_study,
    fit_convergence_slope,
    odd_sample_count,
    recursion_value,
    relative_error,
)
from arcopuc.asymptotics.psi import edge_slope, psi_fn, psi_on_arc, psi_series
from arcopuc.asymptotics.regimes import (
    Regime,
    RegimeConfig,
    asym_eval,
    band_asym,
    classify,
    edge_asym,
    equilibrium_for,
    outer_asym,
    saturated_asym,
    szego_h_asym,
    turning_asym,
)
from arcopuc.asymptotics.special import (
    J_fn,
    SpecialFnTable,
    airy,
    dtilde,
    dtilde_direct,
    edge_factor,
    gamma_fn,
)
from arcopuc.equilibrium.measure import equilibrium
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import (
    DomainError,
    EnvelopeExceeded,
    NOddRequired,
    OnCut,
    OutsideDisc,
    OutsideRegime,
)
from arcopuc.lattice.params import make_params
from arcopuc.opuc.szego import szego_system

SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10)
LOOSE = RegimeConfig(band_margin=1.0)
SATURATED_FAMILY = [(20, 25), (28, 35), (36, 45)]


def angle_at(params, u):
    """Angle u node spacings inside the arc end."""
    return params.alpha - 2 * math.pi * u / params.m


@pytest.fixture(scope="module")
def params():
    # xi = 5/2, beta ~ 1.0148 on alpha = pi/2
    return make_params(2, 20, 25)


@pytest.fixture(scope="module")
def eq(params):
    return equilibrium_for(params, SPEC)


class TestSpecialFunctions:
    def test_airy_at_origin(self):
        ai, bi, aip, bip = airy(0.0)
        assert ai.real == pytest.approx(0.355028053887817, rel=1e-14)
        assert bi.real == pytest.approx(math.sqrt(3) * ai.real, rel=1e-14)
        assert aip.real < 0.0 < bip.real

    @pytest.mark.parametrize("x", [-4.0, 2.5, 1.0 + 1.0j])
    def test_wronskian(self, x):
        assert SpecialFnTable().wronskian(x) == pytest.approx(1.0 / math.pi, rel=1e-10)

    def test_envelope(self):
        with pytest.raises(EnvelopeExceeded):
            airy(31.0)
        assert SpecialFnTable(envelope=40.0).airy(31.0)[0].real > 0.0

    def test_J(self):
        beta = 1.0
        assert J_fn(beta, 0.0) == pytest.approx(1.0)
        assert J_fn(beta, 0.4) * J_fn(beta, -0.4) == pytest.approx(1.0)
        direct = (math.cos(0.4) - math.cos(beta)) / (1 - math.cos(beta - 0.4))
        assert J_fn(beta, 0.4) == pytest.approx(direct, rel=1e-12)
        assert J_fn(beta, 1.3) < 0.0
        assert J_fn(beta, beta) == math.inf
        assert J_fn(math.pi, 2.0) == 1.0

    def test_gamma(self):
        beta = 1.2
        assert gamma_fn(beta, 0j) == pytest.approx(cmath.exp(-0.5j * beta), abs=1e-14)
        assert gamma_fn(beta, 1e8 + 0j) == pytest.approx(1.0, abs=1e-7)
        with pytest.raises(OnCut):
            gamma_fn(beta, cmath.exp(0.5j))

    def test_dtilde_one_node_from_end(self, params):
        phi = angle_at(params, 1.0)
        assert dtilde(params, phi, 1) == pytest.approx(math.sqrt(2) / math.e, rel=1e-12)
        assert dtilde(params, -phi, -1) == pytest.approx(math.sqrt(2) / math.e, rel=1e-12)

    @pytest.mark.parametrize("u", [0.7, 3.3, 12.0])
    def test_dtilde_log_space_matches_direct(self, params, u):
        phi = angle_at(params, u)
        expected = dtilde_direct(params, phi, 1)
        assert dtilde(params, phi, 1) == pytest.approx(expected, rel=1e-11)

    def test_dtilde_tends_to_one(self, params):
        u = 50.0
        assert abs(dtilde(params, angle_at(params, u), 1) - 1.0) < 0.5 / u

    def test_dtilde_domain(self, params):
        with pytest.raises(DomainError):
            dtilde(params, params.alpha + 0.1, 1)
        with pytest.raises(DomainError):
            dtilde(params, 0.0, 0)

    @pytest.mark.parametrize("u", [0.3, 1.3, 2.7, 7.9])
    def test_edge_factor_reflection(self, params, u):
        product = edge_factor(u) * dtilde(params, angle_at(params, u), 1)
        assert product == pytest.approx(2.0 * math.cos(math.pi * u), rel=1e-10)

    def test_edge_factor_special_points(self):
        assert edge_factor(0.0) == 0.0
        assert edge_factor(1.5) == 0.0
        assert edge_factor(0.5) == pytest.approx(-math.sqrt(math.pi * math.e), rel=1e-14)
        with pytest.raises(DomainError):
            edge_factor(-0.5)


class TestPsi:
    def test_sign_across_turning_point(self, eq):
        assert psi_on_arc(eq, eq.beta - 0.1, SPEC) < 0.0
        assert psi_on_arc(eq, eq.beta + 0.1, SPEC) > 0.0
        assert psi_on_arc(eq, eq.beta, SPEC) == 0.0
        inside = eq.beta - 0.1
        assert psi_on_arc(eq, -inside, SPEC) == psi_on_arc(eq, inside, SPEC)

    @pytest.mark.parametrize("s", [-0.05, -0.01, 0.02, 0.06])
    def test_series_matches_arc(self, eq, s):
        z = cmath.exp(1j * (eq.beta + s))
        expected = psi_on_arc(eq, eq.beta + s, SPEC)
        assert psi_fn(eq, z, SPEC) == pytest.approx(expected, rel=1e-6, abs=1e-9)

    def test_slope_at_turning_point(self, eq):
        series = psi_series(eq, SPEC)
        assert series.q_at(0.0).real == pytest.approx(edge_slope(eq), rel=1e-5)

    def test_off_arc_continuation_is_analytic(self, eq):
        # psi' = Q(0) at the turning point, also along the normal direction
        z0 = cmath.exp(1j * eq.beta)
        h = 1e-4
        derivative = (psi_fn(eq, z0 * (1 + h), SPEC) - psi_fn(eq, z0 * (1 - h), SPEC)) / (
            2 * h
        )
        # d psi / d log z = -i d psi / ds
        assert derivative == pytest.approx(-1j * edge_slope(eq), rel=1e-4)

    def test_outside_disc(self, eq):
        with pytest.raises(OutsideDisc):
            psi_fn(eq, 2.0 * cmath.exp(1j * eq.beta), SPEC)

    def test_no_turning_point_on_full_circle(self):
        with pytest.raises(OutsideDisc):
            psi_series(equilibrium(math.pi, 4.0, SPEC), SPEC)


class TestBandFormula:
    def test_uniform_circle(self):
        eq = equilibrium(math.pi, 4.0, SPEC)
        M = 10
        for phi in (0.2, 1.0, 2.0):
            asym = band_asym(eq, M, phi, spec=SPEC)
            assert asym.value == pytest.approx(cmath.exp(1j * M * phi), abs=1e-8)
            assert asym.regime is Regime.BAND

    def test_outside_band(self, eq):
        with pytest.raises(OutsideRegime):
            band_asym(eq, 20, eq.beta + 0.1, spec=SPEC)
        with pytest.raises(OutsideRegime):
            band_asym(eq, 20, eq.beta - 1e-3, spec=SPEC)

    def test_against_recursion(self):
        params = make_params(2, 21, 63)
        eq = equilibrium_for(params, SPEC)
        system = szego_system(params, params.M)
        for phi in (0.2, 0.6, 1.0):
            asym = band_asym(eq, params.M, phi, spec=SPEC)
            phase, log_abs = recursion_value(system, params.M, cmath.exp(1j * phi))
            assert relative_error(asym, phase, log_abs) < 0.25


class TestSaturatedFormula:
    def test_vanishes_on_lattice(self, params, eq):
        node = 2 * math.pi * 10 / params.m
        midpoint = node + math.pi / params.m
        at_node = saturated_asym(eq, params, params.M, node, 1, LOOSE, SPEC)
        between = saturated_asym(eq, params, params.M, midpoint, 1, LOOSE, SPEC)
        assert abs(at_node.value) <= 1e-8 * abs(between.value)
        assert between.regime is Regime.SATURATED

    def test_recursion_suppressed_at_saturated_nodes(self):
        # b = 6/5, N/M = 5/4: node values shrink against midpoint values as M
        # grows, but stay far above the asymptotic lattice zeros at these sizes
        ratios = []
        for params in [make_params(Fraction(6, 5), M, N) for M, N in SATURATED_FAMILY]:
            eq = equilibrium_for(params, SPEC)
            system = szego_system(params, params.M)
            spacing = 2 * math.pi / params.m
            at_nodes, between = [], []
            for j in range(params.N // 2 + 1):
                node = j * spacing
                if node <= eq.beta:
                    continue
                _, log_abs = recursion_value(system, params.M, cmath.exp(1j * node))
                at_nodes.append(log_abs)
                mid = node - spacing / 2
                if mid > eq.beta:
                    between.append(
                        recursion_value(system, params.M, cmath.exp(1j * mid))[1]
                    )
            assert at_nodes and between
            gap = statistics.fmean(at_nodes) - statistics.fmean(between)
            ratios.append(math.exp(gap))
        assert all(b < a for a, b in itertools.pairwise(ratios))
        assert ratios[-1] < ratios[0] / 2
        assert ratios[-1] > 1e-6

    def test_conjugate_symmetry(self, params, eq):
        phi = angle_at(params, 2.3)
        upper = saturated_asym(eq, params, params.M, phi, 1, LOOSE, SPEC)
        lower = saturated_asym(eq, params, params.M, phi, -1, LOOSE, SPEC)
        assert lower.value == pytest.approx(upper.value.conjugate(), rel=1e-12)

    @pytest.mark.parametrize("u", [2.0, 2.7])
    def test_edge_form_divides_by_dtilde(self, params, eq, u):
        phi = angle_at(params, u)
        sat = saturated_asym(eq, params, params.M, phi, 1, LOOSE, SPEC)
        edge = edge_asym(eq, params, params.M, phi, 1, LOOSE, SPEC)
        scaled = edge.bounded * dtilde(params, phi, 1)
        assert scaled == pytest.approx(sat.bounded, rel=1e-10)
        assert edge.log_prefactor == sat.log_prefactor

    def test_edge_form_finite_at_arc_end(self, params, eq):
        edge = edge_asym(eq, params, params.M, params.alpha, 1, LOOSE, SPEC)
        assert edge.bounded == 0
        assert edge.extrapolated
        outermost = edge_asym(eq, params, params.M, angle_at(params, 0.5), 1, LOOSE, SPEC)
        assert math.isfinite(abs(outermost.value)) and outermost.bounded != 0

    def test_saturated_rejects_arc_end(self, params, eq):
        with pytest.raises(OutsideRegime):
            saturated_asym(eq, params, params.M, angle_at(params, 0.5), 1, LOOSE, SPEC)
        with pytest.raises(OutsideRegime):
            saturated_asym(eq, params, params.M, 0.5, 1, LOOSE, SPEC)
        with pytest.raises(DomainError):
            saturated_asym(eq, params, params.M, angle_at(params, 2.0), 0, LOOSE, SPEC)


class TestRegimes:
    CFG = RegimeConfig(band_margin=1.0, turning_radius=1.0, edge_nodes=1)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            RegimeConfig(band_margin=0.0)
        with pytest.raises(DomainError):
            RegimeConfig(band_margin=3.0, turning_radius=2.0)
        with pytest.raises(DomainError):
            RegimeConfig(edge_nodes=0)

    def test_classify_on_arc(self, params, eq):
        def regime(phi):
            return classify(eq, params, params.M, cmath.exp(1j * phi), self.CFG, SPEC)

        assert regime(0.3) is Regime.BAND
        assert regime(-0.3) is Regime.BAND
        assert regime(eq.beta) is Regime.TURNING
        assert regime(angle_at(params, 2.0)) is Regime.SATURATED
        assert regime(angle_at(params, 0.5)) is Regime.HARD_EDGE

    def test_classify_off_arc(self, params, eq):
        assert classify(eq, params, params.M, 3.0, self.CFG, SPEC) is Regime.OUTER
        assert classify(eq, params, params.M, 0.2j, self.CFG, SPEC) is Regime.OUTER
        with pytest.raises(OutsideRegime):
            classify(eq, params, params.M, 1.001 * cmath.exp(0.3j), self.CFG, SPEC)

    def test_dispatch(self, params, eq):
        z = cmath.exp(1j * angle_at(params, 2.0))
        value = asym_eval(eq, params, params.M, z, self.CFG, SPEC)
        assert value.regime is Regime.SATURATED
        mirrored = asym_eval(eq, params, params.M, z.conjugate(), self.CFG, SPEC)
        assert mirrored.value == pytest.approx(value.value.conjugate(), rel=1e-12)

    def test_outer_far_away(self):
        params = make_params(2, 13, 39)
        eq = equilibrium_for(params, SPEC)
        system = szego_system(params, params.M)
        z = 50.0 + 0j
        asym = outer_asym(eq, params, params.M, z, spec=SPEC)
        phase, log_abs = recursion_value(system, params.M, z)
        assert relative_error(asym, phase, log_abs) < 0.1
        with pytest.raises(OutsideRegime):
            outer_asym(eq, params, params.M, 1.01 + 0j, spec=SPEC)


class TestConvergence:
    def test_fit_slope(self):
        Ms = [10, 20, 40, 80]
        slope, C = fit_convergence_slope(Ms, [3.0 / M for M in Ms])
        assert slope == pytest.approx(-1.0, abs=1e-12)
        assert C == pytest.approx(3.0, rel=1e-12)

    @pytest.mark.parametrize(
        "Ms, errors", [([10], [0.1]), ([10, 20], [0.1, 0.0]), ([10, 20], [0.1])]
    )
    def test_fit_needs_data(self, Ms, errors):
        with pytest.raises(DomainError):
            fit_convergence_slope(Ms, errors)

    def test_odd_sample_count(self):
        assert odd_sample_count(Fraction(2), 24.2) == 25
        assert odd_sample_count(Fraction(5, 3), 14) == 15
        assert odd_sample_count(Fraction(2), 25) == 25
        with pytest.raises(NOddRequired):
            odd_sample_count(Fraction(3, 2), 10)

    def test_recursion_value(self):
        params = make_params(2, 10, 25)
        system = szego_system(params, params.M)
        phase, log_abs = recursion_value(system, 0, 0.3 + 0.1j)
        assert phase == 1.0
        assert log_abs == pytest.approx(0.0, abs=1e-15)
        phase, log_abs = recursion_value(system, params.M, 0.0)
        expected = float(system.coeffs[params.M][0])
        assert math.exp(log_abs) == pytest.approx(abs(expected), rel=1e-14)

    def test_table(self, params, eq):
        system = szego_system(params, params.M)
        node = 2 * math.pi * 10 / params.m
        angles = [0.3, 0.6, node, node + math.pi / params.m]
        cfg = RegimeConfig(band_margin=1.0, turning_radius=1.0, edge_nodes=1)
        table = comparison_table(system, eq, params, params.M, angles, cfg, SPEC)
        assert list(table.columns) == COMPARE_COLUMNS
        assert list(table["regime"]) == ["band", "band", "saturated", "saturated"]
        assert list(table["near_zero"]) == [False, False, True, False]
        threaded = comparison_table(
            system, eq, params, params.M, angles, cfg, SPEC, workers=3
        )
        pd.testing.assert_frame_equal(table, threaded)

    def test_table_marks_missing_regime(self, params, eq):
        system = szego_system(params, params.M)
        cfg = RegimeConfig(band_margin=50.0, turning_radius=50.0)
        table = comparison_table(system, eq, params, params.M, [2.5], cfg, SPEC)
        assert table["regime"].iloc[0] == "none"
        assert math.isnan(table["rel_error"].iloc[0])

    @pytest.mark.slow
    def test_study(self):
        frame, slope, C = convergence_study(
            Fraction(2), 3, [8, 12, 16], [0.3, 0.7], spec=SPEC
        )
        assert list(frame["N"]) == [25, 37, 49]
        assert list(frame["xi"]) == pytest.approx([50 / 8, 74 / 12, 98 / 16])
        assert -1.5 <= slope <= -0.5
        assert C > 0.0


def log_gap(a, b):
    """|a / b - 1| for two asymptotic values, composed in log space."""
    ratio = a.bounded / b.bounded * math.exp(a.log_prefactor - b.log_prefactor)
    return abs(ratio - 1.0)


def fixed_ratio_params(b, xi_tilde, degrees):
    """Lattice parameters at (nearly) fixed N/M, one per degree."""
    return [
        make_params(b, M, odd_sample_count(Fraction(b), xi_tilde * M)) for M in degrees
    ]


class TestTurningFormula:
    """Airy form about e^{i beta} and its overlap with the neighbouring regimes."""

    @pytest.fixture(scope="class")
    def family(self):
        out = []
        for params in fixed_ratio_params(2, 2.5, [8, 12, 16]):
            eq = equilibrium_for(params, SPEC)
            out.append((params, eq, szego_system(params, params.M)))
        return out

    def test_against_recursion_at_turning_point(self, family):
        errors = []
        for params, eq, system in family:
            z = cmath.exp(1j * eq.beta)
            asym = turning_asym(eq, params, params.M, z, SPEC)
            assert asym.regime is Regime.TURNING
            errors.append(relative_error(asym, *recursion_value(system, params.M, z)))
        assert errors[1] < errors[0]
        assert errors[2] < errors[0]
        assert errors[1] < 0.1
        assert errors[2] < 0.05

    def test_conjugate_symmetry(self, family):
        params, eq, _ = family[-1]
        z = cmath.exp(1j * (eq.beta + 0.05))
        upper = turning_asym(eq, params, params.M, z, SPEC)
        lower = turning_asym(eq, params, params.M, z.conjugate(), SPEC)
        assert lower.value == pytest.approx(upper.value.conjugate(), rel=1e-12)

    def test_overlap_with_band(self, params, eq):
        M = params.M
        gaps = []
        for i in range(1, 12):
            phi = eq.beta - 0.03 * i
            zeta = M ** (2.0 / 3.0) * psi_on_arc(eq, phi, SPEC)
            if not 1.0 <= -zeta <= 8.0:
                continue
            band = band_asym(eq, M, phi, LOOSE, SPEC)
            turning = turning_asym(eq, params, M, cmath.exp(1j * phi), SPEC)
            gaps.append(log_gap(turning, band))
        assert len(gaps) >= 3
        assert statistics.median(gaps) < 0.3

    def test_overlap_with_saturated(self, params, eq):
        M = params.M
        spacing = 2 * math.pi / params.m
        gaps = []
        for j in range(params.N // 2):
            # midpoints between nodes, where the lattice factor is largest
            phi = (j + 0.5) * spacing
            if not eq.beta < phi <= eq.alpha - 1.25 * spacing:
                continue
            zeta = M ** (2.0 / 3.0) * psi_on_arc(eq, phi, SPEC)
            if not 1.0 <= zeta <= 8.0:
                continue
            sat = saturated_asym(eq, params, M, phi, 1, LOOSE, SPEC)
            turning = turning_asym(eq, params, M, cmath.exp(1j * phi), SPEC)
            gaps.append(log_gap(turning, sat))
        assert gaps
        assert statistics.median(gaps) < 0.3


class TestNormAsymptotics:
    """Szego parameters and norms along fixed N/M = 5/2 (xi = 5 on alpha = pi/2)."""

    DEGREES = [10, 14, 18, 22, 26]

    @pytest.fixture(scope="class")
    def family(self):
        out = []
        for params in fixed_ratio_params(2, 2.5, self.DEGREES):
            assert params.xi == 5
            eq = equilibrium_for(params, SPEC)
            out.append((params, eq, szego_system(params, params.M)))
        return out

    def test_szego_parameter_rate(self, family):
        constants = []
        for params, eq, system in family:
            rho, _ = szego_h_asym(eq, params.M)
            exact = float(system.rho_at(params.M))
            assert math.copysign(1.0, exact) == math.copysign(1.0, rho)
            constants.append(params.M * abs(exact - rho))
        assert min(constants) > 0.0
        assert max(constants) <= 3.0 * min(constants)

    def test_norm_growth_rate(self, family):
        # h_M grows like e^{M l} along the family
        constants = []
        for (p0, eq, s0), (p1, _, s1) in itertools.pairwise(family):
            step = p1.M - p0.M
            ratio = float(s1.h[p1.M] / s0.h[p0.M]) ** (1.0 / step)
            constants.append(p0.M * abs(ratio - math.exp(eq.ell)))
        assert max(constants) <= 3.0 * constants[0]

    def test_norm_against_leading_term(self, family):
        ratios = []
        for params, eq, system in family:
            _, h = szego_h_asym(eq, params.M)
            ratios.append(float(system.h[params.M]) / h)
        # the ratio settles near 0.92, not 1
        assert all(0.88 < r < 0.95 for r in ratios)
        assert all(b - a > -1e-6 for a, b in itertools.pairwise(ratios))
        assert ratios[-1] - ratios[0] < 0.03
