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

import numpy as np
import pytest

from arcopuc.equilibrium.measure import band_edge
from arcopuc.errors import DegreeTooLarge, OutOfDomain
from arcopuc.fourext.projection import lebesgue_factor
from arcopuc.highprec.double_word import ExtendedReal
from arcopuc.lattice.params import lattice_nodes, make_params
from arcopuc.opuc.interpolation import interpolation_matrix, node_residue
from arcopuc.opuc.kernel import (
    cd_kernel,
    error_term_B,
    expansion_coeffs,
    expansion_row,
    expansion_tail_B,
    kernel_residue_form,
    r_quantities,
)
from arcopuc.opuc.szego import eval_monic_xc, normalized_phi, szego_system


@pytest.fixture(scope="module")
def params():
    return make_params(2, 10, 25)


@pytest.fixture(scope="module")
def system(params):
    return szego_system(params, 14)


class TestChristoffelDarbouxKernel:
    """Projection kernel in its three forms."""

    W = cmath.exp(0.37j)

    @pytest.mark.parametrize("n", [0, 3, 9])
    def test_reproduces_space(self, params, system, n):
        value = cd_kernel(system, params, n, params.M, self.W).value
        assert value == pytest.approx(self.W**n, abs=1e-12)

    def test_top_degree_kernel(self, params, system):
        M = params.M
        value = cd_kernel(system, params, M, M, self.W).value
        expected = self.W**M - complex(eval_monic_xc(system, M, self.W))
        assert value == pytest.approx(expected, abs=1e-12)

    def test_off_circle_point(self, params, system):
        kv = cd_kernel(system, params, 12, params.M, 0.5 + 0.8j)
        assert kv.relative_gap < 1e-12

    def test_at_lattice_node(self, params, system):
        node = lattice_nodes(params).nodes_z[4]
        kv = cd_kernel(system, params, 11, params.M, node)
        assert kv.relative_gap == 0.0
        # |K| <= sqrt(N) at a node
        assert abs(kv.value) < 10.0

    @pytest.mark.parametrize("n", [10, 13])
    def test_residue_form(self, params, system, n):
        by_residue = kernel_residue_form(system, params, n, params.M, self.W)
        by_cd = cd_kernel(system, params, n, params.M, self.W).value
        assert by_residue == pytest.approx(by_cd, abs=1e-10)

    def test_residue_form_needs_large_n(self, params, system):
        with pytest.raises(DegreeTooLarge):
            kernel_residue_form(system, params, 3, params.M, self.W)


class TestErrorTermB:
    """B^k(x), the error of projecting a single Fourier mode."""

    def test_vanishes_inside_space(self, params, system):
        for k in params.t:
            assert abs(error_term_B(system, params, k, 0.21)) < 1e-12

    @pytest.mark.parametrize("k", [5, 7, 9])
    def test_matches_expansion_tail(self, params, system, k):
        for x in (-0.43, 0.05, 0.31):
            direct = error_term_B(system, params, k, x)
            tail = expansion_tail_B(system, params, k, x)
            assert direct == pytest.approx(tail, abs=1e-10)

    def test_nonzero_outside_space(self, params, system):
        assert abs(error_term_B(system, params, 7, 0.45)) > 1e-6

    def test_domain(self, params, system):
        with pytest.raises(OutOfDomain):
            error_term_B(system, params, 7, 0.7)

    def test_needs_degree_M(self, params):
        with pytest.raises(DegreeTooLarge):
            error_term_B(szego_system(params, 5), params, 7, 0.1)


class TestExpansion:
    """Monomials in the orthogonal basis."""

    def test_row_reconstructs_monomial(self, system):
        z = 0.5 + 0.2j
        for n in (0, 4, 11):
            row = expansion_row(system, n)
            total = sum(
                complex(eval_monic_xc(system, j, z)) * float(row[j]) for j in range(n + 1)
            )
            assert total == pytest.approx(z**n, abs=1e-12)

    def test_row_needs_degree(self, system):
        with pytest.raises(DegreeTooLarge):
            expansion_row(system, 15)


class TestInterpolationMatrix:
    """The matrix that encodes p_M and p*_{M-1}."""

    @pytest.fixture
    def small(self):
        params = make_params(2, 6, 15)
        return params, szego_system(params, 6)

    @pytest.mark.parametrize("z", [1.5 + 0.5j, 0.3j, -0.2 + 0.1j])
    def test_unit_determinant(self, small, z):
        params, system = small
        P = interpolation_matrix(system, params, 6, z)
        assert np.linalg.det(P) == pytest.approx(1.0, abs=1e-9)

    def test_identity_at_infinity(self, small):
        params, system = small
        z = 1e4 + 0.0j
        P = interpolation_matrix(system, params, 6, z)
        normalized = P @ np.diag([z**-6, z**6])
        assert normalized == pytest.approx(np.eye(2), abs=1e-2)

    def test_residue_at_node(self, small):
        params, system = small
        j = 3
        node = lattice_nodes(params).nodes_z[j]
        eps = 1e-9 * (1 + 1j)
        P = interpolation_matrix(system, params, 6, node + eps)
        R = node_residue(system, params, 6, j)
        assert P[0, 1] * eps == pytest.approx(R[0, 1], rel=1e-5)
        assert P[1, 1] * eps == pytest.approx(R[1, 1], rel=1e-5)
        assert np.all(R[:, 0] == 0)


class TestExpansionIdentities:
    """Lattice averages r_{M,k}, r*_{M,k} against the expansion coefficients."""

    @pytest.fixture(scope="class")
    def deep(self, params):
        return szego_system(params, 16)

    def test_reverse_average_is_norm(self, params, deep):
        for M in range(13):
            _, r_star = r_quantities(deep, params, M, 0)
            assert abs(float(r_star - deep.h[M])) <= 1e-20

    def test_averages_bounded_by_norm(self, params, deep):
        for M in range(13):
            root = math.sqrt(float(deep.h[M]))
            for k in range(params.m + 1):
                r, _ = r_quantities(deep, params, M, k)
                assert abs(float(r)) <= root * (1.0 + 1e-12)

    @pytest.mark.parametrize("M", [1, 5, 9, 12])
    def test_recurrence_in_degree(self, params, deep, M):
        rho = deep.rho_at(M + 1)
        for k in range(5):
            r_next, _ = r_quantities(deep, params, M, k + 1)
            r_up, r_star_up = r_quantities(deep, params, M + 1, k)
            _, r_star = r_quantities(deep, params, M, k)
            by_forward = float((r_next - r_up) / rho)
            assert by_forward == pytest.approx(
                float(r_star), abs=1e-16 * max(1.0, abs(float(r_star)))
            )
            by_reverse = float(r_star - rho * r_next)
            assert by_reverse == pytest.approx(
                float(r_star_up), abs=1e-16 * max(1.0, abs(float(r_star_up)))
            )

    def test_subdiagonal_closed_form(self, deep):
        for M in range(13):
            closed = deep.rho_at(1)
            for i in range(1, M + 1):
                closed = closed - deep.rho_at(i + 1) * deep.rho_at(i)
            assert abs(float(expansion_coeffs(deep, M + 1, M) - closed)) <= 1e-18

    def test_diagonal_is_one(self, deep):
        for n in range(17):
            assert expansion_coeffs(deep, n, n) == ExtendedReal(1.0)

    def test_reverse_average_is_scaled_expansion(self, params, deep):
        for M in range(13):
            for k in range(1, 5):
                _, r_star = r_quantities(deep, params, M, k)
                scaled = expansion_coeffs(deep, M + k, M) * deep.h[M]
                assert abs(float(r_star - scaled)) <= 1e-16 * max(
                    float(deep.h[M]), abs(float(r_star))
                )

    def test_coefficient_index_range(self, deep):
        with pytest.raises(DegreeTooLarge):
            expansion_coeffs(deep, 4, 5)


class TestErrorTermBounds:
    """Size of B^k(x) away from the approximation space."""

    @pytest.mark.slow
    def test_uniform_bound_on_random_modes(self, params, system):
        rng = np.random.default_rng(20240611)
        ks = rng.integers(params.M0, params.M0 + 2 * params.m, size=1000)
        xs = rng.uniform(-0.5, 0.5, size=1000)
        for k, x in zip(ks, xs, strict=True):
            value = abs(error_term_B(system, params, int(k), float(x)))
            w = cmath.exp(2j * math.pi * float(x) / float(params.b))
            phis = [abs(normalized_phi(system, params, l, w)) for l in range(params.M)]
            assert value <= 1.0 + lebesgue_factor(system, params, float(x)) + 1e-9
            assert value <= 1.0 + sum(phis) + 1e-9

    @staticmethod
    def _saturated_midpoints(lattice_params):
        xi = float(lattice_params.m) / lattice_params.M
        beta = band_edge(lattice_params.alpha, xi)
        nodes = sorted(lattice_nodes(lattice_params).nodes_x)
        scale = 2.0 * math.pi / float(lattice_params.b)
        mids = []
        for left, right in itertools.pairwise(nodes):
            if min(abs(left), abs(right)) * scale >= beta and left * right > 0:
                mids.append(0.5 * (left + right))
        return mids

    @pytest.mark.parametrize(("M", "N"), [(11, 13), (15, 17)])
    @pytest.mark.parametrize("s", [1, 2])
    def test_growth_between_saturated_nodes(self, M, N, s):
        lattice_params = make_params(2, M, N)
        sys_ = szego_system(lattice_params, M)
        mids = self._saturated_midpoints(lattice_params)
        assert len(mids) >= 4
        k = (M - 1) // 2 + s
        root = math.sqrt(float(lattice_params.b) * float(sys_.h[M]))
        r, r_star = r_quantities(sys_, lattice_params, M, 1)
        spread = (abs(float(r)) + abs(float(r_star))) / float(sys_.h[M])

        ratios = []
        for x in mids:
            w = cmath.exp(2j * math.pi * x / float(lattice_params.b))
            phi = abs(normalized_phi(sys_, lattice_params, M, w))
            ratios.append(abs(error_term_B(sys_, lattice_params, k, x)) / (phi * root))
        c, d = min(ratios), max(ratios)
        assert c > 0.0
        if s == 1:
            # first mode past the space: B^k = p_M(w)
            assert c == pytest.approx(1.0, rel=1e-9)
            assert d == pytest.approx(1.0, rel=1e-9)
        else:
            assert d <= 1.0 + spread + 1e-9
