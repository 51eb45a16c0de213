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

"""
Christoffel-Darboux kernel of the lattice measure and the error terms B^k.

K_{n,M}(w) is the projection of z^n onto span{p_0, ..., p_{M-1}} evaluated at w.
It is available as the double sum over degrees (coefficients against the moment
table), as the Christoffel-Darboux closed form (node sum), and for n >= M as the
residue expression in the quantities r_{M,k}, r*_{M,k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from arcopuc.errors import DegreeTooLarge, FormMismatch, OutOfDomain
from arcopuc.highprec.double_word import (
    PI,
    ZERO,
    ExtendedComplex,
    ExtendedReal,
)
from arcopuc.lattice.params import ExtensionParams, lattice_angles
from arcopuc.opuc.moments import full_moments, node_points, node_power
from arcopuc.opuc.szego import (
    OpucSystem,
    eval_monic_xc,
    eval_reverse_xc,
    node_reverse_values,
    node_values,
)
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

FORM_MISMATCH_TOL = 1e-12
_NODE_HIT = 1e-12


@dataclass(frozen=True)
class KernelValue:
    n: int
    M: int
    w: complex
    value: complex
    relative_gap: float = 0.0


def arc_point(x: float, b: Fraction) -> tuple[ExtendedReal, ExtendedComplex]:
    """Angle 2*pi*x/b and the point w = e^{2*pi*i*x/b}, both in double-word."""
    theta = PI * 2 * x / ExtendedReal.from_fraction(b)
    return theta, ExtendedComplex.unit(theta)


def _relative_gap(a: ExtendedComplex, b: ExtendedComplex, floor: float) -> float:
    scale = max(abs(complex(a)), abs(complex(b)), floor)
    return abs(complex(a - b)) / scale


def _require_degree(sys: OpucSystem, M: int) -> None:
    if not 0 <= M <= sys.degree_max:
        raise DegreeTooLarge(f"kernel degree {M} outside 0..{sys.degree_max}")


def _kernel_by_degrees(
    sys: OpucSystem, params: ExtensionParams, n: int, M: int, w: ExtendedComplex
) -> ExtendedComplex:
    c = full_moments(params)
    total = ExtendedComplex(ZERO)
    for j in range(M):
        # <z^n, p_j> = sum_i p_{j,i} c_{n-i}
        proj = ZERO
        for i, coef in enumerate(sys.coeffs[j]):
            proj = proj + coef * c.at(n - i)
        total = total + eval_monic_xc(sys, j, w) * (proj / sys.h[j])
    return total


def _kernel_christoffel_darboux(
    sys: OpucSystem, params: ExtensionParams, n: int, M: int, w: ExtendedComplex
) -> ExtendedComplex:
    m = params.m
    doubled, _ = lattice_angles(params.N, m)
    pw = eval_monic_xc(sys, M, w)
    pw_rev = eval_reverse_xc(sys, M, w)
    total = ExtendedComplex(ZERO)
    for r2, pz, pz_rev in zip(
        doubled, node_values(sys, params, M), node_reverse_values(sys, params, M),
        strict=True,
    ):
        z = node_power(r2, 1, m)
        numer = pz * pw_rev - pz_rev * pw
        denom = 1 - z.conjugate() * w
        total = total + node_power(r2, n - M, m) * numer / denom
    return total / (sys.h[M] * m)


def _near_node(params: ExtensionParams, w: complex) -> bool:
    return any(abs(w - complex(z)) < _NODE_HIT for z in node_points(params))


def cd_kernel(
    sys: OpucSystem,
    params: ExtensionParams,
    n: int,
    M: int,
    w: complex | ExtendedComplex,
    tol: float = FORM_MISMATCH_TOL,
) -> KernelValue:
    """
    Evaluate K_{n,M}(w) in both forms and return the Christoffel-Darboux one.

    At a lattice node the closed form has a removable singularity and the double
    sum is returned on its own.

    Raises:
        FormMismatch: the two forms disagree beyond ``tol`` relative
    """
    _require_degree(sys, M)
    wx = ExtendedComplex.of(w)
    direct = _kernel_by_degrees(sys, params, n, M, wx)
    if M == 0:
        return KernelValue(n=n, M=M, w=complex(wx), value=complex(direct))
    if _near_node(params, complex(wx)):
        LOG.debug(f"w={complex(wx)} is a lattice node, using the degree sum")
        return KernelValue(n=n, M=M, w=complex(wx), value=complex(direct))

    closed = _kernel_christoffel_darboux(sys, params, n, M, wx)
    radius = abs(complex(wx))
    floor = math.exp(min(700.0, n * math.log(radius))) if radius > 1.0 and n > 0 else 1.0
    gap = _relative_gap(closed, direct, floor)
    if gap > tol:
        LOG.error(f"K_{{{n},{M}}}({complex(wx)}): forms differ by {gap:.3e}")
        raise FormMismatch(
            f"Christoffel-Darboux form of K_{{{n},{M}}} disagrees with the degree sum "
            f"by {gap:.3e} relative",
            relative_gap=gap,
        )
    return KernelValue(n=n, M=M, w=complex(wx), value=complex(closed), relative_gap=gap)


def _check_x(x: float) -> None:
    if not -0.5 - 1e-15 <= x <= 0.5 + 1e-15:
        raise OutOfDomain(f"sample coordinate x={x} outside [-1/2, 1/2]")


def _B_direct(
    sys: OpucSystem, params: ExtensionParams, n: int, w: ExtendedComplex
) -> ExtendedComplex:
    # w^n - (1/N) sum_l phi_l(w) sum_j z_j^n conj(phi_l(z_j)), phi_l = p_l / sqrt(b h_l)
    doubled, _ = lattice_angles(params.N, params.m)
    powers = [node_power(r2, n, params.m) for r2 in doubled]
    b = ExtendedReal.from_fraction(params.b)
    total = ExtendedComplex(ZERO)
    for j in range(params.M):
        inner = ExtendedComplex(ZERO)
        for zn, pz in zip(powers, node_values(sys, params, j), strict=True):
            inner = inner + zn * pz.conjugate()
        total = total + eval_monic_xc(sys, j, w) * inner / (sys.h[j] * b)
    return total / params.N


def error_term_B(
    sys: OpucSystem,
    params: ExtensionParams,
    k: int,
    x: float,
    tol: float = FORM_MISMATCH_TOL,
) -> complex:
    """
    B^k(x) = w^{k-M0} - K_{k-M0,M}(w) with w = e^{2*pi*i*x/b}.

    The normalized sample-sum definition and the kernel form are both evaluated
    and compared.

    Raises:
        OutOfDomain: x outside [-1/2, 1/2]
        FormMismatch: the two evaluations disagree beyond ``tol``
    """
    _check_x(x)
    _require_degree(sys, params.M)
    n = k - params.M0
    theta, w = arc_point(x, params.b)
    wn = ExtendedComplex.unit(theta * n)
    kernel = cd_kernel(sys, params, n, params.M, w, tol=tol)
    by_kernel = wn - ExtendedComplex.of(kernel.value)
    by_samples = wn - _B_direct(sys, params, n, w)
    gap = _relative_gap(by_kernel, by_samples, 1.0 + abs(kernel.value))
    if gap > tol:
        LOG.error(f"B^{k}({x}): sample form and kernel form differ by {gap:.3e}")
        raise FormMismatch(
            f"B^{k}({x}) sample form disagrees with kernel form by {gap:.3e}",
            relative_gap=gap,
        )
    return complex(by_kernel)


def expansion_row(sys: OpucSystem, n: int) -> tuple[ExtendedReal, ...]:
    """x_{n,0..n} with z^n = sum_j x_{n,j} p_j(z), by back-substitution."""
    if not 0 <= n <= sys.degree_max:
        raise DegreeTooLarge(f"expansion of z^{n} needs p_{n}, have 0..{sys.degree_max}")
    x = [ZERO] * (n + 1)
    x[n] = ExtendedReal(1.0)
    for i in range(n - 1, -1, -1):
        acc = ZERO
        for j in range(i + 1, n + 1):
            acc = acc + x[j] * sys.coeffs[j][i]
        x[i] = -acc
    return tuple(x)


def expansion_coeffs(sys: OpucSystem, n: int, j: int) -> ExtendedReal:
    if not 0 <= j <= n:
        raise DegreeTooLarge(f"need 0 <= j <= n, got j={j}, n={n}")
    return expansion_row(sys, n)[j]


def r_quantities(
    sys: OpucSystem, params: ExtensionParams, M: int, k: int
) -> tuple[ExtendedReal, ExtendedReal]:
    """
    r_{M,k} and r*_{M,k}: lattice averages of z^k p_M(z) and z^k p_M^*(z).

    Both are real because the lattice is conjugation symmetric and the
    coefficients are real.
    """
    _require_degree(sys, M)
    doubled, _ = lattice_angles(params.N, params.m)
    r = ExtendedComplex(ZERO)
    r_star = ExtendedComplex(ZERO)
    for r2, pz, pz_rev in zip(
        doubled, node_values(sys, params, M), node_reverse_values(sys, params, M),
        strict=True,
    ):
        zk = node_power(r2, k, params.m)
        r = r + zk * pz
        r_star = r_star + zk * pz_rev
    return r.re / params.m, r_star.re / params.m


def kernel_residue_form(
    sys: OpucSystem,
    params: ExtensionParams,
    n: int,
    M: int,
    w: complex | ExtendedComplex,
) -> complex:
    """
    K_{n,M}(w) for n >= M from p_M(w), p*_M(w) and r_{M,k}, r*_{M,k}:

        w^n - w^{n-M} p_M(w) + sum_{k=1}^{n-M} w^{n-M-k}
            (p*_M(w) r_{M,k} - p_M(w) r*_{M,k}) / h_M
    """
    _require_degree(sys, M)
    if n < M:
        raise DegreeTooLarge(f"residue form needs n >= M, got n={n}, M={M}")
    wx = ExtendedComplex.of(w)
    pw = eval_monic_xc(sys, M, wx)
    pw_rev = eval_reverse_xc(sys, M, wx)
    powers = [ExtendedComplex(ExtendedReal(1.0))]
    for _ in range(n):
        powers.append(powers[-1] * wx)

    total = powers[n] - powers[n - M] * pw
    for k in range(1, n - M + 1):
        r, r_star = r_quantities(sys, params, M, k)
        term = (pw_rev * r - pw * r_star) / sys.h[M]
        total = total + powers[n - M - k] * term
    return complex(total)


def expansion_tail_B(
    sys: OpucSystem, params: ExtensionParams, k: int, x: float
) -> complex:
    """
    B^k(x) through the expansion of z^n past degree M.

    With n = k - M0 and n' = n mod m (z^n = z^{n'} on the lattice)

        B^k(x) = w^n - w^{n'} + sum_{j=M}^{n'} x_{n',j} p_j(w).

    Raises:
        DegreeTooLarge: n' exceeds the degrees held by ``sys``
    """
    _check_x(x)
    n = k - params.M0
    n_red = n % params.m
    theta, w = arc_point(x, params.b)
    total = ExtendedComplex.unit(theta * n) - ExtendedComplex.unit(theta * n_red)
    if n_red < params.M:
        return complex(total)
    row = expansion_row(sys, n_red)
    for j in range(params.M, n_red + 1):
        total = total + eval_monic_xc(sys, j, w) * row[j]
    return complex(total)
