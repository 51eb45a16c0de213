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
Constrained equilibrium measure on the arc [-alpha, alpha] of the unit circle.

The density is saturated at the constraint xi/(2*pi) on [beta, alpha] and its
mirror, and on the band [-beta, beta] it is

    rho(theta) = xi/pi^2 * arctan( sqrt(2) t cos(theta/2) / sqrt(cos theta - cos beta) )

with t = tan(pi/(2 xi)) and cos beta = cos alpha + (1 + cos alpha) t^2.
Everything here is scalar and built on the adaptive integrals of
``arcopuc.equilibrium.quadrature``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd

from arcopuc.equilibrium.quadrature import QuadratureSpec, integrate_real
from arcopuc.errors import NoBand, OutOfDomain
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class EquilibriumData:
    """Parameters of one equilibrium problem with its band edge and multiplier."""

    alpha: float
    xi: float
    beta: float
    ell: float
    A: float
    B: float

    @property
    def t(self) -> float:
        return math.tan(math.pi / (2.0 * self.xi))

    @property
    def saturation(self) -> float:
        """Upper constraint xi/(2*pi) on the density."""
        return self.xi / (2.0 * math.pi)

    def describe(self) -> dict[str, float]:
        return {
            "alpha": self.alpha,
            "xi": self.xi,
            "beta": self.beta,
            "ell": self.ell,
            "A": self.A,
            "B": self.B,
        }


def _cos_gap(theta: float, beta: float) -> float:
    # cos(theta) - cos(beta) without cancellation near the band edge
    return 2.0 * math.sin((beta + theta) / 2.0) * math.sin((beta - theta) / 2.0)


def _check_alpha_xi(alpha: float, xi: float) -> None:
    if not 0.0 < alpha <= math.pi:
        raise OutOfDomain(f"arc half-angle must lie in (0, pi], got alpha={alpha}")
    if not xi > 1.0:
        raise OutOfDomain(f"sampling ratio must exceed 1, got xi={xi}")


def band_threshold(alpha: float) -> float:
    """Smallest xi with a non-empty band: pi/alpha (the measure saturates below it)."""
    return math.pi / alpha


def band_edge(alpha: float, xi: float) -> float:
    """
    Band edge beta from cos beta = cos alpha + (1 + cos alpha) tan^2(pi/(2 xi)).

    alpha = pi is accepted and gives beta = pi (no saturated region).

    Raises:
        OutOfDomain: alpha outside (0, pi] or xi <= 1
        NoBand: cos beta >= 1, i.e. xi <= pi/alpha
    """
    _check_alpha_xi(alpha, xi)
    A = math.cos(alpha)
    t = math.tan(math.pi / (2.0 * xi))
    B = A + (1.0 + A) * t * t
    if B >= 1.0:
        raise NoBand(
            f"no band for alpha={alpha}, xi={xi}: the measure saturates the whole arc "
            f"(need xi > pi/alpha = {band_threshold(alpha):.12g})"
        )
    return math.acos(max(B, -1.0))


def equilibrium(
    alpha: float, xi: float, spec: QuadratureSpec | None = None
) -> EquilibriumData:
    """Band edge and Lagrange multiplier for (alpha, xi)."""
    beta = band_edge(alpha, xi)
    A = math.cos(alpha)
    B = math.cos(beta)
    ell = lagrange_multiplier(alpha, xi, beta, spec)
    data = EquilibriumData(alpha=alpha, xi=xi, beta=beta, ell=ell, A=A, B=B)
    LOG.debug(f"equilibrium {data.describe()}")
    return data


def _check_phi(eq: EquilibriumData, phi: float) -> None:
    if abs(phi) > eq.alpha + _EDGE_SLACK:
        raise OutOfDomain(f"angle {phi} outside [-alpha, alpha] with alpha={eq.alpha}")


def density_rho(eq: EquilibriumData, theta: float) -> float:
    """
    Equilibrium density at theta.

    Raises:
        OutOfDomain: |theta| > alpha
    """
    _check_phi(eq, theta)
    if abs(theta) >= eq.beta:
        return eq.saturation
    numer = math.sqrt(2.0) * eq.t * math.cos(theta / 2.0)
    denom = math.sqrt(_cos_gap(abs(theta), eq.beta))
    return eq.xi / math.pi**2 * math.atan2(numer, denom)


def band_deficit(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    Integral of xi/(2*pi) - rho over [phi, beta] for 0 <= phi <= beta.

    Evaluated with theta = beta - u^2, which removes the square-root behaviour
    at the band edge.
    """
    if phi >= eq.beta:
        return 0.0
    top = math.sqrt(eq.beta - phi)

    def integrand(u: float) -> float:
        return (eq.saturation - density_rho(eq, eq.beta - u * u)) * 2.0 * u

    return integrate_real(integrand, 0.0, top, spec)


def band_mass_I(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    I(phi) = integral of rho over [phi, alpha].

    Exact on the saturated parts; the band part is a single quadrature in the
    edge variable u with theta = beta - u^2.

    Raises:
        OutOfDomain: |phi| > alpha
    """
    _check_phi(eq, phi)
    phi = max(-eq.alpha, min(eq.alpha, phi))
    if phi >= eq.beta:
        return eq.saturation * (eq.alpha - phi)
    if phi <= -eq.beta:
        return 1.0 - eq.saturation * (phi + eq.alpha)
    top = math.sqrt(eq.beta - phi)

    def integrand(u: float) -> float:
        return density_rho(eq, eq.beta - u * u) * 2.0 * u

    band = integrate_real(integrand, 0.0, top, spec)
    return eq.saturation * (eq.alpha - eq.beta) + band


def total_mass(eq: EquilibriumData, spec: QuadratureSpec | None = None) -> float:
    """Integral of rho over the arc, by direct quadrature split at +-beta and 0."""
    return integrate_real(
        lambda th: density_rho(eq, th),
        -eq.alpha,
        eq.alpha,
        spec,
        points=(-eq.beta, 0.0, eq.beta),
    )


def _log_sinc2(d: float) -> float:
    # log(2(1 - cos d)) - 2 log|d|, smooth for |d| < 2*pi
    return 2.0 * math.log(abs(float(np.sinc(d / (2.0 * math.pi)))))


def _wrap(d: float) -> float:
    return math.remainder(d, 2.0 * math.pi)


def log_potential(
    density,
    support: tuple[float, float],
    phi: float,
    spec: QuadratureSpec | None = None,
    extra_breaks: Iterable[float] = (),
) -> float:
    """
    Integral of log|e^{i phi} - e^{i theta}| density(theta) over ``support``.

    The kernel is written as log|d| + (1/2)(log(2(1 - cos d)) - 2 log|d|) with d the
    wrapped difference phi - theta; pieces ending at a logarithmic point use the
    QUADPACK log weights, everything else is smooth.
    """
    lo, hi = support
    singular = [phi + 2.0 * math.pi * k for k in (-1, 0, 1)]
    wraps = [phi + math.pi * k for k in (-3, -1, 1, 3)]
    breaks = {lo, hi}
    breaks.update(p for p in (*singular, *wraps, *extra_breaks) if lo < p < hi)
    nodes = sorted(breaks)
    is_singular = {p for p in nodes if any(abs(p - s) < 1e-15 for s in singular)}

    def smooth(theta: float) -> float:
        return 0.5 * _log_sinc2(_wrap(phi - theta)) * density(theta)

    def full(theta: float) -> float:
        d = _wrap(phi - theta)
        return 0.5 * math.log(2.0 * (1.0 - math.cos(d))) * density(theta)

    total = 0.0
    for a, b in zip(nodes, nodes[1:], strict=False):
        if a in is_singular:
            total += integrate_real(density, a, b, spec, weight="alg-loga", wvar=(0, 0))
            total += integrate_real(smooth, a, b, spec)
        elif b in is_singular:
            total += integrate_real(density, a, b, spec, weight="alg-logb", wvar=(0, 0))
            total += integrate_real(smooth, a, b, spec)
        else:
            total += integrate_real(full, a, b, spec)
    return total


def log_transform_L(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    L(phi) = (1/2) integral of log(2(1 - cos(phi - theta))) rho(theta) over the arc.

    Raises:
        OutOfDomain: |phi| > alpha
        QuadratureFailure: an integral did not converge
    """
    _check_phi(eq, phi)
    return log_potential(
        lambda th: density_rho(eq, th),
        (-eq.alpha, eq.alpha),
        phi,
        spec,
        extra_breaks=(-eq.beta, eq.beta),
    )


def _lagrange_integral(B: float, t: float, spec: QuadratureSpec | None) -> float:
    # integral over [1, sqrt(2/(1-B))] of log F(y) / (1 + t^2 y^2), where
    # F(y) = (1 + B y^2 + y sqrt(1+B) sqrt(2 - (1-B) y^2)) / (y^2 - 1)
    top = math.sqrt(2.0 / (1.0 - B))
    if top <= 1.0:
        return 0.0
    s = math.sqrt(1.0 + B)

    def weight(y: float) -> float:
        return 1.0 / (1.0 + t * t * y * y)

    def regular(y: float) -> float:
        inner = max(2.0 - (1.0 - B) * y * y, 0.0)
        numer = 1.0 + B * y * y + y * s * math.sqrt(inner)
        return (math.log(numer) - math.log(y + 1.0)) * weight(y)

    smooth_part = integrate_real(regular, 1.0, top, spec)
    log_part = integrate_real(weight, 1.0, top, spec, weight="alg-loga", wvar=(0, 0))
    return smooth_part - log_part


def lagrange_multiplier(
    alpha: float, xi: float, beta: float, spec: QuadratureSpec | None = None
) -> float:
    """
    Lagrange multiplier l as a single integral in y over [1, sqrt(2/(1 - cos beta))].

    The log(y - 1) endpoint singularity is integrated with the QUADPACK log weight.
    """
    t = math.tan(math.pi / (2.0 * xi))
    B = math.cos(beta)
    return -2.0 * xi * t / math.pi * _lagrange_integral(B, t, spec)


def lagrange_multiplier_limit(alpha: float, spec: QuadratureSpec | None = None) -> float:
    """Limit of l as xi grows without bound; equals 2 log sin(alpha/2)."""
    if not 0.0 < alpha <= math.pi:
        raise OutOfDomain(f"arc half-angle must lie in (0, pi], got alpha={alpha}")
    return -_lagrange_integral(math.cos(alpha), 0.0, spec)


def lagrange_by_potential(
    eq: EquilibriumData, spec: QuadratureSpec | None = None
) -> float:
    """l = 2 * integral of log|1 - e^{i theta}| rho(theta), i.e. 2 L(0)."""
    return 2.0 * log_transform_L(eq, 0.0, spec)


def euler_lagrange_residual(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """2 L(phi) - l: zero on the band, positive on the saturated region."""
    return 2.0 * log_transform_L(eq, phi, spec) - eq.ell


def artanh_integral(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    Integral over [beta, phi] of artanh(sqrt(cos beta - cos theta) / C(theta)),
    C(theta) = sqrt(2) t cos(theta/2), for beta <= phi <= alpha.

    theta = beta + u^2 removes the square root at beta; the logarithmic growth at
    alpha is integrable.
    """
    phi = min(abs(phi), eq.alpha)
    if phi <= eq.beta:
        return 0.0

    def integrand(u: float) -> float:
        theta = eq.beta + u * u
        gap = -_cos_gap(theta, eq.beta)
        arg = math.sqrt(max(gap, 0.0)) / (math.sqrt(2.0) * eq.t * math.cos(theta / 2.0))
        return math.atanh(min(arg, 1.0 - 1e-16)) * 2.0 * u

    return integrate_real(integrand, 0.0, math.sqrt(phi - eq.beta), spec)


def saturated_log_growth(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    L(phi) - l/2 on the saturated region from its closed derivative:

        (xi/pi) * integral_beta^phi artanh(sqrt(cos beta - cos theta) / C(theta)).

    Raises:
        OutOfDomain: |phi| < beta or |phi| > alpha
    """
    _check_phi(eq, phi)
    if abs(phi) < eq.beta - _EDGE_SLACK:
        raise OutOfDomain(f"angle {phi} is inside the band [-{eq.beta}, {eq.beta}]")
    return eq.xi / math.pi * artanh_integral(eq, phi, spec)


def unconstrained_density(b: Fraction | float, x: float) -> float:
    """
    Density of the unconstrained equilibrium measure on [-1/2, 1/2]:

        sqrt(2) cos(pi x / b) / (b sqrt(cos(2 pi x / b) - cos(pi / b)))

    Raises:
        OutOfDomain: |x| >= 1/2
    """
    if abs(x) >= 0.5:
        raise OutOfDomain(f"unconstrained density needs |x| < 1/2, got x={x}")
    bf = float(b)
    gap = _cos_gap(2.0 * math.pi * abs(x) / bf, math.pi / bf)
    return math.sqrt(2.0) * math.cos(math.pi * x / bf) / (bf * math.sqrt(gap))


def unconstrained_arc_density(beta: float, theta: float) -> float:
    """Equilibrium density of the arc [-beta, beta] without constraint."""
    if abs(theta) >= beta:
        raise OutOfDomain(f"angle {theta} outside the open arc (-{beta}, {beta})")
    return math.cos(theta / 2.0) / (
        math.sqrt(2.0) * math.pi * math.sqrt(_cos_gap(abs(theta), beta))
    )


def unconstrained_arc_log_transform(
    beta: float, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    Logarithmic potential of the arc equilibrium measure at e^{i phi}.

    With sin(theta/2) = sin(beta/2) sin(tau) the measure becomes d tau / pi on
    [-pi/2, pi/2]. On the arc the value is log sin(beta/2).
    """
    s = math.sin(beta / 2.0)

    def theta_of(tau: float) -> float:
        return 2.0 * math.asin(s * math.sin(tau))

    def kernel(tau: float) -> float:
        d = _wrap(phi - theta_of(tau))
        return 0.5 * math.log(2.0 * (1.0 - math.cos(d))) / math.pi

    if abs(phi) >= beta:
        return integrate_real(kernel, -math.pi / 2.0, math.pi / 2.0, spec)
    # log singularity where theta(tau) = phi
    tau0 = math.asin(math.sin(phi / 2.0) / s)

    def scaled_smooth(tau: float) -> float:
        d = _wrap(phi - theta_of(tau))
        if abs(tau - tau0) < 1e-300:
            return 0.0
        ratio = abs(d) / abs(tau - tau0)
        return (0.5 * _log_sinc2(d) + math.log(ratio)) / math.pi

    total = 0.0
    for a, b in ((-math.pi / 2.0, tau0), (tau0, math.pi / 2.0)):
        if a == b:
            continue
        name = "alg-logb" if b == tau0 else "alg-loga"
        total += integrate_real(
            lambda _tau: 1.0 / math.pi, a, b, spec, weight=name, wvar=(0, 0)
        )
        total += integrate_real(scaled_smooth, a, b, spec)
    return total


def dL_dxi(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    Derivative of L(phi; alpha, xi) in xi at fixed alpha.

    Raising xi by d xi adds (d xi / xi)(mu - nu_beta) to the measure, with nu_beta
    the arc equilibrium measure of the band, so dL/dxi = (L(phi) - L_beta(phi)) / xi.
    """
    return (
        log_transform_L(eq, phi, spec)
        - unconstrained_arc_log_transform(eq.beta, phi, spec)
    ) / eq.xi


def beta_tilde(b: Fraction | float, xi_tilde: float) -> float:
    """Band edge in the sample coordinate, beta * b / (2 pi)."""
    bf = float(b)
    return band_edge(math.pi / bf, bf * xi_tilde) * bf / (2.0 * math.pi)


def tilde_wrappers(
    b: Fraction | float,
    xi_tilde: float,
    x: float,
    spec: QuadratureSpec | None = None,
) -> tuple[float, float]:
    """
    (beta_tilde, L_tilde(x)) with L_tilde(x) = L(2 pi x / b; pi / b, b xi_tilde).

    Raises:
        OutOfDomain: |x| > 1/2
    """
    if abs(x) > 0.5 + _EDGE_SLACK:
        raise OutOfDomain(f"sample coordinate x={x} outside [-1/2, 1/2]")
    bf = float(b)
    eq = equilibrium(math.pi / bf, bf * xi_tilde, spec)
    phi = max(-eq.alpha, min(eq.alpha, 2.0 * math.pi * x / bf))
    return eq.beta * bf / (2.0 * math.pi), log_transform_L(eq, phi, spec)


def density_table(
    eq: EquilibriumData, grid: Iterable[float], spec: QuadratureSpec | None = None
) -> pd.DataFrame:
    """Columns phi, rho, I, L for every angle of ``grid``."""
    rows = [
        {
            "phi": phi,
            "rho": density_rho(eq, phi),
            "I": band_mass_I(eq, phi, spec),
            "L": log_transform_L(eq, phi, spec),
        }
        for phi in grid
    ]
    return pd.DataFrame(rows, columns=["phi", "rho", "I", "L"])
