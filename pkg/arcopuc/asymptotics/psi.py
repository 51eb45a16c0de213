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
The conformal variable psi near the turning point e^{i beta}.

On the arc z = e^{i phi}

    psi = -[(3 pi / 2) * integral_phi^beta (xi/(2 pi) - rho)]^{2/3}      phi < beta
    psi = +[(3 pi / 2) * (xi/pi^2) * integral_beta^phi artanh(...)]^{2/3}   phi > beta

With the edge variable s = -i log(z e^{-i beta}) one has psi = s Q(s) for a Q
that is analytic and positive at s = 0. Off the arc psi is continued through a
Chebyshev fit of Q on a real interval around s = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Chebyshev

from arcopuc.equilibrium.measure import EquilibriumData, artanh_integral, band_deficit
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import OutOfDomain, OutsideDisc
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

PSI_DEGREE = 12
PSI_SAMPLES = 24
PSI_MAX_HALF_WIDTH = 0.15
_ARC_TOL = 1e-14
_EDGE_SLACK = 1e-12


def psi_on_arc(
    eq: EquilibriumData, phi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    psi(e^{i phi}) from its defining integral, for 0 <= |phi| <= alpha.

    Raises:
        OutOfDomain: |phi| > alpha
    """
    phi = abs(phi)
    if phi > eq.alpha + _EDGE_SLACK:
        raise OutOfDomain(f"angle {phi} outside [0, alpha] with alpha={eq.alpha}")
    if phi < eq.beta:
        deficit = max(band_deficit(eq, phi, spec), 0.0)
        return -((1.5 * math.pi * deficit) ** (2.0 / 3.0))
    growth = eq.xi / math.pi**2 * artanh_integral(eq, phi, spec)
    return (1.5 * math.pi * max(growth, 0.0)) ** (2.0 / 3.0)


def edge_slope(eq: EquilibriumData) -> float:
    """
    Q(0) = d psi / d phi at phi = beta:

        (pi G)^{2/3},  G = xi sqrt(sin beta) / (pi^2 sqrt(2) t cos(beta/2)).
    """
    G = (
        eq.xi
        * math.sqrt(math.sin(eq.beta))
        / (math.pi**2 * math.sqrt(2.0) * eq.t * math.cos(eq.beta / 2.0))
    )
    return (math.pi * G) ** (2.0 / 3.0)


def edge_variable(beta: float, z: complex) -> complex:
    """s = -i log(z e^{-i beta}); real on the arc with s = phi - beta."""
    return -1j * cmath.log(complex(z) * cmath.exp(-1j * beta))


@dataclass(frozen=True)
class PsiSeries:
    """Chebyshev representation of Q(s) = psi / s on [-half_width, half_width]."""

    beta: float
    half_width: float
    q: Chebyshev

    @property
    def radius(self) -> float:
        """Largest |s| at which the continuation is trusted."""
        return self.half_width / 2.0

    def q_at(self, s: complex) -> complex:
        if abs(s) > self.radius:
            raise OutsideDisc(
                f"edge variable |s|={abs(s):.3e} beyond the continuation radius "
                f"{self.radius:.3e}"
            )
        return complex(self.q(s))

    def __call__(self, z: complex) -> complex:
        s = edge_variable(self.beta, z)
        return s * self.q_at(s)


@lru_cache(maxsize=32)
def psi_series(eq: EquilibriumData, spec: QuadratureSpec | None = None) -> PsiSeries:
    """
    Fit Q on Chebyshev points of the arc around beta.

    Raises:
        OutsideDisc: the measure has no saturated region, so there is no turning point
    """
    half_width = min(PSI_MAX_HALF_WIDTH, eq.beta / 4.0, (eq.alpha - eq.beta) / 4.0)
    if half_width <= 0.0:
        raise OutsideDisc(f"no turning point: beta={eq.beta} reaches alpha={eq.alpha}")
    k = np.arange(PSI_SAMPLES)
    nodes = half_width * np.cos(np.pi * (k + 0.5) / PSI_SAMPLES)
    values = np.array([psi_on_arc(eq, eq.beta + s, spec) / s for s in nodes])
    q = Chebyshev.fit(nodes, values, PSI_DEGREE, domain=[-half_width, half_width])
    LOG.debug(
        f"psi series at beta={eq.beta:.12g}: half width {half_width:.3e}, "
        f"Q(0)={float(q(0.0)):.12g}"
    )
    return PsiSeries(beta=eq.beta, half_width=half_width, q=q)


def _on_arc(eq: EquilibriumData, z: complex) -> bool:
    if abs(abs(z) - 1.0) >= _ARC_TOL:
        return False
    return 0.0 <= cmath.phase(z) <= eq.alpha + _EDGE_SLACK


def _q_value(
    eq: EquilibriumData, z: complex, s: complex, spec: QuadratureSpec | None
) -> complex:
    if eq.beta < eq.alpha:
        series = psi_series(eq, spec)
        if abs(s) <= series.radius:
            return series.q_at(s)
    if _on_arc(eq, z) and s.real != 0.0:
        return complex(psi_on_arc(eq, cmath.phase(z), spec) / s.real)
    raise OutsideDisc(f"z={z} is off the arc and outside the disc about e^(i beta)")


def psi_fn(
    eq: EquilibriumData, z: complex, spec: QuadratureSpec | None = None
) -> complex:
    """
    psi(z) for z in the upper half plane near e^{i beta}.

    Inside the continuation disc the fitted series is used; on the arc itself
    the defining integral is used at any angle.

    Raises:
        OutsideDisc: z off the arc and outside the disc
    """
    z = complex(z)
    s = edge_variable(eq.beta, z)
    return s * _q_value(eq, z, s, spec)


def _log_ratio(d: complex) -> complex:
    # log(1 + d) / d
    if abs(d) < 1e-4:
        return 1.0 - d / 2.0 + d * d / 3.0 - d * d * d / 4.0
    return cmath.log(1.0 + d) / d


def turning_factor(
    eq: EquilibriumData, z: complex, spec: QuadratureSpec | None = None
) -> tuple[complex, complex]:
    """
    (psi(z), (psi(z) w(z))^{1/4}) with w = (z - e^{-i beta}) / (z - e^{i beta}).

    psi^{1/4} gamma is analytic through the turning point and equals the
    principal fourth root of psi w, which stays finite at z = e^{i beta}.

    Raises:
        OutsideDisc: z off the arc and outside the disc
    """
    z = complex(z)
    s = edge_variable(eq.beta, z)
    q = _q_value(eq, z, s, spec)
    v = z * cmath.exp(-1j * eq.beta)
    # s / (z - e^{i beta}) = -i e^{-i beta} log(v) / (v - 1)
    s_over_pole = -1j * cmath.exp(-1j * eq.beta) * _log_ratio(v - 1.0)
    psi_w = q * s_over_pole * (z - cmath.exp(-1j * eq.beta))
    return s * q, psi_w**0.25
