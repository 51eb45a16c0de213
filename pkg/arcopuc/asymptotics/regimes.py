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
Large-degree formulas for the monic polynomials p_M of the arc lattice.

Every evaluator returns an ``AsymEval`` whose exponential growth is kept apart
in ``log_prefactor``; ``bounded`` carries the O(1) part and the phase. The
constant phases e^{i m alpha / 2} and e^{i M pi / 2} are exact powers of i
because m alpha = pi N.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

from arcopuc.asymptotics.psi import (
    edge_variable,
    psi_on_arc,
    psi_series,
    turning_factor,
)
from arcopuc.asymptotics.special import (
    J_fn,
    airy,
    edge_factor,
    edge_u,
    gamma_fn,
)
from arcopuc.equilibrium.gfunction import g_function
from arcopuc.equilibrium.measure import (
    EquilibriumData,
    band_mass_I,
    equilibrium,
    log_transform_L,
)
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import DomainError, OutsideRegime
from arcopuc.lattice.params import ExtensionParams
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

EXTRAPOLATION_U = 0.1
_ARC_TOL = 1e-14
_EDGE_SLACK = 1e-12
_LOG_MAX = 709.0


class Regime(Enum):
    BAND = "band"
    SATURATED = "saturated"
    HARD_EDGE = "hard_edge"
    TURNING = "turning"
    OUTER = "outer"


class ErrorOrder(Enum):
    ONE_OVER_M = "1/M"
    EXP_SMALL = "exp(-cM)"


@dataclass(frozen=True)
class RegimeConfig:
    """
    Regime selection constants, all in the Airy scale M^{2/3} |psi|.

    Attributes:
        band_margin: Band and saturated formulas need |M^{2/3} psi| at least this
        turning_radius: The Airy formula is preferred while |M^{2/3} psi| is below this
        edge_nodes: Node spacings from an arc end that count as the hard edge
    """

    band_margin: float = 3.0
    turning_radius: float = 5.0
    edge_nodes: int = 10

    def __post_init__(self) -> None:
        if self.band_margin <= 0.0:
            raise DomainError(f"band_margin must be positive, got {self.band_margin}")
        if self.turning_radius < self.band_margin:
            raise DomainError(
                f"turning_radius {self.turning_radius} must not be below "
                f"band_margin {self.band_margin}"
            )
        if self.edge_nodes < 1:
            raise DomainError(f"edge_nodes must be at least 1, got {self.edge_nodes}")


@dataclass(frozen=True)
class AsymEval:
    """
    One asymptotic value p_M^{asym}(z) = exp(log_prefactor) * bounded.

    ``extrapolated`` marks hard-edge values within a tenth of a node spacing of
    the arc end, where the formula is used beyond its derivation.
    """

    regime: Regime
    value: complex
    log_prefactor: float
    bounded: complex
    error_order: ErrorOrder
    extrapolated: bool = False

    @property
    def log_abs(self) -> float:
        if self.bounded == 0:
            return -math.inf
        return self.log_prefactor + math.log(abs(self.bounded))

    def conjugate(self) -> AsymEval:
        return replace(
            self, value=self.value.conjugate(), bounded=self.bounded.conjugate()
        )


def _assemble(
    regime: Regime,
    log_prefactor: float,
    bounded: complex,
    order: ErrorOrder,
    extrapolated: bool = False,
) -> AsymEval:
    if log_prefactor < _LOG_MAX:
        value = bounded * math.exp(log_prefactor)
    else:
        LOG.warning(f"{regime.value} value overflows: log prefactor {log_prefactor:.6g}")
        value = complex(math.inf, 0.0)
    return AsymEval(
        regime=regime,
        value=complex(value),
        log_prefactor=log_prefactor,
        bounded=complex(bounded),
        error_order=order,
        extrapolated=extrapolated,
    )


def _ipow(k: int) -> complex:
    return (1.0 + 0j, 1j, -1.0 + 0j, -1j)[k % 4]


def _airy_scale(M: int) -> float:
    return M ** (2.0 / 3.0)


def equilibrium_for(
    params: ExtensionParams, spec: QuadratureSpec | None = None
) -> EquilibriumData:
    """Equilibrium data with alpha = pi/b and xi = m/M taken from ``params``."""
    return equilibrium(params.alpha, float(params.xi), spec)


def band_asym(
    eq: EquilibriumData,
    M: int,
    phi: float,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """
    p_M(e^{i phi}) on the band:

        e^{M(l + i phi + i pi)/2} [e^{-i beta/4} J^{1/4} cos(M pi I - pi/4)
                                    - e^{i beta/4} J^{-1/4} sin(M pi I - pi/4)]

    Raises:
        OutsideRegime: |phi| >= beta or too close to the turning point
    """
    cfg = config or RegimeConfig()
    if abs(phi) >= eq.beta:
        raise OutsideRegime(f"angle {phi} is not inside the band (-{eq.beta}, {eq.beta})")
    zeta = _airy_scale(M) * psi_on_arc(eq, phi, spec)
    if -zeta < cfg.band_margin:
        raise OutsideRegime(
            f"angle {phi} is within the turning zone: M^(2/3) psi = {zeta:.3g}"
        )
    q = J_fn(eq.beta, phi) ** 0.25
    y = M * math.pi * band_mass_I(eq, phi, spec) - math.pi / 4.0
    bracket = cmath.exp(-0.25j * eq.beta) * q * math.cos(y) - cmath.exp(
        0.25j * eq.beta
    ) / q * math.sin(y)
    bounded = _ipow(M) * cmath.exp(0.5j * M * phi) * bracket
    return _assemble(Regime.BAND, 0.5 * M * eq.ell, bounded, ErrorOrder.ONE_OVER_M)


def _saturated_parts(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    phi: float,
    sign: int,
    cfg: RegimeConfig,
    spec: QuadratureSpec | None,
) -> tuple[float, complex, float]:
    # (u, common factor, log prefactor) shared by the saturated and hard-edge formulas
    if sign not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {sign}")
    if not eq.beta < phi <= eq.alpha + _EDGE_SLACK:
        raise OutsideRegime(
            f"angle {phi} is not in the saturated region ({eq.beta}, {eq.alpha}]"
        )
    phi = min(phi, eq.alpha)
    zeta = _airy_scale(M) * psi_on_arc(eq, phi, spec)
    if zeta < cfg.band_margin:
        raise OutsideRegime(
            f"angle {phi} is within the turning zone: M^(2/3) psi = {zeta:.3g}"
        )
    theta = sign * phi
    q = (-J_fn(eq.beta, theta)) ** 0.25
    bracket = cmath.exp(-0.25j * eq.beta) * q + cmath.exp(0.25j * eq.beta) / q
    common = cmath.exp(0.5j * M * theta) * _ipow(sign * M) * bracket / 2.0
    u = max(edge_u(params, theta, sign), 0.0)
    return u, common, M * log_transform_L(eq, phi, spec)


def saturated_asym(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    phi: float,
    sign: int,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """
    p_M(e^{sign i phi}) on the saturated region beta < phi < alpha.

    e^{-i theta (m - M)/2} (1 - z^m) with theta = sign phi is folded into
    -2i sin(m theta / 2) times the constant phase, so the value vanishes on the
    lattice up to rounding.

    Raises:
        OutsideRegime: phi outside the region, in the turning zone or within
            one node spacing of the arc end
    """
    cfg = config or RegimeConfig()
    u, common, log_prefactor = _saturated_parts(eq, params, M, phi, sign, cfg, spec)
    if u < 1.0:
        raise OutsideRegime(
            f"angle {phi} is within one node spacing of the arc end; use edge_asym"
        )
    theta = sign * phi
    lattice = -2j * math.sin(params.m * theta / 2.0) * _ipow(sign * params.N)
    return _assemble(
        Regime.SATURATED, log_prefactor, common * lattice, ErrorOrder.EXP_SMALL
    )


def edge_asym(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    phi: float,
    sign: int,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """
    Hard-edge form of ``saturated_asym``: (1 - z^m) is divided by D~.

    The quotient is taken through the reflection formula (``edge_factor``), so
    the outermost node and the arc end itself are finite.

    Raises:
        OutsideRegime: phi outside the saturated region, in the turning zone or
            more than 2 * edge_nodes node spacings from the arc end
    """
    cfg = config or RegimeConfig()
    u, common, log_prefactor = _saturated_parts(eq, params, M, phi, sign, cfg, spec)
    if u > 2 * cfg.edge_nodes:
        raise OutsideRegime(f"angle {phi} is {u:.3g} node spacings from the arc end")
    # the phase i^{-sign N} of the reflection form cancels the constant i^{sign N}
    lattice = edge_factor(u)
    return _assemble(
        Regime.HARD_EDGE,
        log_prefactor,
        common * lattice,
        ErrorOrder.EXP_SMALL,
        extrapolated=u < EXTRAPOLATION_U,
    )


def turning_asym(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    z: complex,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """
    Airy form of p_M(z) about the turning points e^{+-i beta}.

    Points below the real axis use p_M(conj z) = conj p_M(z).

    Raises:
        OutsideDisc: z off the arc and outside the continuation disc
        EnvelopeExceeded: |M^{2/3} psi| beyond the Airy envelope
    """
    z = complex(z)
    if z.imag < 0.0:
        return turning_asym(eq, params, M, z.conjugate(), spec).conjugate()
    psi, root = turning_factor(eq, z, spec)
    ai, bi, aip, bip = airy(_airy_scale(M) * psi)
    scale = M ** (1.0 / 6.0) * root
    log_z = cmath.log(z)
    half = cmath.exp(0.5 * params.m * log_z)
    even = (half + 1.0 / half) / 2.0
    odd = (half - 1.0 / half) / 2j
    bracket = scale * (ai * even + bi * odd) + (aip * even + bip * odd) / scale
    bounded = (
        -1j
        * math.sqrt(math.pi)
        * _ipow(params.N + M)
        * cmath.exp(0.5j * M * log_z.imag)
        * bracket
    )
    log_prefactor = 0.5 * M * (eq.ell + log_z.real)
    return _assemble(Regime.TURNING, log_prefactor, bounded, ErrorOrder.ONE_OVER_M)


def arc_distance(alpha: float, z: complex) -> float:
    """Euclidean distance from z to the arc |arg| <= alpha of the unit circle."""
    z = complex(z)
    if z == 0:
        return 1.0
    if abs(cmath.phase(z)) <= alpha:
        return abs(abs(z) - 1.0)
    return min(abs(z - cmath.exp(1j * alpha)), abs(z - cmath.exp(-1j * alpha)))


def outer_asym(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    z: complex,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """
    p_M(z) = e^{M g(z)} (gamma(z) + 1/gamma(z)) / 2 away from the arc.

    Raises:
        OutsideRegime: z closer than band_margin * M^{-2/3} to the arc
    """
    cfg = config or RegimeConfig()
    z = complex(z)
    margin = cfg.band_margin / _airy_scale(M)
    if arc_distance(eq.alpha, z) < margin:
        raise OutsideRegime(f"z={z} is within {margin:.3g} of the arc")
    g = g_function(eq, z, spec, upper_side=True)
    gam = gamma_fn(eq.beta, z)
    bounded = cmath.exp(1j * M * g.imag) * (gam + 1.0 / gam) / 2.0
    return _assemble(Regime.OUTER, M * g.real, bounded, ErrorOrder.ONE_OVER_M)


def szego_h_asym(eq: EquilibriumData, M: int) -> tuple[float, float]:
    """
    Leading behaviour of the Szego parameter and the norm:

        rho_M ~ (-1)^{M+1} cos(beta/2),   h_M ~ e^{M l} e^{l} / sin(beta/2).

    The sign follows from rho_M = -p_M(0), g(0) = i pi and gamma(0) = e^{-i beta/2}.
    """
    rho = (-1) ** (M + 1) * math.cos(eq.beta / 2.0)
    h = math.exp((M + 1) * eq.ell) / math.sin(eq.beta / 2.0)
    return rho, h


def classify(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    z: complex,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> Regime:
    """
    Pick the formula for z.

    On the arc: Turning while |M^{2/3} psi| <= turning_radius, otherwise Band
    inside beta, HardEdge within edge_nodes node spacings of the end and
    Saturated elsewhere. Off the arc: Turning inside the continuation disc,
    Outer at distance band_margin * M^{-2/3} or more.

    Raises:
        OutsideRegime: z close to the arc but outside every disc
    """
    cfg = config or RegimeConfig()
    z = complex(z)
    scale = _airy_scale(M)
    has_turning = eq.beta < eq.alpha
    theta = cmath.phase(z)

    if abs(abs(z) - 1.0) < _ARC_TOL and abs(theta) <= eq.alpha + _EDGE_SLACK:
        phi = min(abs(theta), eq.alpha)
        if has_turning and abs(scale * psi_on_arc(eq, phi, spec)) <= cfg.turning_radius:
            return Regime.TURNING
        if phi < eq.beta:
            return Regime.BAND
        if edge_u(params, phi, 1) <= cfg.edge_nodes:
            return Regime.HARD_EDGE
        return Regime.SATURATED

    if has_turning:
        upper = z if z.imag >= 0.0 else z.conjugate()
        s = edge_variable(eq.beta, upper)
        series = psi_series(eq, spec)
        if abs(s) <= series.radius:
            zeta = scale * s * series.q_at(s)
            if abs(zeta) <= cfg.turning_radius:
                return Regime.TURNING
    if arc_distance(eq.alpha, z) >= cfg.band_margin / scale:
        return Regime.OUTER
    raise OutsideRegime(f"z={z} is near the arc but in no regime's disc")


def asym_eval(
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    z: complex,
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> AsymEval:
    """Classify z and evaluate the matching formula."""
    cfg = config or RegimeConfig()
    z = complex(z)
    regime = classify(eq, params, M, z, cfg, spec)
    if regime is Regime.TURNING:
        return turning_asym(eq, params, M, z, spec)
    if regime is Regime.OUTER:
        return outer_asym(eq, params, M, z, cfg, spec)
    theta = cmath.phase(z)
    if regime is Regime.BAND:
        return band_asym(eq, M, theta, cfg, spec)
    sign = 1 if theta >= 0.0 else -1
    phi = min(abs(theta), eq.alpha)
    if regime is Regime.HARD_EDGE:
        return edge_asym(eq, params, M, phi, sign, cfg, spec)
    return saturated_asym(eq, params, M, phi, sign, cfg, spec)

