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
Special functions used by the asymptotic formulas: Airy functions, the hard-edge
Gamma factor, J and the quarter-power gamma(z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy import special

from arcopuc.equilibrium.gfunction import w_power
from arcopuc.errors import DomainError, EnvelopeExceeded, OnCut
from arcopuc.lattice.params import ExtensionParams

AIRY_ENVELOPE = 30.0
_CUT_TOL = 1e-12


@dataclass(frozen=True)
class SpecialFnTable:
    """Stateless handle on Ai, Bi, Ai', Bi' and log-Gamma."""

    envelope: float = AIRY_ENVELOPE

    def airy(self, x: complex) -> tuple[complex, complex, complex, complex]:
        """
        (Ai, Bi, Ai', Bi') at x.

        Raises:
            EnvelopeExceeded: |x| > ``envelope``
        """
        if abs(x) > self.envelope:
            raise EnvelopeExceeded(
                f"Airy argument {x} outside the envelope |x| <= {self.envelope}"
            )
        arg = complex(x) if isinstance(x, complex) and x.imag != 0.0 else float(x.real)
        ai, aip, bi, bip = special.airy(arg)
        return complex(ai), complex(bi), complex(aip), complex(bip)

    def wronskian(self, x: complex) -> complex:
        """Ai Bi' - Ai' Bi, identically 1/pi."""
        ai, bi, aip, bip = self.airy(x)
        return ai * bip - aip * bi

    @staticmethod
    def log_gamma(x: float) -> tuple[float, float]:
        """(log|Gamma(x)|, sign of Gamma(x)) for real x."""
        return float(special.gammaln(x)), float(special.gammasgn(x))


_TABLE = SpecialFnTable()


def airy(x: complex) -> tuple[complex, complex, complex, complex]:
    """(Ai, Bi, Ai', Bi') through the default ``SpecialFnTable``."""
    return _TABLE.airy(complex(x))


def J_fn(beta: float, theta: float) -> float:
    """
    J(theta) = (cos theta - cos beta) / (1 - cos(beta - theta)).

    Written as sin((beta + theta)/2) / sin((beta - theta)/2), so J(0) = 1,
    J(theta) J(-theta) = 1 and J is positive on the band, negative past it. The
    pole at theta = beta is returned as inf.
    """
    if beta == math.pi:
        return 1.0
    denom = math.sin((beta - theta) / 2.0)
    if denom == 0.0:
        return math.inf
    return math.sin((beta + theta) / 2.0) / denom


def gamma_fn(beta: float, z: complex) -> complex:
    """
    gamma(z) = ((z - e^{-i beta}) / (z - e^{i beta}))^{1/4}.

    The cut is the band arc and gamma(inf) = 1; at the origin the value is
    e^{-i beta/2}.

    Raises:
        OnCut: z on the band arc
    """
    z = complex(z)
    if abs(abs(z) - 1.0) < _CUT_TOL and abs(cmath.phase(z)) <= beta + _CUT_TOL:
        raise OnCut(f"z={z} lies on the band arc |arg z| <= {beta}")
    return w_power(beta, z, 0.25)


def edge_u(params: ExtensionParams, phi: float, sign: int) -> float:
    """Node spacings between phi and the arc end: m (alpha - sign phi) / (2 pi)."""
    if sign not in (1, -1):
        raise DomainError(f"edge sign must be +1 or -1, got {sign}")
    return params.m * (params.alpha - sign * phi) / (2.0 * math.pi)


def dtilde(params: ExtensionParams, phi: float, sign: int) -> float:
    """
    Hard-edge factor D~_{sign alpha}(phi) in log space:

        log D~ = log(2 pi)/2 + (u - 1) log u - log Gamma(u - 1/2) - u.

    Raises:
        DomainError: u <= 0
    """
    u = edge_u(params, phi, sign)
    if u <= 0.0:
        raise DomainError(f"hard-edge variable u={u} must be positive")
    if u == 0.5:
        return 0.0
    log_abs_gamma, sgn = SpecialFnTable.log_gamma(u - 0.5)
    log_d = 0.5 * math.log(2.0 * math.pi) + (u - 1.0) * math.log(u) - log_abs_gamma - u
    return sgn * math.exp(log_d)


def dtilde_direct(params: ExtensionParams, phi: float, sign: int) -> float:
    """D~ straight from its definition; agrees with ``dtilde`` for moderate u."""
    u = edge_u(params, phi, sign)
    if u <= 0.0:
        raise DomainError(f"hard-edge variable u={u} must be positive")
    denom = float(special.gamma(u - 0.5)) * math.exp(u)
    return math.sqrt(2.0 * math.pi) * u ** (u - 1.0) / denom


def edge_factor(u: float) -> float:
    """
    2 cos(pi u) / D~ written without the Gamma pole:

        -sqrt(2 pi) e^u u^{1-u} / Gamma(3/2 - u).

    Finite at the outermost node (u = 1/2), zero at u = 0 and at u = 3/2, 5/2, ...
    """
    if u < 0.0:
        raise DomainError(f"hard-edge variable u={u} must be non-negative")
    return -math.sqrt(2.0 * math.pi) * math.exp(u) * u ** (1.0 - u) * float(
        special.rgamma(1.5 - u)
    )
