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
The g-function of the equilibrium measure and its derivative.

Branch conventions:

* w(z) = (z - e^{-i beta}) / (z - e^{i beta}) maps the band arc onto the ray
  arg w = pi - beta; its argument is taken in (-pi - beta, pi - beta].
* sqrt(R(z)) = (z - e^{-i beta}) w^{-1/2}, which behaves like z at infinity and
  equals -1 at the origin.
* g(z) = log z + integral rho log(1 - e^{i theta}/z) outside the disc and
  i*pi + integral rho log(1 - z e^{-i theta}) inside, principal logarithms.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from arcopuc.equilibrium.measure import EquilibriumData, density_rho
from arcopuc.equilibrium.quadrature import QuadratureSpec, integrate_complex
from arcopuc.errors import OnCut

_CUT_TOL = 1e-12
_ORIGIN = 1e-7


def _on_support(eq: EquilibriumData, z: complex) -> bool:
    return abs(abs(z) - 1.0) < _CUT_TOL and abs(cmath.phase(z)) <= eq.alpha + _CUT_TOL


def band_map_arg(beta: float, z: complex) -> tuple[float, float]:
    """
    (log|w|, arg w) for w(z) = (z - e^{-i beta}) / (z - e^{i beta}).

    The argument lives in (-pi - beta, pi - beta].
    """
    w = (z - cmath.exp(-1j * beta)) / (z - cmath.exp(1j * beta))
    arg = cmath.phase(w)
    if arg > math.pi - beta:
        arg -= 2.0 * math.pi
    return math.log(abs(w)), arg


def w_power(beta: float, z: complex, power: float) -> complex:
    """w(z)**power on the branch of ``band_map_arg``."""
    log_abs, arg = band_map_arg(beta, z)
    return cmath.exp(power * complex(log_abs, arg))


def sqrt_R(eq: EquilibriumData, z: complex) -> complex:
    """
    sqrt((z - e^{i beta})(z - e^{-i beta})) with the cut on the band arc.

    Raises:
        OnCut: z on the band arc
    """
    if abs(abs(z) - 1.0) < _CUT_TOL and abs(cmath.phase(z)) <= eq.beta + _CUT_TOL:
        raise OnCut(f"z={z} lies on the band arc")
    return (z - cmath.exp(-1j * eq.beta)) * w_power(eq.beta, z, -0.5)


def resolvent(
    eq: EquilibriumData, z: complex, spec: QuadratureSpec | None = None
) -> complex:
    """
    omega(z) = integral of rho(theta) / (z - e^{i theta}) over the arc.

    Raises:
        OnCut: z on the support of the measure
    """
    if _on_support(eq, z):
        raise OnCut(f"z={z} lies on the support of the measure")
    points = [-eq.beta, eq.beta]
    if abs(cmath.phase(z)) < eq.alpha:
        points.append(cmath.phase(z))
    return integrate_complex(
        lambda th: density_rho(eq, th) / (z - cmath.exp(1j * th)),
        -eq.alpha,
        eq.alpha,
        spec,
        points=points,
    )


def g_prime(eq: EquilibriumData, z: complex) -> complex:
    """
    g'(z) = 1/(2z) + xi/(pi z) arctan((z + 1) t / sqrt(R(z))).

    The principal complex arctan places its cuts exactly on the saturated arcs,
    so the expression is analytic off the support. Near the origin the
    removable singularity is bridged by the resolvent.

    Raises:
        OnCut: z on the support of the measure
    """
    if _on_support(eq, z):
        raise OnCut(f"z={z} lies on the support of the measure")
    if abs(z) < _ORIGIN:
        return resolvent(eq, z)
    u = (z + 1.0) * eq.t / sqrt_R(eq, z)
    return 1.0 / (2.0 * z) + eq.xi / (math.pi * z) * complex(np.arctan(u))


def g_function(
    eq: EquilibriumData,
    z: complex,
    spec: QuadratureSpec | None = None,
    upper_side: bool = False,
) -> complex:
    """
    g(z) = integral of log(z - e^{i theta}) rho(theta) by direct quadrature.

    With ``upper_side`` a point of (-inf, -1] gets the boundary value from above
    instead of an error; exp(M g) is single valued there for integer M.

    Raises:
        OnCut: z on (-inf, -1] or on the support
    """
    z = complex(z)
    if _on_support(eq, z):
        raise OnCut(f"z={z} lies on the support of the measure")
    if not upper_side and abs(z.imag) < _CUT_TOL and z.real <= -1.0 + _CUT_TOL:
        raise OnCut(f"z={z} lies on the cut (-inf, -1]")
    if abs(z.imag) < _CUT_TOL and z.real < 0.0:
        z = complex(z.real, 0.0)
    points = [-eq.beta, eq.beta]
    if abs(cmath.phase(z)) < eq.alpha:
        points.append(cmath.phase(z))

    if abs(z) >= 1.0:
        body = integrate_complex(
            lambda th: density_rho(eq, th) * cmath.log(1.0 - cmath.exp(1j * th) / z),
            -eq.alpha,
            eq.alpha,
            spec,
            points=points,
        )
        return cmath.log(z) + body
    body = integrate_complex(
        lambda th: density_rho(eq, th) * cmath.log(1.0 - z * cmath.exp(-1j * th)),
        -eq.alpha,
        eq.alpha,
        spec,
        points=points,
    )
    return 1j * math.pi + body
