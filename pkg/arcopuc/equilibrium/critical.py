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

from __future__ import annotations

import math

from scipy import optimize

from arcopuc.equilibrium.measure import (
    band_threshold,
    equilibrium,
    log_potential,
    log_transform_L,
)
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import BracketFailure, NoRoot, OutOfDomain
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

XI_UPPER = 50.0


def edge_log_transform(
    alpha: float, xi: float, spec: QuadratureSpec | None = None
) -> float:
    """
    L(alpha; alpha, xi).

    At the saturation threshold xi = pi/alpha the measure is uniform with density
    1/(2 alpha); above it the band formula applies.
    """
    threshold = band_threshold(alpha)
    if xi <= threshold:
        density = 1.0 / (2.0 * alpha)
        return log_potential(lambda _th: density, (-alpha, alpha), alpha, spec)
    return log_transform_L(equilibrium(alpha, xi, spec), alpha, spec)


def conjectured_xi(alpha: float) -> float:
    """Closed-form guess pi / (pi - alpha) for the critical ratio."""
    return math.pi / (math.pi - alpha)


def xi_critical(
    alpha: float, spec: QuadratureSpec | None = None, tol: float = 1e-8
) -> float:
    """
    Root of L(alpha; alpha, xi) = 0 in xi.

    L(alpha; alpha, xi) decreases in xi, so the root is unique. The bracket
    starts at the saturation threshold pi/alpha and is widened from the closed
    form guess up to ``XI_UPPER``; Brent's method finishes inside it.

    Args:
        alpha: Arc half-angle in [pi/2, pi)
        spec: Quadrature tolerances
        tol: Absolute tolerance on the root

    Returns:
        The critical sampling ratio xi_alpha

    Raises:
        OutOfDomain: alpha >= pi or alpha <= 0
        NoRoot: L(alpha; alpha, xi) < 0 already at the threshold (alpha < pi/2)
        BracketFailure: still positive at ``XI_UPPER``
    """
    if not 0.0 < alpha < math.pi:
        raise OutOfDomain(f"arc half-angle must lie in (0, pi), got alpha={alpha}")

    lo = band_threshold(alpha)
    f_lo = edge_log_transform(alpha, lo, spec)
    LOG.debug(f"alpha={alpha}: L at threshold xi={lo:.12g} is {f_lo:.3e}")
    if abs(f_lo) <= tol:
        return lo
    if f_lo < 0.0:
        raise NoRoot(
            f"L(alpha; alpha, xi) < 0 for every admissible xi at alpha={alpha}; "
            "no critical ratio exists"
        )

    hi = max(lo * 1.5, min(XI_UPPER, conjectured_xi(alpha) * 1.25))
    f_hi = edge_log_transform(alpha, hi, spec)
    while f_hi > 0.0:
        if hi >= XI_UPPER:
            raise BracketFailure(
                f"L(alpha; alpha, xi) still positive at xi={XI_UPPER} for alpha={alpha}"
            )
        lo = hi
        hi = min(XI_UPPER, hi * 2.0)
        f_hi = edge_log_transform(alpha, hi, spec)

    try:
        root = optimize.brentq(
            lambda xi: edge_log_transform(alpha, xi, spec), lo, hi, xtol=tol, maxiter=200
        )
    except (RuntimeError, ValueError) as e:
        raise BracketFailure(f"root search on [{lo}, {hi}] failed", cause=e) from e
    LOG.debug(f"critical xi for alpha={alpha}: {root:.12g}")
    return float(root)
