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

"""Exact-versus-asymptotic comparison tables and convergence-rate fits."""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pandas as pd

from arcopuc.asymptotics.regimes import (
    AsymEval,
    Regime,
    RegimeConfig,
    asym_eval,
    equilibrium_for,
)
from arcopuc.equilibrium.measure import EquilibriumData
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import (
    DegreeTooLarge,
    DomainError,
    EnvelopeExceeded,
    NOddRequired,
    OutsideDisc,
    OutsideRegime,
)
from arcopuc.highprec.double_word import ExtendedComplex, xr_log
from arcopuc.lattice.params import ExtensionParams, make_params
from arcopuc.opuc.szego import OpucSystem, horner, szego_system
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

NEAR_ZERO_SINE = 1e-6
COMPARE_COLUMNS = ["phi", "exact", "asym", "rel_error", "regime", "near_zero"]


def recursion_value(sys: OpucSystem, M: int, z: complex) -> tuple[complex, float]:
    """
    p_M(z) from the recursion coefficients as (unit phase, log|p_M(z)|).

    The phase is 0 when the value is exactly zero.
    """
    if not 0 <= M <= sys.degree_max:
        raise DegreeTooLarge(f"degree {M} outside 0..{sys.degree_max}")
    acc, shift = horner(sys.coeffs[M], ExtendedComplex.of(complex(z)))
    a2 = acc.abs2()
    if not a2:
        return 0j, -math.inf
    value = complex(acc)
    log_abs = float(xr_log(a2)) / 2.0 + shift * math.log(2.0)
    return value / abs(value), log_abs


def relative_error(asym: AsymEval, phase: complex, log_abs: float) -> float:
    """|p_asym / p_exact - 1| evaluated in log space."""
    if phase == 0:
        return math.inf
    if asym.bounded == 0:
        return 1.0
    exponent = min(asym.log_prefactor - log_abs, 700.0)
    ratio = asym.bounded * math.exp(exponent) / phase
    return abs(ratio - 1.0)


def fit_convergence_slope(
    Ms: Sequence[int], errors: Sequence[float]
) -> tuple[float, float]:
    """
    Least-squares line log(error) = slope * log(M) + log(C).

    Returns:
        (slope, C)

    Raises:
        DomainError: fewer than two points or a non-positive error
    """
    if len(Ms) != len(errors) or len(Ms) < 2:
        raise DomainError(f"need two or more matching points, got {len(Ms)}")
    if any(not e > 0.0 or not math.isfinite(e) for e in errors):
        raise DomainError(f"errors must be finite and positive, got {list(errors)}")
    slope, intercept = np.polyfit(np.log(np.asarray(Ms, dtype=float)), np.log(errors), 1)
    return float(slope), float(math.exp(intercept))


def _compare_row(
    sys: OpucSystem,
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    phi: float,
    config: RegimeConfig,
    spec: QuadratureSpec | None,
) -> dict[str, object]:
    z = cmath.exp(1j * phi)
    phase, log_abs = recursion_value(sys, M, z)
    exact = math.exp(log_abs) if log_abs < 709.0 else math.inf
    try:
        asym = asym_eval(eq, params, M, z, config, spec)
    except (OutsideRegime, OutsideDisc, EnvelopeExceeded) as e:
        LOG.warning(f"no asymptotic value at phi={phi:.12g}: {e}")
        return {
            "phi": phi,
            "exact": exact,
            "asym": math.nan,
            "rel_error": math.nan,
            "regime": "none",
            "near_zero": False,
        }
    asym_abs = math.exp(asym.log_abs) if asym.log_abs < 709.0 else math.inf
    near_zero = asym.regime in (Regime.SATURATED, Regime.HARD_EDGE) and (
        abs(math.sin(params.m * phi / 2.0)) < NEAR_ZERO_SINE
    )
    return {
        "phi": phi,
        "exact": exact,
        "asym": asym_abs,
        "rel_error": relative_error(asym, phase, log_abs),
        "regime": asym.regime.value,
        "near_zero": near_zero,
    }


def comparison_table(
    sys: OpucSystem,
    eq: EquilibriumData,
    params: ExtensionParams,
    M: int,
    angles: Iterable[float],
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Rows (phi, |p_M^rec|, |p_M^asym|, rel_error, regime, near_zero) on the unit circle.

    ``near_zero`` marks lattice angles in the saturated region, where p_M nearly
    vanishes and the relative error means nothing.
    """
    cfg = config or RegimeConfig()
    angles = list(angles)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(
                executor.map(
                    lambda phi: _compare_row(sys, eq, params, M, phi, cfg, spec), angles
                )
            )
    else:
        rows = [_compare_row(sys, eq, params, M, phi, cfg, spec) for phi in angles]
    return pd.DataFrame(rows, columns=COMPARE_COLUMNS)


def odd_sample_count(b: Fraction, target: float) -> int:
    """
    Smallest odd N >= target with N*b integral.

    Raises:
        NOddRequired: b has an even denominator, so no odd N works
    """
    b = Fraction(b)
    if b.denominator % 2 == 0:
        raise NOddRequired(f"N*b is never an integer for odd N when b={b}")
    N = max(1, math.ceil(target))
    while N % 2 == 0 or (b * N).denominator != 1:
        N += 1
    return N


def convergence_study(
    b: Fraction,
    xi_tilde: Fraction | float,
    degrees: Sequence[int],
    angles: Sequence[float],
    config: RegimeConfig | None = None,
    spec: QuadratureSpec | None = None,
) -> tuple[pd.DataFrame, float, float]:
    """
    Max relative error over ``angles`` for each degree at (nearly) fixed N/M.

    For each M the sample count is the smallest admissible odd N >= xi_tilde * M;
    lattice angles are skipped.

    Returns:
        (table with columns M, N, xi, max_rel_error; fitted slope; fitted C)
    """
    rows = []
    for M in degrees:
        N = odd_sample_count(Fraction(b), xi_tilde * M)
        params = make_params(b, M, N)
        eq = equilibrium_for(params, spec)
        sys = szego_system(params, M)
        table = comparison_table(sys, eq, params, M, angles, config, spec)
        usable = table[~table["near_zero"]]["rel_error"].dropna()
        worst = float(usable.max()) if len(usable) else math.nan
        LOG.info(f"M={M} N={N}: max relative error {worst:.3e}")
        rows.append({"M": M, "N": N, "xi": float(params.xi), "max_rel_error": worst})
    frame = pd.DataFrame(rows, columns=["M", "N", "xi", "max_rel_error"])
    slope, C = fit_convergence_slope(list(frame["M"]), list(frame["max_rel_error"]))
    return frame, slope, C
