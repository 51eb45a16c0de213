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

"""Adaptive QUADPACK integration with convergence checks and retries."""

from __future__ import annotations

import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace

from scipy import integrate
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from arcopuc.errors import QuadratureFailure
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Tolerances and limits for every adaptive integral in the library.

    ``singularity_splits`` are extra break points applied by ``integrate_real``
    on top of the ones the caller passes.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_subdivisions: int = 200
    retry_attempts: int = 3
    singularity_splits: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1 or self.retry_attempts < 1:
            raise ValueError("subdivision limit and attempts must be positive")

    @classmethod
    def default(cls) -> QuadratureSpec:
        return cls()

    def with_tolerance(self, tol: float) -> QuadratureSpec:
        return replace(self, abs_tol=tol, rel_tol=tol)


def _quad_once(
    func: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
    limit: int,
    points: Sequence[float] | None,
    weight: str | None,
    wvar: object,
) -> float:
    kwargs: dict = {"epsabs": spec.abs_tol, "epsrel": spec.rel_tol, "limit": limit}
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
    elif points:
        kwargs["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(func, a, b, full_output=1, **kwargs)
    value, abserr = res[0], res[1]
    # a fourth element is the QUADPACK message, present only when ier > 0
    tolerance = max(spec.abs_tol, spec.rel_tol * abs(value))
    if len(res) > 3 and abserr > 10 * tolerance:
        raise QuadratureFailure(
            f"integral over [{a}, {b}] not converged with limit={limit}: {res[3]}",
            abs_error=abserr,
        )
    LOG.debug(f"quad [{a:.6g}, {b:.6g}] value={value:.6e} err={abserr:.1e}")
    return value


def integrate_real(
    func: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    points: Sequence[float] = (),
    weight: str | None = None,
    wvar: object = None,
) -> float:
    """
    Integrate ``func`` over [a, b], retrying with a doubled subdivision limit.

    Args:
        func: Real integrand
        a: Lower limit
        b: Upper limit
        spec: Tolerances; ``QuadratureSpec.default()`` when omitted
        points: Interior break points (ignored when a weight is given)
        weight: QUADPACK weight name such as "alg-loga" or "alg"
        wvar: Parameters of the weight

    Returns:
        The integral value

    Raises:
        QuadratureFailure: still not converged after the configured attempts
    """
    spec = spec or QuadratureSpec.default()
    if a == b:
        return 0.0
    splits = sorted(
        {p for p in (*points, *spec.singularity_splits) if min(a, b) < p < max(a, b)}
    )
    for attempt in Retrying(
        retry=retry_if_exception_type(QuadratureFailure),
        stop=stop_after_attempt(spec.retry_attempts),
        reraise=True,
        before=Logger.log_before,
    ):
        with attempt:
            limit = spec.max_subdivisions * 2 ** (attempt.retry_state.attempt_number - 1)
            value = _quad_once(func, a, b, spec, limit, splits, weight, wvar)
    return value


def integrate_complex(
    func: Callable[[float], complex],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    points: Sequence[float] = (),
    weight: str | None = None,
    wvar: object = None,
) -> complex:
    """Real and imaginary parts integrated separately with ``integrate_real``."""
    re = integrate_real(
        lambda t: func(t).real, a, b, spec, points=points, weight=weight, wvar=wvar
    )
    im = integrate_real(
        lambda t: func(t).imag, a, b, spec, points=points, weight=weight, wvar=wvar
    )
    return complex(re, im)

