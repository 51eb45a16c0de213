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
Monic orthogonal polynomials for the discrete measure on the lattice arc.

The polynomials are built by the Szego recursion

    p_{j+1}(z) = z p_j(z) - rho_{j+1} p_j^*(z),    p_j^*(z) = z^j p_j(1/z),

with rho_{j+1} fixed by <p_{j+1}, 1> = 0. Every inner product is a convolution of
real coefficients against the moment table, evaluated in double-word arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from arcopuc.errors import DegreeTooLarge, LostOrthogonality
from arcopuc.highprec.double_word import (
    LN2,
    ONE,
    ZERO,
    ExtendedComplex,
    ExtendedReal,
    xr_log,
    xr_sqrt,
)
from arcopuc.lattice.params import ExtensionParams
from arcopuc.opuc.moments import MomentTable, moments, node_points
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

ORTHOGONALITY_GUARD = 1.0 - 1e-14
GRAM_SCHMIDT_MAX_DEGREE = 20
JSON_SCHEMA = 1

_RESCALE_BITS = 500
_RESCALE_LIMIT = 2.0**_RESCALE_BITS


@dataclass(frozen=True)
class OpucSystem:
    """
    Monic polynomials p_0..p_{degree_max} with Szego parameters and norms.

    ``coeffs[j][i]`` is the coefficient of z^i in p_j, ``rho[j-1]`` is rho_j and
    ``h[j]`` is <p_j, p_j>.
    """

    b: Fraction
    N: int
    degree_max: int
    coeffs: tuple[tuple[ExtendedReal, ...], ...]
    rho: tuple[ExtendedReal, ...]
    h: tuple[ExtendedReal, ...]
    _node_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def m(self) -> int:
        return int(self.b * self.N)

    def rho_at(self, j: int) -> ExtendedReal:
        """rho_j for 1 <= j <= degree_max."""
        return self.rho[j - 1]

    def to_json(self) -> str:
        def words(v: ExtendedReal) -> list[str]:
            return list(v.to_hex())

        return json.dumps(
            {
                "schema": JSON_SCHEMA,
                "b": str(self.b),
                "N": self.N,
                "degree_max": self.degree_max,
                "coeffs": [[words(v) for v in row] for row in self.coeffs],
                "rho": [words(v) for v in self.rho],
                "h": [words(v) for v in self.h],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> OpucSystem:
        data = json.loads(text)
        if data.get("schema") != JSON_SCHEMA:
            raise ValueError(f"unsupported OpucSystem schema {data.get('schema')!r}")

        def parse(pair: list[str]) -> ExtendedReal:
            return ExtendedReal.from_hex((pair[0], pair[1]))

        return cls(
            b=Fraction(data["b"]),
            N=int(data["N"]),
            degree_max=int(data["degree_max"]),
            coeffs=tuple(tuple(parse(p) for p in row) for row in data["coeffs"]),
            rho=tuple(parse(p) for p in data["rho"]),
            h=tuple(parse(p) for p in data["h"]),
        )


def _inner(f: tuple[ExtendedReal, ...], g: tuple[ExtendedReal, ...], c: MomentTable):
    # <f, g> = sum_{a,b} f_a g_b c_{a-b} for real coefficient vectors
    total = ZERO
    for a, fa in enumerate(f):
        if not fa:
            continue
        acc = ZERO
        for b_, gb in enumerate(g):
            acc = acc + gb * c.at(a - b_)
        total = total + fa * acc
    return total


def _check_degree(params: ExtensionParams, M_max: int) -> None:
    if M_max >= params.N:
        raise DegreeTooLarge(
            f"orthogonal polynomials exist only below degree N={params.N}, "
            f"requested {M_max}"
        )
    if M_max < 0:
        raise DegreeTooLarge(f"degree must be non-negative, got {M_max}")


def szego_system(
    params: ExtensionParams,
    M_max: int,
    orthogonality_guard: float = ORTHOGONALITY_GUARD,
) -> OpucSystem:
    """
    Run the Szego recursion up to degree M_max.

    Args:
        params: Lattice parameters
        M_max: Highest degree, must stay below N
        orthogonality_guard: |rho_j| at or above this value means the working
            precision is exhausted

    Returns:
        OpucSystem with coefficients, Szego parameters and norms
        h_{j+1} = h_j (1 - rho_{j+1}) (1 + rho_{j+1}), h_0 = c_0

    Raises:
        DegreeTooLarge: M_max >= N
        LostOrthogonality: a Szego parameter left the open unit interval or a
            norm stopped being positive
    """
    _check_degree(params, M_max)
    c = moments(params, 2 * M_max + 2)
    p: tuple[ExtendedReal, ...] = (ONE,)
    coeffs = [p]
    rhos: list[ExtendedReal] = []
    norms = [c.at(0)]

    for j in range(M_max):
        num = ZERO
        den = ZERO
        for i in range(j + 1):
            num = num + p[i] * c.at(i + 1)
            den = den + p[j - i] * c.at(i)
        # den = <p_j, z^j> = h_j, evaluated independently of the norm product
        if not den > 0:
            LOG.error(f"non-positive norm h_{j} = {float(den):.17g}")
            raise LostOrthogonality(
                f"norm h_{j}={float(den):.17g} is not positive", degree=j
            )
        rho = num / den
        if not abs(float(rho)) < orthogonality_guard:
            LOG.error(f"|rho_{j + 1}| = {abs(float(rho)):.17g} at degree {j + 1}")
            raise LostOrthogonality(
                f"Szego parameter rho_{j + 1}={float(rho):.17g} is not inside (-1, 1)",
                degree=j + 1,
            )
        nxt = [ZERO] * (j + 2)
        for i in range(j + 2):
            shifted = p[i - 1] if i >= 1 else ZERO
            reversed_ = p[j - i] if i <= j else ZERO
            nxt[i] = shifted - rho * reversed_
        p = tuple(nxt)
        h = norms[-1] * (ONE - rho) * (ONE + rho)
        coeffs.append(p)
        rhos.append(rho)
        norms.append(h)
        LOG.debug(f"degree {j + 1}: rho={float(rho):.6e} h={float(h):.6e}")

    return OpucSystem(
        b=params.b,
        N=params.N,
        degree_max=M_max,
        coeffs=tuple(coeffs),
        rho=tuple(rhos),
        h=tuple(norms),
    )


def gram_schmidt_oracle(params: ExtensionParams, M_max: int) -> OpucSystem:
    """
    Modified Gram-Schmidt with one reorthogonalization pass.

    Degree k starts from z p_{k-1} and the running residual is projected against
    p_0..p_{k-1} twice. Norms are explicit <p_k, p_k>. Independent of the
    recursion; meant for cross-checking it at moderate degree.
    """
    if M_max > GRAM_SCHMIDT_MAX_DEGREE:
        raise DegreeTooLarge(
            f"Gram-Schmidt oracle is limited to degree {GRAM_SCHMIDT_MAX_DEGREE}"
        )
    _check_degree(params, M_max)
    c = moments(params, 2 * M_max + 2)
    coeffs: list[tuple[ExtendedReal, ...]] = [(ONE,)]
    norms: list[ExtendedReal] = [c.at(0)]

    for k in range(1, M_max + 1):
        v = [ZERO, *coeffs[k - 1]]
        for _ in range(2):
            for j, pj in enumerate(coeffs):
                factor = _inner(tuple(v), pj, c) / norms[j]
                for i, coef in enumerate(pj):
                    v[i] = v[i] - factor * coef
        pk = tuple(v)
        coeffs.append(pk)
        norms.append(_inner(pk, pk, c))

    return OpucSystem(
        b=params.b,
        N=params.N,
        degree_max=M_max,
        coeffs=tuple(coeffs),
        rho=tuple(-row[0] for row in coeffs[1:]),
        h=tuple(norms),
    )


def _check_index(sys: OpucSystem, j: int) -> None:
    if not 0 <= j <= sys.degree_max:
        raise DegreeTooLarge(f"degree {j} outside 0..{sys.degree_max}")


def _ldexp(value: ExtendedComplex, exp: int) -> ExtendedComplex:
    return ExtendedComplex(value.re.ldexp(exp), value.im.ldexp(exp))


def horner(
    coeffs: tuple[ExtendedReal, ...], z: ExtendedComplex
) -> tuple[ExtendedComplex, int]:
    """
    Double-word Horner evaluation with power-of-two rescaling.

    Returns:
        (scaled value, binary exponent) with the true value scaled * 2**exponent
    """
    acc = ExtendedComplex(ZERO)
    shift = 0
    for coef in reversed(coeffs):
        acc = acc * z
        if shift:
            acc = acc + ExtendedComplex(coef.ldexp(-shift))
        else:
            acc = acc + ExtendedComplex(coef)
        if abs(acc.re.hi) > _RESCALE_LIMIT or abs(acc.im.hi) > _RESCALE_LIMIT:
            acc = _ldexp(acc, -_RESCALE_BITS)
            shift += _RESCALE_BITS
    return acc, shift


def eval_monic_xc(
    sys: OpucSystem, j: int, z: ExtendedComplex | complex
) -> ExtendedComplex:
    """p_j(z) at double-word precision (no overflow protection)."""
    _check_index(sys, j)
    acc, shift = horner(sys.coeffs[j], ExtendedComplex.of(z))
    if shift:
        return _ldexp(acc, shift)
    return acc


def eval_monic(sys: OpucSystem, j: int, z: complex) -> tuple[complex, float]:
    """
    Evaluate p_j(z).

    Returns:
        (value, log|value|); the value overflows to inf when the log-magnitude is
        beyond native range, the log stays finite
    """
    _check_index(sys, j)
    acc, shift = horner(sys.coeffs[j], ExtendedComplex.of(z))
    a2 = acc.abs2()
    log_abs = float(xr_log(a2)) / 2.0 + shift * float(LN2) if a2 else -math.inf
    value = complex(acc)
    if shift:
        scale = math.ldexp(1.0, shift) if shift < 1024 else math.inf
        value = complex(value.real * scale, value.imag * scale)
    return value, log_abs


def reverse_poly(sys: OpucSystem, j: int) -> tuple[ExtendedReal, ...]:
    """Coefficients of p_j^*(z) = z^j p_j(1/z); real coefficients need no conjugation."""
    _check_index(sys, j)
    return tuple(reversed(sys.coeffs[j]))


def eval_reverse_xc(
    sys: OpucSystem, j: int, z: ExtendedComplex | complex
) -> ExtendedComplex:
    _check_index(sys, j)
    acc, shift = horner(reverse_poly(sys, j), ExtendedComplex.of(z))
    if shift:
        return _ldexp(acc, shift)
    return acc


def normalized_phi(
    sys: OpucSystem, params: ExtensionParams, j: int, z: complex
) -> complex:
    """phi_j(z) = p_j(z) / sqrt(b*h_j), orthonormal for the 1/N-weighted sample sum."""
    scale = xr_sqrt(sys.h[j] * ExtendedReal.from_fraction(params.b))
    return complex(eval_monic_xc(sys, j, z) / scale)


def node_values(
    sys: OpucSystem, params: ExtensionParams, j: int
) -> tuple[ExtendedComplex, ...]:
    """p_j at every lattice node (cached on the system)."""
    key = ("p", j)
    if key not in sys._node_cache:
        sys._node_cache[key] = tuple(
            eval_monic_xc(sys, j, z) for z in node_points(params)
        )
    return sys._node_cache[key]


def node_reverse_values(
    sys: OpucSystem, params: ExtensionParams, j: int
) -> tuple[ExtendedComplex, ...]:
    key = ("p*", j)
    if key not in sys._node_cache:
        sys._node_cache[key] = tuple(
            eval_reverse_xc(sys, j, z) for z in node_points(params)
        )
    return sys._node_cache[key]


def discrete_inner(
    sys: OpucSystem, params: ExtensionParams, j: int, k: int
) -> ExtendedComplex:
    """(1/m) sum over the lattice of p_j(z) conj(p_k(z)), by node summation."""
    total = ExtendedComplex(ZERO)
    pairs = zip(node_values(sys, params, j), node_values(sys, params, k), strict=True)
    for pj, pk in pairs:
        total = total + pj * pk.conjugate()
    return total / params.m


def companion_roots(sys: OpucSystem, j: int) -> np.ndarray:
    """Zeros of p_j as eigenvalues of its companion matrix."""
    _check_index(sys, j)
    if j == 0:
        return np.empty(0, dtype=complex)
    coefs = np.array([float(v) for v in sys.coeffs[j]])
    return np.polynomial.polynomial.polyroots(coefs).astype(complex)
