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
Discrete least-squares Fourier extension of equispaced samples.

The space spanned by e^{2 pi i k x / b}, k in t(M), is e^{2 pi i M0 x / b} times the
polynomials of degree < M in w = e^{2 pi i x / b}. The projection is taken in the
orthonormal basis phi_l = p_l / sqrt(b h_l) of the lattice measure, so the Gram
matrix is the identity; Fourier coefficients follow by a triangular change of
basis.
"""

from __future__ import annotations

import io
import json
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from arcopuc.errors import (
    CsvParseError,
    DegreeTooLarge,
    DomainError,
    NoEnvelope,
    SampleCountMismatch,
)
from arcopuc.highprec.double_word import ZERO, ExtendedComplex, ExtendedReal, xr_sqrt
from arcopuc.lattice.params import ExtensionParams, lattice_angles, make_params
from arcopuc.opuc.kernel import error_term_B, expansion_row
from arcopuc.opuc.moments import node_power
from arcopuc.opuc.szego import OpucSystem, node_values, normalized_phi, szego_system
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

JSON_SCHEMA = 1
CSV_COLUMNS = ("j", "re", "im")


@dataclass(frozen=True)
class ExtensionApprox:
    """
    Least-squares approximation q of N samples in the M-dimensional space.

    ``coeffs_ortho[l]`` is <f, phi_l>_N and ``coeffs_fourier`` lists the
    coefficients of e^{2 pi i k x / b} in the order of ``params.t``.
    """

    params: ExtensionParams
    coeffs_ortho: tuple[complex, ...]
    coeffs_fourier: tuple[complex, ...]

    def fourier_map(self) -> dict[int, complex]:
        return dict(zip(self.params.t, self.coeffs_fourier, strict=True))


@dataclass(frozen=True)
class FourierCoeffSeq:
    """
    Fourier coefficients a_k of a b-periodic extension of f.

    ``a`` holds the explicitly known coefficients; ``envelope`` = (A, r) asserts
    |a_k| <= A r^{|k|} for every k, which bounds whatever is not listed.
    """

    a: Mapping[int, complex]
    envelope: tuple[float, float] | None = None
    _support: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.envelope is not None:
            A, r = self.envelope
            if A < 0.0 or not 0.0 <= r < 1.0:
                raise DomainError(
                    f"decay envelope needs A >= 0, 0 <= r < 1; got {A}, {r}"
                )
        object.__setattr__(self, "_support", max((abs(k) for k in self.a), default=0))

    @classmethod
    def geometric(cls, A: float, r: float, cutoff: int) -> FourierCoeffSeq:
        """a_k = A r^{|k|} listed for |k| <= cutoff, with the matching envelope."""
        a = {k: A * r ** abs(k) for k in range(-cutoff, cutoff + 1)}
        return cls(a=a, envelope=(A, r))

    @property
    def support(self) -> int:
        """Largest |k| with an explicit coefficient."""
        return self._support

    def tail_sum(self, cutoff: int) -> float:
        """Envelope bound on sum_{|k| > cutoff} |a_k|."""
        if self.envelope is None:
            raise NoEnvelope("coefficient sequence carries no decay envelope")
        A, r = self.envelope
        return 2.0 * A * r ** (cutoff + 1) / (1.0 - r)

    def value(self, x: float, b: float) -> complex:
        """Sum of the listed terms at x."""
        return sum(
            (c * np.exp(2j * np.pi * k * x / b) for k, c in self.a.items()), start=0j
        )


def _require_system(
    params: ExtensionParams, sys: OpucSystem | None, degree: int
) -> OpucSystem:
    if sys is None:
        return szego_system(params, degree)
    if sys.degree_max < degree:
        raise DegreeTooLarge(f"system holds degrees 0..{sys.degree_max}, need {degree}")
    return sys


def _scales(sys: OpucSystem, params: ExtensionParams) -> list[ExtendedReal]:
    # ||p_l||_N = sqrt(b h_l) for the 1/N-weighted sample sum
    b = ExtendedReal.from_fraction(params.b)
    return [xr_sqrt(sys.h[j] * b) for j in range(params.M)]


def _ortho_to_fourier_xc(
    sys: OpucSystem, params: ExtensionParams, coeffs: Sequence[ExtendedComplex]
) -> tuple[complex, ...]:
    scales = _scales(sys, params)
    weighted = [c / s for c, s in zip(coeffs, scales, strict=True)]
    out = []
    for n in range(params.M):
        acc = ExtendedComplex(ZERO)
        for j in range(n, params.M):
            acc = acc + weighted[j] * sys.coeffs[j][n]
        out.append(complex(acc))
    return tuple(out)


def ortho_to_fourier(
    sys: OpucSystem, params: ExtensionParams, coeffs_ortho: Sequence[complex]
) -> tuple[complex, ...]:
    """
    sum_l c_l phi_l(w) rewritten as sum_n d_n w^n.

    d_n is the coefficient of e^{2 pi i (n + M0) x / b}.
    """
    if len(coeffs_ortho) != params.M:
        raise SampleCountMismatch(
            f"expected {params.M} coefficients, got {len(coeffs_ortho)}"
        )
    coeffs = [ExtendedComplex.of(c) for c in coeffs_ortho]
    return _ortho_to_fourier_xc(sys, params, coeffs)


def fourier_to_ortho(
    sys: OpucSystem, params: ExtensionParams, coeffs_fourier: Sequence[complex]
) -> tuple[complex, ...]:
    """Inverse of ``ortho_to_fourier`` through z^n = sum_j x_{n,j} p_j(z)."""
    if len(coeffs_fourier) != params.M:
        raise SampleCountMismatch(
            f"expected {params.M} coefficients, got {len(coeffs_fourier)}"
        )
    scales = _scales(sys, params)
    acc = [ExtendedComplex(ZERO) for _ in range(params.M)]
    for n, d in enumerate(coeffs_fourier):
        row = expansion_row(sys, n)
        dx = ExtendedComplex.of(d)
        for j in range(n + 1):
            acc[j] = acc[j] + dx * row[j]
    return tuple(complex(a * s) for a, s in zip(acc, scales, strict=True))


def _ortho_coefficients(
    sys: OpucSystem, params: ExtensionParams, samples: Sequence[complex]
) -> list[ExtendedComplex]:
    doubled, _ = lattice_angles(params.N, params.m)
    # strip the e^{2 pi i M0 x / b} factor so the space becomes polynomials in w
    shifted = [
        ExtendedComplex.of(f) * node_power(r2, -params.M0, params.m)
        for f, r2 in zip(samples, doubled, strict=True)
    ]
    scales = _scales(sys, params)
    coeffs = []
    for j in range(params.M):
        acc = ExtendedComplex(ZERO)
        for g, pz in zip(shifted, node_values(sys, params, j), strict=True):
            acc = acc + g * pz.conjugate()
        coeffs.append(acc / (scales[j] * params.N))
    return coeffs


def project(
    params: ExtensionParams,
    samples: Sequence[complex],
    sys: OpucSystem | None = None,
) -> ExtensionApprox:
    """
    Orthogonal projection of the samples onto the extension space.

    Args:
        params: Lattice parameters; samples are f(x_j) at x_j = (j - (N+1)/2) / N
        samples: Exactly N values ordered by j
        sys: Polynomials of degree at least M-1 for ``params``; built when omitted

    Raises:
        SampleCountMismatch: len(samples) != N
    """
    if len(samples) != params.N:
        raise SampleCountMismatch(f"expected {params.N} samples, got {len(samples)}")
    sys = _require_system(params, sys, params.M - 1)
    coeffs = _ortho_coefficients(sys, params, [complex(v) for v in samples])
    fourier = _ortho_to_fourier_xc(sys, params, coeffs)
    LOG.debug(f"projected {params.N} samples onto {params.M} modes")
    return ExtensionApprox(
        params=params,
        coeffs_ortho=tuple(complex(c) for c in coeffs),
        coeffs_fourier=fourier,
    )


def from_ortho(
    params: ExtensionParams,
    coeffs_ortho: Sequence[complex],
    sys: OpucSystem | None = None,
) -> ExtensionApprox:
    """Approximation with the given orthonormal-basis coefficients."""
    sys = _require_system(params, sys, params.M - 1)
    fourier = ortho_to_fourier(sys, params, coeffs_ortho)
    return ExtensionApprox(
        params=params,
        coeffs_ortho=tuple(complex(c) for c in coeffs_ortho),
        coeffs_fourier=fourier,
    )


def eval_extension(approx: ExtensionApprox, x: float) -> complex:
    """q(x) as the trigonometric sum over t(M); b-periodic in x."""
    ks = np.fromiter(approx.params.t, dtype=float)
    b = float(approx.params.b)
    phases = np.exp(2j * np.pi * ks * x / b)
    return complex(phases @ np.asarray(approx.coeffs_fourier, dtype=complex))


def eval_ortho(approx: ExtensionApprox, sys: OpucSystem, x: float) -> complex:
    """q(x) = e^{2 pi i M0 x / b} sum_l c_l phi_l(w), the orthonormal-basis path."""
    params = approx.params
    b = float(params.b)
    w = np.exp(2j * np.pi * x / b)
    total = sum(
        (
            c * normalized_phi(sys, params, j, w)
            for j, c in enumerate(approx.coeffs_ortho)
        ),
        start=0j,
    )
    return complex(np.exp(2j * np.pi * params.M0 * x / b) * total)


def error_function(
    approx: ExtensionApprox, f_exact: Callable[[float], complex], x: float
) -> complex:
    """E(x) = f(x) - q(x)."""
    return complex(f_exact(x)) - eval_extension(approx, x)


def lattice_values(approx: ExtensionApprox) -> tuple[complex, ...]:
    """q at the sample points x_j."""
    params = approx.params
    doubled, _ = lattice_angles(params.N, params.m)
    return tuple(eval_extension(approx, r2 / (2 * params.N)) for r2 in doubled)


def sample_norm2(samples: Sequence[complex]) -> float:
    """||f||_N^2 = (1/N) sum |f_j|^2."""
    arr = np.asarray(samples, dtype=complex)
    return float(np.mean(np.abs(arr) ** 2))


def residual_norm(approx: ExtensionApprox, samples: Sequence[complex]) -> float:
    """||f - q||_N^2 through Bessel: ||f||_N^2 - sum |c_l|^2."""
    coeffs = np.asarray(approx.coeffs_ortho, dtype=complex)
    return sample_norm2(samples) - float(np.sum(np.abs(coeffs) ** 2))


def sample_residual(approx: ExtensionApprox, samples: Sequence[complex]) -> float:
    """||f - q||_N^2 summed directly over the lattice."""
    q = np.asarray(lattice_values(approx), dtype=complex)
    return sample_norm2(np.asarray(samples, dtype=complex) - q)


def sample_series(params: ExtensionParams, a: FourierCoeffSeq) -> tuple[complex, ...]:
    """The listed part of the series sampled on the lattice, z_j^k taken exactly."""
    doubled, _ = lattice_angles(params.N, params.m)
    out = []
    for r2 in doubled:
        acc = ExtendedComplex(ZERO)
        for k, c in a.a.items():
            acc = acc + node_power(r2, k, params.m) * ExtendedComplex.of(c)
        out.append(complex(acc))
    return tuple(out)


def lebesgue_factor(sys: OpucSystem, params: ExtensionParams, x: float) -> float:
    """sqrt(sum_l |phi_l(w)|^2), bounding |K_{n,M}(w)| for every n."""
    w = np.exp(2j * np.pi * x / float(params.b))
    total = sum(abs(normalized_phi(sys, params, j, w)) ** 2 for j in range(params.M))
    return math.sqrt(total)


def error_series_bound(
    params: ExtensionParams,
    sys: OpucSystem,
    a: FourierCoeffSeq,
    x: float,
    k_cutoff: int,
) -> float:
    """
    Bound on |E(x)| from E = e^{2 pi i M0 x / b} sum_k a_k B^k(x).

    Terms with |k| <= k_cutoff are summed exactly; beyond the cutoff
    |B^k(x)| <= 1 + sqrt(sum_l |phi_l(w)|^2) is combined with the envelope.

    Raises:
        NoEnvelope: listed coefficients reach past the cutoff without an envelope
        DegreeTooLarge: ``sys`` holds fewer than M+1 polynomials
    """
    if k_cutoff < 0:
        raise DomainError(f"cutoff must be non-negative, got {k_cutoff}")
    if a.envelope is None and a.support > k_cutoff:
        raise NoEnvelope(
            f"coefficients reach |k|={a.support} past the cutoff {k_cutoff} "
            f"and no decay envelope is given"
        )
    sys = _require_system(params, sys, params.M)
    in_space = set(params.t)
    bound = 0.0
    for k in sorted(a.a):
        c = complex(a.a[k])
        if abs(k) > k_cutoff or k in in_space or c == 0:
            continue
        bound += abs(error_term_B(sys, params, k, x)) * abs(c)
    if a.envelope is not None:
        bound += (1.0 + lebesgue_factor(sys, params, x)) * a.tail_sum(k_cutoff)
    return bound


def approx_to_json(approx: ExtensionApprox) -> str:
    params = approx.params
    payload = {
        "schema": JSON_SCHEMA,
        "params": params.describe(),
        "coeffs_ortho": [[c.real, c.imag] for c in approx.coeffs_ortho],
        "coeffs_fourier": [
            [k, c.real, c.imag]
            for k, c in zip(params.t, approx.coeffs_fourier, strict=True)
        ],
    }
    return json.dumps(payload, indent=2)


def approx_from_json(text: str) -> ExtensionApprox:
    """
    Raises:
        DomainError: unknown schema or inconsistent coefficient lists
    """
    data = json.loads(text)
    if data.get("schema") != JSON_SCHEMA:
        raise DomainError(f"unsupported approximation schema {data.get('schema')!r}")
    p = data["params"]
    params = make_params(p["b"], int(p["M"]), int(p["N"]))
    ortho = tuple(complex(re, im) for re, im in data["coeffs_ortho"])
    rows = data["coeffs_fourier"]
    if [int(k) for k, _, _ in rows] != list(params.t) or len(ortho) != params.M:
        raise DomainError("coefficient lists do not match t(M)")
    fourier = tuple(complex(re, im) for _, re, im in rows)
    return ExtensionApprox(params=params, coeffs_ortho=ortho, coeffs_fourier=fourier)


def _data_lines(text: str) -> list[tuple[int, str]]:
    return [
        (no, line)
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]


def samples_from_csv(path: str | Path) -> tuple[complex, ...]:
    """
    Read samples from a CSV with header ``j,re,im`` and rows j = 1, 2, ...

    Lines starting with ``#`` are metadata and skipped.

    Raises:
        CsvParseError: missing columns, unparsable numbers or out-of-order j,
            reported with the 1-based file line
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = _data_lines(text)
    if not lines:
        raise CsvParseError("no header line", line=1)
    header_no, header = lines[0]
    columns = tuple(c.strip() for c in header.split(","))
    if columns != CSV_COLUMNS:
        expected = ",".join(CSV_COLUMNS)
        raise CsvParseError(f"expected columns {expected}, got {header!r}", header_no)
    for no, line in lines[1:]:
        if line.count(",") != len(CSV_COLUMNS) - 1:
            raise CsvParseError(f"wrong number of fields in {line!r}", line=no)
    frame = pd.read_csv(
        io.StringIO("\n".join(line for _, line in lines)),
        dtype=str,
        keep_default_na=False,
        skipinitialspace=True,
    )

    samples = []
    for i, row in enumerate(frame.itertuples(index=False), start=1):
        no = lines[i][0]
        try:
            j = int(row.j)
            value = complex(float(row.re), float(row.im))
        except ValueError as e:
            raise CsvParseError(f"cannot parse row {tuple(row)}", line=no, cause=e) from e
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise CsvParseError(f"non-finite sample {value}", line=no)
        if j != i:
            raise CsvParseError(f"expected sample index {i}, got {j}", line=no)
        samples.append(value)
    return tuple(samples)


def samples_to_frame(samples: Iterable[complex]) -> pd.DataFrame:
    rows = [(j, v.real, v.imag) for j, v in enumerate(map(complex, samples), start=1)]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS))
