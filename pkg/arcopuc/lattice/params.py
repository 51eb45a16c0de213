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
from dataclasses import dataclass, field
from fractions import Fraction

from arcopuc.errors import DimensionOrder, NOddRequired, NonIntegerM, PeriodTooSmall
from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)


def t_range(M: int) -> range:
    """
    Frequencies spanned by the M-dimensional trigonometric space.

    M odd gives [-(M-1)/2, (M-1)/2], M even gives [-M/2, M/2 - 1].
    """
    if M % 2:
        return range(-(M - 1) // 2, (M - 1) // 2 + 1)
    return range(-M // 2, M // 2)


@dataclass(frozen=True)
class ExtensionParams:
    """Validated (b, M, N) bundle with the derived circle quantities."""

    b: Fraction
    M: int
    N: int
    m: int = field(init=False)
    M0: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", int(self.b * self.N))
        object.__setattr__(self, "M0", t_range(self.M).start)

    @property
    def alpha(self) -> float:
        return math.pi / float(self.b)

    @property
    def xi(self) -> Fraction:
        return Fraction(self.m, self.M)

    @property
    def xi_tilde(self) -> Fraction:
        return Fraction(self.N, self.M)

    @property
    def t(self) -> range:
        return t_range(self.M)

    def with_degree(self, M: int) -> ExtensionParams:
        return make_params(self.b, M, self.N)

    def describe(self) -> dict[str, object]:
        return {
            "b": str(self.b),
            "M": self.M,
            "N": self.N,
            "m": self.m,
            "alpha": self.alpha,
            "xi": str(self.xi),
            "xi_tilde": str(self.xi_tilde),
            "M0": self.M0,
        }


def make_params(b: Fraction | int | str, M: int, N: int) -> ExtensionParams:
    """
    Validate and derive the parameter bundle.

    Args:
        b: Extension period as an exact rational
        M: Dimension of the approximation space
        N: Number of equispaced samples on [-1/2, 1/2]

    Returns:
        ExtensionParams with m = N*b, alpha = pi/b and M0 = min t(M)

    Raises:
        PeriodTooSmall: b <= 1
        NOddRequired: N even
        NonIntegerM: N*b is not an integer
        DimensionOrder: M > N or M < 1
    """
    b = Fraction(b)
    if b <= 1:
        raise PeriodTooSmall(f"extension period must exceed 1, got b={b}")
    if N < 1 or N % 2 == 0:
        raise NOddRequired(f"sample count must be odd, got N={N}")
    if (b * N).denominator != 1:
        raise NonIntegerM(f"m = N*b must be an integer, got N*b={b * N}")
    if M < 1 or M > N:
        raise DimensionOrder(f"need 1 <= M <= N, got M={M}, N={N}")
    params = ExtensionParams(b=b, M=M, N=N)
    LOG.debug(f"params {params.describe()}")
    return params


@dataclass(frozen=True)
class ArcLattice:
    nodes_x: tuple[float, ...]
    angles: tuple[float, ...]
    nodes_z: tuple[complex, ...]
    m: int

    @property
    def midpoint_angles(self) -> tuple[float, ...]:
        """Angles halfway between consecutive nodes."""
        step = math.pi / self.m
        return tuple(theta + step for theta in self.angles[:-1])


def lattice_angles(N: int, m: int) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """
    Node offsets r_j = j - (N+1)/2 (doubled, so always integral) and angles.

    Angles are 2*pi*r_j/m. For odd N the offsets are integers and every node is an
    m-th root of unity; for even N they are half-integers.

    Returns:
        (doubled offsets 2*r_j, angles)
    """
    doubled = tuple(2 * j - N - 1 for j in range(1, N + 1))
    angles = tuple(math.pi * k / m for k in doubled)
    return doubled, angles


def _unit(k2: int, m: int) -> complex:
    # cos/sin of pi*k2/m computed for |k2| and mirrored, so conj pairs are bit-exact
    theta = math.pi * abs(k2) / m
    z = complex(math.cos(theta), math.sin(theta))
    return z if k2 >= 0 else z.conjugate()


def lattice_nodes(params: ExtensionParams) -> ArcLattice:
    N, m = params.N, params.m
    doubled, angles = lattice_angles(N, m)
    nodes_x = tuple(k / (2 * N) for k in doubled)
    nodes_z = tuple(_unit(k, m) for k in doubled)
    return ArcLattice(nodes_x=nodes_x, angles=angles, nodes_z=nodes_z, m=m)
