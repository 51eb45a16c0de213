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

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from arcopuc.highprec.double_word import (
    ExtendedComplex,
    ExtendedReal,
    cos_pi_rational,
    sin_pi_rational,
    xr_sum,
)
from arcopuc.lattice.params import ExtensionParams, lattice_angles


def _closed_form(k: int, N: int, m: int) -> ExtendedReal:
    if k % m == 0:
        return ExtendedReal.from_fraction(Fraction(N, m))
    return sin_pi_rational(k * N, m) / (sin_pi_rational(k, m) * m)


@dataclass(frozen=True)
class MomentTable:
    """
    Moments c_k = (1/m) sum of z^k over the lattice.

    The lattice is symmetric under conjugation and made of m-th roots of unity,
    so c_{-k} = c_k and c_{k+m} = c_k; ``at`` folds any integer index back into
    the stored range and falls back to the closed form beyond it.
    """

    N: int
    m: int
    c: tuple[ExtendedReal, ...]

    @property
    def k_max(self) -> int:
        return len(self.c) - 1

    def at(self, k: int) -> ExtendedReal:
        r = k % self.m
        r = min(r, self.m - r)
        if r <= self.k_max:
            return self.c[r]
        return _closed_form(r, self.N, self.m)


def moments(params: ExtensionParams, k_max: int) -> MomentTable:
    """
    Closed-form moment table c_0..c_{k_max}.

    c_k = sin(pi*k*N/m) / (m*sin(pi*k/m)) off the multiples of m, N/m on them.
    The arguments of both sines are reduced exactly before evaluation.
    """
    N, m = params.N, params.m
    c = tuple(_closed_form(k, N, m) for k in range(k_max + 1))
    return MomentTable(N=N, m=m, c=c)


@lru_cache(maxsize=32)
def full_moments(params: ExtensionParams) -> MomentTable:
    """Moments up to m/2, enough to resolve every index by folding."""
    return moments(params, params.m // 2)


def moments_direct(params: ExtensionParams, k_max: int) -> MomentTable:
    """Node-by-node summation of the same table, used as an oracle."""
    doubled, _ = lattice_angles(params.N, params.m)
    m = params.m
    c = []
    for k in range(k_max + 1):
        c.append(xr_sum(cos_pi_rational(k * r2, m) for r2 in doubled) / m)
    return MomentTable(N=params.N, m=m, c=tuple(c))


@lru_cache(maxsize=32)
def node_points(params: ExtensionParams) -> tuple[ExtendedComplex, ...]:
    """Lattice nodes at double-word precision, conjugate pairs exact."""
    doubled, _ = lattice_angles(params.N, params.m)
    return tuple(node_power(r2, 1, params.m) for r2 in doubled)


def node_power(r2: int, k: int, m: int) -> ExtendedComplex:
    """z^k for the node with doubled offset r2, angle reduced in integers."""
    return ExtendedComplex(cos_pi_rational(k * r2, m), sin_pi_rational(k * r2, m))
