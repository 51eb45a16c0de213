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

import numpy as np

from arcopuc.errors import DegreeTooLarge
from arcopuc.highprec.double_word import ZERO, ExtendedComplex
from arcopuc.lattice.params import ExtensionParams, lattice_angles
from arcopuc.opuc.moments import node_power
from arcopuc.opuc.szego import (
    OpucSystem,
    eval_monic_xc,
    eval_reverse_xc,
    node_reverse_values,
    node_values,
)


def _discrete_cauchy(
    values: tuple[ExtendedComplex, ...],
    params: ExtensionParams,
    M: int,
    z: ExtendedComplex,
) -> ExtendedComplex:
    # (1/m) sum_x f(x) / ((z - x) x^{M-1})
    doubled, _ = lattice_angles(params.N, params.m)
    total = ExtendedComplex(ZERO)
    for r2, fx in zip(doubled, values, strict=True):
        x = node_power(r2, 1, params.m)
        total = total + fx * node_power(r2, 1 - M, params.m) / (z - x)
    return total / params.m


def interpolation_matrix(
    sys: OpucSystem,
    params: ExtensionParams,
    M: int,
    z: complex | ExtendedComplex,
) -> np.ndarray:
    """
    Solution of the discrete interpolation problem at z (off the lattice).

        [[ p_M(z),                 C[p_M](z)                  ],
         [ p*_{M-1}(z) / h_{M-1},  C[p*_{M-1}](z) / h_{M-1}   ]]

    where C[f](z) = (1/m) sum_x f(x) / ((z - x) x^{M-1}). The determinant is 1,
    and P_M(z) z^{-M sigma_3} tends to the identity at infinity.

    Raises:
        DegreeTooLarge: M outside 1..degree_max
    """
    if not 1 <= M <= sys.degree_max:
        raise DegreeTooLarge(f"interpolation matrix needs 1 <= M <= {sys.degree_max}")
    zx = ExtendedComplex.of(z)
    h_prev = sys.h[M - 1]
    top_right = _discrete_cauchy(node_values(sys, params, M), params, M, zx)
    reverse_prev = node_reverse_values(sys, params, M - 1)
    bottom_right = _discrete_cauchy(reverse_prev, params, M, zx)
    bottom_left = eval_reverse_xc(sys, M - 1, zx) / h_prev
    return np.array(
        [
            [complex(eval_monic_xc(sys, M, zx)), complex(top_right)],
            [complex(bottom_left), complex(bottom_right / h_prev)],
        ],
        dtype=complex,
    )


def node_residue(
    sys: OpucSystem, params: ExtensionParams, M: int, j: int
) -> np.ndarray:
    """
    Residue of the interpolation matrix at the j-th node x (0-based).

    Only the second column has a pole there:
    Res = P_M(x) [[0, 1/(m x^{M-1})], [0, 0]].
    """
    if not 1 <= M <= sys.degree_max:
        raise DegreeTooLarge(f"interpolation matrix needs 1 <= M <= {sys.degree_max}")
    doubled, _ = lattice_angles(params.N, params.m)
    weight = node_power(doubled[j], 1 - M, params.m) / params.m
    top = node_values(sys, params, M)[j] * weight
    bottom = node_reverse_values(sys, params, M - 1)[j] * weight / sys.h[M - 1]
    return np.array([[0.0, complex(top)], [0.0, complex(bottom)]], dtype=complex)
