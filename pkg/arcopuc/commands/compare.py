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

"""``compare``: recursion values of p_M against the asymptotic formulas."""

from __future__ import annotations

import argparse
import math
from fractions import Fraction

from arcopuc.asymptotics.convergence import comparison_table, convergence_study
from arcopuc.asymptotics.regimes import equilibrium_for
from arcopuc.commands import (
    Command,
    RunConfig,
    add_output_args,
    add_problem_args,
    grid_angles,
    resolve_period,
)
from arcopuc.errors import EXIT_OK, DomainError
from arcopuc.lattice.params import make_params
from arcopuc.opuc.szego import szego_system
from arcopuc.utils.logger_utils import Logger
from arcopuc.utils.output import write_table

LOG = Logger.get_logger(__name__)

MIN_SWEEP_DEGREE = 4


def _degree_list(text: str) -> list[int]:
    try:
        degrees = sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid degree list {text!r}") from e
    if len(degrees) < 2 or degrees[0] < 1:
        raise argparse.ArgumentTypeError("need two or more positive degrees")
    return degrees


def default_sweep(M: int) -> list[int]:
    """Degrees M/2, 3M/4 and M, each at least MIN_SWEEP_DEGREE."""
    return sorted({max(MIN_SWEEP_DEGREE, M // 2), max(MIN_SWEEP_DEGREE, 3 * M // 4), M})


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        Command.COMPARE.value,
        help="Compare p_M from the recursion with its asymptotic approximation",
    )
    add_problem_args(parser, sampled=True)
    add_output_args(parser, grid_default="band")
    parser.add_argument(
        "--sweep",
        type=_degree_list,
        default=None,
        help="Comma separated degrees for the convergence slope "
        "(default: M/2, 3M/4, M)",
    )
    parser.add_argument(
        "--no-sweep", action="store_true", help="Skip the convergence slope fit"
    )


def run(args: argparse.Namespace, config: RunConfig) -> int:
    b = resolve_period(args)
    params = make_params(b, args.M, args.N)
    LOG.info(f"compare: {params.describe()}")
    eq = equilibrium_for(params, config.quadrature)
    sys = szego_system(params, params.M, config.orthogonality_guard)

    angles = grid_angles(config.grid, eq, params)
    frame = comparison_table(
        sys,
        eq,
        params,
        params.M,
        angles,
        config.regimes,
        config.quadrature,
        config.workers,
    )
    usable = frame[~frame["near_zero"]]["rel_error"].dropna()
    max_rel_error = float(usable.max()) if len(usable) else math.nan

    metadata: dict[str, object] = {
        "command": Command.COMPARE.value,
        "b": str(params.b),
        "M": params.M,
        "N": params.N,
        **eq.describe(),
        "max_rel_error": max_rel_error,
    }

    degrees = args.sweep or default_sweep(params.M)
    if not args.no_sweep and len(degrees) >= 2:
        xi_tilde = Fraction(params.N, params.M)
        try:
            sweep, slope, C = convergence_study(
                b, xi_tilde, degrees, angles, config.regimes, config.quadrature
            )
            LOG.info(f"convergence sweep:\n{sweep.to_string(index=False)}")
        except DomainError as e:
            LOG.warning(f"convergence slope not available: {e}")
            slope, C = math.nan, math.nan
        metadata["sweep"] = ",".join(str(d) for d in degrees)
        metadata["slope"] = slope
        metadata["slope_C"] = C

    write_table(
        frame, config.output_path, config.fmt.value, metadata, config.float_format
    )
    return EXIT_OK
