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

"""``conjecture``: solve for the critical sampling ratio and check pi/(pi - alpha)."""

from __future__ import annotations

import argparse
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pandas as pd

from arcopuc.commands import Command, RunConfig, add_output_args
from arcopuc.equilibrium.critical import conjectured_xi, xi_critical
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import EXIT_EVIDENCE_MISMATCH, EXIT_OK, NoRoot
from arcopuc.utils.logger_utils import Logger
from arcopuc.utils.output import write_table
from arcopuc.utils.rational import parse_pi_multiple, pi_multiple_to_radians

LOG = Logger.get_logger(__name__)

DEFAULT_ALPHAS = "1/2pi,2/3pi,3/4pi,5/6pi"
MATCH_TOL = 1e-3
COLUMNS = [
    "alpha_over_pi",
    "alpha",
    "xi_solved",
    "xi_tilde_solved",
    "conjecture",
    "difference",
    "status",
]


def _alpha_list(text: str) -> list[Fraction]:
    try:
        parts = [part.strip() for part in text.split(",")]
        return [parse_pi_multiple(part) for part in parts if part]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        Command.CONJECTURE.value,
        help="Numerical evidence for xi_alpha = pi / (pi - alpha)",
    )
    parser.add_argument(
        "--alphas",
        type=_alpha_list,
        default=_alpha_list(DEFAULT_ALPHAS),
        help="Comma separated half-angles as multiples of pi "
        f"(default: {DEFAULT_ALPHAS})",
    )
    add_output_args(parser, grid_default=None)


def evidence_row(r: Fraction, spec: QuadratureSpec | None = None) -> dict[str, object]:
    """
    One row of the evidence table for alpha = r*pi.

    Half-angles with no root are reported with status ``no_root`` and NaN values.
    """
    alpha = pi_multiple_to_radians(r)
    guess = conjectured_xi(alpha)
    try:
        xi = xi_critical(alpha, spec)
    except NoRoot as e:
        LOG.warning(f"alpha={r}pi: {e}")
        xi, status = math.nan, "no_root"
    else:
        status = "ok" if abs(xi - guess) < MATCH_TOL else "mismatch"
    return {
        "alpha_over_pi": str(r),
        "alpha": alpha,
        "xi_solved": xi,
        # N/M = xi / b with b = pi/alpha
        "xi_tilde_solved": xi * float(r),
        "conjecture": guess,
        "difference": xi - guess,
        "status": status,
    }


def run(args: argparse.Namespace, config: RunConfig) -> int:
    alphas = list(args.alphas)
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        rows = list(
            Logger.progress(
                executor.map(lambda r: evidence_row(r, config.quadrature), alphas),
                desc="conjecture",
                total=len(alphas),
            )
        )
    frame = pd.DataFrame(rows, columns=COLUMNS)

    mismatches = frame[frame["status"] == "mismatch"]
    metadata = {
        "command": Command.CONJECTURE.value,
        "match_tol": MATCH_TOL,
        "mismatches": len(mismatches),
    }
    write_table(
        frame, config.output_path, config.fmt.value, metadata, config.float_format
    )

    if len(mismatches):
        LOG.error(
            "closed form disagrees at alpha/pi = "
            + ", ".join(mismatches["alpha_over_pi"])
        )
        return EXIT_EVIDENCE_MISMATCH
    return EXIT_OK
