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

"""``eqm``: tabulate the constrained equilibrium measure on a grid of angles."""

from __future__ import annotations

import argparse

from arcopuc.commands import (
    Command,
    RunConfig,
    add_output_args,
    add_problem_args,
    grid_angles,
    resolve_alpha_xi,
    resolve_period,
)
from arcopuc.equilibrium.measure import density_table, equilibrium
from arcopuc.errors import EXIT_OK
from arcopuc.utils.logger_utils import Logger
from arcopuc.utils.output import write_table

LOG = Logger.get_logger(__name__)


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        Command.EQM.value,
        help="Density, band mass and logarithmic transform of the equilibrium measure",
    )
    add_problem_args(parser, sampled=False)
    add_output_args(parser)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    alpha, xi = resolve_alpha_xi(args)
    eq = equilibrium(alpha, xi, config.quadrature)
    LOG.info(f"equilibrium measure: {eq.describe()}")

    angles = grid_angles(config.grid, eq)
    frame = density_table(
        eq,
        Logger.progress(angles, desc="eqm", total=len(angles)),
        config.quadrature,
    )

    metadata = {
        "command": Command.EQM.value,
        **eq.describe(),
    }
    if getattr(args, "xi_tilde", None) is not None:
        metadata["b"] = str(resolve_period(args))
        metadata["xi_tilde"] = str(args.xi_tilde)
    write_table(
        frame, config.output_path, config.fmt.value, metadata, config.float_format
    )
    return EXIT_OK
