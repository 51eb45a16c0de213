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

"""``project``: least-squares Fourier extension of samples read from CSV."""

from __future__ import annotations

import argparse

import numpy as np
import pandas as pd

from arcopuc.commands import (
    Command,
    RunConfig,
    add_output_args,
    add_problem_args,
    resolve_period,
)
from arcopuc.errors import EXIT_OK, SampleCountMismatch
from arcopuc.fourext.projection import (
    approx_to_json,
    lattice_values,
    project,
    residual_norm,
    sample_residual,
    samples_from_csv,
)
from arcopuc.lattice.params import lattice_nodes, make_params
from arcopuc.opuc.szego import szego_system
from arcopuc.utils.logger_utils import Logger
from arcopuc.utils.output import save_file, write_table

LOG = Logger.get_logger(__name__)

RESIDUAL_COLUMNS = ["j", "x", "re_E", "im_E", "abs_E"]


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        Command.PROJECT.value,
        help="Project N samples onto the M-dimensional Fourier extension space",
    )
    add_problem_args(parser, sampled=True)
    parser.add_argument(
        "--input", type=str, required=True, help="CSV file with columns j,re,im"
    )
    parser.add_argument(
        "--approx",
        type=str,
        default=None,
        help="Also write the approximation (coefficients) as JSON to this file",
    )
    add_output_args(parser, grid_default=None)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    samples = samples_from_csv(args.input)
    params = make_params(resolve_period(args), args.M, args.N)
    if len(samples) != params.N:
        raise SampleCountMismatch(
            f"{args.input} holds {len(samples)} samples, --N is {params.N}"
        )
    LOG.info(f"project: {params.describe()}")

    sys = szego_system(params, params.M - 1, config.orthogonality_guard)
    approx = project(params, samples, sys)

    residual = np.asarray(samples, dtype=complex) - np.asarray(
        lattice_values(approx), dtype=complex
    )
    frame = pd.DataFrame(
        {
            "j": np.arange(1, params.N + 1),
            "x": lattice_nodes(params).nodes_x,
            "re_E": residual.real,
            "im_E": residual.imag,
            "abs_E": np.abs(residual),
        },
        columns=RESIDUAL_COLUMNS,
    )
    metadata = {
        "command": Command.PROJECT.value,
        **params.describe(),
        "max_abs_E": float(frame["abs_E"].max()),
        "residual_norm2": residual_norm(approx, samples),
        "sample_residual2": sample_residual(approx, samples),
    }

    # both outputs are rendered only after every computation has succeeded
    if args.approx:
        save_file(args.approx, approx_to_json(approx))
    write_table(
        frame, config.output_path, config.fmt.value, metadata, config.float_format
    )
    return EXIT_OK
