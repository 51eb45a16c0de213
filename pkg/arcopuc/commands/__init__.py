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

"""Run configuration shared by the subcommands: parameters, grids and outputs."""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from arcopuc.asymptotics.regimes import RegimeConfig
from arcopuc.equilibrium.measure import EquilibriumData
from arcopuc.equilibrium.quadrature import QuadratureSpec
from arcopuc.errors import ParameterError
from arcopuc.lattice.params import ExtensionParams, lattice_nodes
from arcopuc.utils.config_loader import ConfigLoader
from arcopuc.utils.rational import (
    parse_pi_multiple,
    parse_rational,
    pi_multiple_to_radians,
)

DEFAULT_GRID_COUNT = 41


class Command(Enum):
    EQM = "eqm"
    COMPARE = "compare"
    CONJECTURE = "conjecture"
    PROJECT = "project"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class GridName(Enum):
    BAND = "band"
    SATURATED = "saturated"
    FULL = "full"


@dataclass(frozen=True)
class GridSpec:
    """Either a named region of [0, alpha] or an explicit start:stop:count range."""

    name: GridName | None = GridName.FULL
    start: float = 0.0
    stop: float = 0.0
    count: int = DEFAULT_GRID_COUNT

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ParameterError(f"grid needs at least 2 points, got {self.count}")


def _angle(text: str) -> float:
    if "pi" in text.lower():
        return pi_multiple_to_radians(parse_pi_multiple(text))
    return float(parse_rational(text))


def parse_grid(text: str) -> GridSpec:
    """
    argparse type for ``--grid``: a region name or ``start:stop:count``.

    Endpoints may be rational multiples of pi, e.g. ``0:5pi/6:51``.
    """
    try:
        return GridSpec(name=GridName(text.lower()))
    except ValueError:
        pass
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be one of {[g.value for g in GridName]} or start:stop:count"
        )
    try:
        start, stop, count = _angle(parts[0]), _angle(parts[1]), int(parts[2])
        return GridSpec(name=None, start=start, stop=stop, count=count)
    except (ValueError, ParameterError) as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def grid_angles(
    grid: GridSpec, eq: EquilibriumData, params: ExtensionParams | None = None
) -> list[float]:
    """
    Angles of the grid.

    With ``params`` the saturated grid is every lattice node in (beta, alpha] and
    the midpoint after it, so node-vanishing shows up in the table.
    """
    if grid.name is None:
        return list(np.linspace(grid.start, grid.stop, grid.count))
    if grid.name is GridName.BAND:
        return list(np.linspace(0.0, eq.beta, grid.count, endpoint=False))
    if grid.name is GridName.FULL:
        return list(np.linspace(0.0, eq.alpha, grid.count))
    if params is None:
        return list(np.linspace(eq.beta, eq.alpha, grid.count + 1)[1:])
    lattice = lattice_nodes(params)
    step = math.pi / params.m
    angles = []
    for theta in lattice.angles:
        if eq.beta < theta <= eq.alpha:
            angles.append(theta)
            if theta + step < eq.alpha:
                angles.append(theta + step)
    return angles


@dataclass(frozen=True)
class RunConfig:
    """Everything one subcommand run needs, resolved from flags and the INI file."""

    command: Command
    quadrature: QuadratureSpec
    regimes: RegimeConfig
    grid: GridSpec
    output_path: str
    fmt: OutputFormat
    float_format: str
    workers: int
    form_mismatch_tol: float
    orthogonality_guard: float


def add_output_args(
    parser: argparse.ArgumentParser, grid_default: str | None = "full"
) -> None:
    """--out, --format and --tol; --grid as well unless ``grid_default`` is None."""
    if grid_default is not None:
        parser.add_argument(
            "--grid",
            type=parse_grid,
            default=parse_grid(grid_default),
            help=f"Evaluation grid: band, saturated, full or start:stop:count "
            f"(default: {grid_default})",
        )
    parser.add_argument(
        "--out", type=str, default="-", help="Output file, '-' for stdout (default: -)"
    )
    parser.add_argument(
        "--format",
        type=str,
        default=OutputFormat.CSV.value,
        choices=[f.value for f in OutputFormat],
        help="Table format (default: csv)",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Quadrature tolerance, overrides abs_tol and rel_tol",
    )


def add_problem_args(parser: argparse.ArgumentParser, sampled: bool) -> None:
    """--alpha/--b and --xi/--xi-tilde; with ``sampled`` also --M and --N."""
    period = parser.add_mutually_exclusive_group(required=True)
    period.add_argument("--b", type=parse_rational, help="Extension period b = p/q > 1")
    period.add_argument(
        "--alpha", type=parse_pi_multiple, help="Arc half-angle as a multiple of pi"
    )
    if sampled:
        parser.add_argument("--M", type=int, required=True, help="Space dimension")
        parser.add_argument("--N", type=int, required=True, help="Odd sample count")
        return
    density = parser.add_mutually_exclusive_group(required=True)
    density.add_argument("--xi", type=parse_rational, help="Sampling ratio xi = m/M")
    density.add_argument(
        "--xi-tilde", type=parse_rational, help="Sampling ratio N/M, xi = b * xi_tilde"
    )


def resolve_period(args: argparse.Namespace) -> Fraction:
    """b from --b, or from --alpha = r*pi as b = 1/r."""
    if getattr(args, "b", None) is not None:
        return Fraction(args.b)
    r = Fraction(args.alpha)
    if r <= 0:
        raise ParameterError(f"arc half-angle must be positive, got {r}pi")
    return 1 / r


def resolve_alpha_xi(args: argparse.Namespace) -> tuple[float, float]:
    b = resolve_period(args)
    alpha = math.pi / float(b)
    if getattr(args, "xi", None) is not None:
        return alpha, float(args.xi)
    return alpha, float(b * Fraction(args.xi_tilde))


def build_run_config(
    command: Command, args: argparse.Namespace, config: ConfigLoader
) -> RunConfig:
    quad = config.section("QUADRATURE")
    spec = QuadratureSpec(
        abs_tol=quad["abs_tol"],
        rel_tol=quad["rel_tol"],
        max_subdivisions=quad["max_subdivisions"],
        retry_attempts=quad["retry_attempts"],
    )
    tol = getattr(args, "tol", None)
    if tol is not None:
        if not tol > 0:
            raise ParameterError(f"--tol must be positive, got {tol}")
        spec = spec.with_tolerance(tol)
    asym = config.section("ASYMPTOTICS")
    try:
        regimes = RegimeConfig(
            band_margin=asym["band_margin"],
            turning_radius=asym["turning_radius"],
            edge_nodes=asym["edge_nodes"],
        )
    except ValueError as e:
        raise ParameterError(str(e), cause=e) from e
    precision = config.section("PRECISION")
    return RunConfig(
        command=command,
        quadrature=spec,
        regimes=regimes,
        grid=getattr(args, "grid", GridSpec()),
        output_path=getattr(args, "out", "-"),
        fmt=OutputFormat(getattr(args, "format", OutputFormat.CSV.value)),
        float_format=config.get("OUTPUT", "float_format"),
        workers=config.get("RUN", "workers"),
        form_mismatch_tol=precision["form_mismatch_tol"],
        orthogonality_guard=precision["orthogonality_guard"],
    )
