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


import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn

from arcopuc.errors import EXIT_USAGE
from arcopuc.utils.config_loader import ConfigLoader
from arcopuc.utils.logger_utils import Logger

__version__ = "1.0.0"
__banner__ = """
                        +---------------------------------------------+
                        |                  arc-opuc                   |
                        |  - Fourier extension, orthogonal poly-      |
                        |    nomials on an arc and their asymptotics  |
                        +---------------------------------------------+
"""

MAX_SUBDIV_ENV = "ARCOPUC_MAX_SUBDIV"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def _positive(value: float) -> bool:
    return value > 0


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE instead of 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def basic_parser() -> argparse.ArgumentParser:
    """
    Parse command line arguments.
    Options shared by every subcommand; the subcommands are added by ``main``.

    Returns:
        Parser with the common options.
    """

    parser = UsageArgumentParser(
        prog="arcopuc",
        description=(
            "arc-opuc - discrete Fourier extension through orthogonal polynomials "
            "on an arc of the unit circle"
        ),
    )

    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Configuration file path (default: built-in defaults)",
    )

    parser.add_argument(
        "--log_level",
        type=str,
        default="WARNING",
        choices=LOG_LEVELS,
        help="Logging level (default: WARNING)",
    )

    parser.add_argument(
        "--log-file",
        type=str,
        default=None,
        help="Also write the log to this file",
    )

    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )

    return parser


def basic_init_log(args: argparse.Namespace) -> logging.Logger:
    """
    Initialize logging. Console output goes to stderr.

    Args:
        args: Parsed arguments object.

    Returns:
        Logger object.
    """
    log_path = Path(args.log_file) if args.log_file else None
    Logger.initialize(log_path, args.log_level)

    logger = Logger.get_logger(__name__)

    if args.log_level == "DEBUG":
        print(__banner__, file=sys.stderr)

    return logger


def basic_load_config(args: argparse.Namespace) -> ConfigLoader:
    """
    Load configuration from file.

    Args:
        args: Parsed arguments object.

    Returns:
        Configuration loader object.
    """
    validation_rules = {
        "QUADRATURE": {
            "abs_tol": {
                "type": float,
                "required": False,
                "default": 1e-13,
                "custom": _positive,
            },
            "rel_tol": {
                "type": float,
                "required": False,
                "default": 1e-12,
                "custom": _positive,
            },
            "max_subdivisions": {
                "type": int,
                "required": False,
                "default": 200,
                "min": 50,
                "env": MAX_SUBDIV_ENV,
            },
            "retry_attempts": {"type": int, "required": False, "default": 3, "min": 1},
        },
        "PRECISION": {
            "form_mismatch_tol": {
                "type": float,
                "required": False,
                "default": 1e-12,
                "custom": _positive,
            },
            "orthogonality_guard": {
                "type": float,
                "required": False,
                "default": 1.0 - 1e-14,
                "min": 0.0,
                "max": 1.0,
            },
        },
        "ASYMPTOTICS": {
            "band_margin": {
                "type": float,
                "required": False,
                "default": 3.0,
                "custom": _positive,
            },
            "turning_radius": {
                "type": float,
                "required": False,
                "default": 5.0,
                "min": 0.0,
            },
            "edge_nodes": {"type": int, "required": False, "default": 10, "min": 1},
        },
        "OUTPUT": {
            "float_format": {
                "type": str,
                "required": False,
                "default": "%.17g",
                "custom": lambda v: v.startswith("%"),
            },
        },
        "RUN": {
            "workers": {"type": int, "required": False, "default": 4, "min": 1},
        },
    }
    config = ConfigLoader(validation_rules)
    config.load(args.config)

    return config
