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

import argparse
import logging
import sys
from collections.abc import Sequence
from types import ModuleType

from arcopuc import basic_init_log, basic_load_config, basic_parser
from arcopuc.commands import Command, build_run_config, compare, conjecture, eqm, project
from arcopuc.errors import EXIT_DATA, EXIT_USAGE, ArcOpucError
from arcopuc.utils.config_loader import ConfigValidationError

LOG: logging.Logger | None = None

COMMANDS: dict[Command, ModuleType] = {
    Command.EQM: eqm,
    Command.COMPARE: compare,
    Command.CONJECTURE: conjecture,
    Command.PROJECT: project,
}


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = basic_parser()
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for module in COMMANDS.values():
        module.add_parser(subparsers)
    return parser.parse_args(argv)


def run(argv: Sequence[str] | None = None) -> int:
    """
    Main entry point of the arcopuc command line.

    Args:
        argv: Arguments without the program name; sys.argv when omitted

    Returns:
        Exit code (0 for success, see arcopuc.errors for the others).
    """
    global LOG
    args = parse_args(argv)
    LOG = basic_init_log(args)

    try:
        config = basic_load_config(args)
    except (ConfigValidationError, FileNotFoundError) as e:
        LOG.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    command = Command(args.command)
    try:
        run_config = build_run_config(command, args, config)
        code = COMMANDS[command].run(args, run_config)
    except ArcOpucError as e:
        LOG.error(f"{command.value} failed ({type(e).__name__}): {e}")
        return e.exit_code
    except OSError as e:
        LOG.error(f"{command.value} failed: {e}")
        return EXIT_DATA
    LOG.info(f"{command.value} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(run())
