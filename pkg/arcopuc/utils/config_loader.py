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

import configparser
import os
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any

from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

Rules = dict[str, dict[str, dict[str, Any]]]


class ConfigValidationError(Exception):
    """Raised with every collected problem once validation has run."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("\n".join(errors))


class ConfigLoader:
    """
    INI loader that converts and validates options against a rule table.

    A rule is a dict with any of ``type``, ``required``, ``default``, ``min``, ``max``,
    ``allowed``, ``custom`` and ``env``. ``env`` names an environment variable whose
    value, when set, replaces the file value before conversion.
    """

    def __init__(self, validation_rules: Rules | None = None, auto_validate: bool = True):
        self.validation_rules = validation_rules or {}
        self.auto_validate = auto_validate
        self.raw_config: dict[str, dict[str, str]] = {}
        self.typed_config: dict[str, dict[str, Any]] = {}
        self.errors: list[str] = []

    def load(
        self, file_path: str | Path | None, environ: Mapping[str, str] | None = None
    ):
        """
        Read ``file_path`` (if given), apply environment overrides and convert.

        Sections missing from the file are filled entirely from rule defaults, so a
        run without any config file uses the built-in tolerances.

        Args:
            file_path: INI file, or None for defaults only
            environ: Environment mapping, ``os.environ`` when omitted

        Raises:
            FileNotFoundError: ``file_path`` was given but does not exist
            ConfigValidationError: conversion or validation failed
        """
        parser = configparser.ConfigParser()
        if file_path is not None:
            path = Path(file_path)
            if not path.is_file():
                raise FileNotFoundError(f"Configuration file not found: {path}")
            parser.read(path, encoding="utf-8")
            LOG.debug(f"Loaded configuration from {path}")

        self.raw_config = {
            section: dict(parser.items(section)) for section in parser.sections()
        }
        self._apply_env(os.environ if environ is None else environ)
        self._convert_types()

        if self.auto_validate:
            self.full_validate()

    def get(self, section: str, option: str, default: Any = None) -> Any:
        if not self.validation_rules:
            return self.raw_config.get(section, {}).get(option, default)
        return self.typed_config.get(section, {}).get(option, default)

    def section(self, section: str) -> dict[str, Any]:
        """Typed options of one section (a copy)."""
        return dict(self.typed_config.get(section, {}))

    def _apply_env(self, environ: Mapping[str, str]) -> None:
        for section, options_rules in self.validation_rules.items():
            for option, rules in options_rules.items():
                var = rules.get("env")
                if var and environ.get(var):
                    LOG.info(f"[{section}] {option} overridden by ${var}={environ[var]}")
                    self.raw_config.setdefault(section, {})[option] = environ[var]

    def _convert_types(self) -> None:
        self.typed_config = {}
        self.errors = []

        for section, options_rules in self.validation_rules.items():
            section_data = self.raw_config.get(section, {})
            typed = self.typed_config.setdefault(section, {})

            for option, rules in options_rules.items():
                value_str = section_data.get(option)
                target_type = rules.get("type", str)

                if value_str is None:
                    if "default" not in rules:
                        continue
                    default_val = rules["default"]
                    if not isinstance(default_val, target_type):
                        self.errors.append(
                            f"[{section}] {option} default value type mismatch, "
                            f"expected {target_type.__name__}, "
                            f"actual {type(default_val).__name__}"
                        )
                        continue
                    typed[option] = default_val
                    continue

                try:
                    typed[option] = self._convert_type(value_str, target_type)
                except (ValueError, TypeError) as e:
                    self.errors.append(f"[{section}] {option} {str(e)}")
                    if "default" in rules:
                        typed[option] = rules["default"]

    def full_validate(self) -> None:
        """
        Check required options, ranges, allowed values and custom predicates.

        Raises:
            ConfigValidationError: one or more checks failed
        """
        new_errors = []

        for section, options_rules in self.validation_rules.items():
            section_data = self.raw_config.get(section, {})
            typed_section = self.typed_config.get(section, {})

            for option, rules in options_rules.items():
                value = typed_section.get(option)

                if rules.get("required", False) and section_data.get(option) is None:
                    new_errors.append(f"[{section}] {option} is required")

                if value is None:
                    continue

                if isinstance(value, int | float) and not isinstance(value, bool):
                    if "min" in rules and value < rules["min"]:
                        new_errors.append(
                            f"[{section}] {option} value {value} "
                            f"is less than minimum {rules['min']}"
                        )
                    if "max" in rules and value > rules["max"]:
                        new_errors.append(
                            f"[{section}] {option} value {value} "
                            f"is greater than maximum {rules['max']}"
                        )

                if "allowed" in rules and value not in rules["allowed"]:
                    allowed = ", ".join(map(str, rules["allowed"]))
                    new_errors.append(
                        f"[{section}] {option} value {value} "
                        f"is not in allowed range: {allowed}"
                    )

                if "custom" in rules:
                    try:
                        custom_validator: Callable[[Any], bool] = rules["custom"]
                        if not custom_validator(value):
                            new_errors.append(
                                f"[{section}] {option} {value} failed custom validation"
                            )
                    except Exception as e:
                        new_errors.append(
                            f"[{section}] {option} validation execution error: {str(e)}"
                        )

        all_errors = self.errors + new_errors
        if all_errors:
            raise ConfigValidationError(all_errors)

    def _convert_type(self, value: str, target_type: type) -> Any:
        value = value.strip()
        if not value:
            raise ValueError("Value cannot be empty")

        if target_type is bool:
            return self._str_to_bool(value)

        try:
            return target_type(value)
        except ValueError as err:
            raise ValueError(
                f"Cannot convert '{value}' to {target_type.__name__} type"
            ) from err

    @staticmethod
    def _str_to_bool(value: str) -> bool:
        lower_val = value.lower()
        if lower_val in ("true", "yes", "on", "1"):
            return True
        if lower_val in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"Unrecognized boolean value: {value}")
