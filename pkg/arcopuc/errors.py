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

"""Exception hierarchy shared by the numerical modules and the command line."""

from __future__ import annotations

EXIT_OK = 0
EXIT_EVIDENCE_MISMATCH = 1
EXIT_NO_BAND = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_PRECISION = 4
EXIT_DATA = 5
EXIT_USAGE = 64
EXIT_PARSE = 65


class ArcOpucError(Exception):
    """Base exception class for all library errors."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, cause: Exception | None = None) -> None:
        """Initialize the base exception.

        Args:
            message: Error message
            cause: Underlying exception that caused this error
        """
        super().__init__(message)
        self.message = message
        self.cause = cause

    def __str__(self) -> str:
        if self.cause:
            return f"{self.message} (caused by: {str(self.cause)})"
        return self.message


class ParameterError(ArcOpucError):
    """Inconsistent problem parameters."""


class NOddRequired(ParameterError):
    pass


class NonIntegerM(ParameterError):
    pass


class DimensionOrder(ParameterError):
    pass


class PeriodTooSmall(ParameterError):
    pass


class DegreeTooLarge(ParameterError):
    pass


class DivideByZero(ArcOpucError, ZeroDivisionError):
    pass


class DomainError(ArcOpucError, ValueError):
    pass


class PrecisionError(ArcOpucError):
    """Working precision no longer supports the requested result."""

    exit_code = EXIT_PRECISION


class LostOrthogonality(PrecisionError):
    def __init__(self, message: str, degree: int, cause: Exception | None = None) -> None:
        super().__init__(message, cause)
        self.degree = degree


class FormMismatch(PrecisionError):
    def __init__(
        self,
        message: str,
        relative_gap: float,
        cause: Exception | None = None,
    ) -> None:
        super().__init__(message, cause)
        self.relative_gap = relative_gap


class NoBand(ArcOpucError):
    exit_code = EXIT_NO_BAND


class OutOfDomain(ArcOpucError, ValueError):
    pass


class OnCut(ArcOpucError, ValueError):
    pass


class QuadratureFailure(ArcOpucError):
    exit_code = EXIT_NUMERICAL_FAILURE

    def __init__(
        self,
        message: str,
        abs_error: float | None = None,
        cause: Exception | None = None,
    ) -> None:
        super().__init__(message, cause)
        self.abs_error = abs_error


class NoRoot(ArcOpucError):
    exit_code = EXIT_NUMERICAL_FAILURE


class BracketFailure(ArcOpucError):
    exit_code = EXIT_NUMERICAL_FAILURE


class OutsideRegime(ArcOpucError):
    pass


class OutsideDisc(ArcOpucError):
    pass


class EnvelopeExceeded(ArcOpucError):
    pass


class SampleCountMismatch(ArcOpucError):
    exit_code = EXIT_DATA


class NoEnvelope(ArcOpucError):
    exit_code = EXIT_DATA


class CsvParseError(ArcOpucError):
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line: int, cause: Exception | None = None) -> None:
        super().__init__(f"line {line}: {message}", cause)
        self.line = line
