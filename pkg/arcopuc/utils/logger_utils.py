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

import logging
import sys
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import TypeVar

from tenacity import RetryCallState
from tqdm import tqdm

T = TypeVar("T")


class TqdmCompatibleHandler(logging.StreamHandler):
    """Stream handler that clears and redraws an active tqdm bar around each record."""

    def __init__(self, stream=None):
        super().__init__(stream)
        self._tqdm_instance: tqdm | None = None

    def set_tqdm(self, tqdm_instance: tqdm | None) -> None:
        self._tqdm_instance = tqdm_instance

    def emit(self, record):
        try:
            if self._tqdm_instance:
                self._tqdm_instance.clear()

            msg = self.format(record)
            stream = self.stream
            stream.write(msg + self.terminator)
            stream.flush()

            if self._tqdm_instance:
                self._tqdm_instance.refresh()
        except Exception:
            self.handleError(record)


class Logger:
    """Process-wide logging setup for the library and the command line driver."""

    _initialized = False
    _tqdm_handler: TqdmCompatibleHandler | None = None

    @classmethod
    def initialize(cls, log_path: Path | None, log_level: str) -> None:
        """
        Configure the root logger once.

        Console output goes to stderr so that tables written to stdout stay clean.

        Args:
            log_path: Optional log file; ``None`` logs to the console only
            log_level: Logging level name (e.g. "INFO", "DEBUG")
        """
        if cls._initialized:
            return

        level = getattr(logging, log_level.upper(), logging.INFO)
        cls._tqdm_handler = TqdmCompatibleHandler(sys.stderr)

        handlers: list[logging.Handler] = [cls._tqdm_handler]
        if log_path is not None:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_path, encoding="utf-8"))

        fmt = (
            "%(asctime)s [%(levelname)s] "
            "%(filename)s:%(lineno)d "
            "[%(funcName)s] %(message)s"
        )
        logging.basicConfig(level=level, format=fmt, handlers=handlers)
        cls._initialized = True

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        return logging.getLogger(name)

    @classmethod
    def set_tqdm_instance(cls, tqdm_instance: tqdm | None) -> None:
        if cls._tqdm_handler:
            cls._tqdm_handler.set_tqdm(tqdm_instance)

    @classmethod
    def progress(
        cls, items: Iterable[T], desc: str, total: int | None = None
    ) -> Iterator[T]:
        """
        Iterate with a tqdm bar that cooperates with the console handler.

        The bar is disabled when stderr is not a terminal, which keeps CI logs and
        redirected runs free of carriage-return noise.

        Args:
            items: Items to iterate over
            desc: Bar label
            total: Item count when ``items`` has no length

        Yields:
            The items of ``items`` in order
        """
        bar = tqdm(
            items,
            desc=desc,
            total=total,
            file=sys.stderr,
            disable=not sys.stderr.isatty(),
        )
        cls.set_tqdm_instance(bar)
        try:
            yield from bar
        finally:
            bar.close()
            cls.set_tqdm_instance(None)

    @staticmethod
    def log_before(retry_state: RetryCallState) -> None:
        """
        Log information before a retry attempt.

        Args:
            retry_state: Retry call state information
        """
        attempt = retry_state.attempt_number
        if attempt > 1:
            logger = Logger.get_logger("retry")
            fn = retry_state.fn
            name = fn.__name__ if fn is not None else "block"
            exc = retry_state.outcome.exception() if retry_state.outcome else None
            logger.warning(f"Retrying {name} (attempt {attempt})... Reason: {exc}")
