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

import math
import re
from fractions import Fraction

_PI_PATTERN = re.compile(
    r"^\s*(?P<num>[0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?)?\s*\*?\s*pi"
    r"\s*(?:/\s*(?P<den>[0-9]+))?\s*$",
    re.IGNORECASE,
)


def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q", an integer or a finite decimal exactly.

    Raises:
        ValueError: the text is not an exact rational literal
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"not an exact rational: {text!r}") from err
    return value


def parse_pi_multiple(text: str) -> Fraction:
    """
    Parse an angle written as a rational multiple of pi, e.g. "5pi/6", "pi", "3/4 pi".

    Returns:
        r such that the angle is r*pi
    """
    match = _PI_PATTERN.match(text)
    if match is None:
        raise ValueError(f"expected a rational multiple of pi like '5pi/6', got {text!r}")
    num = Fraction(match.group("num")) if match.group("num") else Fraction(1)
    den = int(match.group("den")) if match.group("den") else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return num / den


def pi_multiple_to_radians(r: Fraction) -> float:
    return float(r) * math.pi
