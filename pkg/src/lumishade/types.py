"""Shared lightweight types used across the pipeline."""

from __future__ import annotations

import enum
from typing import NamedTuple

Rgb8 = tuple[int, int, int]


class LabColor(NamedTuple):
    """CIELAB color, D65 white point, 2-degree observer."""

    l: float
    a: float
    b: float


class Label(enum.Enum):
    """Illumination quality verdict. Serialized lowercase in all JSON."""

    GOOD = "good"
    BAD = "bad"

    @classmethod
    def parse(cls, value: str) -> "Label":
        return cls(value.strip().lower())

    def __str__(self) -> str:
        return self.value
