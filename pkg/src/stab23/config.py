"""Run configuration shared by the CLI subcommands."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


def parse_level(text) -> Fraction:
    s = str(text).strip()
    lv = Fraction(s) if "/" in s else Fraction(str(float(s))) if "." in s else Fraction(int(s))
    if lv.denominator not in (1, 2) or lv < Fraction(1, 2):
        raise ValueError(f"level must be a half-integer >= 1/2: {text}")
    return lv


def parse_stems(text: str) -> tuple:
    lo, _, hi = str(text).partition("..")
    lo, hi = int(lo), int(hi)
    if hi < lo:
        raise ValueError("empty stem window")
    return lo, hi


FORMATS = ("json", "text", "svg")


@dataclass
class RunConfig:
    precision: int = 8
    modulus: int = 1
    level: Fraction = Fraction(2)
    max_degree: int = 48
    stems: tuple = (-1, 73)
    out_dir: Path = field(default_factory=lambda: Path("out"))
    fmt: str = "json"

    def validate(self) -> None:
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if Fraction(self.precision) < self.level + 2:
            raise ValueError("need precision >= level + 2")
        if self.modulus < 1:
            raise ValueError("modulus exponent must be >= 1")
        if self.max_degree < 0 or self.stems[1] < self.stems[0]:
            raise ValueError("windows must be nonempty")
