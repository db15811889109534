from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .assignment import WorkCounter
from .graphs import Graph
from .spectra import Spectrum, spectrum

ALPHA_LOW = 1e-6
ALPHA_HIGH = 10.0


class Variant(str, enum.Enum):
    LINEAR_FREE = "linear"
    LINEAR_FIXED = "linear-fixed"
    TSGDD = "tsgdd"
    EXP_FREE = "exp"
    EXP_FIXED = "exp-fixed"
    HAMMOND = "hammond"


@dataclass
class DistanceResult:
    """A distance value (the square root of the optimized objective) and its witness.

    ``matching`` maps ascending eigen-indices of the smaller graph to those of
    the larger one; ``swapped`` is True when the operands were reordered so
    the smaller graph comes first.
    """
    value: float
    variant: Variant
    alpha_star: float | None = None
    t_star: float | None = None
    matching: tuple | None = None
    swapped: bool = False
    work: WorkCounter = field(default_factory=WorkCounter)

    def __post_init__(self):
        if self.value < 0 or math.isnan(self.value):
            raise ValueError(f"distance must be nonnegative, got {self.value}")

    @property
    def squared(self) -> float:
        return self.value ** 2

    def to_dict(self, squared: bool = False) -> dict:
        return {
            "value": self.squared if squared else self.value,
            "squared": squared,
            "t_star": self.t_star,
            "alpha_star": self.alpha_star,
            "matching": list(self.matching) if self.matching is not None else None,
            "variant": self.variant.value,
            "swapped": self.swapped,
            "work": self.work.as_dict(),
        }


def ordered_spectra(g1, g2) -> tuple[np.ndarray, np.ndarray, bool]:
    """Spectra with the smaller operand first.

    Equal sizes are put in a canonical order (lexicographic on the spectra) so
    that d(g1, g2) and d(g2, g1) run the identical computation.
    """
    s1, s2 = spectrum(g1), spectrum(g2)
    if s1.n == 0 or s2.n == 0:
        raise ValueError("graphs must have at least one vertex")
    key1 = (s1.n, tuple(s1.values))
    key2 = (s2.n, tuple(s2.values))
    if key1 <= key2:
        return s1.values, s2.values, False
    return s2.values, s1.values, True


def graph_size(g) -> int:
    if isinstance(g, Graph):
        return g.n
    if isinstance(g, Spectrum):
        return g.n
    return len(g)
