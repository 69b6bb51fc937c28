"""Shared value types, tolerances and exceptions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Generic, Sequence, TypeVar

import numpy as np

TAU_ABS = 1e-9
TAU_DIAM = 1e-7


@dataclass(frozen=True)
class Tolerances:
    """Absolute predicate tolerance and relative diameter-membership tolerance."""

    abs: float = TAU_ABS
    diam: float = TAU_DIAM

    def __post_init__(self):
        if not (0 <= self.abs < 1e-2) or not (0 <= self.diam < 1e-2):
            raise ValueError(f"tolerances out of range: {self}")


DEFAULT_TOL = Tolerances()


class DiametralError(Exception):
    """Base class for all library errors."""


class DegenerateInput(DiametralError, ValueError):
    pass


class InvalidPolygon(DiametralError, ValueError):
    pass


class InvalidPolytope(DiametralError, ValueError):
    pass


class IndexOutOfRange(DiametralError, IndexError):
    pass


class NotOnBoundary(DiametralError, ValueError):
    pass


class BadCardinality(DiametralError, ValueError):
    pass


class HypothesisNotMet(DiametralError):
    pass


class DegenerateAngle(DiametralError, ValueError):
    pass


class OnDiameter(DiametralError, ValueError):
    pass


class NotSymmetric(DiametralError, ValueError):
    pass


class EmptySection(DiametralError, ValueError):
    pass


class DegeneratePoints(DiametralError, ValueError):
    pass


class Disconnected(DiametralError, RuntimeError):
    pass


class NonAdjacentSequence(DiametralError, ValueError):
    pass


class BudgetExceeded(DiametralError, RuntimeError):
    pass


class DegenerateTriangle(DiametralError, ValueError):
    pass


class InvalidParams(DiametralError, ValueError):
    pass


class UnknownSuite(DiametralError, KeyError):
    pass


class InvalidSetting(DiametralError, KeyError):
    pass


class ParseError(DiametralError, ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())


class BadPointSpec(DiametralError, ValueError):
    pass


class Unplottable(DiametralError, ValueError):
    pass


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


P = TypeVar("P")


@dataclass(frozen=True)
class DiameterResult(Generic[P]):
    """Diameter length with every endpoint pair achieving it within tolerance.

    ``vertex_pairs`` holds the same pairs as sorted vertex-index tuples, which
    is what most callers compare against.
    """

    length: float
    pairs: tuple[tuple[P, P], ...]
    vertex_pairs: tuple[tuple[int, int], ...]
    tolerance: float

    @property
    def endpoint_indices(self) -> frozenset[int]:
        return frozenset(i for pair in self.vertex_pairs for i in pair)

    def has_pair(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.vertex_pairs


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of evaluating one angle-sum criterion on a point set."""

    angle_sum: float
    bound: float
    hypothesis_holds: bool
    conclusion: Verdict
    diametral_members: tuple[int, ...]
    margin: float
    angles: tuple[float, ...] = ()
    details: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def conclusion_holds(self) -> bool:
        return self.conclusion is Verdict.HOLDS

    @property
    def violation(self) -> bool:
        """A definite counterexample to the implication hypothesis => conclusion."""
        return self.hypothesis_holds and self.conclusion is Verdict.FAILS


def angle_between(a: Sequence[float], b: Sequence[float]) -> float:
    """Unsigned angle in [0, pi] between two vectors of any dimension."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[0] == 2:
        cross = a[0] * b[1] - a[1] * b[0]
    else:
        cross = float(np.linalg.norm(np.cross(a, b)))
    return abs(math.atan2(cross, float(np.dot(a, b))))


def pi_fraction(value: float, max_den: int = 24, tol: float = 1e-9) -> str | None:
    """Return a rendering like ``5π/6`` when ``value`` is a small rational multiple of pi."""
    ratio = value / math.pi
    for den in range(1, max_den + 1):
        num = round(ratio * den)
        if abs(num * math.pi / den - value) <= tol:
            if num == 0:
                return "0"
            g = math.gcd(num, den)
            num, den = num // g, den // g
            head = "π" if num == 1 else ("-π" if num == -1 else f"{num}π")
            return head if den == 1 else f"{head}/{den}"
    return None


def format_angle(value: float) -> str:
    """Radians to 12 decimals, plus a pi-multiple when one matches."""
    text = f"{value:.12f}"
    frac = pi_fraction(value)
    return f"{text} ({frac})" if frac else text
