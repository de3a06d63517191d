"""Committee scores for every rule family.

Optimizers and the brute-force test oracle both evaluate committees through
these functions, so they are written for clarity rather than speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .model import CandidateSet, Election, as_mask

Committee = Union[CandidateSet, int]
Rational = Union[Fraction, int, float, str]


def to_fraction(x: Rational) -> Fraction:
    """Parse ``"2/3"``, ``"0.5"``, ints and floats into an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- (f, g) functions --------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Non-decreasing N -> N with value 0 at 0.

    ``f(x) = slope * x + v`` where ``v`` is the value of the largest
    breakpoint threshold ``<= x`` (0 if none). Pure step functions have
    ``slope == 0``; the linear presets have no breakpoints.
    """

    breakpoints: tuple[tuple[int, int], ...] = ()
    slope: int = 0

    def __post_init__(self):
        bps = tuple(sorted((int(t), int(v)) for t, v in self.breakpoints))
        object.__setattr__(self, "breakpoints", bps)
        if self.slope < 0:
            raise ValueError("slope must be non-negative")
        prev = 0
        for t, v in bps:
            if t < 0 or v < 0:
                raise ValueError("thresholds and values must be non-negative")
            if t == 0 and v != 0:
                raise ValueError("f(0) must be 0")
            if v < prev:
                raise ValueError("step function must be non-decreasing")
            prev = v
        if len({t for t, _ in bps}) != len(bps):
            raise ValueError("duplicate threshold")

    @classmethod
    def linear(cls, a: int) -> StepFunction:
        return cls((), a)

    @property
    def is_linear(self) -> bool:
        return not any(v for _, v in self.breakpoints)

    def __call__(self, x: int) -> int:
        v = 0
        for t, val in self.breakpoints:
            if t > x:
                break
            v = val
        return self.slope * x + v

    def to_json(self) -> dict:
        doc: dict = {}
        if self.slope:
            doc["slope"] = self.slope
        if self.breakpoints:
            doc["steps"] = [list(bp) for bp in self.breakpoints]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> StepFunction:
        return cls(tuple(tuple(bp) for bp in doc.get("steps", ())), int(doc.get("slope", 0)))


ZERO = StepFunction()
T1 = StepFunction(((1, 1),))


@dataclass(frozen=True)
class GnavSpec:
    f: StepFunction
    g: StepFunction
    name: str | None = None

    @property
    def is_linear(self) -> bool:
        return self.f.is_linear and self.g.is_linear

    def to_json(self):
        if self.name is not None:
            return self.name
        return {"f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, doc) -> GnavSpec:
        if isinstance(doc, str):
            return gnav_preset(doc)
        return cls(StepFunction.from_json(doc["f"]), StepFunction.from_json(doc["g"]))


def LINEAR(a: int, b: int) -> GnavSpec:
    return GnavSpec(StepFunction.linear(a), StepFunction.linear(b), f"linear:{a}:{b}")


T1_ZERO = GnavSpec(T1, ZERO, "t1-zero")
ZERO_T1 = GnavSpec(ZERO, T1, "zero-t1")
X3C_HARD = GnavSpec(StepFunction(((1, 4),)), StepFunction(((1, 1), (2, 2))), "x3c-hard")

_PRESETS = {"t1-zero": T1_ZERO, "zero-t1": ZERO_T1, "x3c-hard": X3C_HARD,
            "nav": LINEAR(1, 1), "2/3-nav": LINEAR(1, 2)}


def gnav_preset(name: str) -> GnavSpec:
    key = name.strip().lower()
    if key in _PRESETS:
        return _PRESETS[key]
    if key.startswith("linear:"):
        parts = key.split(":")[1:]
        if len(parts) == 2:
            return LINEAR(int(parts[0]), int(parts[1]))
    raise ValueError(f"unknown gnav preset {name!r}")


# -- threshold functions -----------------------------------------------------


@dataclass(frozen=True)
class ThresholdSpec:
    """t(k): approved members a voter needs in a size-k committee."""

    kind: str  # unit | maj | full | linear
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("unit", "maj", "full", "linear"):
            raise ValueError(f"unknown threshold kind {self.kind!r}")
        alpha = to_fraction(self.alpha)
        if self.kind == "linear" and not 0 <= alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def unit(cls):
        return cls("unit")

    @classmethod
    def majority(cls):
        return cls("maj")

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def linear(cls, alpha: Rational):
        return cls("linear", to_fraction(alpha))

    @property
    def is_linear(self) -> bool:
        return self.kind != "unit"

    def __call__(self, k: int) -> Fraction:
        if self.kind == "unit":
            return Fraction(1 if k >= 1 else 0)
        if self.kind == "maj":
            return Fraction(k, 2)
        if self.kind == "full":
            return Fraction(k)
        return self.alpha * k

    def required(self, k: int) -> int:
        """Smallest integer count meeting t(k)."""
        return math.ceil(self(k))

    @property
    def label(self) -> str:
        if self.kind == "linear":
            return f"linear:{fraction_str(self.alpha)}"
        return self.kind

    def to_json(self):
        if self.kind == "linear":
            return {"kind": "linear", "alpha": fraction_str(self.alpha)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, doc) -> ThresholdSpec:
        if isinstance(doc, str):
            return parse_threshold(doc)
        return cls(doc["kind"], to_fraction(doc.get("alpha", 0)))


def parse_threshold(text: str) -> ThresholdSpec:
    text = text.strip().lower()
    if text in ("unit", "maj", "full"):
        return ThresholdSpec(text)
    if text == "majority":
        return ThresholdSpec("maj")
    if text.startswith("linear:"):
        return ThresholdSpec.linear(text.split(":", 1)[1])
    raise ValueError(f"unknown threshold {text!r}")


# -- scores ------------------------------------------------------------------


def nav_score(e: Election, S: Committee) -> int:
    s = as_mask(S)
    return sum((s & v).bit_count() - (s & ~v).bit_count() for v in e.ballots)


def gnav_score(e: Election, spec: GnavSpec, S: Committee) -> int:
    s = as_mask(S)
    return sum(spec.f((s & v).bit_count()) - spec.g((s & ~v).bit_count()) for v in e.ballots)


def _size_checked(S: Committee) -> tuple[int, int]:
    s = as_mask(S)
    k = s.bit_count()
    if k == 0:
        raise ValueError("score is undefined for the empty committee")
    return s, k


def qcsa_score(e: Election, q: Rational, S: Committee) -> float:
    s, k = _size_checked(S)
    hits = sum((s & v).bit_count() for v in e.ballots)
    return hits / k ** float(q)


def qncsa_score(e: Election, q: Rational, S: Committee) -> float:
    s, k = _size_checked(S)
    net = sum((s & v).bit_count() - (s & ~v).bit_count() for v in e.ballots)
    return net / k ** float(q)


def threshold_satisfies(ballot: Committee, S: Committee, t: ThresholdSpec) -> bool:
    s = as_mask(S)
    return (as_mask(ballot) & s).bit_count() >= t(s.bit_count())


def threshold_score(e: Election, S: Committee, t: ThresholdSpec) -> int:
    s = as_mask(S)
    if not s:
        raise ValueError("threshold rules only score nonempty committees")
    return sum(threshold_satisfies(v, s, t) for v in e.ballots)
