"""Objectives and winner results shared by the rules and the solvers."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import islice
from math import comb
from typing import Iterable, Iterator, Sequence

from .model import CandidateSet, bits

DEFAULT_CAP = 1000


class CapacityError(RuntimeError):
    """Instance is too large for the exhaustive search path."""


@dataclass(frozen=True)
class Objective:
    """Which winning committees to report.

    ``smallest``/``largest`` keep the co-winners of extremal size, ``any``
    keeps a single canonical winner and ``all`` lists every winner. All
    enumerations stop after ``cap`` committees and set ``tie_truncated``.
    """

    kind: str = "smallest"
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.kind not in ("smallest", "largest", "any", "all"):
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.cap < 1:
            raise ValueError("cap must be positive")

    @classmethod
    def smallest(cls, cap: int = DEFAULT_CAP):
        return cls("smallest", cap)

    @classmethod
    def largest(cls, cap: int = DEFAULT_CAP):
        return cls("largest", cap)

    @classmethod
    def any(cls):
        return cls("any", 1)

    @classmethod
    def all_capped(cls, cap: int = DEFAULT_CAP):
        return cls("all", cap)


@dataclass(frozen=True)
class WinnerResult:
    """Winning committees of one rule under one objective.

    ``committees`` holds the reported co-winners in (size, mask) order; an
    empty winning committee is listed explicitly as the empty set.
    ``count`` is the full number of co-winners under the objective when it
    is known, even if the listing was truncated. ``degenerate`` marks
    conventions outside the rule's definition (e.g. FirstMajority when no
    candidate has any approval).
    """

    committees: tuple[CandidateSet, ...]
    score: object
    canonical: CandidateSet
    tie_truncated: bool = False
    count: int | None = None
    degenerate: bool = False

    @property
    def size(self) -> int:
        return len(self.canonical)

    @property
    def masks(self) -> list[int]:
        return [c.mask for c in self.committees]


@dataclass(frozen=True)
class Block:
    """The committees ``base | X`` for every ``pick``-element subset X of ``band``."""

    base: int
    band: int = 0
    pick: int = 0

    @property
    def size(self) -> int:
        return self.base.bit_count() + self.pick

    @property
    def count(self) -> int:
        return comb(self.band.bit_count(), self.pick)

    @property
    def canonical(self) -> int:
        return self.base | sum(1 << c for c in bits(self.band)[: self.pick])

    def __iter__(self) -> Iterator[int]:
        for combo in _ascending(bits(self.band), self.pick):
            yield self.base | sum(1 << c for c in combo)


def _ascending(members: list[int], pick: int) -> Iterator[tuple[int, ...]]:
    """``pick``-subsets of ``members`` (ascending indices) in ascending mask order.

    Lazy best-first walk: bumping one index of a combination always yields
    a larger mask, so a min-heap pops them in order.
    """
    if pick > len(members):
        return
    start = tuple(range(pick))
    heap = [(sum(1 << members[i] for i in start), start)]
    seen = {start}
    while heap:
        _, idx = heapq.heappop(heap)
        yield tuple(members[i] for i in idx)
        for j in range(pick):
            nxt = idx[j] + 1
            if nxt < len(members) and (j == pick - 1 or nxt < idx[j + 1]):
                cand = idx[:j] + (nxt,) + idx[j + 1:]
                if cand not in seen:
                    seen.add(cand)
                    heapq.heappush(heap, (sum(1 << members[i] for i in cand), cand))


class BlockFamily:
    """A winner family given as a union of disjoint blocks."""

    def __init__(self, blocks: Sequence[Block], complete: bool = True):
        if not blocks:
            raise ValueError("a winner family cannot be empty")
        self.blocks = list(blocks)
        self.complete = complete

    @classmethod
    def of(cls, masks: Iterable[int], complete: bool = True) -> BlockFamily:
        return cls([Block(mk) for mk in masks], complete)

    def sizes(self) -> list[int]:
        return sorted({b.size for b in self.blocks})

    def canonical(self, size: int) -> int:
        return min(b.canonical for b in self.blocks if b.size == size)

    def count(self, size: int) -> int | None:
        if not self.complete:
            return None
        return sum(b.count for b in self.blocks if b.size == size)

    def enumerate(self, sizes: set[int], cap: int) -> list[int]:
        streams = [_tagged(b) for b in self.blocks if b.size in sizes]
        return [mk for _, mk in islice(heapq.merge(*streams), cap)]


def _tagged(block: Block) -> Iterator[tuple[int, int]]:
    size = block.size
    for mk in block:
        yield size, mk


def resolve(family, score, objective: Objective, m: int, *,
            preferred: int | None = None, degenerate: bool = False) -> WinnerResult:
    """Select and list the co-winners a family holds under ``objective``.

    ``family`` provides ``sizes()``, ``canonical(size)``, ``count(size)``
    (None when unknown) and ``enumerate(sizes, cap)`` in (size, mask) order.
    ``preferred`` overrides the canonical winner for ``any`` (GreedyMRC uses
    its index tie-break path).
    """
    sizes = family.sizes()
    kind = objective.kind
    if kind == "largest":
        chosen = [sizes[-1]]
    elif kind == "all":
        chosen = sizes
    else:
        chosen = [sizes[0]]
    canonical = family.canonical(chosen[0]) if kind != "largest" else family.canonical(sizes[-1])
    counts = [family.count(k) for k in sizes]
    known = all(c is not None for c in counts)
    family_total = sum(counts) if known else None

    if kind == "any":
        if preferred is not None:
            canonical = preferred
        listed = [canonical]
        total = 1
        truncated = family_total != 1
    else:
        parts = [family.count(k) for k in chosen]
        total = sum(parts) if all(c is not None for c in parts) else None
        listed = family.enumerate(set(chosen), objective.cap)
        truncated = total is None or total > len(listed)
    return WinnerResult(
        committees=tuple(CandidateSet(mk, m) for mk in listed),
        score=score,
        canonical=CandidateSet(canonical, m),
        tie_truncated=truncated,
        count=total,
        degenerate=degenerate,
    )
