"""Exact search machinery shared by the rules.

* ``enumerate_committees`` - plain subset enumeration.
* ``ScanFamily`` - exhaustive optimum over all 2^m committees (compiled).
* ``exact_min_cover`` - minimum covers of the nonempty ballots, searched
  over candidate types with element branching and a counting lower bound.
* ``threshold_program_solve`` / ``threshold_best_N`` - threshold rules
  solved over per-type counts instead of concrete committees.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, islice, product
from math import comb, prod
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .model import CandidateSet, CandidateType, Election, bits, candidate_types
from .outcome import CapacityError, Objective, WinnerResult, resolve
from .scoring import ThresholdSpec

MAX_EXHAUSTIVE = 24
MAX_COUNT_VECTORS = 1 << 22


def check_capacity(m: int, limit: int = MAX_EXHAUSTIVE) -> None:
    if m > limit:
        raise CapacityError(f"exhaustive search over 2^{m} committees exceeds the limit of 2^{limit}")


# -- enumeration -------------------------------------------------------------


def enumerate_committees(m: int, max_size: int | None = None,
                         limit: int = MAX_EXHAUSTIVE) -> Iterator[int]:
    """All subsets of ``0..m-1`` as masks.

    Without ``max_size`` in ascending mask order; with it, every subset of
    size <= max_size by increasing size (ascending masks within a size).
    """
    check_capacity(m, limit)
    if max_size is None:
        yield from range(1 << m)
        return
    for k in range(min(max_size, m) + 1):
        # combinations of descending indices come out in descending mask order
        masks = [sum(1 << c for c in combo) for combo in combinations(range(m - 1, -1, -1), k)]
        yield from reversed(masks)


class ScanFamily:
    """Optimal committees of a voter-additive score, found by full enumeration.

    ``table[k, a]`` is one voter's contribution to a size-k committee that
    contains ``a`` of the voter's approved candidates.
    """

    def __init__(self, ballots: Sequence[int], m: int, table: np.ndarray, include_empty: bool):
        check_capacity(m)
        self.m = m
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        self.include_empty = include_empty
        self.masks, self.weights = _kernels.pack(ballots)
        best, counts, first = _kernels.scan(self.masks, self.weights, m, self.table, include_empty)
        self.best = int(best)
        self._counts = counts
        self._first = first

    def sizes(self) -> list[int]:
        return [k for k in range(self.m + 1) if self._counts[k]]

    def canonical(self, size: int) -> int:
        return int(self._first[size])

    def count(self, size: int) -> int:
        return int(self._counts[size])

    def enumerate(self, sizes: set[int], cap: int) -> list[int]:
        out: list[int] = []
        for k in sorted(sizes):
            if len(out) >= cap:
                break
            if self._counts[k] == 1:
                out.append(int(self._first[k]))
                continue
            got = _kernels.collect(self.masks, self.weights, self.m, self.table,
                                   self.include_empty, self.best, k, k, cap - len(out))
            out.extend(int(x) for x in got)
        return out


# -- exact minimum cover -----------------------------------------------------


class MinCover(NamedTuple):
    size: int
    covers: list[int]  # ascending masks, at most ``cap`` of them
    truncated: bool
    canonical: int
    count: int | None  # total number of minimum covers when known


class _CoverSearch:
    """Element-branching search over candidate types.

    Two candidates of one type are interchangeable and a minimum cover
    never holds both, so types stand in for candidates until the end.
    """

    def __init__(self, ballots: Sequence[int], m: int):
        targets = [b for b in ballots if b]
        self.universe = (1 << len(targets)) - 1
        cols = [0] * m
        for j, b in enumerate(targets):
            for c in bits(b):
                cols[c] |= 1 << j
        groups: dict[int, list[int]] = {}
        for c, col in enumerate(cols):
            if col:
                groups.setdefault(col, []).append(c)
        self.cols = list(groups)
        self.reps = list(groups.values())
        self.low = [1 << reps[0] for reps in self.reps]
        self.voter_types = [0] * len(targets)
        for t, col in enumerate(self.cols):
            for j in bits(col):
                self.voter_types[j] |= 1 << t

    def _bound(self, uncovered: int, allowed: int) -> int:
        best = 0
        for t in bits(allowed):
            gain = (self.cols[t] & uncovered).bit_count()
            if gain > best:
                best = gain
        if best == 0:
            return 1 << 30
        return -(-uncovered.bit_count() // best)

    def _branch_voter(self, uncovered: int, allowed: int) -> int:
        fewest, options = 1 << 30, 0
        for j in bits(uncovered):
            opts = self.voter_types[j] & allowed
            cnt = opts.bit_count()
            if cnt < fewest:
                fewest, options = cnt, opts
                if cnt <= 1:
                    break
        return options

    def covers(self, uncovered: int, allowed: int, depth: int) -> Iterator[int]:
        """Type sets of size <= depth covering ``uncovered`` using ``allowed`` types.

        Branch on the uncovered voter with the fewest options; the i-th branch
        takes option i and forbids options 0..i-1, so each set appears once.
        """
        if not uncovered:
            yield 0
            return
        if depth == 0 or self._bound(uncovered, allowed) > depth:
            return
        options = bits(self._branch_voter(uncovered, allowed))
        for t in options:
            for rest in self.covers(uncovered & ~self.cols[t], allowed, depth - 1):
                yield rest | 1 << t
            allowed &= ~(1 << t)

    def exists(self, uncovered: int, allowed: int, depth: int) -> bool:
        return next(self.covers(uncovered, allowed, depth), None) is not None

    def min_size(self) -> int:
        alltypes = (1 << len(self.cols)) - 1
        k = self._bound(self.universe, alltypes) if self.universe else 0
        while not self.exists(self.universe, alltypes, k):
            k += 1
        return k

    def canonical(self, k: int) -> int:
        """Smallest candidate mask among the minimum covers.

        Each type contributes its lowest candidate, so deciding types by
        descending lowest index (drop when a k-cover survives without it)
        minimizes the mask from its top bit down.
        """
        order = sorted(range(len(self.cols)), key=lambda t: -self.low[t])
        allowed = (1 << len(self.cols)) - 1
        forced = 0
        uncovered = self.universe
        for t in order:
            if forced.bit_count() == k:
                break
            trial = allowed & ~(1 << t)
            if self.exists(uncovered, trial & ~forced, k - forced.bit_count()):
                allowed = trial
            else:
                forced |= 1 << t
                uncovered &= ~self.cols[t]
        return sum(self.low[t] for t in bits(forced))

    def expansions(self, typeset: int) -> Iterator[int]:
        for choice in product(*(self.reps[t] for t in bits(typeset))):
            yield sum(1 << c for c in choice)

    def multiplicity(self, typeset: int) -> int:
        return prod(len(self.reps[t]) for t in bits(typeset))


def exact_min_cover(ballots: Sequence[int], m: int, cap: int | None = None) -> MinCover:
    """Minimum-cardinality committees meeting every nonempty ballot.

    With ``cap`` the listing stops after that many covers (the canonical
    one, the smallest mask, is always computed exactly).
    """
    search = _CoverSearch(ballots, m)
    if not search.universe:
        return MinCover(0, [0], False, 0, 1)
    k = search.min_size()
    canonical = search.canonical(k)
    if cap == 1:
        return MinCover(k, [canonical], True, canonical, None)
    found: list[int] = []
    total = 0
    complete = True
    for typeset in search.covers(search.universe, (1 << len(search.cols)) - 1, k):
        if cap is not None and len(found) >= cap:
            complete = False
            break
        total += search.multiplicity(typeset)
        room = None if cap is None else cap - len(found)
        found.extend(islice(search.expansions(typeset), room))
    if canonical not in found:
        found = [canonical] + found[:-1]
    found.sort()
    count = total if complete else None
    return MinCover(k, found, not complete or total > len(found), canonical, count)


def has_cover_of_size(ballots: Sequence[int], m: int, k: int) -> bool:
    search = _CoverSearch(ballots, m)
    if not search.universe:
        return True
    return search.exists(search.universe, (1 << len(search.cols)) - 1, k)


class CoverFamily:
    """All minimum covers, as a winner family of a single size."""

    def __init__(self, ballots: Sequence[int], m: int, cap: int):
        self.result = exact_min_cover(ballots, m, cap)

    def sizes(self) -> list[int]:
        return [self.result.size]

    def canonical(self, size: int) -> int:
        return self.result.canonical

    def count(self, size: int) -> int | None:
        return self.result.count

    def enumerate(self, sizes: set[int], cap: int) -> list[int]:
        if self.result.count == 1 or cap == 1:
            return [self.result.canonical]
        return self.result.covers[:cap]


# -- threshold program over candidate types ----------------------------------


@dataclass(frozen=True)
class ThresholdProgram:
    """Choose x_i of the n_i candidates of each type so that at least N
    voters approve the committee under ``t``, optimizing its size.

    Voter j is satisfied when the committee holds at least t(K) of the
    candidates j approves, K being the committee size. In integer-program
    form this is ``sum_{i in types(j)} x_i - t(sum_i x_i) >= -(1 - v_j) * M``
    with a 0/1 label v_j, ``sum_j v_j >= N`` and ``sum_i x_i >= 1``.
    """

    types: tuple[CandidateType, ...]
    t: ThresholdSpec
    N: int
    objective: str = "maximize"  # or "minimize"
    n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        if self.objective not in ("minimize", "maximize"):
            raise ValueError("objective must be 'minimize' or 'maximize'")
        if self.n is None:
            voters = 0
            for ty in self.types:
                voters |= ty.approver_set
            object.__setattr__(self, "n", voters.bit_length())

    @classmethod
    def from_election(cls, e: Election, t: ThresholdSpec, N: int, objective: str = "maximize"):
        return cls(tuple(candidate_types(e)), t, N, objective, e.n)

    @property
    def num_candidates(self) -> int:
        return sum(ty.multiplicity for ty in self.types)

    def approved_counts(self, x: Sequence[int]) -> list[int]:
        return [sum(xi for xi, ty in zip(x, self.types) if ty.approver_set >> j & 1)
                for j in range(self.n)]

    def satisfied(self, x: Sequence[int]) -> int:
        K = sum(x)
        need = self.t.required(K)
        return sum(a >= need for a in self.approved_counts(x))

    def constraints_hold(self, x: Sequence[int], v: Sequence[int]) -> bool:
        """Check the integer-program constraints literally for counts x, labels v.

        The big-M constant is max(n, m): t(K) - a never exceeds K <= m.
        """
        if len(x) != len(self.types) or len(v) != self.n:
            return False
        if any(not 0 <= xi <= ty.multiplicity for xi, ty in zip(x, self.types)):
            return False
        if any(vj not in (0, 1) for vj in v):
            return False
        K = sum(x)
        if K < 1 or sum(v) < self.N:
            return False
        big_m = max(self.n, self.num_candidates)
        return all(a - self.t(K) >= -(1 - vj) * big_m
                   for a, vj in zip(self.approved_counts(x), v))


class ProgramSolution(NamedTuple):
    counts: tuple[int, ...]
    size: int
    witness: CandidateSet
    satisfied: int


class _CountTable:
    """Every nonempty count vector with its size, satisfied-voter count and
    canonical witness (lowest indices per type)."""

    def __init__(self, types: Sequence[CandidateType], t: ThresholdSpec, n: int):
        space = prod(ty.multiplicity + 1 for ty in types)
        if space > MAX_COUNT_VECTORS:
            raise CapacityError(f"{space} type-count vectors exceed the limit of {MAX_COUNT_VECTORS}")
        self.types = list(types)
        self.m = sum(ty.multiplicity for ty in types)
        voter_rows = [[i for i, ty in enumerate(types) if ty.approver_set >> j & 1] for j in range(n)]
        required = [t.required(K) for K in range(self.m + 1)]
        self.rows: list[tuple[int, int, int, tuple[int, ...]]] = []
        for x in product(*(range(ty.multiplicity + 1) for ty in types)):
            K = sum(x)
            if K == 0:
                continue
            need = required[K]
            sat = sum(sum(x[i] for i in row) >= need for row in voter_rows)
            witness = 0
            for xi, ty in zip(x, types):
                for c in ty.representatives[:xi]:
                    witness |= 1 << c
            self.rows.append((K, sat, witness, x))

    def best(self, N: int, objective: str) -> ProgramSolution | None:
        feasible = [r for r in self.rows if r[1] >= N]
        if not feasible:
            return None
        if objective == "maximize":
            K, sat, witness, x = min(feasible, key=lambda r: (-r[0], r[2]))
        else:
            K, sat, witness, x = min(feasible, key=lambda r: (r[0], r[2]))
        return ProgramSolution(tuple(x), K, CandidateSet(witness, self.m), sat)

    def expansions(self, x: Sequence[int]) -> Iterator[int]:
        choices = [combinations(ty.representatives, xi) for xi, ty in zip(x, self.types)]
        for pick in product(*choices):
            yield sum(1 << c for group in pick for c in group)


def threshold_program_solve(p: ThresholdProgram) -> ProgramSolution | None:
    """Exact optimum of the threshold program, or None when infeasible.

    Bounded search over type-count vectors: the vector space has
    prod(n_i + 1) points, small whenever there are few candidate types.
    """
    return _CountTable(p.types, p.t, p.n).best(p.N, p.objective)


class _VectorFamily:
    def __init__(self, table: _CountTable, score: int):
        self.table = table
        self.rows = [r for r in table.rows if r[1] == score]

    def sizes(self) -> list[int]:
        return sorted({r[0] for r in self.rows})

    def canonical(self, size: int) -> int:
        return min(r[2] for r in self.rows if r[0] == size)

    def count(self, size: int) -> int:
        return sum(prod(comb(ty.multiplicity, xi) for xi, ty in zip(r[3], self.table.types))
                   for r in self.rows if r[0] == size)

    def enumerate(self, sizes: set[int], cap: int) -> list[int]:
        pool = ((r[0], mk) for r in self.rows if r[0] in sizes for mk in self.table.expansions(r[3]))
        return [mk for _, mk in heapq.nsmallest(cap, pool)]


def threshold_best_N(e: Election, t: ThresholdSpec, objective: Objective | None = None) -> WinnerResult:
    """Highest threshold score via the type program, scanning N = n, n-1, ...

    N = 0 is always feasible (any single candidate), which covers elections
    where no committee satisfies anybody.
    """
    objective = objective or Objective.smallest()
    table = _CountTable(candidate_types(e), t, e.n)
    goal = "maximize" if objective.kind == "largest" else "minimize"
    for N in range(e.n, -1, -1):
        if table.best(N, goal) is not None:
            break
    return resolve(_VectorFamily(table, N), N, objective, e.m)
