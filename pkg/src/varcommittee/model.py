"""Approval elections, candidate sets and the two text formats they are stored in."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """Malformed election file. ``line`` is 1-based, or None for whole-document errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True, order=True)
class CandidateSet:
    """A subset of the candidates ``0..m-1`` stored as a bit mask.

    Used both for ballots and committees. Python ints are unbounded, so the
    same representation covers m > 64.
    """

    mask: int
    m: int = field(compare=False)

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.m:
            raise ValueError(f"mask {self.mask:#x} has members outside 0..{self.m - 1}")

    @classmethod
    def of(cls, members: Iterable[int], m: int) -> CandidateSet:
        return cls(mask_of(members), m)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def complement(self) -> CandidateSet:
        return CandidateSet(((1 << self.m) - 1) & ~self.mask, self.m)

    def __or__(self, other: CandidateSet) -> CandidateSet:
        return CandidateSet(self.mask | other.mask, max(self.m, other.m))

    def __and__(self, other: CandidateSet) -> CandidateSet:
        return CandidateSet(self.mask & other.mask, max(self.m, other.m))

    def __contains__(self, c: int) -> bool:
        return c >= 0 and bool(self.mask >> c & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        return f"CandidateSet({list(self.members)}, m={self.m})"


def as_mask(S: CandidateSet | int | Iterable[int]) -> int:
    """Accept a CandidateSet, a raw mask, or an iterable of indices."""
    if isinstance(S, CandidateSet):
        return S.mask
    if isinstance(S, int):
        return S
    return mask_of(S)


@dataclass(frozen=True)
class CandidateType:
    """Candidates that are approved by exactly the same voters."""

    approver_set: int  # voter bit mask
    representatives: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.representatives)

    @property
    def voters(self) -> tuple[int, ...]:
        return tuple(bits(self.approver_set))


@dataclass(frozen=True)
class Election:
    """``num_candidates`` candidates and one approval ballot (a bit mask) per voter."""

    num_candidates: int
    ballots: tuple[int, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ballots", tuple(self.ballots))
        if self.num_candidates < 1:
            raise ValueError("an election needs at least one candidate")
        if not self.ballots:
            raise ValueError("an election needs at least one voter")
        limit = 1 << self.num_candidates
        for i, b in enumerate(self.ballots):
            if b < 0 or b >= limit:
                raise ValueError(f"ballot {i} approves a candidate outside 0..{self.num_candidates - 1}")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.num_candidates:
                raise ValueError("names must list exactly one name per candidate")

    @classmethod
    def from_lists(cls, m: int, voters: Sequence[Iterable[int]], names=None) -> Election:
        return cls(m, tuple(mask_of(v) for v in voters), names)

    @property
    def m(self) -> int:
        return self.num_candidates

    @property
    def n(self) -> int:
        return len(self.ballots)

    @property
    def all_candidates(self) -> int:
        return (1 << self.num_candidates) - 1

    def ballot(self, i: int) -> CandidateSet:
        return CandidateSet(self.ballots[i], self.num_candidates)

    def voter_lists(self) -> list[list[int]]:
        return [bits(b) for b in self.ballots]

    @cached_property
    def scores(self) -> tuple[int, ...]:
        counts = [0] * self.num_candidates
        for b in self.ballots:
            for c in bits(b):
                counts[c] += 1
        return tuple(counts)

    @cached_property
    def approvers(self) -> tuple[int, ...]:
        """Per candidate, the bit mask of voters approving it."""
        cols = [0] * self.num_candidates
        for i, b in enumerate(self.ballots):
            for c in bits(b):
                cols[c] |= 1 << i
        return tuple(cols)

    @property
    def nonempty_ballots(self) -> list[int]:
        return [b for b in self.ballots if b]


def approval_scores(e: Election) -> list[int]:
    return list(e.scores)


def candidate_types(e: Election) -> list[CandidateType]:
    """Group candidates by approver set, ordered by smallest representative."""
    groups: dict[int, list[int]] = {}
    for c, col in enumerate(e.approvers):
        groups.setdefault(col, []).append(c)
    # dicts keep insertion order, and insertion happens in candidate order
    return [CandidateType(col, tuple(reps)) for col, reps in groups.items()]


# -- text formats -----------------------------------------------------------


def _int_token(tok: str, lineno: int) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative index {value}", lineno)
    return value


def parse_plain(text: str) -> Election:
    lines = text.split("\n")
    header = lines[0].strip().split()
    if len(header) != 2:
        raise ParseError("header must be 'm n'", 1)
    m, n = (_int_token(t, 1) for t in header)
    if m < 1 or n < 1:
        raise ParseError("m and n must be positive", 1)
    body = lines[1:]
    # a trailing newline terminates the last ballot line rather than adding one
    if len(body) == n + 1 and body[-1].strip() == "":
        body = body[:-1]
    if len(body) != n:
        raise ParseError(f"expected {n} ballot lines, found {len(body)}")
    ballots = []
    for offset, line in enumerate(body):
        lineno = offset + 2
        mask = 0
        for tok in line.split():
            c = _int_token(tok, lineno)
            if c >= m:
                raise ParseError(f"candidate {c} out of range for m={m}", lineno)
            mask |= 1 << c
        ballots.append(mask)
    return Election(m, tuple(ballots))


def parse_json(text: str) -> Election:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "m" not in doc or "voters" not in doc:
        raise ParseError("expected an object with fields 'm' and 'voters'")
    m, voters = doc["m"], doc["voters"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParseError("'m' must be a positive integer")
    if not isinstance(voters, list) or not voters:
        raise ParseError("'voters' must be a non-empty array")
    ballots = []
    for i, v in enumerate(voters):
        if not isinstance(v, list):
            raise ParseError(f"voter {i}: ballot must be an array")
        for c in v:
            if not isinstance(c, int) or isinstance(c, bool):
                raise ParseError(f"voter {i}: non-integer entry {c!r}")
            if not 0 <= c < m:
                raise ParseError(f"voter {i}: candidate {c} out of range for m={m}")
        ballots.append(mask_of(v))
    names = doc.get("names")
    if names is not None:
        if not isinstance(names, list) or len(names) != m or not all(isinstance(s, str) for s in names):
            raise ParseError("'names' must be an array of m strings")
        names = tuple(names)
    return Election(m, tuple(ballots), names)


def parse_election(text: str, format: str = "plain") -> Election:
    if format == "plain":
        return parse_plain(text)
    if format == "json":
        return parse_json(text)
    raise ValueError(f"unknown election format {format!r}")


def serialize_election(e: Election, format: str = "plain") -> str:
    if format == "plain":
        lines = [f"{e.m} {e.n}"]
        lines += [" ".join(map(str, bits(b))) for b in e.ballots]
        return "\n".join(lines) + "\n"
    if format == "json":
        doc: dict = {"m": e.m, "voters": e.voter_lists()}
        if e.names is not None:
            doc["names"] = list(e.names)
        return json.dumps(doc) + "\n"
    raise ValueError(f"unknown election format {format!r}")


def read_election(path, format: str | None = None) -> Election:
    """Read an election file; the format defaults to json for ``*.json`` paths."""
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "plain"
    with open(path, encoding="utf-8") as fh:
        return parse_election(fh.read(), format)
