"""Colex-ranked r-subsets, vertex sets and edge colorings of K_n^r.

Vertices are 0-indexed, colors are 0..t-1, and a coloring stores one color
per edge indexed by the colex rank of the edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_COLORS = 10
MAX_VERTICES = 32
MAX_UNIFORMITY = 5

Edge = tuple[int, ...]


class InputError(ValueError):
    """Raised for malformed edges, ids, vertex sets or parameters."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int, offset: int = 0):
        super().__init__(f"line {line}, offset {offset}: {message}")
        self.line = line
        self.offset = offset


def check_params(n: int, r: int, t: int | None = None) -> None:
    if not 1 <= r <= MAX_UNIFORMITY:
        raise InputError(f"uniformity r={r} outside 1..{MAX_UNIFORMITY}")
    if not r <= n <= MAX_VERTICES:
        raise InputError(f"vertex count n={n} outside {r}..{MAX_VERTICES}")
    if t is not None and not 1 <= t <= MAX_COLORS:
        raise InputError(f"color count t={t} outside 1..{MAX_COLORS}")


def rank_edge(edge: Iterable[int], n: int, r: int) -> int:
    """Colex rank: sum of C(a_i, i) over the sorted members a_1 < ... < a_r."""
    vs = tuple(edge)
    if len(vs) != r:
        raise InputError(f"edge {vs} does not have {r} vertices")
    if any(b <= a for a, b in zip(vs, vs[1:])):
        raise InputError(f"edge {vs} is not strictly increasing")
    if vs[0] < 0 or vs[-1] >= n:
        raise InputError(f"edge {vs} has a vertex outside 0..{n - 1}")
    return sum(comb(a, i) for i, a in enumerate(vs, start=1))


def unrank_edge(rank: int, n: int, r: int) -> Edge:
    total = comb(n, r)
    if not 0 <= rank < total:
        raise InputError(f"edge id {rank} outside 0..{total - 1}")
    out = [0] * r
    a = n - 1
    for i in range(r, 0, -1):
        while comb(a, i) > rank:
            a -= 1
        out[i - 1] = a
        rank -= comb(a, i)
        a -= 1
    return tuple(out)


def disjoint(e1: Sequence[int], e2: Sequence[int]) -> bool:
    return not set(e1) & set(e2)


def colex_subsets(vertices: Iterable[int], size: int) -> Iterator[Edge]:
    """All size-subsets of ``vertices`` in colex order."""
    vs = sorted(vertices)
    subsets = list(combinations(vs, size))
    subsets.sort(key=lambda s: s[::-1])
    return iter(subsets)


@lru_cache(maxsize=None)
def edge_table(n: int, r: int) -> tuple[Edge, ...]:
    """All edges of K_n^r, position i holding the edge of colex rank i."""
    check_params(n, r)
    return tuple(colex_subsets(range(n), r))


@lru_cache(maxsize=None)
def edge_masks(n: int, r: int) -> tuple[int, ...]:
    return tuple(sum(1 << v for v in e) for e in edge_table(n, r))


@lru_cache(maxsize=None)
def edge_ranks(n: int, r: int) -> dict[Edge, int]:
    """Lookup table from sorted edge tuple to colex rank."""
    return {e: i for i, e in enumerate(edge_table(n, r))}


@lru_cache(maxsize=None)
def edge_array(n: int, r: int) -> np.ndarray:
    arr = np.array(edge_table(n, r), dtype=np.int64).reshape(-1, r)
    arr.setflags(write=False)
    return arr


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class VertexSet:
    """A subset of {0, ..., n-1} stored as a bit mask."""

    mask: int
    n: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f"vertex set has members outside 0..{self.n - 1}")

    @classmethod
    def of(cls, vertices: Iterable[int], n: int) -> VertexSet:
        vs = list(vertices)
        if any(not 0 <= v < n for v in vs):
            raise InputError(f"vertices {vs} not all in 0..{n - 1}")
        return cls(mask_of(vs), n)

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls((1 << n) - 1, n)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[int]:
        return iter(members_of(self.mask))

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.mask >> v & 1)

    def _same(self, other: VertexSet) -> None:
        if other.n != self.n:
            raise InputError("vertex sets over different ground sets")

    def __or__(self, other: VertexSet) -> VertexSet:
        self._same(other)
        return VertexSet(self.mask | other.mask, self.n)

    def __and__(self, other: VertexSet) -> VertexSet:
        self._same(other)
        return VertexSet(self.mask & other.mask, self.n)

    def __sub__(self, other: VertexSet) -> VertexSet:
        self._same(other)
        return VertexSet(self.mask & ~other.mask, self.n)

    def complement(self) -> VertexSet:
        return VertexSet(((1 << self.n) - 1) & ~self.mask, self.n)

    def members(self) -> tuple[int, ...]:
        return members_of(self.mask)

    def __repr__(self) -> str:
        return f"VertexSet({list(self)}, n={self.n})"


@dataclass(frozen=True)
class Coloring:
    """A t-edge-coloring of K_n^r; ``colors[i]`` colors the edge of colex rank i."""

    n: int
    r: int
    t: int
    colors: bytes

    def __post_init__(self):
        check_params(self.n, self.r, self.t)
        if not isinstance(self.colors, bytes):
            object.__setattr__(self, "colors", bytes(self.colors))
        expected = comb(self.n, self.r)
        if len(self.colors) != expected:
            raise InputError(f"expected {expected} edge colors, got {len(self.colors)}")
        if self.colors and max(self.colors) >= self.t:
            raise InputError(f"color {max(self.colors)} not below t={self.t}")

    @classmethod
    def from_function(cls, n: int, r: int, t: int, rule) -> Coloring:
        """Color each edge (as a sorted tuple) by ``rule(edge)``."""
        return cls(n, r, t, bytes(rule(e) for e in edge_table(n, r)))

    @classmethod
    def constant(cls, n: int, r: int, t: int, color: int = 0) -> Coloring:
        return cls(n, r, t, bytes([color]) * comb(n, r))

    @property
    def num_edges(self) -> int:
        return len(self.colors)

    @property
    def array(self) -> np.ndarray:
        return np.frombuffer(self.colors, dtype=np.uint8)

    def color(self, edge: Iterable[int]) -> int:
        return self.colors[rank_edge(edge, self.n, self.r)]

    def edges(self) -> tuple[Edge, ...]:
        return edge_table(self.n, self.r)

    def induced_colors(self, vertices: Iterable[int]) -> set[int]:
        return {self.color(e) for e in combinations(sorted(vertices), self.r)}

    def recolor(self, changes: dict[int, int]) -> Coloring:
        buf = bytearray(self.colors)
        for rank, c in changes.items():
            buf[rank] = c
        return Coloring(self.n, self.r, self.t, bytes(buf))


def serialize(coloring: Coloring) -> str:
    digits = "".join(str(c) for c in coloring.colors)
    return f"{coloring.n} {coloring.r} {coloring.t}\n{digits}\n"


def deserialize(text: str) -> Coloring:
    lines = text.split("\n")
    if len(lines) != 3 or lines[2] != "":
        raise ParseError(
            "expected exactly two newline-terminated lines", min(len(lines), 3)
        )
    header, body = lines[0], lines[1]
    fields = header.split(" ")
    if len(fields) != 3 or not all(f.isdigit() and f.isascii() for f in fields):
        raise ParseError(f"malformed header {header!r}; want 'n r t'", 1)
    n, r, t = (int(f) for f in fields)
    try:
        check_params(n, r, t)
    except InputError as exc:
        raise ParseError(str(exc), 1) from None
    expected = comb(n, r)
    for i, ch in enumerate(body):
        if not ("0" <= ch <= "9") or int(ch) >= t:
            raise ParseError(f"invalid color digit {ch!r} for t={t}", 2, i)
    if len(body) != expected:
        raise ParseError(f"got {len(body)} color digits, expected {expected}", 2, len(body))
    return Coloring(n, r, t, bytes(int(ch) for ch in body))
