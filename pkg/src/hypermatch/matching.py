"""Exact matchings under color filters, and the two closed-form bounds."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

from .combinatorics import (
    Coloring,
    InputError,
    VertexSet,
    edge_masks,
    rank_edge,
    unrank_edge,
)


class WitnessError(ValueError):
    """A claimed matching failed independent validation."""


@dataclass(frozen=True)
class Matching:
    edges: tuple[int, ...]  # colex edge ranks, ascending
    colorset: frozenset[int]

    def __len__(self) -> int:
        return len(self.edges)

    def vertex_tuples(self, n: int, r: int) -> list[tuple[int, ...]]:
        return [unrank_edge(e, n, r) for e in self.edges]

    def vertex_mask(self, n: int, r: int) -> int:
        masks = edge_masks(n, r)
        out = 0
        for e in self.edges:
            out |= masks[e]
        return out


def make_matching(coloring: Coloring, edges: Iterable[int]) -> Matching:
    es = tuple(sorted(edges))
    return Matching(es, frozenset(coloring.colors[e] for e in es))


@dataclass(frozen=True)
class BoundParams:
    t: int
    s: int
    k: int
    r: int

    def __post_init__(self):
        if not 1 <= self.s <= self.t:
            raise InputError(f"need 1 <= s <= t, got s={self.s}, t={self.t}")
        if self.k < 1:
            raise InputError(f"need k >= 1, got {self.k}")
        if self.r < 2:
            raise InputError(f"need r >= 2, got {self.r}")


def afl_bound(p: BoundParams) -> int:
    """Vertex count forcing a monochromatic k-matching in any t-coloring."""
    return (p.t - 1) * (p.k - 1) + p.k * p.r


def conjecture_bound(p: BoundParams) -> int:
    """Conjectured vertex count forcing an s-colored k-matching."""
    denom = sum(p.r**i for i in range(p.s))
    return p.k * p.r + (p.k - 1) * (p.t - p.s) // denom


# -- exact search ------------------------------------------------------------
#
# Edge lists are sequences of (rank, vertex_mask) pairs.  The maximum matching
# inside a vertex mask is computed by branching on the lowest remaining vertex:
# either it is skipped, or it is covered by one of the edges whose lowest
# vertex it is.  Results are memoized per remaining vertex mask.


def _index_by_low(items: Sequence[tuple[int, int]]) -> dict[int, list[tuple[int, int]]]:
    by_low: dict[int, list[tuple[int, int]]] = {}
    for rank, m in items:
        by_low.setdefault((m & -m).bit_length() - 1, []).append((rank, m))
    return by_low


def _max_size(by_low, vmask: int, r: int, memo: dict[int, int]) -> int:
    hit = memo.get(vmask)
    if hit is not None:
        return hit
    bound = vmask.bit_count() // r
    best = 0
    if bound:
        low = vmask & -vmask
        for _, m in by_low.get(low.bit_length() - 1, ()):
            if m & vmask == m:
                val = 1 + _max_size(by_low, vmask & ~m, r, memo)
                if val > best:
                    best = val
                    if best == bound:
                        break
        if best < bound:
            best = max(best, _max_size(by_low, vmask ^ low, r, memo))
    memo[vmask] = best
    return best


def max_matching_size(items: Sequence[tuple[int, int]], vmask: int, r: int) -> int:
    return _max_size(_index_by_low(items), vmask, r, {})


def lex_least_matching(
    items: Sequence[tuple[int, int]], vmask: int, r: int, size: int
) -> tuple[int, ...] | None:
    """Lexicographically least ascending rank tuple of ``size`` disjoint edges.

    ``items`` must be sorted by rank.  Each edge is fixed greedily, keeping it
    only if the edges of larger rank still complete the matching.
    """
    items = [(rk, m) for rk, m in items if m & vmask == m]
    chosen: list[int] = []
    for need in range(size, 0, -1):
        for idx, (rank, m) in enumerate(items):
            if m & vmask != m:
                continue
            rest = items[idx + 1 :]
            if need == 1 or max_matching_size(rest, vmask & ~m, r) >= need - 1:
                chosen.append(rank)
                vmask &= ~m
                items = [(rk, mm) for rk, mm in rest if mm & vmask == mm]
                break
        else:
            return None
    return tuple(chosen)


def _items(coloring: Coloring, allowed: Iterable[int], vmask: int):
    allowed = set(allowed)
    masks = edge_masks(coloring.n, coloring.r)
    cols = coloring.colors
    return [
        (i, m)
        for i, m in enumerate(masks)
        if cols[i] in allowed and m & vmask == m
    ]


def _restrict_mask(coloring: Coloring, restrict_to: VertexSet | None) -> int:
    if restrict_to is None:
        return (1 << coloring.n) - 1
    if restrict_to.n != coloring.n:
        raise InputError("restriction set is over a different vertex count")
    return restrict_to.mask


def max_matching(
    coloring: Coloring,
    allowed_colors: Iterable[int],
    restrict_to: VertexSet | None = None,
) -> Matching:
    """Maximum matching using only edges of the allowed colors.

    Among maximum matchings the lexicographically least ascending sequence of
    edge ranks is returned.
    """
    vmask = _restrict_mask(coloring, restrict_to)
    items = _items(coloring, allowed_colors, vmask)
    size = max_matching_size(items, vmask, coloring.r)
    edges = lex_least_matching(items, vmask, coloring.r, size) if size else ()
    return make_matching(coloring, edges)


def find_s_colored_matching(coloring: Coloring, s: int, k: int) -> Matching | None:
    """A matching of size >= k on at most s colors, or None.

    Takes the best ``max_matching`` over all s-subsets of colors (first subset
    in lexicographic order on ties).
    """
    if not 1 <= s <= coloring.t:
        raise InputError(f"need 1 <= s <= t, got s={s}, t={coloring.t}")
    full = (1 << coloring.n) - 1
    ceiling = coloring.n // coloring.r
    best_size, best_subset = -1, None
    for subset in combinations(range(coloring.t), s):
        size = max_matching_size(_items(coloring, subset, full), full, coloring.r)
        if size > best_size:
            best_size, best_subset = size, subset
            if size == ceiling:
                break
    if best_size < k:
        return None
    return max_matching(coloring, best_subset)


def find_mono_matching(
    coloring: Coloring, k: int, restrict_to: VertexSet | None = None
) -> tuple[int, Matching] | None:
    """Least color with a monochromatic k-matching, and its lex-least one."""
    if k < 1:
        raise InputError(f"need k >= 1, got {k}")
    vmask = _restrict_mask(coloring, restrict_to)
    if vmask.bit_count() < k * coloring.r:
        return None
    for c in range(coloring.t):
        items = _items(coloring, (c,), vmask)
        if len(items) < k:
            continue
        if max_matching_size(items, vmask, coloring.r) >= k:
            edges = lex_least_matching(items, vmask, coloring.r, k)
            return c, make_matching(coloring, edges)
    return None


def enumerate_perfect_matchings(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Every partition of {0..n-1} into r-sets, once each.

    Each step covers the least uncovered vertex; the resulting edge ranks are
    yielded in ascending order.
    """
    if r < 1 or n < 0 or n % r:
        raise InputError(f"r={r} does not divide n={n}")

    def rec(free: tuple[int, ...], acc: list[int]):
        if not free:
            yield tuple(sorted(acc))
            return
        v, rest = free[0], free[1:]
        for others in combinations(rest, r - 1):
            acc.append(rank_edge((v, *others), n, r))
            left = tuple(u for u in rest if u not in others)
            yield from rec(left, acc)
            acc.pop()

    if n == 0:
        yield ()
        return
    yield from rec(tuple(range(n)), [])


def perfect_matching_count(n: int, r: int) -> int:
    m = n // r
    return factorial(n) // (factorial(r) ** m * factorial(m))


# -- witness validation and text form -----------------------------------------


def check_matching(
    coloring: Coloring,
    matching: Matching,
    *,
    size: int | None = None,
    max_colors: int | None = None,
) -> None:
    """Independently re-validate a matching; raise WitnessError on any defect."""
    n, r = coloring.n, coloring.r
    total = comb(n, r)
    seen: set[int] = set()
    colors = set()
    for rank in matching.edges:
        if not 0 <= rank < total:
            raise WitnessError(f"edge id {rank} out of range")
        verts = unrank_edge(rank, n, r)
        if seen.intersection(verts):
            raise WitnessError(f"edge {verts} meets an earlier edge")
        seen.update(verts)
        colors.add(coloring.color(verts))
    if len(set(matching.edges)) != len(matching.edges):
        raise WitnessError("repeated edge")
    if colors != set(matching.colorset):
        raise WitnessError(f"colorset {sorted(matching.colorset)} != actual {sorted(colors)}")
    if size is not None and len(matching.edges) != size:
        raise WitnessError(f"size {len(matching.edges)} != {size}")
    if max_colors is not None and len(colors) > max_colors:
        raise WitnessError(f"{len(colors)} colors used, at most {max_colors} allowed")


def format_matching(matching: Matching, n: int, r: int) -> str:
    colors = ",".join(str(c) for c in sorted(matching.colorset))
    lines = [f"MATCHING size={len(matching.edges)} colors={colors}"]
    for verts in sorted(matching.vertex_tuples(n, r)):
        lines.append(" ".join(str(v) for v in verts))
    return "\n".join(lines) + "\n"


def parse_matching(text: str, coloring: Coloring) -> Matching:
    """Read a witness block back; the claimed colorset is kept, not recomputed."""
    lines = text.strip("\n").split("\n")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "MATCHING" or not head[1].startswith("size="):
        raise WitnessError(f"bad witness header {lines[0]!r}")
    size = int(head[1][5:])
    colors_txt = head[2].removeprefix("colors=")
    claimed = frozenset(int(c) for c in colors_txt.split(",") if c)
    if len(lines) != size + 1:
        raise WitnessError(f"header says {size} edges, found {len(lines) - 1}")
    ranks = []
    for line in lines[1:]:
        try:
            ranks.append(rank_edge(tuple(int(v) for v in line.split(" ")), coloring.n, coloring.r))
        except (InputError, ValueError) as exc:
            raise WitnessError(f"bad edge line {line!r}: {exc}") from None
    return Matching(tuple(sorted(ranks)), claimed)

