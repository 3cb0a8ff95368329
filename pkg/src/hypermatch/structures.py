"""Detectors for the 3-uniform structures: B-sets, B+-sets, A-sets,
monochromatic K_6^3, rainbow K_5^3 and disks, plus the balanced-partition
witness for K_12^3.

All detectors are plain definitional scans over colex-ordered subsets; "first"
always means least in colex order.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .combinatorics import (
    Coloring,
    InputError,
    VertexSet,
    colex_subsets,
    edge_ranks,
)
from .matching import Matching, format_matching, make_matching

RAINBOW_CAP = 20


def _require_r3(coloring: Coloring) -> None:
    if coloring.r != 3:
        raise InputError(f"structure detectors need r=3, got r={coloring.r}")


def _as_members(coloring: Coloring, vs, size: int) -> tuple[int, ...]:
    members = tuple(vs) if isinstance(vs, VertexSet) else tuple(sorted(set(vs)))
    if len(members) != size:
        raise InputError(f"expected a {size}-vertex set, got {len(members)} vertices")
    if any(not 0 <= v < coloring.n for v in members):
        raise InputError(f"vertices {members} not all in 0..{coloring.n - 1}")
    return members


def _induced(coloring: Coloring, members: tuple[int, ...]) -> list[tuple[tuple[int, ...], int]]:
    ranks = edge_ranks(coloring.n, coloring.r)
    cols = coloring.colors
    return [(e, cols[ranks[e]]) for e in combinations(members, coloring.r)]


def _no_mono_disjoint_pair(induced) -> bool:
    for (e1, c1), (e2, c2) in combinations(induced, 2):
        if c1 == c2 and not set(e1) & set(e2):
            return False
    return True


def _avoided(coloring: Coloring, induced) -> int | None:
    used = {c for _, c in induced}
    for c in range(coloring.t):
        if c not in used:
            return c
    return None


def is_b_set(coloring: Coloring, six) -> int | None:
    """Least avoided color if ``six`` is a B-set, else None."""
    _require_r3(coloring)
    induced = _induced(coloring, _as_members(coloring, six, 6))
    c = _avoided(coloring, induced)
    if c is None or not _no_mono_disjoint_pair(induced):
        return None
    return c


def is_b_plus_set(coloring: Coloring, seven) -> int | None:
    """Least color avoided by all 35 induced edges of a B+-set, else None."""
    _require_r3(coloring)
    induced = _induced(coloring, _as_members(coloring, seven, 7))
    c = _avoided(coloring, induced)
    if c is None or not _no_mono_disjoint_pair(induced):
        return None
    return c


def six_set_partitions(members: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The 10 splits of a sorted 6-tuple into two triples, least vertex first."""
    first, rest = members[0], members[1:]
    for pair in combinations(rest, 2):
        yield (first, *pair), tuple(v for v in rest if v not in pair)


def is_a_set(coloring: Coloring, six) -> tuple[int, Matching] | None:
    """First monochromatic perfect matching of the 6-set, with its color."""
    _require_r3(coloring)
    members = _as_members(coloring, six, 6)
    ranks = edge_ranks(coloring.n, 3)
    for a, b in six_set_partitions(members):
        ra, rb = ranks[a], ranks[b]
        if coloring.colors[ra] == coloring.colors[rb]:
            return coloring.colors[ra], make_matching(coloring, (ra, rb))
    return None


def find_mono_k6(coloring: Coloring, through: tuple[int, int] | None = None) -> list[tuple[VertexSet, int]]:
    """All monochromatic 6-sets (containing the pair ``through`` if given)."""
    _require_r3(coloring)
    n = coloring.n
    if n < 6:
        raise InputError("need n >= 6")
    if through is not None:
        u, v = through
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise InputError(f"bad vertex pair {through}")
        others = [w for w in range(n) if w not in (u, v)]
        candidates = (tuple(sorted((u, v, *ext))) for ext in colex_subsets(others, 4))
    else:
        candidates = colex_subsets(range(n), 6)
    ranks = edge_ranks(n, 3)
    cols = coloring.colors
    out = []
    for six in candidates:
        edge_colors = {cols[ranks[e]] for e in combinations(six, 3)}
        if len(edge_colors) == 1:
            out.append((VertexSet.of(six, n), edge_colors.pop()))
    return out


def iter_rainbow_k5(coloring: Coloring) -> Iterator[VertexSet]:
    """5-sets whose 10 induced edges carry at least three colors, colex order."""
    _require_r3(coloring)
    ranks = edge_ranks(coloring.n, 3)
    cols = coloring.colors
    for five in colex_subsets(range(coloring.n), 5):
        if len({cols[ranks[e]] for e in combinations(five, 3)}) >= 3:
            yield VertexSet.of(five, coloring.n)


def find_rainbow_k5(coloring: Coloring) -> VertexSet | None:
    if coloring.n < 5:
        raise InputError("need n >= 5")
    return next(iter_rainbow_k5(coloring), None)


@dataclass(frozen=True)
class Disk:
    sets: tuple[VertexSet, VertexSet, VertexSet]
    colors: tuple[int, int, int]


def is_disk(coloring: Coloring, disk: Disk) -> bool:
    """Re-check a disk against its definition by direct scan."""
    for xs, c in zip(disk.sets, disk.colors):
        if len(xs) != 6 or coloring.induced_colors(xs) != {c}:
            return False
    if len(set(disk.colors)) != 3:
        return False
    x1, x2, x3 = disk.sets
    if any(len(a & b) != 2 for a, b in ((x1, x2), (x1, x3), (x2, x3))):
        return False
    return len(x1 & x2 & x3) == 0


def iter_disks(coloring: Coloring, mono: list[tuple[VertexSet, int]] | None = None) -> Iterator[Disk]:
    """Disks among the monochromatic 6-sets, triples taken in list order."""
    if mono is None:
        mono = find_mono_k6(coloring)
    for i, (x1, c1) in enumerate(mono):
        for j in range(i + 1, len(mono)):
            x2, c2 = mono[j]
            if c2 == c1 or len(x1 & x2) != 2:
                continue
            for x3, c3 in mono[j + 1 :]:
                if c3 in (c1, c2) or len(x1 & x3) != 2 or len(x2 & x3) != 2:
                    continue
                if not (x1 & x2 & x3).mask:
                    yield Disk((x1, x2, x3), (c1, c2, c3))


def find_disk(coloring: Coloring) -> Disk | None:
    if (coloring.n, coloring.r, coloring.t) != (12, 3, 3):
        raise InputError("disk detection is defined for n=12, r=3, t=3")
    return next(iter_disks(coloring), None)


def disk_rainbow_witness(disk: Disk) -> VertexSet:
    """The 5-set {v1,v2,v3,v4,v5} with v1,v2 in X1&X2, v3,v4 in X2&X3, v5 in X1&X3.

    Edge {v1,v2,v5} lies in X1, {v1,v2,v3} in X2 and {v3,v4,v5} in X3, so the
    three distinct disk colors all appear.
    """
    x1, x2, x3 = disk.sets
    v5 = min(x1 & x3)
    return VertexSet((x1 & x2).mask | (x2 & x3).mask | 1 << v5, x1.n)


def pair_color_profile(coloring: Coloring, u: int, v: int) -> frozenset[int]:
    """Colors on the edges containing both u and v."""
    n, r = coloring.n, coloring.r
    if u == v:
        raise InputError("pair profile needs two distinct vertices")
    if not (0 <= u < n and 0 <= v < n):
        raise InputError(f"vertices {u}, {v} not in 0..{n - 1}")
    if r < 2:
        raise InputError("pair profile needs r >= 2")
    ranks = edge_ranks(n, r)
    others = [w for w in range(n) if w not in (u, v)]
    return frozenset(
        coloring.colors[ranks[tuple(sorted((u, v, *rest)))]]
        for rest in combinations(others, r - 2)
    )


@dataclass(frozen=True)
class TwoColoredPM:
    matching: Matching


@dataclass(frozen=True)
class BSide:
    side: VertexSet
    avoided: int
    which: str  # "side" or "complement"


PartitionWitness = TwoColoredPM | BSide


def balanced_partition_report(coloring: Coloring, side) -> PartitionWitness:
    """Partition-respecting 2-colored perfect matching of K_12^3, or a B-set side.

    Without such a matching one of the two 6-sets must be a B-set: a
    monochromatic split on one side forces every split of the other side to be
    2-colored avoiding that color, and otherwise the two sides' color pairs can
    never coincide.
    """
    if (coloring.n, coloring.r) != (12, 3):
        raise InputError("balanced partitions are defined for K_12^3")
    ys = VertexSet.of(_as_members(coloring, side, 6), 12)
    zs = ys.complement()
    ranks = edge_ranks(12, 3)
    cols = coloring.colors

    def splits(vs: VertexSet):
        out = []
        for a, b in six_set_partitions(vs.members()):
            ra, rb = ranks[a], ranks[b]
            out.append(((ra, rb), {cols[ra], cols[rb]}))
        return out

    z_splits = splits(zs)
    for y_edges, y_cols in splits(ys):
        for z_edges, z_cols in z_splits:
            if len(y_cols | z_cols) <= 2:
                return TwoColoredPM(make_matching(coloring, y_edges + z_edges))
    for which, vs in (("side", ys), ("complement", zs)):
        c = is_b_set(coloring, vs)
        if c is not None:
            return BSide(vs, c, which)
    raise AssertionError("balanced partition has neither witness kind")  # unreachable


@dataclass
class StructureReport:
    n: int
    t: int
    b_set_count: int
    a_set_count: int
    mono_k6_list: list[tuple[VertexSet, int]]
    rainbow_k5_list: list[VertexSet]
    rainbow_k5_total: int
    disk: Disk | None
    disk_applicable: bool
    pair_profiles: dict[tuple[int, int], frozenset[int]]
    mono_k6_intersections: Counter = field(default_factory=Counter)


def analyze(coloring: Coloring, rainbow_cap: int = RAINBOW_CAP) -> StructureReport:
    _require_r3(coloring)
    n = coloring.n
    if n < 6:
        raise InputError("analysis needs n >= 6")
    b_count = a_count = 0
    for six in colex_subsets(range(n), 6):
        if is_b_set(coloring, six) is not None:
            b_count += 1
        if is_a_set(coloring, six) is not None:
            a_count += 1
    mono = find_mono_k6(coloring)
    rainbow: list[VertexSet] = []
    total = 0
    for five in iter_rainbow_k5(coloring):
        total += 1
        if len(rainbow) < rainbow_cap:
            rainbow.append(five)
    applicable = (n, coloring.t) == (12, 3)
    disk = next(iter_disks(coloring, mono), None) if applicable else None
    profiles = {(u, v): pair_color_profile(coloring, u, v) for u, v in combinations(range(n), 2)}
    inter = Counter(len(a & b) for (a, _), (b, _) in combinations(mono, 2))
    return StructureReport(n, coloring.t, b_count, a_count, mono, rainbow, total, disk, applicable, profiles, inter)


def _vs(vs: VertexSet) -> str:
    return " ".join(str(v) for v in vs)


def format_report(report: StructureReport, machine: bool = False) -> str:
    lines = [
        "# vertices are 0-indexed",
        f"b_set_count: {report.b_set_count}",
        f"a_set_count: {report.a_set_count}",
        f"mono_k6_count: {len(report.mono_k6_list)}",
    ]
    for xs, c in report.mono_k6_list[:RAINBOW_CAP]:
        lines.append(f"  color {c}: {_vs(xs)}")
    if report.mono_k6_intersections:
        hist = ", ".join(f"{k}:{v}" for k, v in sorted(report.mono_k6_intersections.items()))
        lines.append(f"mono_k6 pair intersections: {hist}")
    if report.rainbow_k5_total:
        lines.append(f"rainbow K5: present ({report.rainbow_k5_total} total)")
        lines.append(f"  first: {_vs(report.rainbow_k5_list[0])}")
    else:
        lines.append("rainbow K5: none")
    if not report.disk_applicable:
        lines.append("disk: n/a")
    elif report.disk is None:
        lines.append("disk: none")
    else:
        lines.append("disk: present")
        for xs, c in zip(report.disk.sets, report.disk.colors):
            lines.append(f"  color {c}: {_vs(xs)}")
    sizes = Counter(len(p) for p in report.pair_profiles.values())
    lines.append("pair profile sizes: " + ", ".join(f"{k}:{v}" for k, v in sorted(sizes.items())))
    if machine:
        lines.append("BEGIN MACHINE")
        lines.append(f"B_SETS {report.b_set_count}")
        lines.append(f"A_SETS {report.a_set_count}")
        lines.append(f"MONO_K6 {len(report.mono_k6_list)}")
        for xs, c in report.mono_k6_list:
            lines.append(f"K6 color={c} {_vs(xs)}")
        lines.append(f"RAINBOW_K5 total={report.rainbow_k5_total} listed={len(report.rainbow_k5_list)}")
        for five in report.rainbow_k5_list:
            lines.append(f"K5 {_vs(five)}")
        if report.disk is not None:
            for xs, c in zip(report.disk.sets, report.disk.colors):
                lines.append(f"DISK color={c} {_vs(xs)}")
        for (u, v), prof in sorted(report.pair_profiles.items()):
            lines.append(f"PAIR {u} {v} colors={','.join(str(c) for c in sorted(prof))}")
        lines.append("END MACHINE")
    return "\n".join(lines) + "\n"


def format_partition_witness(w: PartitionWitness, n: int = 12) -> str:
    if isinstance(w, TwoColoredPM):
        return "PARTITION two-colored-pm\n" + format_matching(w.matching, n, 3)
    return f"PARTITION b-set which={w.which} avoided={w.avoided}\n{_vs(w.side)}\n"
