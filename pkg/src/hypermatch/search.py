"""Exhaustive backtracking search for avoiding colorings.

An avoiding coloring is a t-coloring of K_n^r without an s-colored matching of
size k.  Edges are colored in colex order.  Colors are canonicalized (color c
may only be used once colors 0..c-1 have appeared), and a partial coloring is
pruned as soon as its colored edges already contain an s-colored k-matching.
Optionally a lex-leader test under vertex permutations prunes non-canonical
prefixes every ``symmetry_depth`` levels.
"""
from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from itertools import combinations
from math import comb

from . import __version__
from .combinatorics import Coloring, InputError, deserialize, edge_masks, edge_ranks, edge_table, serialize
from .matching import find_s_colored_matching, max_matching_size

UNSET = -1
LEX_LEADER_STEPS = 2_000


@dataclass(frozen=True)
class SearchProblem:
    n: int
    r: int
    t: int
    s: int
    k: int
    max_nodes: int = 10**9
    max_seconds: float = 600.0
    vertex_symmetry: bool = False
    symmetry_depth: int = 8
    workers: int = 1

    def __post_init__(self):
        if not 1 <= self.s <= self.t:
            raise InputError(f"need 1 <= s <= t, got s={self.s}, t={self.t}")
        if self.k < 1:
            raise InputError(f"need k >= 1, got {self.k}")
        if self.symmetry_depth < 1:
            raise InputError("symmetry depth must be positive")
        if self.workers < 1:
            raise InputError("need at least one worker")
        Coloring.constant(self.n, self.r, self.t)  # validates n, r, t

    @property
    def symmetry_label(self) -> str:
        if self.vertex_symmetry:
            return f"color,vertex-d={self.symmetry_depth}"
        return "color"


@dataclass(frozen=True)
class Found:
    coloring: Coloring
    nodes: int
    outcome = "FOUND"


@dataclass(frozen=True)
class Exhausted:
    nodes: int
    outcome = "EXHAUSTED"


@dataclass(frozen=True)
class BudgetExceeded:
    nodes: int
    outcome = "BUDGET"


SearchOutcome = Found | Exhausted | BudgetExceeded


class _Budget(Exception):
    pass


class _GiveUp(Exception):
    pass


class _Searcher:
    def __init__(self, p: SearchProblem, cancelled=None):
        self.p = p
        self.masks = edge_masks(p.n, p.r)
        self.edges = edge_table(p.n, p.r)
        self.ranks = edge_ranks(p.n, p.r)
        self.num_edges = len(self.masks)
        self.full = (1 << p.n) - 1
        self.colors = [UNSET] * self.num_edges
        self.by_color: list[list[tuple[int, int]]] = [[] for _ in range(p.t)]
        # color subsets of size s containing c, one list per color c
        self.subsets = [
            [sub for sub in combinations(range(p.t), p.s) if c in sub] for c in range(p.t)
        ]
        self.nodes = 0
        self.deadline = time.monotonic() + p.max_seconds
        self.cancelled = cancelled

    # A new edge e of color c creates an s-colored k-matching iff, for some
    # color subset S containing c, the colored edges of S avoiding e hold a
    # (k-1)-matching; older matchings were excluded at the parent.
    def _completes_matching(self, rank: int, c: int) -> bool:
        need = self.p.k - 1
        if need == 0:
            return True
        m = self.masks[rank]
        free = self.full & ~m
        for sub in self.subsets[c]:
            items = [it for col in sub for it in self.by_color[col] if not it[1] & m]
            if len(items) < need:
                continue
            if need == 1 or max_matching_size(items, free, self.p.r) >= need:
                return True
        return False

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.p.max_nodes:
            raise _Budget
        if not self.nodes & 0xFFF:
            if time.monotonic() > self.deadline:
                raise _Budget
            if self.cancelled is not None and self.cancelled():
                raise _Budget

    def _assign(self, rank: int, c: int) -> None:
        self.colors[rank] = c
        self.by_color[c].append((rank, self.masks[rank]))

    def _unassign(self, rank: int) -> None:
        c = self.colors[rank]
        self.by_color[c].pop()
        self.colors[rank] = UNSET

    def _choices(self, depth: int, top: int) -> range:
        return range(min(self.p.t, top + 2))

    def _dfs(self, depth: int, top: int):
        """Return a complete avoiding color list, or None if the subtree is empty."""
        if depth == self.num_edges:
            return list(self.colors)
        if (
            self.p.vertex_symmetry
            and depth
            and depth % self.p.symmetry_depth == 0
            and self._not_lex_leader(depth)
        ):
            return None
        for c in self._choices(depth, top):
            self._tick()
            if self._completes_matching(depth, c):
                continue
            self._assign(depth, c)
            found = self._dfs(depth + 1, max(top, c))
            self._unassign(depth)
            if found is not None:
                return found
        return None

    def _not_lex_leader(self, depth: int) -> bool:
        """True if some vertex relabeling of the colored prefix is strictly smaller.

        A permutation sigma is built vertex by vertex; once sigma(0..j) is fixed
        the image of every edge with maximum vertex j is known, and these are
        exactly the next colex positions.  Image colors are renamed by first
        occurrence so that the comparison is also modulo color renaming.

        Prefixes with a large automorphism group would make this walk
        explode, so it gives up (answers False, i.e. no pruning) after
        LEX_LEADER_STEPS candidate placements.
        """
        n, r = self.p.n, self.p.r
        x = self.colors
        edges, ranks = self.edges, self.ranks
        steps = [LEX_LEADER_STEPS]

        def rec(j: int, sigma: list[int], used: int, relabel: dict[int, int]) -> bool:
            if j == n:
                return False
            for v in range(n):
                if used >> v & 1:
                    continue
                steps[0] -= 1
                if steps[0] < 0:
                    raise _GiveUp
                sigma.append(v)
                lab = dict(relabel)
                verdict = 0  # 0 equal, -1 smaller, 1 larger or unknown
                for i in range(comb(j, r), comb(j + 1, r)):
                    if i >= depth:
                        verdict = 1
                        break
                    pre = ranks[tuple(sorted(sigma[a] for a in edges[i]))]
                    if pre >= depth:
                        verdict = 1
                        break
                    y = lab.setdefault(x[pre], len(lab))
                    if y != x[i]:
                        verdict = -1 if y < x[i] else 1
                        break
                if verdict == -1:
                    return True
                if verdict == 0 and rec(j + 1, sigma, used | 1 << v, lab):
                    return True
                sigma.pop()
            return False

        try:
            return rec(0, [], 0, {})
        except _GiveUp:
            return False

    def run(self, prefix: tuple[int, ...] = ()) -> SearchOutcome:
        p = self.p
        if p.k * p.r > p.n:
            self._tick()
            return Found(Coloring.constant(p.n, p.r, p.t), self.nodes)
        top = -1
        for rank, c in enumerate(prefix):
            self._assign(rank, c)
            top = max(top, c)
        try:
            if not prefix:
                self._tick()  # root
            found = self._dfs(len(prefix), top)
        except _Budget:
            return BudgetExceeded(self.nodes)
        if found is not None:
            return Found(Coloring(p.n, p.r, p.t, bytes(found)), self.nodes)
        return Exhausted(self.nodes)

    def prefixes(self, depth: int) -> list[tuple[int, ...]]:
        """All surviving colored prefixes of the given length, in search order."""
        out: list[tuple[int, ...]] = []
        self._tick()

        def rec(d: int, top: int):
            if d == depth or d == self.num_edges:
                out.append(tuple(self.colors[:d]))
                return
            for c in self._choices(d, top):
                self._tick()
                if self._completes_matching(d, c):
                    continue
                self._assign(d, c)
                rec(d + 1, max(top, c))
                self._unassign(d)

        rec(0, -1)
        return out


def _run_subtree(p: SearchProblem, prefix: tuple[int, ...]) -> SearchOutcome:
    return _Searcher(p).run(prefix)


def search_avoiding(p: SearchProblem) -> SearchOutcome:
    """Found an avoiding coloring, Exhausted the canonical tree, or ran out of budget."""
    if p.workers == 1 or p.k * p.r > p.n:
        return _Searcher(p).run()
    root = _Searcher(p)
    depth = 1
    while depth < root.num_edges and p.t**depth < 8 * p.workers:
        depth += 1
    try:
        prefixes = root.prefixes(depth)
    except _Budget:
        return BudgetExceeded(root.nodes)
    nodes = root.nodes
    if any(len(pre) == root.num_edges for pre in prefixes):
        full = next(pre for pre in prefixes if len(pre) == root.num_edges)
        return Found(Coloring(p.n, p.r, p.t, bytes(full)), nodes)
    # each worker gets the remaining budget; the sum is checked afterwards
    with ProcessPoolExecutor(max_workers=p.workers) as pool:
        pending = {pool.submit(_run_subtree, p, pre) for pre in prefixes}
        budget_hit = False
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                res = fut.result()
                nodes += res.nodes
                if isinstance(res, Found):
                    for other in pending:
                        other.cancel()
                    return Found(res.coloring, nodes)
                if isinstance(res, BudgetExceeded):
                    budget_hit = True
    if budget_hit or nodes > p.max_nodes:
        return BudgetExceeded(nodes)
    return Exhausted(nodes)


# -- certificates ----------------------------------------------------------------


class CertificationError(RuntimeError):
    """A search result failed re-validation: a bug in the search, never accepted."""


def is_avoiding(coloring: Coloring, s: int, k: int) -> bool:
    return find_s_colored_matching(coloring, s, k) is None


def certify(outcome: SearchOutcome, p: SearchProblem) -> str:
    lines = [
        f"PROBLEM {p.n} {p.r} {p.t} {p.s} {p.k}",
        f"OUTCOME {outcome.outcome}",
        f"NODES {outcome.nodes}",
        f"SYMMETRY {p.symmetry_label}",
        f"TOOL hypermatch {__version__}",
    ]
    if isinstance(outcome, Found):
        col = outcome.coloring
        if (col.n, col.r, col.t) != (p.n, p.r, p.t):
            raise CertificationError("witness dimensions do not match the problem")
        if not is_avoiding(col, p.s, p.k):
            raise CertificationError("witness contains an s-colored k-matching")
        lines.append("CHECK avoiding")
        return "\n".join(lines) + "\n" + serialize(col)
    return "\n".join(lines) + "\n"


def check_certificate(text: str) -> tuple[str, SearchProblem]:
    """Parse a search certificate and re-validate a FOUND witness."""
    lines = text.split("\n")
    try:
        head = {line.split(" ", 1)[0]: line.split(" ", 1)[1] for line in lines[:5]}
        n, r, t, s, k = (int(v) for v in head["PROBLEM"].split(" "))
        outcome = head["OUTCOME"]
        nodes = int(head["NODES"])
    except (KeyError, IndexError, ValueError) as exc:
        raise CertificationError(f"malformed certificate header: {exc}") from None
    sym = head["SYMMETRY"]
    vertex = "vertex-d=" in sym
    depth = int(sym.split("vertex-d=")[1]) if vertex else 8
    p = SearchProblem(n, r, t, s, k, vertex_symmetry=vertex, symmetry_depth=depth)
    if outcome == "FOUND":
        if lines[5] != "CHECK avoiding":
            raise CertificationError("FOUND certificate lacks its check line")
        col = deserialize("\n".join(lines[6:]))
        certify(Found(col, nodes), p)
    elif outcome not in ("EXHAUSTED", "BUDGET"):
        raise CertificationError(f"unknown outcome {outcome!r}")
    return outcome, p
