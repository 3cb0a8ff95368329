"""Extraction of the 2-colored matchings on K_12^3, K_16^3 and K_19^3, the
coloring generators used to exercise them, and batch verification.
"""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .combinatorics import Coloring, InputError, VertexSet, edge_masks, edge_ranks, serialize
from .matching import (
    Matching,
    WitnessError,
    check_matching,
    enumerate_perfect_matchings,
    find_mono_matching,
    format_matching,
    make_matching,
)
from .structures import Disk

# theorem -> (n, matching size, size of the monochromatic seed matching)
THEOREMS = {1: (12, 4, None), 2: (16, 5, 3), 3: (19, 6, 4)}
GENERATORS = ("uniform", "split", "near-mono", "planted-disk")


class ExtractionFailure(RuntimeError):
    """No witness was found; this would contradict a theorem.

    ``certificate`` holds the offending coloring for independent inspection.
    """

    def __init__(self, which: int, coloring: Coloring, reason: str):
        super().__init__(f"theorem {which} extraction failed: {reason}")
        self.which = which
        self.coloring = coloring
        self.certificate = (
            f"EXTRACT theorem={which}\nOUTCOME COUNTEREXAMPLE\nREASON {reason}\n"
            + serialize(coloring)
        )


@dataclass(frozen=True)
class TraceStep:
    rule: str
    fragment: Matching


@dataclass
class ExtractionTrace:
    steps: list[TraceStep] = field(default_factory=list)
    final: Matching | None = None


def _check_dims(coloring: Coloring, which: int) -> None:
    n = THEOREMS[which][0]
    if (coloring.n, coloring.r, coloring.t) != (n, 3, 3):
        raise InputError(
            f"theorem {which} needs n={n}, r=3, t=3; got "
            f"n={coloring.n}, r={coloring.r}, t={coloring.t}"
        )


@lru_cache(maxsize=None)
def _perfect_matching_table() -> np.ndarray:
    rows = np.array(list(enumerate_perfect_matchings(12, 3)), dtype=np.int64)
    order = np.lexsort(rows.T[::-1])
    table = rows[order]
    table.setflags(write=False)
    return table


_FEW_COLORS = np.array([bin(m).count("1") <= 2 for m in range(8)])


def thm1_extract(coloring: Coloring) -> Matching:
    """Least (by rank sequence) perfect matching of K_12^3 on at most 2 colors."""
    _check_dims(coloring, 1)
    table = _perfect_matching_table()
    bits = np.bitwise_or.reduce(np.left_shift(1, coloring.array[table]), axis=1)
    ok = _FEW_COLORS[bits]
    idx = int(np.argmax(ok))
    if not ok[idx]:
        raise ExtractionFailure(1, coloring, "no perfect matching on at most 2 colors")
    return make_matching(coloring, (int(e) for e in table[idx]))


def _least_edge(coloring: Coloring, vmask: int, color: int | None = None) -> int | None:
    cols = coloring.colors
    for i, m in enumerate(edge_masks(coloring.n, coloring.r)):
        if m & vmask == m and (color is None or cols[i] == color):
            return i
    return None


def _afl_pipeline(coloring: Coloring, which: int) -> tuple[Matching, ExtractionTrace]:
    _check_dims(coloring, which)
    n, size, seed_size = THEOREMS[which]
    trace = ExtractionTrace()
    found = find_mono_matching(coloring, seed_size)
    if found is None:
        raise ExtractionFailure(which, coloring, f"no monochromatic {seed_size}-matching")
    c1, m1 = found
    trace.steps.append(TraceStep("mono-matching", m1))
    rest = ((1 << n) - 1) & ~m1.vertex_mask(n, 3)

    e = _least_edge(coloring, rest, c1)
    if e is not None:
        trace.steps.append(TraceStep("same-color-edge", make_matching(coloring, [e])))
        f = _least_edge(coloring, rest & ~edge_masks(n, 3)[e])
        trace.steps.append(TraceStep("fill-edge", make_matching(coloring, [f])))
        final = make_matching(coloring, m1.edges + (e, f))
    else:
        pair = find_mono_matching(coloring, 2, VertexSet(rest, n))
        if pair is None:
            raise ExtractionFailure(which, coloring, "2-colored 7-set without a monochromatic disjoint pair")
        trace.steps.append(TraceStep("mono-pair", pair[1]))
        final = make_matching(coloring, m1.edges + pair[1].edges)
    trace.final = final
    return final, trace


def thm2_extract(coloring: Coloring) -> tuple[Matching, ExtractionTrace]:
    """2-colored 5-matching in a 3-colored K_16^3."""
    return _afl_pipeline(coloring, 2)


def thm3_extract(coloring: Coloring) -> tuple[Matching, ExtractionTrace]:
    """2-colored 6-matching in a 3-colored K_19^3."""
    return _afl_pipeline(coloring, 3)


def check_trace(coloring: Coloring, trace: ExtractionTrace, which: int) -> None:
    """Re-validate every step of a K_16^3 / K_19^3 extraction trace."""
    n, size, seed_size = THEOREMS[which]
    steps = trace.steps
    if not steps or steps[0].rule != "mono-matching":
        raise WitnessError("trace must open with the monochromatic matching")
    m1 = steps[0].fragment
    check_matching(coloring, m1, size=seed_size, max_colors=1)
    (c1,) = m1.colorset
    rest = ((1 << n) - 1) & ~m1.vertex_mask(n, 3)
    masks = edge_masks(n, 3)
    rules = [s.rule for s in steps[1:]]
    if rules == ["same-color-edge", "fill-edge"]:
        e, f = steps[1].fragment, steps[2].fragment
        check_matching(coloring, e, size=1)
        check_matching(coloring, f, size=1)
        if e.colorset != {c1}:
            raise WitnessError("branch edge does not share the seed matching's color")
        if masks[e.edges[0]] & ~rest or masks[f.edges[0]] & ~(rest & ~masks[e.edges[0]]):
            raise WitnessError("branch edges leave the uncovered vertices")
        expected = m1.edges + e.edges + f.edges
    elif rules == ["mono-pair"]:
        pair = steps[1].fragment
        check_matching(coloring, pair, size=2, max_colors=1)
        if pair.vertex_mask(n, 3) & ~rest:
            raise WitnessError("pair leaves the uncovered vertices")
        if any(m & rest == m and coloring.colors[i] == c1 for i, m in enumerate(masks)):
            raise WitnessError("pair branch taken although a seed-colored edge was available")
        expected = m1.edges + pair.edges
    else:
        raise WitnessError(f"unexpected rule sequence {rules}")
    if trace.final is None or tuple(sorted(expected)) != trace.final.edges:
        raise WitnessError("final matching is not the union of the step fragments")
    check_matching(coloring, trace.final, size=size, max_colors=2)


def format_trace(trace: ExtractionTrace, n: int) -> str:
    lines = []
    for step in trace.steps:
        colors = ",".join(str(c) for c in sorted(step.fragment.colorset))
        edges = ";".join(" ".join(map(str, e)) for e in sorted(step.fragment.vertex_tuples(n, 3)))
        lines.append(f"STEP {step.rule} colors={colors} edges={edges}")
    return "\n".join(lines) + "\n"


def extraction_certificate(which: int, matching: Matching, trace: ExtractionTrace | None = None) -> str:
    n = THEOREMS[which][0]
    out = f"EXTRACT theorem={which}\nINPUT n={n} r=3 t=3\n# vertices are 0-indexed\n"
    if trace is not None:
        out += format_trace(trace, n)
    return out + format_matching(matching, n, 3)


def extract(coloring: Coloring, which: int) -> tuple[Matching, ExtractionTrace | None]:
    if which not in THEOREMS:
        raise InputError(f"unknown theorem {which}; pick 1, 2 or 3")
    if which == 1:
        return thm1_extract(coloring), None
    return _afl_pipeline(coloring, which)


# -- generators ----------------------------------------------------------------


def planted_disk(
    perm=None, color_order=(0, 1, 2), background: int = 0
) -> tuple[Coloring, Disk]:
    """Three monochromatic 6-sets of K_12^3 meeting pairwise in 2 vertices.

    Roles p,q,r,s,u,w,x1,x2,y1,y2,z1,z2 are placed on vertices ``perm``;
    X1={p,q,u,w,x1,x2}, X2={p,q,r,s,y1,y2}, X3={r,s,u,w,z1,z2}.
    """
    perm = list(range(12)) if perm is None else [int(v) for v in perm]
    p, q, r, s, u, w, x1, x2, y1, y2, z1, z2 = perm
    sets = tuple(
        VertexSet.of(vs, 12)
        for vs in ((p, q, u, w, x1, x2), (p, q, r, s, y1, y2), (r, s, u, w, z1, z2))
    )
    colors = bytearray([background]) * comb(12, 3)
    ranks = edge_ranks(12, 3)
    for xs, c in zip(sets, color_order):
        for e, rank in ranks.items():
            if set(e) <= set(xs):
                colors[rank] = c
    return Coloring(12, 3, 3, bytes(colors)), Disk(sets, tuple(color_order))


def parse_generator(spec: str) -> tuple[str, str | None]:
    name, _, arg = spec.partition(":")
    if name not in GENERATORS:
        raise InputError(f"unknown generator {name!r}; known: {', '.join(GENERATORS)}")
    return name, arg or None


def generate_coloring(spec: str, n: int, r: int, t: int, rng: np.random.Generator | int = 0) -> Coloring:
    """Deterministic coloring from a generator spec and a seed (or generator).

    Specs: ``uniform``, ``split`` / ``split:0,4,7`` (color |e & P| mod t; a
    random P when not given), ``near-mono`` / ``near-mono:m`` (all color 0
    except m random edges), ``planted-disk`` (K_12^3 only).
    """
    name, arg = parse_generator(spec)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    total = comb(n, r)
    if name == "uniform":
        return Coloring(n, r, t, rng.integers(0, t, size=total, dtype=np.uint8).tobytes())
    if name == "split":
        if arg is None:
            part = {int(v) for v in np.flatnonzero(rng.integers(0, 2, size=n))}
        else:
            part = {int(v) for v in arg.split(",")}
        if any(not 0 <= v < n for v in part):
            raise InputError(f"split set {sorted(part)} not inside 0..{n - 1}")
        return Coloring.from_function(n, r, t, lambda e: len(part.intersection(e)) % t)
    if name == "near-mono":
        m = 5 if arg is None else int(arg)
        if not 0 <= m <= total:
            raise InputError(f"near-mono needs 0 <= m <= {total}")
        colors = np.zeros(total, dtype=np.uint8)
        if m and t > 1:
            where = rng.choice(total, size=m, replace=False)
            colors[where] = rng.integers(1, t, size=m, dtype=np.uint8)
        return Coloring(n, r, t, colors.tobytes())
    if (n, r, t) != (12, 3, 3):
        raise InputError("planted-disk needs n=12, r=3, t=3")
    coloring, _ = planted_disk(rng.permutation(12), tuple(int(c) for c in rng.permutation(3)))
    return coloring


# -- batch verification ----------------------------------------------------------


@dataclass
class VerifyResult:
    which: int
    generator: str
    trials: int
    seed: int
    passed: int
    failures: list[str]
    digest: str
    seconds: float

    def summary(self) -> str:
        status = "PASS" if not self.failures else "FAIL"
        return (
            f"verify theorem={self.which} generator={self.generator} "
            f"trials={self.trials} seed={self.seed}\n"
            f"passed {self.passed}/{self.trials} {status}\n"
            f"certificates sha256={self.digest}\n"
        )


def verify_one(coloring: Coloring, which: int) -> str:
    """Extract, independently validate, and return the witness certificate."""
    matching, trace = extract(coloring, which)
    size = THEOREMS[which][1]
    check_matching(coloring, matching, size=size, max_colors=2)
    if trace is not None:
        check_trace(coloring, trace, which)
    return extraction_certificate(which, matching, trace)


def verify_batch(which: int, trials: int, seed: int = 0, generator: str = "uniform") -> VerifyResult:
    if which not in THEOREMS:
        raise InputError(f"unknown theorem {which}; pick 1, 2 or 3")
    if trials < 1:
        raise InputError("trials must be positive")
    n = THEOREMS[which][0]
    parse_generator(generator)
    start = time.perf_counter()
    digest = hashlib.sha256()
    failures = []
    passed = 0
    for i in range(trials):
        coloring = generate_coloring(generator, n, 3, 3, np.random.default_rng([seed, i]))
        try:
            cert = verify_one(coloring, which)
        except (ExtractionFailure, WitnessError) as exc:
            failures.append(f"trial {i}: {exc}")
            cert = f"FAILED trial {i}\n" + serialize(coloring)
        else:
            passed += 1
        digest.update(cert.encode())
    return VerifyResult(which, generator, trials, seed, passed, failures, digest.hexdigest(),
                        time.perf_counter() - start)
