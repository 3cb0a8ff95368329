from dataclasses import replace
from math import comb

import numpy as np
import pytest

from hypermatch.combinatorics import Coloring, InputError
from hypermatch.matching import WitnessError, check_matching, enumerate_perfect_matchings, make_matching
from hypermatch.pipelines import (
    ExtractionFailure,
    TraceStep,
    check_trace,
    extraction_certificate,
    generate_coloring,
    planted_disk,
    thm1_extract,
    thm2_extract,
    thm3_extract,
    verify_batch,
)
from hypermatch.structures import find_disk


def test_thm1_monochromatic_takes_first_pm():
    c = Coloring.constant(12, 3, 3)
    m = thm1_extract(c)
    assert m.colorset == {0}
    assert m.edges == min(enumerate_perfect_matchings(12, 3))


def test_thm1_forced_two_colors():
    c = generate_coloring("split:0", 12, 3, 3)
    assert all(c.color(e) == int(0 in e) for e in c.edges())
    m = thm1_extract(c)
    assert m.colorset == {0, 1}
    check_matching(c, m, size=4, max_colors=2)


def test_thm1_least_by_rank_sequence():
    rng = np.random.default_rng(1)
    for _ in range(3):
        c = generate_coloring("uniform", 12, 3, 3, rng)
        ok = [pm for pm in enumerate_perfect_matchings(12, 3) if len({c.colors[e] for e in pm}) <= 2]
        assert thm1_extract(c).edges == min(ok)


def test_thm1_uniform_batch():
    res = verify_batch(1, 500, seed=3)
    assert res.passed == 500 and not res.failures


def test_thm1_rejects_dimensions():
    with pytest.raises(InputError):
        thm1_extract(Coloring.constant(12, 3, 2))


def test_thm2_monochromatic_path():
    c = Coloring.constant(16, 3, 3, color=1)
    m, trace = thm2_extract(c)
    assert [s.rule for s in trace.steps] == ["mono-matching", "same-color-edge", "fill-edge"]
    assert m.colorset == {1} and len(m) == 5
    check_trace(c, trace, 2)


def _plant_pair_branch(n: int, seed_size: int) -> Coloring:
    """Seed matching in color 0 on the first vertices, remainder in colors 1/2.

    No color-0 edge survives among the uncovered 7 vertices, so the pipeline
    must fall through to the monochromatic-pair branch.
    """
    covered = 3 * seed_size
    rest = list(range(covered, n))

    def rule(e):
        if set(e) <= set(rest):
            return 1 if e[0] == rest[0] else 2
        return 0

    return Coloring.from_function(n, 3, 3, rule)


@pytest.mark.parametrize("which, n, seed_size", [(2, 16, 3), (3, 19, 4)])
def test_pair_branch(which, n, seed_size):
    c = _plant_pair_branch(n, seed_size)
    m, trace = (thm2_extract if which == 2 else thm3_extract)(c)
    assert [s.rule for s in trace.steps] == ["mono-matching", "mono-pair"]
    pair = trace.steps[1].fragment
    assert len(pair) == 2 and len(pair.colorset) == 1
    assert not pair.vertex_mask(n, 3) & trace.steps[0].fragment.vertex_mask(n, 3)
    check_trace(c, trace, which)
    check_matching(c, m, size=seed_size + 2, max_colors=2)


def test_thm3_monochromatic():
    m, trace = thm3_extract(Coloring.constant(19, 3, 3))
    assert len(m) == 6 and m.colorset == {0}
    check_trace(Coloring.constant(19, 3, 3), trace, 3)


@pytest.mark.parametrize("which", [2, 3])
def test_batch_random(which):
    res = verify_batch(which, 200, seed=5)
    assert res.passed == 200 and not res.failures


def test_pipelines_deterministic():
    c = generate_coloring("uniform", 16, 3, 3, 42)
    a, ta = thm2_extract(c)
    b, tb = thm2_extract(c)
    assert a == b and ta == tb
    assert extraction_certificate(2, a, ta) == extraction_certificate(2, b, tb)


def test_check_trace_catches_tampering():
    c = generate_coloring("uniform", 16, 3, 3, 7)
    _, trace = thm2_extract(c)
    bad = replace(trace, steps=[TraceStep("mono-pair", trace.steps[0].fragment)] + trace.steps[1:])
    with pytest.raises(WitnessError):
        check_trace(c, bad, 2)
    other = make_matching(c, [e for e in range(comb(16, 3)) if c.colors[e] != next(iter(trace.final.colorset))][:1])
    with pytest.raises(WitnessError):
        check_trace(c, replace(trace, final=other), 2)


def test_extraction_failure_certificate():
    exc = ExtractionFailure(1, Coloring.constant(12, 3, 3), "demo")
    assert exc.certificate.startswith("EXTRACT theorem=1\nOUTCOME COUNTEREXAMPLE\n")
    assert exc.certificate.endswith("12 3 3\n" + "0" * 220 + "\n")


def test_generators_deterministic():
    for spec in ("uniform", "split", "near-mono:7", "planted-disk"):
        a = generate_coloring(spec, 12, 3, 3, 123)
        b = generate_coloring(spec, 12, 3, 3, 123)
        assert a == b


def test_near_mono():
    assert generate_coloring("near-mono:0", 12, 3, 3, 1) == Coloring.constant(12, 3, 3)
    c = generate_coloring("near-mono:9", 12, 3, 3, 1)
    assert sum(x != 0 for x in c.colors) == 9


def test_planted_disk_generator():
    for seed in range(10):
        assert find_disk(generate_coloring("planted-disk", 12, 3, 3, seed)) is not None
    c, disk = planted_disk()
    inside = lambda e: any(set(e) <= set(x) for x in disk.sets)
    assert all(c.color(e) == 0 for e in c.edges() if not inside(e))


def test_unknown_generator():
    with pytest.raises(InputError):
        generate_coloring("bogus", 12, 3, 3)
    with pytest.raises(InputError):
        generate_coloring("planted-disk", 16, 3, 3)
