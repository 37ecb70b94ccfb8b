"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get the PASS/FAIL summary at the
end of the session.
"""

import itertools
import os
import pathlib
import random
import subprocess
import sys
import time
from math import factorial, prod

import pytest
from click.testing import CliRunner

from selectorkit import (
    CoarseBase,
    Entourage,
    GeneratorSet,
    GroundSet,
    SetValuedMap,
    build_map,
    cellular_checks,
    components,
    conflict_graph,
    decompose,
    decompose_by_components,
    degree_bounds,
    enumerate_bijective_selectors,
    ideal_closure_check,
    is_asymorphism,
    min_family_oracle,
    orbit_base,
    orbit_entourage,
    represent,
    represent_cellular,
    validate_base,
    verify_family,
)
from selectorkit.cellular import PartitionEntourage
from selectorkit.cli import main
from selectorkit.decomposition import Infeasible
from selectorkit.documents import format_family
from selectorkit.errors import NotSymmetric

from oracles import (
    all_symmetric_maps,
    integer_partitions,
    line_pairs,
    random_map,
    random_symmetric_map,
    set_partitions,
)

ROOT = pathlib.Path(__file__).parent.parent
GOLDEN = pathlib.Path(__file__).parent / "golden"

TIME_LIMIT_PER_DECOMPOSE = 2.0
ORACLE_SUITE_LIMIT = 300.0


def _criterion_1_instances():
    r = random.Random(20260101)
    return [random_symmetric_map(r, 200, 8) for _ in range(500)]


@pytest.fixture(scope="module")
def big_instances():
    return _criterion_1_instances()


@pytest.mark.acceptance(1, "round trip on 500 symmetric maps, |X|=200, degree <= 8, < 2 s each")
def test_round_trip_law(big_instances):
    slowest = 0.0
    for F in big_instances:
        assert degree_bounds(F).max_image <= 8
        t0 = time.perf_counter()
        fam = decompose(F, "strict")
        elapsed = time.perf_counter() - t0
        slowest = max(slowest, elapsed)
        rep = verify_family(F, fam)
        assert rep.bijective_ok and rep.selector_ok and rep.coverage_ok and rep.size_bound_ok, rep.witnesses
        assert elapsed < TIME_LIMIT_PER_DECOMPOSE
    print(f"slowest decompose: {slowest:.4f} s")


@pytest.mark.acceptance(2, "size bound (d+1)^2*M and conflict degrees < (d+1)^2")
def test_size_bound(big_instances):
    for F in big_instances:
        b = degree_bounds(F)
        d = max(b.max_image, b.max_preimage)
        fam = decompose(F, "strict")
        assert len(fam) <= (d + 1) ** 2 * b.max_image
        g = conflict_graph(F)
        assert g.max_degree() < (d + 1) ** 2


@pytest.mark.acceptance(3, "oracle equivalence: all symmetric maps |X|<=4 and 200 random |X|=6")
def test_oracle_equivalence():
    t0 = time.perf_counter()
    r = random.Random(6)
    cases = [F for n in range(1, 5) for F in all_symmetric_maps(n)]
    assert len(cases) == 1 + 2 + 8 + 64
    cases += [random_symmetric_map(r, 6, 6) for _ in range(200)]
    for F in cases:
        fam = decompose(F, "strict")
        realized = {(x, f(x)) for f in fam for x in F.ground}
        assert realized == F.pairs()
        enumerated = {p.images for p in enumerate_bijective_selectors(F)}
        assert all(p.images in enumerated for p in fam)
        res = min_family_oracle(F)
        assert not isinstance(res, Infeasible)
        assert res.size <= len(fam)
    elapsed = time.perf_counter() - t0
    print(f"oracle suite: {elapsed:.2f} s")
    assert elapsed < ORACLE_SUITE_LIMIT


@pytest.mark.acceptance(4, "impossibility guard F(1)={1,2}, F(2)={2}")
def test_impossibility_guard():
    F = SetValuedMap.from_dict({1: {1, 2}, 2: {2}})
    with pytest.raises(NotSymmetric) as info:
        decompose(F, "strict")
    assert info.value.pair == (1, 2)
    res = min_family_oracle(F)
    assert isinstance(res, Infeasible)
    assert res.witness == (1, 2)


@pytest.mark.acceptance(5, "line ballean on {0..9}: base valid, orbit equality, ideal depth 2")
def test_line_ballean():
    g = GroundSet(tuple(range(10)))
    base = CoarseBase(g, tuple((f"E{r}", Entourage(g, frozenset(line_pairs(r)))) for r in (0, 1, 2, 4, 8, 9)))
    assert validate_base(base).ok
    rep = represent(base)
    for (name, E), gen in zip(base, rep.generators):
        assert orbit_entourage(gen).pairs == E.pairs, name
    report = ideal_closure_check(rep, depth=2)
    assert report.undominated == []


def _partition_bases():
    """Bases of one or two partitions of range(n), n <= 8, blocks <= 4.

    The first partition is the canonical representative of its shape, the
    second runs over all set partitions, which reaches every base of at most
    two partitions up to relabeling.
    """
    out = []
    for n in range(1, 9):
        ground = tuple(range(n))
        shapes = list(integer_partitions(n, 4))
        others = [p for p in set_partitions(ground) if max(len(b) for b in p) <= 4]
        for shape in shapes:
            cuts = list(itertools.accumulate(shape))
            first = [list(range(a, b)) for a, b in zip([0] + cuts[:-1], cuts)]
            out.append((n, (first,)))
            for other in others:
                out.append((n, (first, other)))
    return out


@pytest.mark.acceptance(6, "cellular bases |X|<=8, blocks<=4 (100 sampled): orbits, closure order, asymorphism")
def test_cellular_desk_scale():
    population = _partition_bases()
    sample = random.Random(3).sample(population, 100)
    for n, parts in sample:
        g = GroundSet(tuple(range(n)))
        pes = [PartitionEntourage.from_blocks(g, p) for p in parts]
        base = CoarseBase(g, tuple((f"P{i}", pe.relation()) for i, pe in enumerate(pes)))
        rep = represent_cellular(base)
        for pe, chk, cl in zip(pes, cellular_checks(rep), rep.closures):
            assert cl.finite
            assert prod(factorial(len(b)) for b in pe.blocks) % cl.order == 0
            orbit = orbit_entourage(GeneratorSet("G", tuple(cl.elements)))
            assert orbit.pairs == pe.relation().pairs
            assert chk.ok
        assert is_asymorphism(lambda x: x, base, orbit_base(rep)).ok


def _multi_component_map(r):
    k = r.randint(3, 6)
    sizes = [r.randint(1, 12) for _ in range(k)]
    labels = list(range(sum(sizes)))
    r.shuffle(labels)
    entries = []
    start = 0
    symmetric = r.random() < 0.5
    for size in sizes:
        block = labels[start:start + size]
        start += size
        sub = random_symmetric_map(r, size, 4) if symmetric else random_map(r, size, 3)
        for i, img in sub.items():
            entries.append((block[i], {block[j] for j in img}))
    F = build_map(GroundSet(tuple(range(len(labels)))), entries)
    return F, "strict" if symmetric else "relaxed"


@pytest.mark.acceptance(7, "block-parallel decomposition byte-identical on 100 maps with >= 3 components")
def test_component_parallel_determinism():
    r = random.Random(77)
    done = 0
    while done < 100:
        F, mode = _multi_component_map(r)
        if len(components(F).blocks) < 3:
            continue
        seq = format_family(decompose(F, mode), F.ground).encode()
        for workers in (2, 4):
            par = format_family(decompose_by_components(F, mode, workers=workers), F.ground).encode()
            assert par == seq
        done += 1


CANONICAL = [
    ("decompose_map", ["decompose", "--mode", "strict", str(ROOT / "samples" / "map.yaml")]),
    ("represent_line", ["represent", str(ROOT / "samples" / "line.yaml")]),
    ("represent_cells", ["represent", "--cellular", str(ROOT / "samples" / "cells.yaml")]),
]


@pytest.mark.acceptance(8, "CLI golden files byte-identical over 10 runs and thread counts")
def test_cli_determinism():
    runner = CliRunner()
    for name, args in CANONICAL:
        expect = (GOLDEN / f"{name}.out").read_bytes()
        for run in range(10):
            workers = (1, 2, 4)[run % 3]
            result = runner.invoke(main, ["--workers", str(workers)] + args, catch_exceptions=False)
            assert result.exit_code == 0
            assert result.stdout_bytes == expect
        for workers in ("1", "4"):
            env = dict(os.environ, SELECTORKIT_WORKERS=workers)
            proc = subprocess.run(
                [sys.executable, "-m", "selectorkit.cli"] + args, capture_output=True, env=env, check=False
            )
            assert proc.returncode == 0
            assert proc.stdout == expect
