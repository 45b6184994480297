import dataclasses
import json

import pytest

from hamlink.core import Path, Tournament, bit, mask_of
from hamlink.linkage import (
    canonical_linker,
    build_connector,
    linker_ham_path,
    ramsey_select,
    transitive_connector,
    verify_connector,
    verify_linker,
)
from hamlink.hosts import ladder_host
from hamlink.oracle import brute_ham_path, GeneratorSpec, generate
from hamlink.report import ConstructionError
from hamlink.rng import SplitMix64
from hamlink.serialize import connector_from_json, connector_to_json, linker_from_json, linker_to_json

from conftest import rewire, uniform


def test_tt10_connector_passes():
    tt10 = Tournament.transitive(10)
    conn = transitive_connector(list(range(10)))
    assert verify_connector(tt10, conn).passed


def test_connector_corruption_rejected():
    tt10 = Tournament.transitive(10)
    conn = transitive_connector(list(range(10)))
    # dropped witness path
    broken = dataclasses.replace(conn, witness5=conn.witness5[:-1])
    assert not verify_connector(tt10, broken).passed
    # vertex reused across two paths
    w5 = list(conn.witness5)
    w5[1] = Path.of(conn.sources[1], conn.witness5[0].vertices[-1])
    assert not verify_connector(tt10, dataclasses.replace(conn, witness5=tuple(w5))).passed


def test_connector_fuzz_mutations():
    tt10 = Tournament.transitive(10)
    conn = transitive_connector(list(range(10)))
    rng = SplitMix64(99)
    rejected = 0
    attempts = 0
    while attempts < 1200:
        kind = rng.below(4)
        mutated = None
        if kind == 0:  # drop a vertex from the set
            v = rng.below(10)
            mutated = dataclasses.replace(conn, vertices=conn.vertices - {v})
        elif kind == 1:  # swap a source with a sink
            i, j = rng.below(5), rng.below(5)
            src = list(conn.sources)
            snk = list(conn.sinks)
            src[i], snk[j] = snk[j], src[i]
            mutated = dataclasses.replace(conn, sources=tuple(src), sinks=tuple(snk))
        elif kind == 2:  # truncate a witness path
            which = rng.below(4)
            w4 = list(conn.witness4)
            if len(w4[which]) > 1:
                w4[which] = Path(w4[which].vertices[:-1])
                mutated = dataclasses.replace(conn, witness4=tuple(w4))
        else:  # rotate witness5 assignments out of line
            w5 = list(conn.witness5)
            w5.append(w5.pop(0))
            mutated = dataclasses.replace(conn, witness5=tuple(w5))
        attempts += 1
        if mutated is None:
            continue
        if not verify_connector(tt10, mutated).passed:
            rejected += 1
    assert rejected >= 1000


def spread(pool: list[int], count: int) -> list[int]:
    stride = max(1, len(pool) // count)
    return pool[::stride][:count]


def test_connector_build_on_engineered_hosts():
    ok = 0
    for seed in range(10):
        host = ladder_host(blocks=60, gap=2, elevators=0, block_size=25, seed=seed)
        from fractions import Fraction
        from hamlink.domination import large_degree_vertices

        frac = Fraction(1, 2)
        xs = spread(sorted(large_degree_vertices(host, "out", frac)), 16)
        ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 16)
        try:
            conn = build_connector(host, set(), xs, ys, 16, fraction=frac, seed=seed)
        except ConstructionError:
            continue
        assert verify_connector(host, conn).passed
        ok += 1
    assert ok >= 6


def test_connector_build_seeded_uniform_success_or_certificate():
    from fractions import Fraction
    from hamlink.domination import large_degree_vertices

    successes = 0
    for seed in range(10):
        host = uniform(900, seed)
        frac = Fraction(1, 2)
        xs = spread(sorted(large_degree_vertices(host, "out", frac)), 20)
        ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 20)
        try:
            conn = build_connector(host, set(), xs, ys, 20, fraction=frac, seed=seed)
        except ConstructionError as e:
            assert e.certificate.stage.startswith("connector")
            continue
        assert verify_connector(host, conn).passed
        successes += 1
    # success is not required on uniform hosts, certificates are


def test_connector_build_regression_seed():
    # committed succeeding configuration
    host = ladder_host(blocks=60, gap=2, elevators=0, block_size=25, seed=3)
    from fractions import Fraction
    from hamlink.domination import large_degree_vertices

    frac = Fraction(1, 2)
    xs = spread(sorted(large_degree_vertices(host, "out", frac)), 16)
    ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 16)
    conn = build_connector(host, set(), xs, ys, 16, fraction=frac, seed=3)
    assert verify_connector(host, conn).passed
    blob = json.dumps(connector_to_json(conn))
    assert verify_connector(host, connector_from_json(json.loads(blob))).passed


def test_connector_precondition_errors():
    host = ladder_host(blocks=60, gap=2, elevators=0, block_size=25, seed=1)
    from fractions import Fraction
    from hamlink.domination import large_degree_vertices

    frac = Fraction(1, 2)
    xs = spread(sorted(large_degree_vertices(host, "out", frac)), 16)
    ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 16)
    with pytest.raises(ValueError):
        build_connector(host, {xs[0]}, xs, ys, 16, fraction=frac)


def test_ramsey_select_blowup_fixture():
    # blowup of a transitive base: all cross arcs point forward, so picks
    # from the high blocks and refined sets from the low ones always work
    base = Tournament.transitive(8)
    host = generate(GeneratorSpec("blowup", 8 * 10, seed=2, base=base, blocks=(10,) * 8))
    sets = [tuple(range(b * 10, b * 10 + 10)) for b in range(8)]
    sel = ramsey_select(host, sets, m=5, t=3, ell=3, direction="toward", seed=1)
    assert len(sel.kept) == 3 and len(sel.picked) == 3
    for i in sel.kept:
        for j in sel.picked:
            for u in sel.refined[i]:
                assert host.has_arc(u, sel.picks[j])
    rev = ramsey_select(host, sets, m=5, t=3, ell=3, direction="from", seed=1)
    for i in rev.kept:
        for j in rev.picked:
            for u in rev.refined[i]:
                assert host.has_arc(rev.picks[j], u)


def test_ramsey_select_errors():
    base = Tournament.transitive(4)
    host = generate(GeneratorSpec("blowup", 4 * 10, seed=2, base=base, blocks=(10,) * 4))
    sets = [tuple(range(b * 10, b * 10 + 10)) for b in range(4)]
    with pytest.raises(ValueError):
        ramsey_select(host, sets, m=5, t=3, ell=3)
    with pytest.raises(ValueError):
        ramsey_select(host, [s[:4] for s in sets], m=5, t=1, ell=1)


@pytest.mark.parametrize("t", [1, 2, 3, 12])
def test_canonical_linker_verifies(t):
    host, linker = canonical_linker(t, seed=7)
    rep = verify_linker(host, linker)
    assert rep.passed, rep.summary()
    assert all(not d.uncovered for d in linker.indominators + linker.outdominators)


def test_canonical_determinism():
    a_host, a_linker = canonical_linker(2, seed=5)
    b_host, b_linker = canonical_linker(2, seed=5)
    assert a_host == b_host and a_linker == b_linker
    c_host, _ = canonical_linker(2, seed=6)
    assert c_host != a_host


def test_verify_linker_detects_corruption():
    host, linker = canonical_linker(1, seed=3)
    # delete one forced boundary arc from the host
    sink = linker.connectors[0].sinks[0]
    a1 = linker.indominators[0].a1[0]
    host2 = rewire(host, [(a1, sink)])
    rep = verify_linker(host2, linker)
    assert not rep.passed
    assert any(c.clause == "L5" for c in rep.failures())
    # uncovered-size ordering violation
    host3, linker3 = canonical_linker(2, seed=3)
    outside = sorted(set(range(host3.n)) - set(linker3.vertex_set()))
    doms = list(linker3.indominators)
    doms[1] = dataclasses.replace(doms[1], uncovered=frozenset(outside[:2]))
    rep3 = verify_linker(host3, dataclasses.replace(linker3, indominators=tuple(doms)))
    assert any(c.clause == "L3" for c in rep3.failures())


def test_linker_ham_path_canonical():
    for t in (1, 2):
        host, linker = canonical_linker(t, seed=7)
        x = linker.indominators[0].a2[0]
        y = linker.outdominators[-1].a3[0]
        p = linker_ham_path(host, linker, x, y)
        assert p.start == x and p.end == y
        assert set(p.vertices) == set(linker.vertex_set())
        assert len(p.vertices) == len(linker.vertex_set())
        assert p.is_valid_in(host)
        # sink variant
        ysink = linker.connectors[-1].sinks[2]
        p2 = linker_ham_path(host, linker, x, ysink)
        assert p2.end == ysink and set(p2.vertices) == set(linker.vertex_set())
    with pytest.raises(ValueError):
        linker_ham_path(host, linker, x, x)


def test_mini_weave_matches_oracle():
    """Collapsed weave on an oracle-scale host: one vertex per block, the
    witness path degenerate, and the piece order exactly as the full weave;
    existence must agree with the exhaustive oracle."""
    # blocks: a1 a2 a3 a4 | q | b4 b3 b2 b1 | src mid snk  (12 vertices)
    a1, a2, a3, a4, q, b4, b3, b2, b1, src, mid, snk = range(12)
    forced = [
        (a1, a2), (a2, a3), (a3, a4),            # entry chain
        (a4, q), (q, b4),                        # path hops
        (b4, b3), (b3, b2), (b2, b1),            # exit chain (host arcs)
        (b1, src), (src, mid), (mid, snk),       # connector thread
        (snk, a1),                               # closing boundary arc
    ]
    rng_host = uniform(12, 9)
    host = rewire(rng_host, forced)
    weave = [a1, a2, a3, a4, q, b4, b3, b2, b1, src, mid, snk]
    p = Path(tuple(weave))
    assert p.is_valid_in(host)
    oracle = brute_ham_path(host, a1, snk)
    assert oracle is not None  # and the weave exhibits one such path


def test_linker_serialization_roundtrip():
    host, linker = canonical_linker(2, seed=11)
    blob = json.dumps(linker_to_json(linker))
    again = linker_from_json(json.loads(blob))
    assert again == linker
    assert verify_linker(host, again).passed
