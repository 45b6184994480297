"""Acceptance criteria, one test per criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see one pass/fail line
per criterion.  The end-to-end runs use committed host/run seeds on the
ladder blowup hosts; construction failures there would be certified
outcomes, so the committed seeds are ones that must keep passing.
"""

import json
import math
import random
import subprocess
import sys

import pytest

from hamlink.classic import cover_by_k_paths, gallai_milgram_cover, moon_ham_cycle
from hamlink.constants import audit_constants
from hamlink.core import Path, Tournament, WorkingDigraph, is_strongly_connected
from hamlink.domination import (
    build_dominator,
    enlarge_exceptional,
    greedy_dominating_sequence,
    greedy_transitive,
    large_degree_vertices,
    short_path_count,
    verify_dominator,
)
from hamlink.hosts import LadderHostSpec, ladder_host
from hamlink.linkage import canonical_linker, linker_ham_path, verify_connector, verify_linker
from hamlink.oracle import (
    brute_disjoint_paths,
    brute_ham_cycle,
    brute_ham_path,
    generate,
    independence_number,
)
from hamlink.pipeline import edge_disjoint_ham_cycles, verify_decomposition
from hamlink.profiles import pipeline_profile

from conftest import random_digraph, uniform


def report(num: int, ok: bool, what: str) -> None:
    print(f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {what}")
    assert ok, f"criterion {num} failed: {what}"


def test_01_camion_moon_agreement():
    checked = 0
    for n in range(3, 11):
        for seed in range(200):
            t = uniform(n, seed)
            mine = moon_ham_cycle(t)
            oracle = brute_ham_cycle(t)
            assert (mine is None) == (oracle is None), (n, seed)
            if mine is not None:
                assert len(set(mine.vertices)) == n
                assert mine.is_valid_in(t) and t.has_arc(mine.end, mine.start)
            checked += 1
    report(1, checked == 1600, f"moon == oracle on {checked} tournaments, cycles verified")


def test_02_large_degree_facts():
    count = 0
    for seed in range(500):
        n = random.Random(seed).randint(26, 500)
        t = uniform(n, seed)
        big = large_degree_vertices(t, "out")
        assert len(big) * 25 >= n, (seed, n)
        assert all(t.out_degree(v) * 25 >= 12 * n for v in big), (seed, n)
        count += 1
    report(2, count == 500, "500 hosts: large-out degrees >= 12n/25, count >= n/25")


def test_03_short_path_families():
    for seed in range(100):
        n = random.Random(1000 + seed).randint(25, 200)
        t = uniform(n, seed)
        rng = random.Random(seed)
        outs = rng.sample(sorted(large_degree_vertices(t, "out")), 2)
        ins = rng.sample(sorted(large_degree_vertices(t, "in")), 2)
        for u in outs:
            for v in ins:
                if u == v:
                    continue
                count, fam = short_path_count(t, u, v)
                assert count >= math.ceil(n / 25), (seed, n, u, v)
                assert not fam.problems(t)
                assert all(p.length <= 3 for p in fam.paths)
    for seed in range(40):
        t = uniform(10, seed)
        u = sorted(large_degree_vertices(t, "out"))[0]
        v = next(w for w in sorted(large_degree_vertices(t, "in")) if w != u)
        count, _ = short_path_count(t, u, v)
        assert 1 <= count <= brute_disjoint_paths(t, u, v, 3)
    report(3, True, "short-path families >= ceil(n/25), disjoint, lengths <= 3, oracle-consistent")


def test_04_transitive_growth():
    sizes = [random.Random(i).randint(2, 500) for i in range(900)]
    sizes += [random.Random(10_000 + i).randint(500, 2000) for i in range(100)]
    for i, n in enumerate(sizes):
        t = uniform(n, i)
        seq = greedy_transitive(t)
        assert 2 ** len(seq) >= n, (i, n, len(seq))
    report(4, len(sizes) == 1000, "1000 hosts up to n=2000: 2^|chain| >= n")


def test_05_greedy_domination_expansion():
    for seed in range(50):
        n = random.Random(seed).randint(16, 400)
        t = uniform(n, seed)
        for k in range(1, 9):
            gs = greedy_dominating_sequence(t, k, "in")
            bound = 2 ** (len(gs.vertices) - 1) * len(gs.uncovered)
            assert all(t.out_degree(u) >= bound for u in gs.uncovered), (seed, k)
    report(5, True, "expansion inequality exact for k in 1..8, 50 seeds, n <= 400")


def test_06_dominator_suite():
    built = 0
    for i in range(25):
        n = random.Random(7000 + i).randint(2000, 10000)
        t = uniform(n, i)
        for orientation in ("in", "out"):
            dom = build_dominator(t, orientation, set(), m=2, M=5, L=1024, p=2)
            assert verify_dominator(t, dom).passed, (i, orientation)
            delta = min(
                (t.out_degree(v) if orientation == "in" else t.in_degree(v))
                for v in range(n)
            )
            fresh = max(set(range(n)) - dom.vertex_set() - dom.exceptional)
            bigger = set(dom.exceptional) | {fresh}
            if 2 * len(bigger) <= delta:
                grown = enlarge_exceptional(t, dom, bigger)
                assert grown.p == dom.p // 2
                assert verify_dominator(t, grown).passed, (i, orientation)
            built += 1
    report(6, built == 50, "50 dominator builds verified; robustness keeps the verifier green")


def test_07_connector_suite():
    from fractions import Fraction
    from hamlink.linkage import build_connector, transitive_connector
    from hamlink.report import ConstructionError
    from test_linkage import spread

    tt10 = Tournament.transitive(10)
    assert verify_connector(tt10, transitive_connector(list(range(10)))).passed

    from hamlink.rng import SplitMix64
    import dataclasses

    conn = transitive_connector(list(range(10)))
    rng = SplitMix64(99)
    rejected = 0
    for _ in range(1400):
        kind = rng.below(3)
        if kind == 0:
            mutated = dataclasses.replace(conn, vertices=conn.vertices - {rng.below(10)})
        elif kind == 1:
            w4 = list(conn.witness4)
            which = rng.below(4)
            if len(w4[which]) <= 1:
                continue
            w4[which] = Path(w4[which].vertices[:-1])
            mutated = dataclasses.replace(conn, witness4=tuple(w4))
        else:
            w5 = list(conn.witness5)
            w5.append(w5.pop(0))
            mutated = dataclasses.replace(conn, witness5=tuple(w5))
        if not verify_connector(tt10, mutated).passed:
            rejected += 1
    assert rejected >= 1000

    frac = Fraction(1, 2)
    engineered_ok = 0
    for seed in range(10):
        host = ladder_host(blocks=60, gap=2, elevators=0, block_size=25, seed=seed)
        xs = spread(sorted(large_degree_vertices(host, "out", frac)), 16)
        ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 16)
        try:
            c = build_connector(host, set(), xs, ys, 16, fraction=frac, seed=seed)
            assert verify_connector(host, c).passed
            engineered_ok += 1
        except ConstructionError as e:
            assert e.certificate.stage
    assert engineered_ok >= 1, "need a committed succeeding configuration"
    for seed in range(10):
        host = uniform(900, seed)
        xs = spread(sorted(large_degree_vertices(host, "out", frac)), 20)
        ys = spread(sorted(large_degree_vertices(host, "in", frac) - set(xs)), 20)
        try:
            c = build_connector(host, set(), xs, ys, 20, fraction=frac, seed=seed)
            assert verify_connector(host, c).passed
        except ConstructionError as e:
            assert e.certificate.stage
    report(7, True, f"TT10 passes, >=1000 mutations rejected, builds verify or certify "
                    f"({engineered_ok}/10 engineered successes)")


def test_08_linker_suite():
    for t in (1, 2, 3, 12):
        host, linker = canonical_linker(t, seed=7)
        assert verify_linker(host, linker).passed, t
    for t in (1, 2):
        host, linker = canonical_linker(t, seed=7)
        x = linker.indominators[0].a2[0]
        y = linker.outdominators[-1].a3[0]
        p = linker_ham_path(host, linker, x, y)
        assert set(p.vertices) == set(linker.vertex_set())
        assert p.is_valid_in(host) and p.start == x and p.end == y
    # oracle-scale weave shape: collapsed one-vertex blocks, piece order as
    # in the full construction, existence agrees with the exhaustive oracle
    from conftest import rewire

    a1, a2, a3, a4, q, b4, b3, b2, b1, src, mid, snk = range(12)
    forced = [
        (a1, a2), (a2, a3), (a3, a4), (a4, q), (q, b4),
        (b4, b3), (b3, b2), (b2, b1), (b1, src), (src, mid), (mid, snk), (snk, a1),
    ]
    host12 = rewire(uniform(12, 9), forced)
    weave = Path((a1, a2, a3, a4, q, b4, b3, b2, b1, src, mid, snk))
    assert weave.is_valid_in(host12)
    assert brute_ham_path(host12, a1, snk) is not None
    report(8, True, "canonical linkers verify (t=1,2,3,12); weaves verified; mini-fixture matches oracle")


def test_09_linking_step_contracts():
    from conftest import case_b_fixture, case_b_offpath_fixture, case_c_fixture
    from hamlink.linking import link_through

    host, linker = canonical_linker(1, seed=7)
    outside = sorted(set(range(host.n)) - set(linker.vertex_set()))
    x, y = outside[0], outside[1]
    s1, s2 = Path.of(outside[2]), Path.of(outside[3])
    res_a = link_through(host, linker, x, y, [s1, s2])
    assert res_a.case == "a" and len(res_a.extra_vertices) == 0
    assert res_a.rerouted.paths[0] == s1 and res_a.rerouted.paths[1] == s2

    hb, lb, xb, yb = case_b_fixture()
    res_b = link_through(hb, lb, xb, yb, [])
    assert res_b.case == "b" and len(res_b.extra_vertices) <= 1

    hb2, lb2, xb2, yb2, spare = case_b_offpath_fixture()
    res_b2 = link_through(hb2, lb2, xb2, yb2, [])
    assert res_b2.case == "b" and res_b2.extra_vertices == {spare}

    hc, lc, xc, yc = case_c_fixture()
    res_c = link_through(hc, lc, xc, yc, [])
    assert res_c.case == "c" and len(res_c.extra_vertices) <= 2

    for res, linker_used, fixtures in (
        (res_a, linker, [s1, s2]),
        (res_b, lb, []),
        (res_b2, lb2, []),
        (res_c, lc, []),
    ):
        got = set(res.path.vertices)
        for p in res.rerouted.paths:
            assert not (got & set(p.vertices))
            got |= set(p.vertices)
        want = set(linker_used.vertex_set()) | {res.path.start, res.path.end}
        want |= set(res.extra_vertices)
        for p in fixtures:
            want |= set(p.vertices)
        assert got == want
        assert len(res.extra_vertices) <= 6
    report(9, True, "extras 0/<=1/<=2 in cases a/b/c, endpoints preserved, union identity exact")


K1_RUNS = [(101, 5), (102, 6), (103, 7)]
K2_RUN = (77, 9)


def test_10_end_to_end_decompositions(tmp_path):
    prof = pipeline_profile(t=1, connector_budget=16)
    spec0 = LadderHostSpec(blocks=163, gap=2, elevators=4, block_size=50, seed=K1_RUNS[0][0])
    # first committed seed through the literal CLI surface
    host_file = tmp_path / "host.txt"
    host0 = generate(spec0.generator_spec())
    host_file.write_text(host0.to_text())
    out_file = tmp_path / "cycles.json"
    cli = subprocess.run(
        [sys.executable, "-m", "hamlink.cli", "hamdecomp", str(host_file),
         "--k", "1", "--profile", "desk", "--seed", str(K1_RUNS[0][1]),
         "--budget", "16", "--reserve", f"{163*50}:{167*50}", "--out", str(out_file)],
        capture_output=True, text=True, timeout=900,
    )
    assert cli.returncode == 0, cli.stdout + cli.stderr
    payload = json.loads(out_file.read_text())
    cycles0 = [Path(tuple(c)) for c in payload["cycles"]]
    assert verify_decomposition(host0, cycles0).passed

    for host_seed, run_seed in K1_RUNS[1:]:
        spec = LadderHostSpec(blocks=163, gap=2, elevators=4, block_size=50, seed=host_seed)
        host = generate(spec.generator_spec())
        reserve = frozenset(range(163 * 50, 167 * 50))
        cycles = edge_disjoint_ham_cycles(host, 1, prof, seed=run_seed, reserve=reserve)
        assert verify_decomposition(host, cycles).passed, (host_seed, run_seed)

    host_seed, run_seed = K2_RUN
    spec = LadderHostSpec(blocks=200, gap=2, elevators=4, block_size=50, seed=host_seed)
    host2 = generate(spec.generator_spec())
    reserve2 = frozenset(range(200 * 50, 204 * 50))
    prof2 = pipeline_profile(t=1, connector_budget=16, stage_slack=2)
    cycles2 = edge_disjoint_ham_cycles(
        host2, 2, prof2, seed=run_seed, family_size=2, reserve=reserve2
    )
    rep = verify_decomposition(host2, cycles2)
    assert rep.passed and len(cycles2) == 2
    report(10, True, "3 committed k=1 runs + 1 committed k=2 run verified end to end")


def test_11_constants_audit():
    for k in range(1, 11):
        audit = audit_constants(k)
        assert audit.passed, [c.name for c in audit.checks if not c.holds]
    a1 = audit_constants(1)
    assert a1.n_tower == "100*2^(2^(2^(2^10)))"
    names = {c.name for c in a1.checks}
    assert "C == (Delta1+2)*C1" in names
    assert "C1 == 8300*Delta1*C0" in names
    assert "C0 == 2^32 * c1" in names
    assert "104*t*k <= K/2" in names
    report(11, True, "all recorded inequalities pass for k in 1..10; N tower printed verbatim")


def test_12_gallai_milgram():
    for seed in range(200):
        n = random.Random(seed).randint(4, 20)
        d = random_digraph(n, seed, removal=0.3)
        ps = gallai_milgram_cover(d)
        assert ps.vertex_set() == set(range(n)), seed
        assert not ps.problems(d)
        assert len(ps.paths) <= independence_number(d), seed
    bound_checked = 0
    for seed in range(40):
        n = 9
        t = uniform(n, seed)
        cyc = moon_ham_cycle(t)
        if cyc is None:
            continue
        arcs = list(cyc.arcs()) + [(cyc.end, cyc.start)]
        d = WorkingDigraph(t, arcs)
        ps = cover_by_k_paths(d, 3)
        assert len(ps.paths) <= 3 and ps.vertex_set() == set(range(n))
        bound_checked += 1
    report(12, bound_checked >= 20,
           "200 covers within the independence number; degree-bound covers within k")
