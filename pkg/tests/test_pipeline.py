import pytest

from hamlink.classic import cover_subset_by_paths
from hamlink.core import Path, PathSystem, WorkingDigraph
from hamlink.constants import audit_constants, max_linker_degree, tower_geq, Pow2
from hamlink.linkage import Linker, canonical_linker, verify_linker
from hamlink.pipeline import (
    ham_cycle_from_partition,
    verify_decomposition,
)
from hamlink.report import ConstructionError

from conftest import uniform


def canonical_partition(t, seed):
    """Canonical linker host plus a cover of the remaining vertices by t
    paths: a ready-made partition for the cycle induction."""
    host, linker = canonical_linker(t, seed=seed)
    outside = sorted(set(range(host.n)) - set(linker.vertex_set()))
    cover = cover_subset_by_paths(host, outside, t)
    if len(cover.paths) < t:
        from hamlink.classic import split_paths

        cover = split_paths(cover, t)
    if t == 1:
        family = [linker]
    else:
        family = [
            Linker(1, (linker.indominators[i],), (linker.outdominators[i],),
                   (linker.connectors[i],), tuple(linker.qpaths[5 * i : 5 * i + 5]),
                   linker.exceptional)
            for i in range(t)
        ]
    return host, cover, family


def test_ham_cycle_from_partition_k1():
    host, cover, family = canonical_partition(1, seed=7)
    cycle = ham_cycle_from_partition(host, cover, family)
    assert set(cycle.vertices) == set(range(host.n))
    assert cycle.is_valid_in(host) and host.has_arc(cycle.end, cycle.start)


def test_ham_cycle_from_partition_k2():
    host, cover, family = canonical_partition(2, seed=9)
    assert all(verify_linker(host, linker).passed for linker in family)
    cycle = ham_cycle_from_partition(host, cover, family)
    assert set(cycle.vertices) == set(range(host.n))
    assert cycle.is_valid_in(host) and host.has_arc(cycle.end, cycle.start)


def test_partition_precondition():
    host, cover, family = canonical_partition(1, seed=7)
    short = PathSystem([Path(cover.paths[0].vertices[:-1])], host=host)
    with pytest.raises(ValueError):
        ham_cycle_from_partition(host, short, family)


def test_verify_decomposition(paley7):
    t = paley7
    from hamlink.classic import moon_ham_cycle

    c1 = moon_ham_cycle(t)
    assert c1 is not None
    rep = verify_decomposition(t, [c1])
    assert rep.passed
    # same cycle twice shares every arc
    rep2 = verify_decomposition(t, [c1, c1])
    assert not rep2.passed
    missing = Path(c1.vertices[:-1])
    assert not verify_decomposition(t, [missing]).passed


def test_audit_constants_all_k():
    for k in range(1, 11):
        audit = audit_constants(k)
        assert audit.passed, [c.name for c in audit.checks if not c.holds]
    a = audit_constants(3)
    assert a.delta1 == max_linker_degree(12, 8, 8) == 192
    assert a.n_tower == "100*2^(2^(2^(2^10)))"
    assert a.big_c == a.big_c1.scale(a.delta1 + 2)
    assert a.big_c1 == a.c0.scale(8300 * a.delta1)
    assert a.c0 == a.c1.scale(2**32)
    blob = a.to_json()
    assert blob["passed"] and "2^" in blob["N"]


def test_tower_comparisons():
    assert tower_geq(Pow2(Pow2(10)), 2**63)
    assert tower_geq(Pow2(Pow2(Pow2(10))), Pow2(Pow2(11))) is True
    assert tower_geq(8, Pow2(2))
    assert not tower_geq(3, Pow2(2))
    with pytest.raises(ValueError):
        audit_constants(0)
