import dataclasses
import random

import pytest

from hamlink.core import Path, Tournament, bit
from hamlink.linkage import canonical_linker
from hamlink.oracle import GeneratorSpec, generate


def uniform(n: int, seed: int) -> Tournament:
    return generate(GeneratorSpec("uniform", n, seed))


@pytest.fixture(scope="session")
def paley7() -> Tournament:
    return generate(GeneratorSpec("paley", 7))


@pytest.fixture(scope="session")
def tt5() -> Tournament:
    return Tournament.transitive(5)


@pytest.fixture(scope="session")
def c3() -> Tournament:
    return Tournament.cyclic(3)


def random_digraph(n: int, seed: int, removal: float = 0.25):
    """Tournament minus a seeded random arc subset."""
    from hamlink.core import WorkingDigraph

    t = uniform(n, seed)
    rr = random.Random(seed ^ 0xD16E)
    removed = [a for a in t.arcs() if rr.random() < removal]
    return WorkingDigraph(t, removed)


def rewire(host: Tournament, force_arcs) -> Tournament:
    """Copy of the host with the listed arcs forced."""
    rows = [host.out_mask(v) for v in range(host.n)]
    for u, v in force_arcs:
        rows[u] |= bit(v)
        rows[v] &= ~bit(u)
    return Tournament(host.n, rows, validate=False)


def case_b_fixture(seed: int = 5):
    """2-linker where x sits in every in-uncovered set and its only useful
    out-neighbours are path interiors: forces the on-path pivot."""
    host, linker = canonical_linker(2, seed=seed, q_len=4)
    outside = sorted(set(range(host.n)) - set(linker.vertex_set()))
    x, y = outside[0], outside[1]
    interiors = {v for q in linker.qpaths for v in q.vertices[1:-1]}
    forced = []
    for w in range(host.n):
        if w == x:
            continue
        forced.append((x, w) if w in interiors else (w, x))
    host2 = rewire(host, forced)
    doms = tuple(
        dataclasses.replace(d, uncovered=frozenset({x})) for d in linker.indominators
    )
    linker2 = dataclasses.replace(linker, indominators=doms)
    return host2, linker2, x, y


def case_b_offpath_fixture(seed: int = 5):
    """Like case_b_fixture but x also reaches one free vertex, so the pivot
    leaves the paths alone and costs one extra vertex."""
    host, linker = canonical_linker(2, seed=seed, q_len=4)
    outside = sorted(set(range(host.n)) - set(linker.vertex_set()))
    x, y, spare = outside[0], outside[1], outside[2]
    interiors = {v for q in linker.qpaths for v in q.vertices[1:-1]}
    forced = []
    for w in range(host.n):
        if w == x:
            continue
        forced.append((x, w) if (w == spare or w in interiors) else (w, x))
    host2 = rewire(host, forced)
    doms = tuple(
        dataclasses.replace(d, uncovered=frozenset({x})) for d in linker.indominators
    )
    linker2 = dataclasses.replace(linker, indominators=doms)
    return host2, linker2, x, y, spare


def case_c_fixture(seed: int = 6):
    """4-linker where y sits in every out-uncovered set; a dummy uncovered
    vertex keeps the size-comparison clause in the un-reversed branch."""
    host, linker = canonical_linker(4, seed=seed, q_len=4)
    outside = sorted(set(range(host.n)) - set(linker.vertex_set()))
    x, y, dummy = outside[0], outside[1], outside[2]
    interiors = {v for q in linker.qpaths for v in q.vertices[1:-1]}
    forced = []
    for w in range(host.n):
        if w == y:
            continue
        forced.append((w, y) if w in interiors else (y, w))
    host2 = rewire(host, forced)
    indoms = tuple(
        dataclasses.replace(d, uncovered=frozenset({dummy})) for d in linker.indominators
    )
    outdoms = tuple(
        dataclasses.replace(d, uncovered=frozenset({y})) for d in linker.outdominators
    )
    linker2 = dataclasses.replace(linker, indominators=indoms, outdominators=outdoms)
    return host2, linker2, x, y
