import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hamlink.core import (
    Path,
    PathSystem,
    Tournament,
    WorkingDigraph,
    build_tournament,
    is_strongly_connected,
    local_connectivity,
    strong_connectivity,
)

from conftest import uniform


def brute_connectivity(t: Tournament) -> int:
    for size in range(t.n):
        for cut in itertools.combinations(range(t.n), size):
            rest = [v for v in range(t.n) if v not in cut]
            if not rest:
                continue
            sub, _ = t.induced(rest)
            if not is_strongly_connected(sub):
                return size
    return t.n - 1


def test_build_examples():
    t1 = build_tournament(1, lambda i, j: True)
    assert t1.n == 1 and list(t1.arcs()) == []
    c3 = build_tournament(3, lambda i, j: (j - i) % 3 == 1)
    assert c3 == Tournament.cyclic(3)
    paley = build_tournament(7, lambda i, j: (j - i) % 7 in (1, 2, 4))
    assert all(paley.out_degree(v) == 3 for v in range(7))


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        Tournament(0, [])
    with pytest.raises(ValueError):
        Tournament(2, [0b10, 0b01])  # both directions
    with pytest.raises(ValueError):
        Tournament(2, [0, 0])  # neither direction
    with pytest.raises(ValueError):
        Tournament(2, [0b01, 0b00])  # self loop


def test_reverse_involution(paley7, tt5):
    assert paley7.reverse().reverse() == paley7
    rev = tt5.reverse()
    assert rev.has_arc(4, 0) and not rev.has_arc(0, 4)
    assert Tournament.cyclic(3).reverse().out_degree(0) == 1


def test_induced(tt5, paley7, c3):
    sub, mapping = tt5.induced({0, 2, 4})
    assert sub == Tournament.transitive(3)
    assert mapping == [0, 2, 4]
    sub2, _ = c3.induced({0, 1})
    assert sub2.has_arc(0, 1)
    sub3, _ = paley7.induced({0, 1, 2, 3})
    assert sum(sub3.out_degree(v) for v in range(4)) == 6
    with pytest.raises(ValueError):
        tt5.induced(set())


def test_induced_reverse_commute():
    for seed in range(10):
        t = uniform(9, seed)
        s = {0, 2, 3, 7, 8}
        a, _ = t.reverse().induced(s)
        b, _ = t.induced(s)
        assert a == b.reverse()


def test_text_roundtrip(paley7):
    text = paley7.to_text()
    again = Tournament.from_text(text)
    assert again == paley7 and again.to_text() == text
    lines = text.splitlines()
    # corrupt one entry so the pair is doubly oriented
    row = list(lines[1])
    col = next(i for i, ch in enumerate(row) if ch == "0" and i != 0)
    row[col] = "1"
    with pytest.raises(ValueError):
        Tournament.from_text("\n".join([lines[0], "".join(row)] + lines[2:]))


def test_strong_connectivity_examples(tt5, c3, paley7):
    assert strong_connectivity(tt5) == 0
    assert strong_connectivity(c3) == 1
    assert strong_connectivity(paley7) == 3
    assert is_strongly_connected(c3)
    assert not is_strongly_connected(tt5)


def test_strong_connectivity_matches_bruteforce():
    checked = 0
    for n in range(1, 10):
        for seed in range(12 if n >= 8 else 16):
            t = uniform(n, seed)
            assert strong_connectivity(t) == brute_connectivity(t)
            checked += 1
    assert checked >= 100


def test_local_connectivity_counts_direct_arc(paley7):
    # arc 0->1 exists in paley-7; with it removed conceptually the rest is 2
    assert local_connectivity(paley7, 0, 1) >= 1


def test_degree_sum_invariant():
    for seed in range(20):
        n = 5 + seed
        t = uniform(n, seed)
        assert sum(t.out_degree(v) for v in range(n)) == n * (n - 1) // 2
        assert max(t.out_degree(v) for v in range(n)) >= (n - 1) / 2
        assert max(t.in_degree(v) for v in range(n)) >= (n - 1) / 2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32))
def test_tournament_invariants_random(n, seed):
    t = uniform(n, seed)
    # exactly one orientation per pair, no self-loops
    for i in range(min(n, 8)):
        assert not t.has_arc(i, i)
        for j in range(i + 1, min(n, 9)):
            assert t.has_arc(i, j) != t.has_arc(j, i)
    assert sum(t.out_degree(v) for v in range(n)) == n * (n - 1) // 2


def test_working_digraph():
    t = Tournament.transitive(5)
    d = WorkingDigraph(t, [(0, 1), (0, 2)])
    assert not d.has_arc(0, 1) and t.has_arc(0, 1)
    assert d.out_degree(0) == 2 and d.degree(0) == 2
    assert d.degree(1) == 3
    with pytest.raises(ValueError):
        WorkingDigraph(t, [(1, 0)])  # not a base arc
    rev = d.reverse()
    assert rev.has_arc(1, 0) is False and rev.has_arc(2, 1)


def test_paths_and_systems(tt5):
    p = Path.of(0, 1, 2)
    assert p.start == 0 and p.end == 2 and p.length == 2
    assert p.is_valid_in(tt5)
    assert Path.of(2, 0).is_valid_in(tt5) is False
    with pytest.raises(ValueError):
        Path.of(0, 1, 0)
    ps = PathSystem([Path.of(0, 1), Path.of(2, 3)], host=tt5)
    assert ps.problems() == []
    bad = PathSystem([Path.of(0, 1), Path.of(1, 2)], host=tt5)
    assert bad.problems()
