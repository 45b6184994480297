import pytest

from hamlink.core import Path, Tournament, WorkingDigraph, is_strongly_connected
from hamlink.oracle import (
    GeneratorSpec,
    OracleCapExceeded,
    brute_disjoint_paths,
    brute_ham_cycle,
    brute_ham_path,
    generate,
    independence_number,
)

from conftest import uniform


def test_generator_determinism():
    a = generate(GeneratorSpec("uniform", 5, 42))
    b = generate(GeneratorSpec("uniform", 5, 42))
    assert a == b
    assert a != generate(GeneratorSpec("uniform", 5, 43))


def test_paley_examples(paley7, c3):
    assert generate(GeneratorSpec("paley", 3)) == c3
    assert {paley7.out_degree(v) for v in range(7)} == {3}
    with pytest.raises(ValueError):
        generate(GeneratorSpec("paley", 9))
    with pytest.raises(ValueError):
        generate(GeneratorSpec("paley", 13))  # 13 = 1 mod 4


def test_blowup_model():
    base = Tournament.cyclic(3)
    spec = GeneratorSpec("blowup", 9, seed=1, base=base, blocks=(3, 3, 3))
    t = generate(spec)
    for u in range(3):
        for v in range(3, 6):
            assert t.has_arc(u, v)
    assert t == generate(spec)
    with pytest.raises(ValueError):
        GeneratorSpec("blowup", 9, seed=1, base=base, blocks=(3, 3))
    with pytest.raises(ValueError):
        GeneratorSpec("blowup", 9, seed=1, base=base, blocks=(3, 3, 0))


def test_ham_path_oracle(tt5, c3):
    assert brute_ham_path(tt5, 0, 4) == Path.of(0, 1, 2, 3, 4)
    assert brute_ham_path(tt5, 4, 0) is None
    assert brute_ham_path(c3, 0, 2) == Path.of(0, 1, 2)
    with pytest.raises(ValueError):
        brute_ham_path(c3, 1, 1)
    with pytest.raises(OracleCapExceeded):
        brute_ham_path(uniform(15, 0), 0, 1)


def test_ham_cycle_oracle(tt5, c3):
    assert brute_ham_cycle(c3) == Path.of(0, 1, 2)
    assert brute_ham_cycle(tt5) is None
    t = uniform(8, 7)
    assert (brute_ham_cycle(t) is not None) == is_strongly_connected(t)


def test_camion_property():
    for n in range(3, 11):
        for seed in range(25):
            t = uniform(n, seed)
            cyc = brute_ham_cycle(t)
            assert (cyc is not None) == is_strongly_connected(t)
            if cyc is not None:
                assert cyc.is_valid_in(t) and t.has_arc(cyc.end, cyc.start)
                assert len(set(cyc.vertices)) == n


def test_independence_number(tt5):
    for seed in range(10):
        assert independence_number(uniform(10, seed)) == 1
    # remove all arcs touching vertex 2: {2, anything} independent
    arcs = [(u, v) for (u, v) in tt5.arcs() if 2 in (u, v)]
    d = WorkingDigraph(tt5, arcs)
    assert independence_number(d) == 2
    t4 = Tournament.transitive(4)
    edgeless = WorkingDigraph(t4, list(t4.arcs()))
    assert independence_number(edgeless) == 4
    with pytest.raises(OracleCapExceeded):
        independence_number(uniform(25, 0))


def test_disjoint_paths_oracle(c3):
    tt4 = Tournament.transitive(4)
    assert brute_disjoint_paths(tt4, 0, 3, 1) == 1
    assert brute_disjoint_paths(tt4, 0, 3, 2) == 3
    assert brute_disjoint_paths(c3, 0, 1, 3) == 1
    with pytest.raises(OracleCapExceeded):
        brute_disjoint_paths(uniform(15, 1), 0, 1, 3)
