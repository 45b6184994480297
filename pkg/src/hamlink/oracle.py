"""Seeded generators and exhaustive small-scale oracles.

Generators are reproducible byte-for-byte from a :class:`GeneratorSpec`:
every random decision consumes one output of the splitmix64 counter stream
(see :mod:`hamlink.rng`), so equal specs give equal tournaments on any
platform.  Oracle caps are hard errors, never silent truncation.

Uniform model coin mapping: pairs (i, j) with i < j are indexed in
lexicographic order, pair #p (0-based) uses stream output p + 1, and the arc
is i -> j iff that output's least significant bit is 1.  The blowup model
uses the same pair indexing over the blown-up vertex ids but only consumes
the coin for pairs inside a block; cross-block arcs follow the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Path, Tournament, WorkingDigraph, bit, bits_of, is_strongly_connected
from .rng import GAMMA, MASK64, stream_at

HAM_ORACLE_CAP = 14
INDEPENDENCE_CAP = 24


class OracleCapExceeded(ValueError):
    """Raised when an exhaustive oracle is asked about too large an instance."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible description of a generated tournament."""

    model: str  # "uniform" | "paley" | "blowup"
    n: int
    seed: int = 0
    base: Tournament | None = None
    blocks: tuple[int, ...] = ()

    def __post_init__(self):
        if self.model not in ("uniform", "paley", "blowup"):
            raise ValueError(f"unknown generator model {self.model!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.model == "blowup":
            if self.base is None or not self.blocks:
                raise ValueError("blowup model needs a base tournament and block sizes")
            if len(self.blocks) != self.base.n:
                raise ValueError("one block size per base vertex required")
            if any(b < 1 for b in self.blocks):
                raise ValueError("zero-size blocks are not allowed")
            if sum(self.blocks) != self.n:
                raise ValueError("block sizes must sum to n")


def _splitmix_bits(seed: int, counters: np.ndarray) -> np.ndarray:
    """LSBs of splitmix64 outputs at the given 1-based counters."""
    with np.errstate(over="ignore"):
        z = (np.uint64(seed) + counters * np.uint64(GAMMA)).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z & np.uint64(1)).astype(np.uint8)


def _pair_base(i: int, n: int) -> int:
    # index of pair (i, i+1) in lexicographic pair order
    return i * n - (i * (i + 1)) // 2


def _uniform_rows(n: int, seed: int) -> list[int]:
    seed &= MASK64
    rows: list[int] = []
    idx = np.arange(n, dtype=np.uint64)
    # pair (i, j), i < j, sits at counter i*n - i(i+1)/2 + (j - i - 1) + 1
    base = idx * np.uint64(n) - (idx * (idx + np.uint64(1))) // np.uint64(2)
    for j in range(n):
        row_bits = np.zeros(n, dtype=np.uint8)
        if j + 1 < n:
            fwd_counters = base[j] + np.uint64(1) + np.arange(n - j - 1, dtype=np.uint64)
            row_bits[j + 1 :] = _splitmix_bits(seed, fwd_counters)
        if j > 0:
            back_counters = base[:j] + np.uint64(j) - idx[:j]
            row_bits[:j] = 1 - _splitmix_bits(seed, back_counters)
        packed = np.packbits(row_bits, bitorder="little").tobytes()
        rows.append(int.from_bytes(packed, "little"))
    return rows


def _paley_rows(n: int) -> list[int]:
    if n < 3 or any(n % p == 0 for p in range(2, int(n**0.5) + 1)):
        raise ValueError("paley model needs a prime n")
    if n % 4 != 3:
        raise ValueError("paley model needs n = 3 (mod 4)")
    residues = {(x * x) % n for x in range(1, n)}
    rows = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and (j - i) % n in residues:
                rows[i] |= bit(j)
    return rows


def _blowup_rows(spec: GeneratorSpec) -> list[int]:
    base, blocks, n = spec.base, spec.blocks, spec.n
    assert base is not None
    block_of = []
    for b, size in enumerate(blocks):
        block_of.extend([b] * size)
    rows = [0] * n
    seed = spec.seed & MASK64
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = block_of[i], block_of[j]
            if bi == bj:
                forward = bool(stream_at(seed, _pair_base(i, n) + (j - i - 1) + 1) & 1)
            else:
                forward = base.has_arc(bi, bj)
            if forward:
                rows[i] |= bit(j)
            else:
                rows[j] |= bit(i)
    return rows


def generate(spec: GeneratorSpec) -> Tournament:
    """Materialise the tournament a spec describes."""
    if spec.model == "uniform":
        rows = _uniform_rows(spec.n, spec.seed)
    elif spec.model == "paley":
        rows = _paley_rows(spec.n)
    else:
        rows = _blowup_rows(spec)
    return Tournament(spec.n, rows, validate=False)


def uniform(n: int, seed: int) -> Tournament:
    return generate(GeneratorSpec("uniform", n, seed))


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise OracleCapExceeded(f"{what} oracle capped at {cap} vertices, got {n}")


def _ham_dp(t: Tournament, start: int) -> list[int]:
    """dp[mask] = bitmask of vertices v such that a path from ``start``
    covering exactly ``mask`` can end at v."""
    n = t.n
    dp = [0] * (1 << n)
    dp[bit(start)] = bit(start)
    for mask in range(1 << n):
        ends = dp[mask]
        if not ends:
            continue
        for v in bits_of(ends):
            ext = t.out_mask(v) & ~mask
            for w in bits_of(ext):
                dp[mask | bit(w)] |= bit(w)
    return dp


def _ham_reconstruct(t: Tournament, dp: list[int], mask: int, last: int) -> list[int]:
    verts = [last]
    while mask.bit_count() > 1:
        prev_mask = mask ^ bit(last)
        cands = dp[prev_mask] & t.in_mask(last)
        prev = next(bits_of(cands))
        verts.append(prev)
        mask, last = prev_mask, prev
    verts.reverse()
    return verts


def brute_ham_path(t: Tournament, x: int, y: int) -> Path | None:
    """Exhaustive Hamiltonian x->y path search (n <= 14)."""
    _check_cap(t.n, HAM_ORACLE_CAP, "hamiltonian path")
    if x == y:
        raise ValueError("endpoints must differ")
    dp = _ham_dp(t, x)
    full = t.all_mask()
    if not (dp[full] >> y) & 1:
        return None
    return Path(tuple(_ham_reconstruct(t, dp, full, y)))


def brute_ham_cycle(t: Tournament) -> Path | None:
    """Exhaustive Hamiltonian cycle search (n <= 14); the returned path lists
    each vertex once, with the closing arc end -> start implied."""
    _check_cap(t.n, HAM_ORACLE_CAP, "hamiltonian cycle")
    if t.n == 1:
        return Path.of(0)
    if t.n == 2:
        return None
    dp = _ham_dp(t, 0)
    full = t.all_mask()
    closers = dp[full] & t.in_mask(0)
    if not closers:
        assert not is_strongly_connected(t)
        return None
    last = next(bits_of(closers))
    cycle = Path(tuple(_ham_reconstruct(t, dp, full, last)))
    assert is_strongly_connected(t)
    return cycle


def independence_number(d: WorkingDigraph | Tournament) -> int:
    """Exact maximum independent set size; arcs in either direction count
    as adjacency (n <= 24)."""
    n = d.n
    _check_cap(n, INDEPENDENCE_CAP, "independence number")
    adj = [d.out_mask(v) | d.in_mask(v) for v in range(n)]

    best = 0

    def grow(candidates: int, size: int) -> None:
        nonlocal best
        if size + candidates.bit_count() <= best:
            return
        if not candidates:
            best = max(best, size)
            return
        v = next(bits_of(candidates))
        # branch: exclude v entirely, or take v and drop its neighbours
        grow(candidates & ~bit(v) & ~adj[v], size + 1)
        grow(candidates ^ bit(v), size)

    grow((1 << n) - 1, 0)
    return best


def _all_short_paths(t: Tournament, u: int, v: int, max_len: int) -> list[tuple[int, ...]]:
    paths: list[tuple[int, ...]] = []

    def walk(cur: int, seen: int, trail: tuple[int, ...]):
        if len(trail) - 1 > max_len:
            return
        if cur == v:
            paths.append(trail)
            return
        if len(trail) - 1 == max_len:
            return
        for w in bits_of(t.out_mask(cur) & ~seen):
            walk(w, seen | bit(w), trail + (w,))

    walk(u, bit(u) | bit(v) ^ bit(v), (u,))
    return [p for p in paths if p[-1] == v]


def brute_disjoint_paths(t: Tournament, u: int, v: int, max_len: int) -> int:
    """Maximum number of internally vertex-disjoint u->v paths of length
    <= max_len, by exhaustive search over path families (n <= 14)."""
    _check_cap(t.n, HAM_ORACLE_CAP, "disjoint paths")
    if u == v:
        raise ValueError("endpoints must differ")
    cands = _all_short_paths(t, u, v, max_len)
    masks = [sum(bit(w) for w in p[1:-1]) for p in cands]
    order = sorted(range(len(cands)), key=lambda i: masks[i].bit_count())
    best = 0

    def pack(idx: int, used: int, count: int) -> None:
        nonlocal best
        if count + (len(order) - idx) <= best:
            return
        best = max(best, count)
        for k in range(idx, len(order)):
            m = masks[order[k]]
            if not (m & used):
                pack(k + 1, used | m, count + 1)

    pack(0, 0, 0)
    return best
