"""Large-degree vertices, short path families, greedy transitive and
dominating sequences, and (m, M, p)-dominator construction and verification.

Orientation handling: an out-dominator is an in-dominator of the reversed
host, so construction and verification run once, on a view with the right
arc direction.  Block tuples are stored in the view's transitive order
(tail first), which the linker machinery relies on when it threads paths
through a dominator.

Exceptional-set semantics: all clauses of a dominator with exceptional set X
are checked in the subtournament on (V(T) minus X) union V(D).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    Host,
    Path,
    PathSystem,
    ReversedView,
    reversed_view,
    Tournament,
    bit,
    bits_of,
    mask_of,
)
from .report import ConstructionError, VerificationReport

LARGE_FRACTION = Fraction(1, 25)


# -- degree machinery ----------------------------------------------------


def large_degree_vertices(
    host: Host, side: str = "out", fraction: Fraction = LARGE_FRACTION
) -> set[int]:
    """Vertices v such that fewer than fraction*n vertices have strictly
    larger degree on the given side."""
    if not (0 < fraction < 1):
        raise ValueError("fraction must lie strictly between 0 and 1")
    if side not in ("in", "out"):
        raise ValueError("side must be 'in' or 'out'")
    n = host.n
    deg = [host.out_degree(v) if side == "out" else host.in_degree(v) for v in range(n)]
    order = sorted(deg, reverse=True)
    # strictly_larger(d) via binary search over the sorted degree multiset
    import bisect

    desc = order[::-1]

    def strictly_larger(d: int) -> int:
        return n - bisect.bisect_right(desc, d)

    num, den = fraction.numerator, fraction.denominator
    return {v for v in range(n) if strictly_larger(deg[v]) * den < n * num}


def _kuhn_matching(host: Host, left: list[int], right_mask: int) -> dict[int, int]:
    """Maximum bipartite matching on host arcs left -> right; returns
    {left_vertex: right_vertex}."""
    match_right: dict[int, int] = {}
    match_left: dict[int, int] = {}

    def try_augment(a: int, seen: set[int]) -> bool:
        for b in bits_of(host.out_mask(a) & right_mask):
            if b in seen:
                continue
            seen.add(b)
            if b not in match_right or try_augment(match_right[b], seen):
                match_right[b] = a
                match_left[a] = b
                return True
        return False

    for a in left:
        try_augment(a, set())
    return match_left


def short_path_count(host: Host, u: int, v: int) -> tuple[int, PathSystem]:
    """Internally disjoint u -> v paths of length at most 3 via the
    common-neighbourhood / matching decomposition.

    Returns the family size (direct arc included when present) and the
    explicit path family.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    out_u, in_v = host.out_mask(u), host.in_mask(v)
    i_mask = out_u & in_v
    u_side = (out_u | bit(u)) & ~(in_v | bit(v))
    v_side = (in_v | bit(v)) & ~(out_u | bit(u))
    matching = _kuhn_matching(host, list(bits_of(u_side)), v_side)
    paths = []
    if host.has_arc(u, v):
        paths.append(Path.of(u, v))
    for w in bits_of(i_mask):
        paths.append(Path.of(u, w, v))
    for a, b in sorted(matching.items()):
        paths.append(Path.of(u, a, b, v))
    system = PathSystem(paths, host=host, internally_disjoint=True)
    return len(paths), system


# -- greedy sequences ------------------------------------------------------


def greedy_transitive(host: Host, within: int | None = None, limit: int | None = None) -> list[int]:
    """Transitive vertex sequence grown by repeatedly taking the maximum
    out-degree vertex of the running common out-neighbourhood (tie: lowest
    id).  2**len covers the starting pool size."""
    remaining = host.all_mask() if within is None else within
    seq: list[int] = []
    while remaining and (limit is None or len(seq) < limit):
        best_v, best_d = -1, -1
        for v in bits_of(remaining):
            d = (host.out_mask(v) & remaining).bit_count()
            if d > best_d:
                best_v, best_d = v, d
        seq.append(best_v)
        remaining &= host.out_mask(best_v)
    return seq


@dataclass(frozen=True)
class GreedySequence:
    """Partial greedy dominating sequence with its uncovered set."""

    vertices: tuple[int, ...]
    uncovered: frozenset[int]
    orientation: str  # "in" | "out"
    host_restriction: frozenset[int]
    exhausted: bool = False


def _greedy_dominating_masks(
    host: Host, k: int, restriction: int, rule: str = "expansion"
) -> tuple[list[int], list[int]]:
    """In-orientation core: returns (sequence, common-out-neighbourhood trail).

    rule "expansion": step i takes the maximum in-degree vertex of the
    current pool (degrees inside the pool's subtournament), which is what
    the doubling guarantee for uncovered vertices needs.  rule "survival":
    the same tie-break restricted to vertices keeping at least half the
    pool alive, so the sequence provably reaches depth log2(pool) - 1; the
    expansion clause is then a matter of verification, not guarantee.
    """
    pool = restriction
    seq: list[int] = []
    trail: list[int] = [pool]
    for _ in range(k):
        if not pool:
            break
        size = pool.bit_count()
        best_v, best_d = -1, -1
        for v in bits_of(pool):
            if rule == "survival" and (host.out_mask(v) & pool).bit_count() < (size - 1) // 2:
                continue
            d = (host.in_mask(v) & pool).bit_count()
            if d > best_d:
                best_v, best_d = v, d
        seq.append(best_v)
        pool = pool & host.out_mask(best_v)
        trail.append(pool)
    return seq, trail


def greedy_dominating_sequence(
    host: Host, k: int, orientation: str = "in", restriction: set[int] | None = None
) -> GreedySequence:
    """Partial greedy dominating sequence of length min(k, exhaustion).

    Every uncovered vertex u keeps the expansion guarantee
    degree(u) >= 2**(len-1) * |uncovered| inside the restriction (out-degree
    for in-orientation, in-degree for out-orientation).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if orientation not in ("in", "out"):
        raise ValueError("orientation must be 'in' or 'out'")
    view = host if orientation == "in" else reversed_view(host)
    restr_mask = host.all_mask() if restriction is None else mask_of(restriction)
    if not restr_mask:
        raise ValueError("restriction must be nonempty")
    seq, trail = _greedy_dominating_masks(view, k, restr_mask)
    uncovered = frozenset(bits_of(trail[len(seq)]))
    return GreedySequence(
        vertices=tuple(seq),
        uncovered=uncovered,
        orientation=orientation,
        host_restriction=frozenset(bits_of(restr_mask)),
        exhausted=len(seq) < k,
    )


# -- dominators ------------------------------------------------------------


@dataclass(frozen=True)
class Dominator:
    """(m, M, p)-dominator: four blocks, uncovered set, exceptional set.

    In-orientation blocks are the A-sets; out-orientation blocks are the
    B-sets of the mirrored definition.  Block tuples are in transitive order
    of the orientation's view (tail first).
    """

    orientation: str  # "in" | "out"
    m: int
    M: int
    p: int
    a1: tuple[int, ...]
    a2: tuple[int, ...]
    a3: tuple[int, ...]
    a4: tuple[int, ...]
    uncovered: frozenset[int]
    exceptional: frozenset[int]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return (self.a1, self.a2, self.a3, self.a4)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.a1) | frozenset(self.a2) | frozenset(self.a3) | frozenset(self.a4)

    def vertex_mask(self) -> int:
        return mask_of(self.a1) | mask_of(self.a2) | mask_of(self.a3) | mask_of(self.a4)

    @property
    def tail(self) -> int:
        """Tail of the first block's transitive order."""
        return self.a1[0]

    @property
    def head(self) -> int:
        """Head of the last block's transitive order.

        For an in-dominator this is the head in the paper sense; for an
        out-dominator the same vertex is its tail (the reversed view's head).
        """
        return self.a4[-1]

    def core_mask(self) -> int:
        return mask_of(self.a2) | mask_of(self.a3)


def view_for(host: Host, orientation: str) -> Host:
    return host if orientation == "in" else reversed_view(host)


def _transitive_order_ok(view: Host, union: list[int]) -> tuple[bool, list[int]]:
    """Check the set induces a transitive tournament in the view; returns
    (ok, order tail->head)."""
    umask = mask_of(union)
    degs = [((view.out_mask(v) & umask).bit_count(), v) for v in union]
    order = [v for _, v in sorted(degs, key=lambda t: (-t[0], t[1]))]
    expected = len(union) - 1
    for idx, v in enumerate(order):
        if (view.out_mask(v) & umask).bit_count() != expected - idx:
            return False, order
    for i in range(len(order) - 1):
        if not view.has_arc(order[i], order[i + 1]):
            return False, order
    return True, order


def verify_dominator(
    host: Host, dom: Dominator, exceptional: frozenset[int] | None = None
) -> VerificationReport:
    """Clause-by-clause dominator verification in (host minus X) + V(D)."""
    x = dom.exceptional if exceptional is None else frozenset(exceptional)
    view = view_for(host, dom.orientation)
    rep = VerificationReport(f"{dom.orientation}-dominator(m={dom.m},M={dom.M},p={dom.p})")
    blocks = dom.blocks()
    vset = dom.vertex_mask()
    allowed = (view.all_mask() & ~mask_of(x)) | vset

    total = sum(len(b) for b in blocks)
    distinct = len(dom.vertex_set())
    rep.add("D1", total == distinct, "blocks pairwise disjoint")
    for i in (0, 1, 2):
        a, b = blocks[i], blocks[i + 1]
        ok, order = _transitive_order_ok(view, list(a) + list(b))
        placed = ok and order[0] in a and order[-1] in b
        rep.add(
            f"D2.{i + 1}",
            placed,
            "consecutive union transitive, tail then head placed",
            None if placed else {"blocks": [list(a), list(b)]},
        )
    rep.add("D3", len(blocks[1]) == dom.m and len(blocks[2]) == dom.m, "inner block sizes = m")
    rep.add("D4", len(blocks[0]) == dom.M and len(blocks[3]) == dom.M, "outer block sizes = M")

    e_mask = mask_of(dom.uncovered)
    shape_ok = not (e_mask & vset) and not (e_mask & ~allowed)
    rep.add("shape", shape_ok, "uncovered set lives in the verification host, off V(D)")

    core = dom.core_mask()
    bad = None
    for w in bits_of(allowed & ~vset & ~e_mask):
        if not (view.out_mask(w) & core):
            bad = w
            break
    rep.add("D5", bad is None, "core dominates everything outside uncovered/exceptional", bad)

    e_size = len(dom.uncovered)
    bad6 = None
    for u in dom.uncovered:
        if (view.out_mask(u) & allowed).bit_count() < dom.p * e_size:
            bad6 = u
            break
    rep.add("D6", bad6 is None, f"uncovered degrees >= p*|E| = {dom.p * e_size}", bad6)
    return rep


@dataclass(frozen=True)
class Predominator:
    a: tuple[int, ...]
    b: tuple[int, ...]
    uncovered: frozenset[int]
    exceptional: frozenset[int]


def build_predominator(
    host: Host,
    m: int,
    M: int,
    L: int,
    p: int,
    within: int | None = None,
    paper: bool = False,
    rule: str = "expansion",
    pop_budget: int | None = None,
    check_expansion: bool = True,
) -> Predominator:
    """Transitive pair (A, B) with A dominating all but an expanding
    uncovered set, built by restarting the greedy dominating sequence and
    retiring its head into the exceptional set on each exhaustion."""
    if paper:
        if L < 2 ** (m + M):
            raise ValueError("paper profile needs L >= 2^(m+M)")
        if p > 2 ** (m - 1):
            raise ValueError("paper profile needs p <= 2^(m-1)")
    universe = host.all_mask() if within is None else within
    if paper and universe.bit_count() < L:
        raise ValueError("paper profile needs |T| >= L")
    budget = L if pop_budget is None else min(L, pop_budget)
    x_mask = 0
    last: tuple[list[int], list[int]] | None = None
    while True:
        pool = universe & ~x_mask
        if not pool:
            break
        seq, trail = _greedy_dominating_masks(host, m + M, pool, rule=rule)
        last = (seq, trail)
        if len(seq) == m + M:
            a, b = tuple(seq[:m]), tuple(seq[m:])
            uncovered = trail[m] & ~mask_of(b) & ~x_mask
            return _finish_predominator(
                host, m, M, L, p, pool, a, b, uncovered, x_mask, check_expansion
            )
        if x_mask.bit_count() >= budget:
            break
        # retire the head: every earlier sequence vertex points at it
        x_mask |= bit(seq[-1])
    if last is None:
        raise ConstructionError("predominator", "empty universe")
    return _predominator_case2(host, m, M, L, p, universe, x_mask, *last, check_expansion)


def _finish_predominator(
    host, m, M, L, p, pool, a, b, uncovered_mask, x_mask, check_expansion=True
) -> Predominator:
    uncovered = frozenset(bits_of(uncovered_mask))
    for u in uncovered if check_expansion else ():
        if (host.out_mask(u) & pool).bit_count() < p * len(uncovered):
            raise ConstructionError(
                "predominator",
                "expansion clause failed for an uncovered vertex",
                witness={"vertex": u, "need": p * len(uncovered)},
            )
    return Predominator(a, b, uncovered, frozenset(bits_of(x_mask)))


def _predominator_case2(
    host, m, M, L, p, universe, x_mask, seq, trail, check_expansion=True
) -> Predominator:
    k = len(seq)
    need = m + M - k
    xt = greedy_transitive(host, within=x_mask, limit=need)
    if len(xt) < need:
        raise ConstructionError(
            "predominator",
            "exceptional set lacks a transitive completion",
            witness={"have": len(xt), "need": need},
        )
    full = list(seq) + xt
    ok, _ = _transitive_order_ok(host, full)
    if not ok:
        raise ConstructionError(
            "predominator", "sequence + completion is not transitive", witness=full
        )
    a, b = tuple(full[:m]), tuple(full[m : m + M])
    new_x = x_mask & ~mask_of(xt)
    pool = universe & ~new_x
    # honest uncovered set: whatever A fails to dominate in the final pool
    a_mask = mask_of(a)
    uncovered = 0
    for w in bits_of(pool & ~mask_of(full)):
        if not (host.out_mask(w) & a_mask):
            uncovered |= bit(w)
    return _finish_predominator(host, m, M, L, p, pool, a, b, uncovered, new_x, check_expansion)


def build_dominator(
    host: Tournament,
    orientation: str,
    Y: set[int] | frozenset[int],
    m: int,
    M: int,
    L: int,
    p: int,
    paper: bool = False,
    large_fraction: Fraction = LARGE_FRACTION,
) -> Dominator:
    """(m, M, p)-dominator avoiding Y, with Y inside its exceptional set and
    the first block drawn from large-degree vertices."""
    if orientation not in ("in", "out"):
        raise ValueError("orientation must be 'in' or 'out'")
    n = host.n
    y_mask = mask_of(Y)
    if y_mask.bit_count() >= n:
        raise ValueError("Y covers the whole tournament")
    if paper:
        if n < 25 * 2 ** (2 * m + 2 * M):
            raise ValueError("paper profile needs |T| >= 25*2^(2m+2M)")
        if len(Y) > n / 25 - 2 ** (2 * m + 2 * M):
            raise ValueError("paper profile bound on |Y| violated")
        if L < 2 ** (m + M) + m + M:
            raise ValueError("paper profile needs L >= 2^(m+M)+m+M")
        if p > 2 ** (m - 1):
            raise ValueError("paper profile needs p <= 2^(m-1)")
    view = view_for(host, orientation)
    pool = mask_of(large_degree_vertices(view, "in", large_fraction)) & ~y_mask
    # grow the chain downward from the most-dominated end, so its core
    # blocks sit where nearly everything points at them
    rev_seq = greedy_transitive(reversed_view(view), within=pool, limit=2 * m + 2 * M)
    s_seq = list(reversed(rev_seq))
    if len(s_seq) >= 2 * m + 2 * M:
        dom = _chain_dominator(view, orientation, s_seq, Y, y_mask, m, M, p)
        report = verify_dominator(host, dom)
        if report.passed:
            return dom
        fail = report.first_failure()
        if paper or all(c.ok or c.clause == "D6" for c in report.checks):
            # a pure expansion failure is worth reporting as such: callers
            # can lower p and retry
            raise ConstructionError(
                "dominator", f"clause {fail.clause} unsatisfied", witness=fail.to_json()
            )
    s_seq = greedy_transitive(view, within=pool, limit=2 * m + 2 * M)
    if len(s_seq) < m + M:
        raise ConstructionError(
            "dominator",
            "large-degree pool lacks transitive material",
            witness={"have": len(s_seq), "need": m + M},
        )
    s1, s2 = tuple(s_seq[:M]), tuple(s_seq[M : M + m])
    s_mask = mask_of(s_seq)
    dominated = 0
    for s in s2:
        dominated |= view.in_mask(s)
    t_prime = view.all_mask() & ~y_mask & ~s_mask & ~dominated

    def easy_branch() -> Dominator:
        s3 = tuple(s_seq[M + m : M + 2 * m])
        s4 = tuple(s_seq[M + 2 * m : 2 * m + 2 * M])
        extra = frozenset(s_seq[2 * m + 2 * M :])
        return Dominator(
            orientation, m, M, p, s1, s2, s3, s4,
            uncovered=frozenset(),
            exceptional=frozenset(bits_of(t_prime)) | frozenset(Y) | extra,
        )

    def predominator_branch() -> Dominator:
        l_pre = max(L - M - m, 1)
        try:
            pre = build_predominator(
                view, m, M, l_pre, p, within=t_prime, paper=paper, pop_budget=32
            )
        except ConstructionError:
            if paper:
                raise
            # desk fallback: survival-biased selection, verified afterwards
            pre = build_predominator(
                view, m, M, l_pre, p, within=t_prime, rule="survival", check_expansion=False
            )
        extra = frozenset(s_seq[M + m :])
        vset = set(s1) | set(s2) | set(pre.a) | set(pre.b)
        return Dominator(
            orientation, m, M, p, s1, s2, pre.a, pre.b,
            uncovered=frozenset(pre.uncovered - vset),
            exceptional=pre.exceptional | frozenset(Y) | extra,
        )

    easy_ok = t_prime.bit_count() <= L and len(s_seq) >= 2 * m + 2 * M
    # a small remainder goes wholesale into the exceptional set; otherwise
    # prefer the predominator branch, which keeps the exceptional set small
    if easy_ok and (paper or t_prime.bit_count() <= max(64, 4 * (m + M))):
        dom = easy_branch()
    else:
        try:
            dom = predominator_branch()
        except ConstructionError:
            if not easy_ok:
                raise
            dom = easy_branch()
    report = verify_dominator(host, dom)
    if not report.passed:
        fail = report.first_failure()
        raise ConstructionError("dominator", f"clause {fail.clause} unsatisfied", witness=fail.to_json())
    return dom


def _chain_dominator(
    view: Host,
    orientation: str,
    s_seq: list[int],
    Y,
    y_mask: int,
    m: int,
    M: int,
    p: int,
) -> Dominator:
    """All four blocks from one transitive chain, uncovered set computed
    honestly as whatever the core fails to dominate."""
    s1 = tuple(s_seq[:M])
    s2 = tuple(s_seq[M : M + m])
    s3 = tuple(s_seq[M + m : M + 2 * m])
    s4 = tuple(s_seq[M + 2 * m :])
    s_mask = mask_of(s_seq)
    dominated = 0
    for s in s2 + s3:
        dominated |= view.in_mask(s)
    uncovered = view.all_mask() & ~y_mask & ~s_mask & ~dominated
    return Dominator(
        orientation, m, M, p, s1, s2, s3, s4,
        uncovered=frozenset(bits_of(uncovered)),
        exceptional=frozenset(Y),
    )


def enlarge_exceptional(host: Host, dom: Dominator, Y: set[int] | frozenset[int]) -> Dominator:
    """Exceptional-set enlargement at the cost of halving p.

    Needs X inside Y and 2|Y| at most the view's minimum out-degree.
    """
    y = frozenset(Y)
    if not dom.exceptional <= y:
        raise ValueError("current exceptional set must be contained in Y")
    view = view_for(host, dom.orientation)
    delta = min(view.out_degree(v) for v in range(host.n))
    if 2 * len(y) > delta:
        raise ValueError(f"2|Y| = {2 * len(y)} exceeds minimum degree {delta}")
    return replace(dom, p=dom.p // 2, exceptional=y, uncovered=dom.uncovered - y)
