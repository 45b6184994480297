"""Connectors, index selection, linkers, and linker Hamiltonian paths.

A connector is a small gadget coverable by both four and five disjoint
source-to-sink paths; a t-linker bundles t in-dominators, t out-dominators,
t connectors and 5t paths with forced arcs between the part boundaries.
Structures carry construction witnesses and verifiers check the witnesses,
never re-solve the path-partition search.

Desk-mode searches (connector refinement, index selection) are greedy with
seeded randomized restarts; a failed search is a certified outcome, and
every success is verified clause by clause.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    Host,
    Path,
    ReversedView,
    reversed_view,
    Tournament,
    bit,
    bits_of,
    join_paths,
    mask_of,
)
from .domination import (
    Dominator,
    LARGE_FRACTION,
    large_degree_vertices,
    verify_dominator,
    view_for,
)
from .oracle import uniform
from .report import ConstructionError, VerificationReport
from .rng import SplitMix64

CONNECTOR_CAP = 40


# -- connectors ------------------------------------------------------------


@dataclass(frozen=True)
class Connector:
    """Digraph on <= 40 vertices with 5 sources, 5 sinks, and stored
    witnesses: families of 4 and of 5 disjoint source->sink paths covering
    the whole vertex set."""

    vertices: frozenset[int]
    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    witness4: tuple[Path, ...]
    witness5: tuple[Path, ...]

    def vertex_mask(self) -> int:
        return mask_of(self.vertices)


def verify_connector(host: Host, c: Connector, cap: int = CONNECTOR_CAP) -> VerificationReport:
    rep = VerificationReport("connector")
    rep.add("cap", len(c.vertices) <= cap, f"at most {cap} vertices")
    terminals = tuple(c.sources) + tuple(c.sinks)
    rep.add(
        "terminals",
        len(c.sources) == 5 and len(c.sinks) == 5 and len(set(terminals)) == 10
        and set(terminals) <= c.vertices,
        "5 distinct sources and 5 distinct sinks inside the vertex set",
    )
    for name, witness in (("witness4", c.witness4), ("witness5", c.witness5)):
        n = 4 if name == "witness4" else 5
        ok = len(witness) == n
        detail = ""
        if ok:
            seen: set[int] = set()
            for i, p in enumerate(witness):
                if p.start != c.sources[i] or p.end != c.sinks[i]:
                    ok, detail = False, f"path {i} endpoints wrong"
                    break
                if not p.is_valid_in(host):
                    ok, detail = False, f"path {i} uses a missing arc"
                    break
                if seen & set(p.vertices):
                    ok, detail = False, f"path {i} shares vertices"
                    break
                seen.update(p.vertices)
            if ok and seen != set(c.vertices):
                ok, detail = False, "paths do not cover the vertex set exactly"
        rep.add(name, ok, detail or f"{n} disjoint covering source->sink paths")
    return rep


def transitive_connector(ids: list[int]) -> Connector:
    """Connector structure on ten host vertices whose induced tournament is
    transitive in the listed order."""
    if len(ids) != 10:
        raise ValueError("need exactly ten vertices")
    v = ids
    sources = (v[0], v[1], v[2], v[3], v[4])
    sinks = (v[9], v[5], v[6], v[7], v[8])
    witness5 = tuple(
        Path.of(s, t) for s, t in zip(sources, sinks)
    )
    witness4 = (
        Path.of(v[0], v[4], v[8], v[9]),
        Path.of(v[1], v[5]),
        Path.of(v[2], v[6]),
        Path.of(v[3], v[7]),
    )
    return Connector(frozenset(ids), sources, sinks, witness4, witness5)


def _fit_position(host: Host, order: list[int], v: int) -> int | None:
    """Insertion index keeping ``order`` a transitive (forward-arc) chain."""
    k = len(order)
    pos = k
    for j, w in enumerate(order):
        if host.has_arc(v, w):
            pos = j
            break
    for j in range(pos, k):
        if not host.has_arc(v, order[j]):
            return None
    for j in range(pos):
        if not host.has_arc(order[j], v):
            return None
    return pos


def _route_short_path(host: Host, x: int, y: int, bad: int, spread: int = 0) -> list[int] | None:
    """x->y path of length <= 3 avoiding ``bad`` internally, preferring one
    intermediate vertex (a uniform length class helps the refinement).

    ``spread`` staggers the intermediate choice so different calls pick
    vertices from different regions, which keeps the coordinate columns of
    the routed family transitivity-friendly.
    """
    mid = host.out_mask(x) & host.in_mask(y) & ~bad
    if mid:
        cands = list(bits_of(mid))
        return [x, cands[(spread * 7919) % len(cands)], y]
    if host.has_arc(x, y):
        return [x, y]
    for a in bits_of(host.out_mask(x) & ~bad):
        m = host.out_mask(a) & host.in_mask(y) & ~bad
        if m:
            return [x, a, next(bits_of(m)), y]
    return None


def build_connector(
    host: Host,
    avoid: set[int] | frozenset[int],
    xs: list[int],
    ys: list[int],
    budget: int,
    fraction: Fraction = LARGE_FRACTION,
    seed: int = 0,
    restarts: int = 64,
) -> Connector:
    """Connector with sources among ``xs`` and sinks among ``ys``.

    Routes disjoint short paths, keeps the majority length class, searches
    for ten indices whose path coordinates are simultaneously transitive,
    then peels head/tail segments stage by stage and assembles the two
    witnesses.
    """
    if len(xs) < budget or len(ys) < budget:
        budget = min(len(xs), len(ys))
    if set(xs) & set(avoid) or set(ys) & set(avoid):
        raise ValueError("sources and sinks must avoid the forbidden set")
    large_out = large_degree_vertices(host, "out", fraction)
    large_in = large_degree_vertices(host, "in", fraction)
    missing = [x for x in xs[:budget] if x not in large_out]
    if missing:
        raise ValueError(f"source {missing[0]} lacks large out-degree")
    missing = [y for y in ys[:budget] if y not in large_in]
    if missing:
        raise ValueError(f"sink {missing[0]} lacks large in-degree")

    endpoint_mask = mask_of(xs[:budget]) | mask_of(ys[:budget])
    used = mask_of(avoid)
    routed: list[list[int]] = []
    for i in range(budget):
        bad = used | endpoint_mask | mask_of(v for p in routed for v in p)
        p = _route_short_path(host, xs[i], ys[i], bad & ~bit(xs[i]) & ~bit(ys[i]), spread=i)
        if p is not None:
            routed.append(p)
    if len(routed) < 10:
        raise ConstructionError(
            "connector-route", f"only {len(routed)} disjoint short paths", witness=len(routed)
        )

    by_len: dict[int, list[list[int]]] = {}
    for p in routed:
        by_len.setdefault(len(p), []).append(p)
    ell, cls = max(by_len.items(), key=lambda kv: (len(kv[1]), -kv[0]))
    if len(cls) < 10:
        raise ConstructionError(
            "connector-class", f"largest length class has {len(cls)} < 10 paths"
        )

    chosen = _simultaneously_transitive(host, cls, 10, seed, restarts)
    if chosen is None:
        raise ConstructionError(
            "connector-refine", "no 10 paths with simultaneously transitive coordinates"
        )
    return _assemble_connector(host, [cls[i] for i in chosen], ell)


def _simultaneously_transitive(
    host: Host, rows: list[list[int]], need: int, seed: int, restarts: int
) -> list[int] | None:
    """Indices whose coordinate columns are each transitive; greedy insert
    with seeded restarts."""
    ell = len(rows[0])
    base = list(range(len(rows)))
    rng = SplitMix64(seed)
    for attempt in range(restarts + 1):
        order = list(base)
        if attempt:
            rng.shuffle(order)
        cols: list[list[int]] = [[] for _ in range(ell)]
        picked: list[int] = []
        for cand in order:
            spots = [_fit_position(host, cols[j], rows[cand][j]) for j in range(ell)]
            if all(s is not None for s in spots):
                for j in range(ell):
                    cols[j].insert(spots[j], rows[cand][j])
                picked.append(cand)
                if len(picked) == need:
                    return sorted(picked)
    return None


def _assemble_connector(host: Host, paths: list[list[int]], ell: int) -> Connector:
    """Stage-by-stage peeling of head/tail paths, then witness assembly."""
    survivors = list(range(10))
    coords = {j: {i: paths[i][j] for i in range(10)} for j in range(ell)}
    head_seg: dict[int, tuple[int, list[int]]] = {}  # stage -> (path idx, kept suffix)
    tail_seg: dict[int, tuple[int, list[int]]] = {}
    for j in range(ell):
        col = [(coords[j][i], i) for i in survivors]
        order = _transitive_sort(host, [v for v, _ in col])
        pos = {v: i for v, i in col}
        t_v, h_v = order[0], order[-1]
        ti, hi = pos[t_v], pos[h_v]
        if ti == hi:
            raise ConstructionError("connector-peel", "head and tail collapse at a stage")
        head_seg[j] = (hi, paths[hi][j:])
        tail_seg[j] = (ti, paths[ti][: j + 1])
        survivors = [i for i in survivors if i not in (hi, ti)]
    if len(survivors) < 5 - ell:
        raise ConstructionError("connector-peel", "not enough intact paths survive")

    c_verts: set[int] = set()
    for i in survivors:
        c_verts.update(paths[i])
    for j in range(ell):
        c_verts.update(head_seg[j][1])
        c_verts.update(tail_seg[j][1])
    if len(c_verts) > CONNECTOR_CAP:
        raise ConstructionError("connector-assemble", "vertex cap exceeded")

    sources = [tail_seg[j][1][0] for j in range(ell)]
    sinks = [head_seg[j][1][-1] for j in range(ell)]
    extra = survivors[: 5 - ell]
    sources += [paths[i][0] for i in extra]
    sinks += [paths[i][-1] for i in extra]

    def witness(n: int) -> tuple[Path, ...]:
        intact = extra[: n - ell]
        out: list[Path] = []
        for j in range(ell):
            t_path, h_path = tail_seg[j][1], head_seg[j][1]
            # the j-th thread covers the leftover paths' j-coordinates,
            # entered at this stage's tail and left at its head
            pool = [coords[j][i] for i in survivors if i not in intact]
            pool += [t_path[-1], h_path[0]]
            order = _transitive_sort(host, sorted(set(pool)))
            if order[0] != t_path[-1] or order[-1] != h_path[0]:
                raise ConstructionError(
                    "connector-witness",
                    "stage tail/head are not extreme in their coordinate class",
                    witness={"stage": j},
                )
            out.append(Path(tuple(t_path[:-1] + order + h_path[1:])))
        for i in intact:
            out.append(Path(tuple(paths[i])))
        return tuple(out)

    conn = Connector(frozenset(c_verts), tuple(sources[:5]), tuple(sinks[:5]), witness(4), witness(5))
    rep = verify_connector(host, conn)
    if not rep.passed:
        raise ConstructionError(
            "connector-verify", rep.first_failure().clause, witness=rep.first_failure().to_json()
        )
    return conn


def _transitive_sort(host: Host, verts: list[int]) -> list[int]:
    vm = mask_of(verts)
    order = sorted(verts, key=lambda v: (-(host.out_mask(v) & vm).bit_count(), v))
    for a, b in zip(order, order[1:]):
        if not host.has_arc(a, b):
            raise ConstructionError("transitive-sort", f"set is not transitive at {a},{b}")
    return order


# -- index selection -------------------------------------------------------


@dataclass(frozen=True)
class RamseySelection:
    kept: list[int]  # indices with refined subsets
    picked: list[int]  # indices with chosen vertices
    refined: dict[int, tuple[int, ...]]
    picks: dict[int, int]


def ramsey_select(
    host: Host,
    sets: list[tuple[int, ...]],
    m: int,
    t: int,
    ell: int,
    direction: str = "toward",
    seed: int = 0,
    restarts: int = 64,
) -> RamseySelection:
    """Choose t indices with m-element subsets and ell indices with single
    vertices so that every subset/vertex pair is uniformly oriented
    (``toward``: subset -> vertex, ``from``: vertex -> subset).

    Desk search: greedy vertex picks with seeded restarts; success is
    verified arc by arc.
    """
    if direction not in ("toward", "from"):
        raise ValueError("direction must be 'toward' or 'from'")
    if t + ell > len(sets):
        raise ValueError(f"need t+ell <= {len(sets)} disjoint sets")
    seen: set[int] = set()
    for s in sets:
        if len(s) < 2 * m:
            raise ValueError("every set needs at least 2m vertices")
        if seen & set(s):
            raise ValueError("sets must be pairwise disjoint")
        seen.update(s)
    view = host if direction == "toward" else reversed_view(host)
    # in the view we want refined -> pick arcs, i.e. picks with big
    # in-neighbourhoods inside the other sets
    rng = SplitMix64(seed)
    order0 = list(range(len(sets)))
    all_mask = mask_of(seen)
    for attempt in range(restarts + 1):
        order = list(order0)
        if attempt:
            rng.shuffle(order)
        sel = _ramsey_attempt(view, sets, m, t, ell, order, all_mask)
        if sel is not None:
            _ramsey_check(view, sets, m, sel)
            return sel
    raise ConstructionError(
        "ramsey-select", f"no uniform orientation found in {restarts} restarts"
    )


def _ramsey_attempt(view, sets, m, t, ell, order, all_mask) -> RamseySelection | None:
    cand = {i: mask_of(sets[i]) for i in order}
    picked: list[int] = []
    picks: dict[int, int] = {}
    pool = list(order)
    while len(picked) < ell and pool:
        best = None
        for j in pool:
            others = [i for i in pool if i != j and i not in picks]
            for v in sets[j]:
                score = sum(
                    1 for i in others if (cand[i] & view.in_mask(v)).bit_count() >= m
                )
                covered = (view.in_mask(v) & all_mask).bit_count()
                key = (score, covered, -j, -v)
                if best is None or key > best[0]:
                    best = (key, j, v)
        _, j, v = best
        picked.append(j)
        picks[j] = v
        pool.remove(j)
        for i in pool:
            cand[i] &= view.in_mask(v)
    if len(picked) < ell:
        return None
    kept = [i for i in pool if cand[i].bit_count() >= m]
    if len(kept) < t:
        return None
    kept = kept[:t]
    refined = {}
    for i in kept:
        keep = [v for v in sets[i] if (cand[i] >> v) & 1][:m]
        refined[i] = tuple(keep)
    return RamseySelection(kept, picked, refined, picks)


def _ramsey_check(view, sets, m, sel: RamseySelection) -> None:
    for i in sel.kept:
        assert len(sel.refined[i]) == m
        for j in sel.picked:
            v = sel.picks[j]
            for u in sel.refined[i]:
                if not view.has_arc(u, v):
                    raise ConstructionError(
                        "ramsey-select", f"orientation clause broken at {u}->{v}"
                    )


# -- linkers ----------------------------------------------------------------


@dataclass(frozen=True)
class Linker:
    """t-linker: t in-dominators, t out-dominators, t connectors, 5t paths,
    and a common exceptional set containing every dominator and connector
    vertex."""

    t: int
    indominators: tuple[Dominator, ...]
    outdominators: tuple[Dominator, ...]
    connectors: tuple[Connector, ...]
    qpaths: tuple[Path, ...]
    exceptional: frozenset[int]

    def essential_mask(self) -> int:
        m = 0
        for d in self.indominators + self.outdominators:
            m |= d.vertex_mask()
        for c in self.connectors:
            m |= c.vertex_mask()
        return m

    def qpath_mask(self) -> int:
        m = 0
        for q in self.qpaths:
            m |= q.vertex_mask()
        return m

    def vertex_mask(self) -> int:
        return self.essential_mask() | self.qpath_mask()

    def vertex_set(self) -> frozenset[int]:
        return frozenset(bits_of(self.vertex_mask()))

    def replace_qpaths(self, qpaths: tuple[Path, ...]) -> "Linker":
        return replace(self, qpaths=qpaths)

    def with_exceptional(self, x: frozenset[int]) -> "Linker":
        return replace(self, exceptional=x)


def self_doms(linker: Linker):
    return linker.indominators + linker.outdominators


def linker_edges(host: Host, linker: Linker) -> set[tuple[int, int]]:
    """Arc set of the linker inside ``host`` (dominators, connectors, paths,
    plus every forced boundary arc)."""
    edges: set[tuple[int, int]] = set()

    def add_clique(verts: frozenset[int]):
        vs = list(verts)
        for i, u in enumerate(vs):
            for w in vs[i + 1 :]:
                if host.has_arc(u, w):
                    edges.add((u, w))
                else:
                    edges.add((w, u))

    for d in self_doms(linker):
        add_clique(d.vertex_set())
    for c in linker.connectors:
        add_clique(c.vertices)
    for q in linker.qpaths:
        edges.update(q.arcs())
    for c in linker.connectors:
        for d in linker.indominators:
            for s in c.sinks:
                for a in d.a1:
                    edges.add((s, a))
            for a in d.a4:
                for q in linker.qpaths:
                    edges.add((a, q.start))
        for d in linker.outdominators:
            for b in d.a1:
                for s in c.sources:
                    edges.add((b, s))
            for q in linker.qpaths:
                for b in d.a4:
                    edges.add((q.end, b))
    return edges


def verify_linker(host: Host, linker: Linker, cap: int = CONNECTOR_CAP) -> VerificationReport:
    """Clause-by-clause linker verification: disjointness, common
    exceptional set, uncovered-size ordering, the size comparison between
    first and last uncovered sets, forced boundary arcs, and all part
    verifications."""
    rep = VerificationReport(f"{linker.t}-linker")
    t = linker.t
    rep.add(
        "structure",
        len(linker.indominators) == t
        and len(linker.outdominators) == t
        and len(linker.connectors) == t
        and len(linker.qpaths) == 5 * t,
        "t in-dominators, t out-dominators, t connectors, 5t paths",
    )
    orient_ok = all(d.orientation == "in" for d in linker.indominators) and all(
        d.orientation == "out" for d in linker.outdominators
    )
    rep.add("orientations", orient_ok, "dominator orientations match their roles")

    parts: list[tuple[str, int]] = []
    for i, d in enumerate(linker.indominators):
        parts.append((f"D-[{i}]", d.vertex_mask()))
    for i, d in enumerate(linker.outdominators):
        parts.append((f"D+[{i}]", d.vertex_mask()))
    for i, c in enumerate(linker.connectors):
        parts.append((f"C[{i}]", c.vertex_mask()))
    for i, q in enumerate(linker.qpaths):
        parts.append((f"Q[{i}]", q.vertex_mask()))
    overlap = None
    acc = 0
    for name, m in parts:
        if acc & m:
            overlap = name
            break
        acc |= m
    rep.add("L1", overlap is None, "all parts vertex disjoint", overlap)

    x_mask = mask_of(linker.exceptional)
    ess = linker.essential_mask()
    rep.add("L2", not (ess & ~x_mask), "dominator and connector vertices inside X")

    e_in = [len(d.uncovered) for d in linker.indominators]
    e_out = [len(d.uncovered) for d in linker.outdominators]
    rep.add(
        "L3",
        e_in == sorted(e_in, reverse=True) and e_out == sorted(e_out, reverse=True),
        "uncovered sizes non-increasing",
        {"in": e_in, "out": e_out},
    )
    rep.add(
        "L4",
        e_in[-1] >= e_out[0] or e_out[-1] >= e_in[0],
        "last uncovered set at least the other side's first",
        {"in": e_in, "out": e_out},
    )

    bad_arc = None
    for c in linker.connectors:
        for d in linker.indominators:
            for s in c.sinks:
                for a in d.a1:
                    if not host.has_arc(s, a):
                        bad_arc = (s, a)
        for d in linker.outdominators:
            for b in d.a1:
                for s in c.sources:
                    if not host.has_arc(b, s):
                        bad_arc = (b, s)
    for q in linker.qpaths:
        for d in linker.indominators:
            for a in d.a4:
                if not host.has_arc(a, q.start):
                    bad_arc = (a, q.start)
        for d in linker.outdominators:
            for b in d.a4:
                if not host.has_arc(q.end, b):
                    bad_arc = (q.end, b)
    rep.add("L5", bad_arc is None, "forced boundary arcs present", bad_arc)

    bad_q = next((i for i, q in enumerate(linker.qpaths) if not q.is_valid_in(host)), None)
    rep.add("paths", bad_q is None, "all bundled paths valid in the host", bad_q)
    for i, d in enumerate(self_doms(linker)):
        sub = verify_dominator(host, d, exceptional=linker.exceptional)
        rep.extend(sub, f"dom[{i}]")
    for i, c in enumerate(linker.connectors):
        sub = verify_connector(host, c, cap)
        rep.extend(sub, f"conn[{i}]")
    return rep


# -- canonical fixture -------------------------------------------------------


def canonical_linker(t: int, seed: int = 0, m: int = 8, M: int = 8, p: int = 8,
                     filler: int = 32, q_len: int = 2) -> tuple[Tournament, Linker]:
    """Host tournament containing a valid t-linker by construction: full
    transitive dominator blocks, transitive ten-vertex connectors,
    single-arc paths, all forced arcs laid down, every other pair seeded
    uniformly.  Uncovered sets come out empty."""
    if t < 1:
        raise ValueError("t must be at least 1")
    blk = 2 * m + 2 * M
    ids = iter(range(10**9))
    indoms_ids = [[next(ids) for _ in range(blk)] for _ in range(t)]
    outdoms_ids = [[next(ids) for _ in range(blk)] for _ in range(t)]
    conn_ids = [[next(ids) for _ in range(10)] for _ in range(t)]
    q_ids = [tuple(next(ids) for _ in range(q_len)) for _ in range(5 * t)]
    fill_start = q_ids[-1][-1] + 1
    n = fill_start + filler
    base = uniform(n, seed)
    rows = [base.out_mask(v) for v in range(n)]

    def force(u: int, v: int) -> None:
        rows[u] |= bit(v)
        rows[v] &= ~bit(u)

    def chain(vs: list[int]) -> None:
        for i, u in enumerate(vs):
            for w in vs[i + 1 :]:
                force(u, w)

    for vs in indoms_ids:
        chain(vs)
    for vs in outdoms_ids:
        # stored order is the reversed view's transitive order
        chain(list(reversed(vs)))
    for vs in conn_ids:
        chain(vs)
    for qs in q_ids:
        chain(list(qs))

    def blocks(vs: list[int]) -> tuple[tuple[int, ...], ...]:
        return (
            tuple(vs[:M]),
            tuple(vs[M : M + m]),
            tuple(vs[M + m : M + 2 * m]),
            tuple(vs[M + 2 * m :]),
        )

    indots = [blocks(vs) for vs in indoms_ids]
    outdots = [blocks(vs) for vs in outdoms_ids]

    connectors = [transitive_connector(vs) for vs in conn_ids]
    qpaths = [Path(tuple(qs)) for qs in q_ids]

    x_set: set[int] = set()
    for vs in indoms_ids + outdoms_ids + conn_ids:
        x_set.update(vs)
    exceptional = frozenset(x_set)

    for c in connectors:
        for blocks_i in indots:
            for s in c.sinks:
                for a in blocks_i[0]:
                    force(s, a)
        for blocks_i in outdots:
            for b in blocks_i[0]:
                for s in c.sources:
                    force(b, s)
    for qs in q_ids:
        for blocks_i in indots:
            for a in blocks_i[3]:
                force(a, qs[0])
        for blocks_i in outdots:
            for b in blocks_i[3]:
                force(qs[-1], b)
    for w in range(n):
        if w in exceptional:
            continue
        for blocks_i in indots:
            force(w, blocks_i[1][0])
        for blocks_i in outdots:
            force(blocks_i[1][0], w)

    host = Tournament(n, rows, validate=False)
    indoms = tuple(
        Dominator("in", m, M, p, *indots[i], uncovered=frozenset(), exceptional=exceptional)
        for i in range(t)
    )
    outdoms = tuple(
        Dominator("out", m, M, p, *outdots[i], uncovered=frozenset(), exceptional=exceptional)
        for i in range(t)
    )
    linker = Linker(t, indoms, outdoms, tuple(connectors), tuple(qpaths), exceptional)
    return host, linker


# -- hamiltonian paths through a linker --------------------------------------


def _entry_path(view: Host, dom: Dominator, x: int) -> list[int]:
    """Shortest path from x to the last block, inside the dominator."""
    target = mask_of(dom.a4)
    inside = dom.vertex_mask()
    if (target >> x) & 1:
        return [x]
    parent = {x: -1}
    frontier = [x]
    seen = bit(x)
    while frontier:
        nxt = []
        for v in frontier:
            new = view.out_mask(v) & inside & ~seen
            for w in bits_of(new):
                parent[w] = v
                if (target >> w) & 1:
                    out = [w]
                    while parent[out[-1]] != -1:
                        out.append(parent[out[-1]])
                    out.reverse()
                    return out
            seen |= new
            nxt.extend(bits_of(new))
        frontier = nxt
    raise ConstructionError("weave", f"no path from {x} to the exit block")


def _contiguous_splits(items: list[int], k: int, cap: int):
    """Contiguous splits of ``items`` into k nonempty runs; balanced first."""
    nitems = len(items)
    if nitems < k:
        return
    sizes = [nitems // k + (1 if r < nitems % k else 0) for r in range(k)]
    cuts0 = []
    acc = 0
    for s in sizes[:-1]:
        acc += s
        cuts0.append(acc)
    from itertools import combinations

    yield _apply_cuts(items, cuts0)
    count = 0
    for cuts in combinations(range(1, nitems), k - 1):
        if list(cuts) == cuts0:
            continue
        yield _apply_cuts(items, list(cuts))
        count += 1
        if count >= cap:
            return


def _apply_cuts(items: list[int], cuts: list[int]) -> list[list[int]]:
    runs = []
    prev = 0
    for c in cuts + [len(items)]:
        runs.append(items[prev:c])
        prev = c
    return runs


def _chain_dp(view: Host, a1_runs, b2: list[int], b3: list[int], a4_runs) -> list[list[int]] | None:
    """Assign contiguous segments of the two inner blocks to the chains,
    checking junction arcs; DP over (chain, consumed2, consumed3)."""
    k = len(a1_runs)
    n2, n3 = len(b2), len(b3)
    start = (0, 0, 0)
    parent: dict[tuple[int, int, int], tuple[tuple[int, int, int], tuple[int, int]]] = {}
    frontier = {start}
    for r in range(k):
        nxt: set[tuple[int, int, int]] = set()
        for state in frontier:
            _, i2, i3 = state
            last_left = n2 - i2 if r == k - 1 else None
            for c2 in range(n2 - i2 + 1) if last_left is None else [last_left]:
                c3_range = range(n3 - i3 + 1) if r < k - 1 else [n3 - i3]
                for c3 in c3_range:
                    segs = [a1_runs[r]]
                    if c2:
                        segs.append(b2[i2 : i2 + c2])
                    if c3:
                        segs.append(b3[i3 : i3 + c3])
                    segs.append(a4_runs[r])
                    ok = all(
                        view.has_arc(sa[-1], sb[0]) for sa, sb in zip(segs, segs[1:])
                    )
                    if not ok:
                        continue
                    ns = (r + 1, i2 + c2, i3 + c3)
                    if ns not in parent:
                        parent[ns] = (state, (c2, c3))
                        nxt.add(ns)
        frontier = nxt
        if not frontier:
            return None
    goal = (k, n2, n3)
    if goal not in parent:
        return None
    steps = []
    cur = goal
    while cur != start:
        prev, take = parent[cur]
        steps.append((prev, take))
        cur = prev
    steps.reverse()
    chains = []
    for (r, i2, i3), (c2, c3) in steps:
        chain = list(a1_runs[r]) + b2[i2 : i2 + c2] + b3[i3 : i3 + c3] + list(a4_runs[r])
        chains.append(chain)
    return chains


def split_dominator_chains(
    view: Host, dom: Dominator, k: int, exclude: int = 0, split_cap: int = 40
) -> list[list[int]]:
    """Partition the dominator's vertices (minus ``exclude``) into k paths,
    each from the first block to the last."""
    b1 = [v for v in dom.a1 if not (exclude >> v) & 1]
    b2 = [v for v in dom.a2 if not (exclude >> v) & 1]
    b3 = [v for v in dom.a3 if not (exclude >> v) & 1]
    b4 = [v for v in dom.a4 if not (exclude >> v) & 1]
    if len(b1) < k or len(b4) < k:
        raise ConstructionError("weave", "outer blocks too small to thread")
    for a1_runs in _contiguous_splits(b1, k, split_cap):
        for a4_runs in _contiguous_splits(b4, k, split_cap):
            res = _chain_dp(view, a1_runs, b2, b3, a4_runs)
            if res is not None:
                return res
    raise ConstructionError("weave", "no junction-compatible chain split found")


def _weave_parts(
    host: Host,
    indom: Dominator,
    outdom: Dominator,
    conn: Connector,
    qpaths: tuple[Path, ...],
    x: int,
    y: int | None,
    sink_target: int | None,
) -> list[int]:
    """Hamiltonian path through one 1-linker worth of parts, from x (inside
    the in-dominator) to either y (inside the out-dominator) or a connector
    sink."""
    view_in = host
    view_out = reversed_view(host)
    p_x = _entry_path(view_in, indom, x)
    in_chains = split_dominator_chains(view_in, indom, 4, exclude=mask_of(p_x))
    if y is not None:
        p_y_rev = _entry_path(view_out, outdom, y)
        out_chains_rev = split_dominator_chains(view_out, outdom, 4, exclude=mask_of(p_y_rev))
        out_pieces = [list(reversed(c)) for c in out_chains_rev]
        tail_piece = list(reversed(p_y_rev))
        witnesses = [list(p.vertices) for p in conn.witness4]
    else:
        out_chains_rev = split_dominator_chains(view_out, outdom, 5)
        out_pieces = [list(reversed(c)) for c in out_chains_rev]
        tail_piece = None
        ws = [list(p.vertices) for p in conn.witness5]
        idx = next(i for i, w in enumerate(ws) if w[-1] == sink_target)
        ws.append(ws.pop(idx))
        witnesses = ws
        in_chains.append([])  # fifth round has no in-chain

    pieces: list[list[int]] = [p_x]
    rounds = 4 if y is not None else 5
    for r in range(rounds):
        pieces.append(list(qpaths[r].vertices))
        pieces.append(out_pieces[r])
        pieces.append(witnesses[r])
        if r < len(in_chains) and in_chains[r]:
            pieces.append(in_chains[r])
    if y is not None:
        pieces.append(list(qpaths[4].vertices))
        pieces.append(tail_piece)

    verts: list[int] = []
    for prev, cur in zip(pieces, pieces[1:]):
        if not host.has_arc(prev[-1], cur[0]):
            raise ConstructionError(
                "weave", f"junction arc {prev[-1]}->{cur[0]} missing"
            )
    for piece in pieces:
        verts.extend(piece)
    return verts


def _group_sublinkers(linker: Linker, first_in: int, last_out: int | None, last_conn: int | None):
    """Index grouping into t 1-linkers: x's in-dominator first; y's
    out-dominator (or connector) last."""
    t = linker.t
    in_order = [first_in] + [i for i in range(t) if i != first_in]
    if last_out is not None:
        out_order = [i for i in range(t) if i != last_out] + [last_out]
    else:
        out_order = list(range(t))
    if last_conn is not None:
        conn_order = [i for i in range(t) if i != last_conn] + [last_conn]
    else:
        conn_order = list(range(t))
    groups = []
    for s in range(t):
        groups.append(
            (
                linker.indominators[in_order[s]],
                linker.outdominators[out_order[s]],
                linker.connectors[conn_order[s]],
                tuple(linker.qpaths[5 * s : 5 * s + 5]),
            )
        )
    return groups


def linker_ham_path(host: Host, linker: Linker, x: int, y: int) -> Path:
    """Hamiltonian path of V(linker) from x (in some in-dominator) to y (in
    some out-dominator, or a connector sink), using only linker arcs."""
    if x == y:
        raise ValueError("endpoints must differ")
    first_in = next(
        (i for i, d in enumerate(linker.indominators) if x in d.vertex_set()), None
    )
    if first_in is None:
        raise ValueError("x must lie in an in-dominator")
    last_out = next(
        (i for i, d in enumerate(linker.outdominators) if y in d.vertex_set()), None
    )
    last_conn = None
    if last_out is None:
        last_conn = next(
            (i for i, c in enumerate(linker.connectors) if y in c.sinks), None
        )
        if last_conn is None:
            raise ValueError("y must lie in an out-dominator or be a connector sink")

    groups = _group_sublinkers(linker, first_in, last_out, last_conn)
    verts: list[int] = []
    t = linker.t
    prev_sink = None
    for s, (din, dout, conn, qs) in enumerate(groups):
        start = x if s == 0 else din.a1[0]
        if s == t - 1:
            if last_out is not None:
                seg = _weave_parts(host, din, dout, conn, qs, start, y, None)
            else:
                seg = _weave_parts(host, din, dout, conn, qs, start, None, y)
        else:
            sink = conn.sinks[0]
            seg = _weave_parts(host, din, dout, conn, qs, start, None, sink)
        if prev_sink is not None and not host.has_arc(prev_sink, seg[0]):
            raise ConstructionError("weave", "sub-linker junction arc missing")
        verts.extend(seg)
        prev_sink = seg[-1]

    path = Path(tuple(verts))
    expected = linker.vertex_set()
    if set(verts) != set(expected) or len(verts) != len(expected):
        raise ConstructionError("weave", "path does not cover the linker exactly")
    if not path.is_valid_in(host) or path.start != x or path.end != y:
        raise ConstructionError("weave", "assembled path is invalid")
    return path
