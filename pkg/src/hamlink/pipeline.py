"""End-to-end assembly: partition-to-cycle induction, k edge-disjoint
Hamiltonian cycles, and pairwise linkage routing.

Each round removes the later rounds' linker edges and the earlier rounds'
cycle arcs, covers the complement of the round's linkers by disjoint paths,
splits the cover to the family size, and runs the linking induction.  Cut
points (and, by re-covering, path ends) are chosen so every endpoint the
induction will route has a dominating arc into the family in the current
digraph; everything the rounds emit is re-verified against the base
tournament at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classic import cover_subset_by_paths, split_paths
from .core import (
    Host,
    Path,
    PathSystem,
    Tournament,
    WorkingDigraph,
    bit,
    bits_of,
    mask_of,
)
from .linkage import Linker, linker_edges, verify_linker
from .linkbuild import build_linkers
from .linking import linking_family_step
from .profiles import ParamProfile
from .report import Certificate, ConstructionError, VerificationReport
from .rng import SplitMix64


def verify_decomposition(t: Tournament, cycles: list[Path]) -> VerificationReport:
    """Each cycle Hamiltonian (every vertex once, arcs plus the closing arc
    present), and no arc shared between cycles."""
    rep = VerificationReport("decomposition")
    seen_arcs: dict[tuple[int, int], int] = {}
    full = set(range(t.n))
    for idx, cyc in enumerate(cycles):
        verts = cyc.vertices
        cover_ok = set(verts) == full and len(verts) == t.n
        rep.add(f"cycle[{idx}].coverage", cover_ok, "visits every vertex exactly once")
        arcs = list(cyc.arcs()) + ([(cyc.end, cyc.start)] if len(verts) > 1 else [])
        bad = next((a for a in arcs if not t.has_arc(*a)), None)
        rep.add(f"cycle[{idx}].arcs", bad is None, "all arcs present", bad)
        shared = next((a for a in arcs if a in seen_arcs), None)
        rep.add(
            f"cycle[{idx}].disjoint",
            shared is None,
            "no arc reused from an earlier cycle",
            {"arc": shared, "other": seen_arcs.get(shared)} if shared else None,
        )
        for a in arcs:
            seen_arcs.setdefault(a, idx)
    return rep


def ham_cycle_from_partition(
    d: Host, paths: PathSystem, family: list[Linker]
) -> Path:
    """The partition-to-cycle induction: repeatedly pop the last two paths'
    outer endpoints, link them through the family's last linker, splice, and
    recurse; returns a verified Hamiltonian cycle of d."""
    k = len(family)
    if k < 1 or len(paths.paths) != k:
        raise ValueError("need the same positive number of paths and linkers")
    union = set(paths.vertex_set())
    for linker in family:
        union |= set(linker.vertex_set())
    if union != set(range(d.n)) or paths.total_vertices() + sum(
        len(l.vertex_set()) for l in family
    ) != d.n:
        raise ValueError("paths and linkers must partition the vertex set")

    work = list(paths.paths)
    fam = list(family)
    while True:
        if len(work) == 1:
            q = work[0]
            if len(q) < 2:
                raise ValueError("a single-vertex path cannot close a cycle")
            x, y = q.end, q.start
            inner = Path(q.vertices[1:-1]) if len(q) > 2 else None
            res = linking_family_step(d, fam, x, y, [inner] if inner else [])
            cycle_verts = res.path.vertices
            if inner is not None:
                cycle_verts += res.rerouted.paths[0].vertices
            cycle = Path(cycle_verts)
            break
        qk, qk1 = work[-1], work[-2]
        x, y = qk1.end, qk.start
        minus = Path(qk1.vertices[:-1]) if len(qk1) > 1 else None
        plus = Path(qk.vertices[1:]) if len(qk) > 1 else None
        prot = work[:-2] + [p for p in (minus, plus) if p is not None]
        res = linking_family_step(d, fam, x, y, prot)
        rr = res.rerouted.paths
        base = rr[: len(work) - 2]
        rest = list(rr[len(work) - 2 :])
        minus_r = rest.pop(0) if minus is not None else None
        plus_r = rest.pop(0) if plus is not None else None
        spliced = (
            (minus_r.vertices if minus_r else ())
            + res.path.vertices
            + (plus_r.vertices if plus_r else ())
        )
        work = list(base) + [Path(spliced)]
        fam = res.residual_linkers

    verts = cycle.vertices
    if set(verts) != set(range(d.n)) or len(verts) != d.n:
        raise ConstructionError("ham-cycle", "result is not spanning")
    if not cycle.is_valid_in(d) or not d.has_arc(cycle.end, cycle.start):
        raise ConstructionError("ham-cycle", "result uses a missing arc")
    return cycle


def _endpoint_masks(d: Host, family: list[Linker]) -> tuple[int, int]:
    """Vertices usable as a linking-step x (arc into an in-core) and as a y
    (arc from an out-core) for EVERY linker of the family, in the current
    digraph.  The induction shrinks the family, so an endpoint must be
    routable through whichever linker its step ends up using."""
    good_x = d.all_mask()
    good_y = d.all_mask()
    for linker in family:
        in_core = 0
        out_core = 0
        for dom in linker.indominators:
            in_core |= mask_of(dom.a2) | mask_of(dom.a3)
        for dom in linker.outdominators:
            out_core |= mask_of(dom.a2) | mask_of(dom.a3)
        gx = 0
        gy = 0
        for v in range(d.n):
            if d.out_mask(v) & in_core:
                gx |= bit(v)
            if d.in_mask(v) & out_core:
                gy |= bit(v)
        good_x &= gx
        good_y &= gy
    return good_x, good_y


def _interior_insert(d: Host, p: list[int], v: int) -> bool:
    for i in range(len(p) - 1):
        if d.has_arc(p[i], v) and d.has_arc(v, p[i + 1]):
            p.insert(i + 1, v)
            return True
    return False


def _fix_cover_endpoints(
    d: Host, path: list[int], good_x: int, good_y: int, budget: int = 2000
) -> list[int] | None:
    """Pop un-routable endpoints off the cover path and tuck them into the
    interior, until both ends can serve as linking-step endpoints."""
    p = list(path)
    for _ in range(budget):
        if len(p) < 4:
            return None
        if not (good_y >> p[0]) & 1:
            v = p.pop(0)
            if not _interior_insert(d, p, v):
                return None
            continue
        if not (good_x >> p[-1]) & 1:
            v = p.pop()
            if not _interior_insert(d, p, v):
                return None
            continue
        return p
    return None


def _banded_cover(
    d: Host, outside: list[int], fam: int, good_x: int, good_y: int
) -> PathSystem:
    """Cover the round's free vertices by at most ``fam`` paths whose
    endpoints are all routable.

    Vertices that cannot serve as a step's x (no arc into an in-core) or as
    a y form two bands; both are folded into one path whose head is a
    routable y and whose tail ends inside the always-routable low band: the
    high band's merge sinks its exits (vertices feeding the low region) to
    the rear, which is exactly where the low band can be attached.
    """
    from .classic import _cover_merge, _dissolve

    top = []  # cannot serve as x, can serve as y
    mid = []  # neither role: routing lanes, traversed between the bands
    bot = []  # cannot serve as y, can serve as x
    rest = []
    for v in outside:
        gx = (good_x >> v) & 1
        gy = (good_y >> v) & 1
        if gx and gy:
            rest.append(v)
        elif not gx and not gy:
            mid.append(v)
        elif not gx:
            top.append(v)
        else:
            bot.append(v)
    if not rest:
        raise ConstructionError("cover", "no routable vertices at all")

    rest_set = set(rest)

    def chain(onto: list[int], piece: list[int]) -> None:
        # join with a direct arc or one glue vertex from the routable pool
        if not onto:
            onto.extend(piece)
            return
        if d.has_arc(onto[-1], piece[0]):
            onto.extend(piece)
            return
        glue = next(
            (
                g
                for g in bits_of(d.out_mask(onto[-1]) & d.in_mask(piece[0]))
                if g in rest_set
            ),
            None,
        )
        if glue is None:
            raise ConstructionError("cover", "band pieces do not chain")
        rest_set.remove(glue)
        rest.remove(glue)
        onto.append(glue)
        onto.extend(piece)

    pieces: list[list[int]] = []
    band: list[int] = []
    for group in (top, mid, bot):
        if not group:
            continue
        for sub in _dissolve(d, _cover_merge(d, group)):
            chain(band, sub)
    if band:
        head = band[0]
        lead = next(
            (v for v in rest if (good_y >> v) & 1 and d.has_arc(v, head)), None
        )
        if lead is None:
            raise ConstructionError("cover", "no routable entry into the bands")
        rest.remove(lead)
        band.insert(0, lead)
        if not (good_x >> band[-1]) & 1:
            raise ConstructionError("cover", "band exit is not routable")
        pieces.append(band)

    main = _dissolve(d, _cover_merge(d, rest))
    if len(main) > 1:
        # direct-arc chaining of the leftovers, largest first
        main.sort(key=len, reverse=True)
        joined = [main[0]]
        for piece in main[1:]:
            if d.has_arc(joined[-1][-1], piece[0]):
                joined[-1] = joined[-1] + piece
            elif d.has_arc(piece[-1], joined[-1][0]):
                joined[-1] = piece + joined[-1]
            else:
                joined.append(piece)
        main = joined
    fixed = []
    for p in main:
        f = _fix_cover_endpoints(d, p, good_x, good_y)
        if f is None:
            raise ConstructionError("cover", "endpoint surgery failed")
        fixed.append(f)
    pieces.extend(fixed)
    if len(pieces) > fam:
        raise ConstructionError("cover", f"{len(pieces)} pieces exceed the family size")
    return PathSystem([Path(tuple(p)) for p in pieces], host=d)


def _split_for_linking(
    cover: PathSystem, fam: int, good_x: int, good_y: int
) -> PathSystem:
    """Split the cover into exactly ``fam`` paths whose endpoints can all be
    routed: every path start is a feasible y, every end a feasible x."""
    paths = [list(p.vertices) for p in cover.paths]
    for p in paths:
        if not ((good_y >> p[0]) & 1) or not ((good_x >> p[-1]) & 1):
            raise ConstructionError("split", "cover endpoint cannot be routed")
    while len(paths) < fam:
        best = None
        for idx in sorted(range(len(paths)), key=lambda i: -len(paths[i])):
            p = paths[idx]
            if len(p) < 4:
                continue
            mid = len(p) // 2
            for cut in sorted(range(2, len(p) - 1), key=lambda c: abs(c - mid)):
                if ((good_x >> p[cut - 1]) & 1) and ((good_y >> p[cut]) & 1):
                    best = (idx, cut)
                    break
            if best:
                break
        if best is None:
            raise ConstructionError("split", "no routable cut point found")
        idx, cut = best
        p = paths[idx]
        paths[idx : idx + 1] = [p[:cut], p[cut:]]
    return PathSystem([Path(tuple(p)) for p in paths], host=cover.host)


def edge_disjoint_ham_cycles(
    host: Tournament,
    k: int,
    profile: ParamProfile,
    seed: int = 0,
    family_size: int | None = None,
    reserve: frozenset[int] = frozenset(),
    cover_retries: int = 24,
) -> list[Path]:
    """k pairwise edge-disjoint Hamiltonian cycles via the linker pipeline.

    Round r uses its own linker family; the digraph for round r excludes the
    later rounds' linker edges and the earlier rounds' cycle arcs, so cycles
    never consume reserved material.
    """
    if k < 1:
        raise ValueError("k must be positive")
    fam = family_size or profile.family_size or 3
    linkers, _x = build_linkers(host, k * fam, profile, seed=seed, reserve=reserve)
    edge_sets = [linker_edges(host, linker) for linker in linkers]
    rng = SplitMix64(seed ^ 0x5EED)

    cycles: list[Path] = []
    used_arcs: set[tuple[int, int]] = set()
    for rnd in range(k):
        family = linkers[rnd * fam : (rnd + 1) * fam]
        removed: set[tuple[int, int]] = set(used_arcs)
        for later in range((rnd + 1) * fam, k * fam):
            removed |= edge_sets[later]
        d = WorkingDigraph(host, removed)
        fam_mask = 0
        for linker in family:
            fam_mask |= linker.vertex_mask()
        outside = [v for v in range(host.n) if not (fam_mask >> v) & 1]
        good_x, good_y = _endpoint_masks(d, family)

        ps = None
        last_err: ConstructionError | None = None
        for _ in range(cover_retries):
            order = list(outside)
            rng.shuffle(order)
            try:
                cover = _banded_cover(d, order, fam, good_x, good_y)
                ps = _split_for_linking(cover, fam, good_x, good_y)
                break
            except ConstructionError as e:
                last_err = e
        if ps is None:
            raise ConstructionError(
                "pipeline", f"round {rnd}: no routable cover", witness=last_err.certificate.to_json()
            )
        cycle = ham_cycle_from_partition(d, ps, list(family))
        cycles.append(cycle)
        used_arcs.update(cycle.arcs())
        used_arcs.add((cycle.end, cycle.start))
        for later in range((rnd + 1) * fam, k * fam):
            overlap = used_arcs & edge_sets[later]
            if overlap:
                raise ConstructionError(
                    "pipeline", "cycle consumed reserved linker material", witness=list(overlap)[:3]
                )

    rep = verify_decomposition(host, cycles)
    if not rep.passed:
        raise ConstructionError(
            "pipeline", "decomposition failed verification", witness=rep.first_failure().to_json()
        )
    return cycles


def link_pairs(
    host: Tournament,
    pairs: list[tuple[int, int]],
    profile: ParamProfile,
    seed: int = 0,
    reserve: frozenset[int] = frozenset(),
) -> PathSystem:
    """Vertex-disjoint x_i -> y_i paths, one linker spent per pair.

    The endpoints are kept out of every linker part; not-yet-routed
    endpoints ride along as protected singleton paths."""
    k = len(pairs)
    if k < 1:
        raise ValueError("need at least one pair")
    endpoints = [v for pair in pairs for v in pair]
    if len(set(endpoints)) != 2 * k:
        raise ValueError("endpoints must be pairwise distinct")
    linkers, _x = build_linkers(
        host, k, profile, seed=seed, avoid=frozenset(endpoints), reserve=reserve
    )
    family = list(linkers)
    routed: list[Path] = []
    for i, (x, y) in enumerate(pairs):
        future = [Path.of(v) for pair in pairs[i + 1 :] for v in pair]
        protected = routed + future
        res = linking_family_step(host, family, x, y, protected)
        routed = list(res.rerouted.paths[: len(routed)]) + [res.path]
        family = res.residual_linkers

    seen: set[int] = set()
    for p, (x, y) in zip(routed, pairs):
        if p.start != x or p.end != y:
            raise ConstructionError("link-pairs", "endpoint mismatch")
        if seen & set(p.vertices):
            raise ConstructionError("link-pairs", "paths overlap")
        seen |= set(p.vertices)
    return PathSystem(routed, host=host)
