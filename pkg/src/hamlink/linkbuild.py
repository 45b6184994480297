"""Building linkers inside a host: repeated dominator construction with an
accumulating exceptional set, Menger routing between dominator heads and
tails, staged index selection, connector builds, and final assembly.

Record outer blocks are built at twice the profile's M so the two selection
stages can refine them to transitive M-subsets whose boundary arcs are
uniformly oriented; those arcs are exactly the linker's forced arcs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .classic import menger_route
from .core import Host, Path, Tournament, bits_of, mask_of
from .domination import Dominator, build_dominator, verify_dominator
from .linkage import (
    Connector,
    Linker,
    build_connector,
    ramsey_select,
    verify_linker,
)
from .profiles import ParamProfile
from .report import ConstructionError
from .rng import SplitMix64


@dataclass(frozen=True)
class HRecord:
    """One unit of linker material: an in-dominator, an out-dominator, and a
    path from the first one's head to the second one's tail."""

    indom: Dominator
    outdom: Dominator
    q: Path

    def vertex_mask(self) -> int:
        return self.indom.vertex_mask() | self.outdom.vertex_mask() | self.q.vertex_mask()


def _settle_dominator(host: Host, dom: Dominator, x: frozenset[int]) -> Dominator:
    """Re-anchor a dominator on a bigger exceptional set, halving the
    expansion factor until verification passes."""
    d = replace(dom, exceptional=x, uncovered=dom.uncovered - x)
    while True:
        rep = verify_dominator(host, d)
        if rep.passed:
            return d
        fail = rep.first_failure()
        if fail.clause == "D6" and d.p > 0:
            d = replace(d, p=d.p // 2)
            continue
        raise ConstructionError(
            "settle-dominator", f"clause {fail.clause} unsatisfied", witness=fail.to_json()
        )


def _transitive_prefix_path(block: tuple[int, ...], v: int, host: Host) -> list[int]:
    """Path from v to the last element of a stored transitive block."""
    if v == block[-1]:
        return [v]
    if not host.has_arc(v, block[-1]):
        raise ConstructionError("single-linker", "block order broken at a path splice")
    return [v, block[-1]]


def build_single_linker(
    host: Host,
    x_set: frozenset[int],
    z_mask: int,
    records: list[HRecord],
    profile: ParamProfile,
    seed: int = 0,
) -> tuple[Linker, frozenset[int]]:
    """Assemble one t-linker from dominator-pair records.

    Four staged selections orient the block/endpoint boundaries, connectors
    are built between the picked large-degree vertices, and the twoheaviest
    uncovered sides are split so the size comparison clause holds.
    """
    t = profile.t
    need = profile.records_per_linker
    if len(records) < need:
        raise ConstructionError(
            "single-linker", f"need {need} records, have {len(records)}"
        )
    records = records[:need]
    rng = SplitMix64(seed)
    mr = profile.M
    restarts = profile.restart_budget

    ids = list(range(len(records)))
    sel1 = ramsey_select(
        host, [records[i].indom.a4 for i in ids], mr, profile.i1, profile.j1,
        "toward", seed=rng.next64(), restarts=restarts,
    )
    i1_ids = [ids[i] for i in sel1.kept]
    j1_ids = [ids[j] for j in sel1.picked]
    v_minus = {ids[j]: v for j, v in sel1.picks.items()}
    a4_refined = {ids[i]: r for i, r in sel1.refined.items()}

    sel2 = ramsey_select(
        host, [records[j].outdom.a4 for j in j1_ids], mr, profile.i2, profile.j2,
        "from", seed=rng.next64(), restarts=restarts,
    )
    i2_ids = [j1_ids[i] for i in sel2.kept]
    j2_ids = [j1_ids[j] for j in sel2.picked]
    v_plus = {j1_ids[j]: v for j, v in sel2.picks.items()}
    b4_refined = {j1_ids[i]: r for i, r in sel2.refined.items()}

    sel3 = ramsey_select(
        host, [records[i].outdom.a1 for i in i2_ids], mr, profile.i3, profile.j3,
        "toward", seed=rng.next64(), restarts=restarts,
    )
    i3_ids = [i2_ids[i] for i in sel3.kept]
    j3_ids = [i2_ids[j] for j in sel3.picked]
    u_plus = {i2_ids[j]: v for j, v in sel3.picks.items()}
    b1_refined = {i2_ids[i]: r for i, r in sel3.refined.items()}

    sel4 = ramsey_select(
        host, [records[i].indom.a1 for i in i1_ids], mr, profile.i4, profile.j4,
        "from", seed=rng.next64(), restarts=restarts,
    )
    i4_ids = [i1_ids[i] for i in sel4.kept]
    j4_ids = [i1_ids[j] for j in sel4.picked]
    u_minus = {i1_ids[j]: v for j, v in sel4.picks.items()}
    a1_refined = {i1_ids[i]: r for i, r in sel4.refined.items()}

    xs_pool = [u_plus[j] for j in j3_ids]
    ys_pool = [u_minus[j] for j in j4_ids]
    connectors: list[Connector] = []
    conn_verts = 0
    for c in range(t):
        avoid_mask = (z_mask | conn_verts) & ~mask_of(xs_pool) & ~mask_of(ys_pool)
        conn = build_connector(
            host,
            set(bits_of(avoid_mask)),
            xs_pool,
            ys_pool,
            profile.connector_budget,
            fraction=profile.large_fraction,
            seed=rng.next64(),
            restarts=restarts,
        )
        connectors.append(conn)
        conn_verts |= conn.vertex_mask()
        used = set(conn.vertices)
        xs_pool = [v for v in xs_pool if v not in used]
        ys_pool = [v for v in ys_pool if v not in used]
    s_mask = conn_verts & ~z_mask
    s_set = frozenset(bits_of(s_mask))
    if len(s_set) > 40 * t:
        raise ConstructionError("single-linker", "connector overflow beyond 40t")

    # split the two uncovered-size pools so the comparison clause holds,
    # preferring the earliest records: those anchor nearest the host's
    # dominated ends, which keeps the set of un-routable endpoints small
    def pick_sides(strict_side: str) -> tuple[list[int], list[int]] | None:
        e_in = lambda i: len(records[i].indom.uncovered)
        e_out = lambda i: len(records[i].outdom.uncovered)
        if strict_side == "in-big":
            outs = sorted(i3_ids, key=lambda i: (e_out(i), i))[:t]
            thr = max(e_out(i) for i in outs)
            ins = sorted((i for i in i4_ids if e_in(i) >= thr), key=lambda i: i)[:t]
        else:
            ins = sorted(i4_ids, key=lambda i: (e_in(i), i))[:t]
            thr = max(e_in(i) for i in ins)
            outs = sorted((i for i in i3_ids if e_out(i) >= thr), key=lambda i: i)[:t]
        if len(ins) < t or len(outs) < t:
            return None
        return ins, outs

    sides = pick_sides("in-big") or pick_sides("out-big")
    assert sides is not None, "half/half split impossible"
    i6_ids, i5_ids = sides

    x_final = x_set | s_set
    indoms = []
    for i in i6_ids:
        d = records[i].indom
        d = replace(d, M=mr, a1=a1_refined[i], a4=a4_refined[i])
        indoms.append(_settle_dominator(host, d, x_final))
    outdoms = []
    for i in i5_ids:
        d = records[i].outdom
        d = replace(d, M=mr, a1=b1_refined[i], a4=b4_refined[i])
        outdoms.append(_settle_dominator(host, d, x_final))
    indoms.sort(key=lambda d: -len(d.uncovered))
    outdoms.sort(key=lambda d: -len(d.uncovered))

    qpaths = []
    for j in j2_ids:
        rec = records[j]
        pre = _transitive_prefix_path(rec.indom.a4, v_minus[j], host)
        post_block = rec.outdom.a4
        v2 = v_plus[j]
        if v2 == post_block[-1]:
            post = [v2]
        else:
            if not host.has_arc(post_block[-1], v2):
                raise ConstructionError("single-linker", "exit block order broken")
            post = [post_block[-1], v2]
        mid = rec.q.vertices
        verts = tuple(pre[:-1]) + mid + tuple(post[1:])
        qpaths.append(Path(verts))

    linker = Linker(
        t, tuple(indoms), tuple(outdoms), tuple(connectors), tuple(qpaths), x_final
    )
    rep = verify_linker(host, linker)
    if not rep.passed:
        fail = rep.first_failure()
        raise ConstructionError(
            "single-linker", f"clause {fail.clause} unsatisfied", witness=fail.to_json()
        )
    return linker, s_set


def refit_linker(host: Host, linker: Linker, x: frozenset[int]) -> Linker:
    """Re-anchor a linker on a larger common exceptional set."""
    indoms = [_settle_dominator(host, d, x) for d in linker.indominators]
    outdoms = [_settle_dominator(host, d, x) for d in linker.outdominators]
    indoms.sort(key=lambda d: -len(d.uncovered))
    outdoms.sort(key=lambda d: -len(d.uncovered))
    out = replace(
        linker,
        indominators=tuple(indoms),
        outdominators=tuple(outdoms),
        exceptional=x,
    )
    rep = verify_linker(host, out)
    if not rep.passed:
        fail = rep.first_failure()
        raise ConstructionError(
            "refit-linker", f"clause {fail.clause} unsatisfied", witness=fail.to_json()
        )
    return out


def build_linkers(
    host: Tournament,
    count: int,
    profile: ParamProfile,
    seed: int = 0,
    avoid: frozenset[int] = frozenset(),
    reserve: frozenset[int] = frozenset(),
) -> tuple[list[Linker], frozenset[int]]:
    """``count`` vertex-disjoint t-linkers with a common exceptional set.

    Vertices in ``avoid`` are kept out of every linker part and out of the
    common exceptional set (they land in the uncovered sets instead, so
    linking steps treat them as uncovered endpoints).  Vertices in
    ``reserve`` are kept out of dominator material but stay available as
    path interiors; hosts with scarce descending routes need their routing
    lanes reserved this way.
    """
    if count == 0:
        return [], frozenset()
    paper = profile.paper
    mb = 2 * profile.M
    p0 = profile.p * (8 if paper else 1)
    need = count * profile.records_per_linker
    rng = SplitMix64(seed)

    x_acc: frozenset[int] = frozenset(avoid) | frozenset(reserve)
    doms_in: list[Dominator] = []
    doms_out: list[Dominator] = []
    partial: list[Linker] = []
    p_try = {"in": p0, "out": p0}
    try:
        for orientation, bucket in (("in", doms_in), ("out", doms_out)):
            for _ in range(need):
                while True:
                    try:
                        dom = build_dominator(
                            host, orientation, x_acc, profile.m, mb, profile.L,
                            p_try[orientation], paper=paper,
                            large_fraction=profile.large_fraction,
                        )
                        break
                    except ConstructionError as err:
                        # desk ladder: weaken the expansion factor, re-verify
                        if paper or p_try[orientation] == 0 or "D6" not in err.certificate.reason:
                            raise
                        p_try[orientation] //= 2
                x_acc = dom.exceptional | dom.vertex_set()
                bucket.append(dom)

        heads = [d.head for d in doms_in]
        tails = [d.head for d in doms_out]
        dom_verts = 0
        for d in doms_in + doms_out:
            dom_verts |= d.vertex_mask()
        forbidden = set(bits_of(dom_verts & ~mask_of(heads) & ~mask_of(tails)))
        routed, sigma = menger_route(host, heads, tails, forbidden | set(avoid))
        records = [
            HRecord(doms_in[i], doms_out[sigma[i]], routed.paths[i])
            for i in range(need)
        ]

        x_common = x_acc - avoid
        z_mask = 0
        for rec in records:
            z_mask |= rec.vertex_mask()
        if avoid:
            records = [
                HRecord(
                    replace(r.indom, exceptional=r.indom.exceptional - avoid,
                            uncovered=r.indom.uncovered | avoid),
                    replace(r.outdom, exceptional=r.outdom.exceptional - avoid,
                            uncovered=r.outdom.uncovered | avoid),
                    r.q,
                )
                for r in records
            ]

        linkers: list[Linker] = []
        for g in range(count):
            # interleave so every group sees the whole terrace range
            group = records[g::count]
            linker, s_new = build_single_linker(
                host, x_common, z_mask | mask_of(avoid), group, profile, seed=rng.next64()
            )
            x_common = x_common | s_new
            z_mask |= mask_of(s_new)
            linkers.append(linker)
            partial = list(linkers)

        final = [refit_linker(host, lk, x_common) for lk in linkers]
    except ConstructionError as e:
        e.partial = (partial, x_acc)
        raise
    return final, x_common
