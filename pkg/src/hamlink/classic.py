"""Classical subroutines: Hamiltonian cycles by insertion, path covers,
path splitting, and Menger-style disjoint routing.

The path-cover machinery guarantees the minimum-degree bound (a digraph of
minimum total degree >= n - k is covered by at most k disjoint paths): a
vertex that cannot be flip-inserted into a path is non-adjacent to at least
one vertex on it, so the sequential insertion pass can never be forced to
open path number n - min_degree + 1.  Faster merge passes run first; the
sequential pass is the provable fallback.
"""

from __future__ import annotations

from collections import deque

from .core import (
    Host,
    Path,
    PathSystem,
    Tournament,
    WorkingDigraph,
    bit,
    bits_of,
    is_strongly_connected,
    mask_of,
    max_disjoint_paths,
)
from .oracle import INDEPENDENCE_CAP, independence_number
from .report import ConstructionError


# -- Hamiltonian cycle by insertion ------------------------------------


def _shortest_path(host: Host, start: int, goal_mask: int, allowed: int) -> list[int] | None:
    """BFS path from start to any goal vertex, inside ``allowed``."""
    if (goal_mask >> start) & 1:
        return [start]
    parent = {start: -1}
    seen = bit(start)
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            new = host.out_mask(v) & allowed & ~seen
            for w in bits_of(new):
                parent[w] = v
                if (goal_mask >> w) & 1:
                    out = [w]
                    while parent[out[-1]] != -1:
                        out.append(parent[out[-1]])
                    out.reverse()
                    return out
            seen |= new
            nxt.extend(bits_of(new))
        frontier = nxt
    return None


def moon_ham_cycle(t: Tournament) -> Path | None:
    """Hamiltonian cycle of a strongly connected tournament by the classic
    grow-by-insertion procedure; None when not strongly connected."""
    n = t.n
    if n == 1:
        return Path.of(0)
    if not is_strongly_connected(t):
        return None
    # seed cycle: any arc u->v plus a shortest return path v ~> u
    u = 0
    v = next(bits_of(t.out_mask(0)))
    back = _shortest_path(t, v, bit(u), t.all_mask())
    assert back is not None
    cycle = [u] + back[:-1]

    outside = sorted(set(range(n)) - set(cycle))
    while outside:
        cmask = mask_of(cycle)
        progress = False
        dominators: list[int] = []  # v -> all of cycle
        dominated: list[int] = []  # cycle -> v
        still_out: list[int] = []
        for w in outside:
            om = t.out_mask(w) & cmask
            im = t.in_mask(w) & cmask
            if om and im:
                L = len(cycle)
                for i in range(L):
                    if (im >> cycle[i]) & 1 and (om >> cycle[(i + 1) % L]) & 1:
                        cycle.insert(i + 1, w)
                        break
                else:
                    raise AssertionError("mixed vertex must be insertable")
                progress = True
                cmask |= bit(w)
            elif im == 0:
                dominators.append(w)
                still_out.append(w)
            else:
                dominated.append(w)
                still_out.append(w)
        outside = still_out
        if progress:
            continue
        # no mixed vertex: strongly connected forces an arc dominated -> dominator
        amask = mask_of(dominators)
        pair = None
        for b in dominated:
            m = t.out_mask(b) & amask
            if m:
                pair = (b, next(bits_of(m)))
                break
        assert pair is not None, "strong connectivity violated"
        b, a = pair
        cycle[1:1] = [b, a]
        outside.remove(b)
        outside.remove(a)
    return Path(tuple(cycle))


# -- path covers --------------------------------------------------------


def _merge_two(d: Host, p: list[int], q: list[int]) -> list[int] | None:
    """Tournament-style merge of two disjoint paths; None on a missing arc."""
    out: list[int] = []
    i = j = 0
    while i < len(p) and j < len(q):
        a, b = p[i], q[j]
        if d.has_arc(a, b):
            out.append(a)
            i += 1
        elif d.has_arc(b, a):
            out.append(b)
            j += 1
        else:
            return None
    out.extend(p[i:])
    out.extend(q[j:])
    return out


def _flip_insert(d: Host, path: list[int], v: int) -> list[int] | None:
    if d.has_arc(v, path[0]):
        return [v] + path
    if d.has_arc(path[-1], v):
        return path + [v]
    for i in range(len(path) - 1):
        if d.has_arc(path[i], v) and d.has_arc(v, path[i + 1]):
            return path[: i + 1] + [v] + path[i + 1 :]
    return None


def _cover_merge(d: Host, vertices: list[int]) -> list[list[int]]:
    queue = deque([v] for v in vertices)
    while len(queue) > 1:
        merged_any = False
        nxt: deque[list[int]] = deque()
        while queue:
            p = queue.popleft()
            if not queue:
                nxt.append(p)
                break
            q = queue.popleft()
            m = _merge_two(d, p, q)
            if m is not None:
                nxt.append(m)
                merged_any = True
            else:
                nxt.append(p)
                queue.appendleft(q)
        queue = nxt
        if not merged_any:
            break
    return list(queue)


def _dissolve(d: Host, paths: list[list[int]]) -> list[list[int]]:
    """Try to empty small paths into the others by flip-insertion."""
    improved = True
    while improved and len(paths) > 1:
        improved = False
        paths.sort(key=len)
        for vi in range(len(paths)):
            victim = paths[vi]
            others = [list(p) for k, p in enumerate(paths) if k != vi]
            ok = True
            for v in victim:
                placed = False
                for k, p in enumerate(others):
                    newp = _flip_insert(d, p, v)
                    if newp is not None:
                        others[k] = newp
                        placed = True
                        break
                if not placed:
                    ok = False
                    break
            if ok:
                paths = others
                improved = True
                break
    return paths


def _cover_sequential(d: Host, vertices: list[int]) -> list[list[int]]:
    """Insertion pass with the provable <= max(1, n - min_degree) bound."""
    paths: list[list[int]] = []
    for v in vertices:
        for k, p in enumerate(paths):
            newp = _flip_insert(d, p, v)
            if newp is not None:
                paths[k] = newp
                break
        else:
            paths.append([v])
    return paths


def _exact_cover(d: Host, vertices: list[int], r: int, budget: int = 200_000) -> list[list[int]] | None:
    """Budgeted exhaustive search for a cover by at most r paths."""
    steps = 0

    def paths_through(remaining: frozenset[int], v: int) -> list[list[int]]:
        # all simple paths containing v inside `remaining`; longer tried first
        rem_mask = mask_of(remaining)
        tails: list[list[int]] = []

        def fwd(seq: list[int], used: int):
            tails.append(list(seq))
            for w in bits_of(d.out_mask(seq[-1]) & rem_mask & ~used):
                seq.append(w)
                fwd(seq, used | bit(w))
                seq.pop()

        fwd([v], bit(v))
        results: list[list[int]] = []

        def bwd(seq: list[int], used: int):
            head = list(reversed(seq[1:]))
            for tail in tails:
                if not (mask_of(tail[1:]) & used):
                    results.append(head + tail)
            for w in bits_of(d.in_mask(seq[-1]) & rem_mask & ~used):
                seq.append(w)
                bwd(seq, used | bit(w))
                seq.pop()

        bwd([v], bit(v))
        results.sort(key=len, reverse=True)
        return results

    def dfs(remaining: frozenset[int], r: int) -> list[list[int]] | None:
        nonlocal steps
        if not remaining:
            return []
        if r == 0:
            return None
        steps += 1
        if steps > budget:
            raise TimeoutError
        v = min(remaining)
        for path in paths_through(remaining, v):
            sub = dfs(remaining - set(path), r - 1)
            if sub is not None:
                return [path] + sub
        return None

    try:
        return dfs(frozenset(vertices), r)
    except TimeoutError:
        return None


def _cover(d: Host, vertices: list[int], target: int | None) -> list[list[int]]:
    paths = _dissolve(d, _cover_merge(d, vertices))
    if target is not None and len(paths) > target:
        alt = _dissolve(d, _cover_sequential(d, vertices))
        if len(alt) < len(paths):
            paths = alt
    if target is not None and len(paths) > target and len(vertices) <= INDEPENDENCE_CAP:
        exact = _exact_cover(d, vertices, target)
        if exact is not None:
            paths = exact
    return paths


def gallai_milgram_cover(d: Host) -> PathSystem:
    """Vertex-disjoint paths covering V(d), at most independence-number many.

    The bound is enforced explicitly at oracle scale; at any scale the count
    is at most max(1, n - min_degree), which is what the degree-based
    corollary needs.
    """
    vertices = list(range(d.n))
    target = independence_number(d) if d.n <= INDEPENDENCE_CAP else None
    paths = _cover(d, vertices, target)
    return PathSystem([Path(tuple(p)) for p in paths], host=d)


def cover_by_k_paths(d: WorkingDigraph | Tournament, k: int) -> PathSystem:
    """Partition V(d) into at most k disjoint paths; requires min degree
    >= n - k."""
    n = d.n
    for v in range(n):
        if d.degree(v) < n - k:
            raise ValueError(
                f"vertex {v} has degree {d.degree(v)} < n - k = {n - k}"
            )
    paths = _cover(d, list(range(n)), k)
    if len(paths) > k:
        paths = _cover_sequential(d, list(range(n)))
    assert len(paths) <= k, "insertion bound violated"
    return PathSystem([Path(tuple(p)) for p in paths], host=d)


def cover_subset_by_paths(d: Host, vertices: list[int], k: int) -> PathSystem:
    """Cover an induced vertex subset by at most k paths (pipeline helper).

    Arc queries go to ``d`` restricted to ``vertices``; the degree bound must
    be supplied by the caller, so the provable sequential pass is the
    fallback here too.
    """
    allowed = mask_of(vertices)

    class _View:
        n = d.n

        @staticmethod
        def has_arc(u, v):
            return d.has_arc(u, v)

        @staticmethod
        def out_mask(v):
            return d.out_mask(v) & allowed

        @staticmethod
        def in_mask(v):
            return d.in_mask(v) & allowed

    view = _View()
    paths = _dissolve(view, _cover_merge(view, vertices))
    if len(paths) > k:
        alt = _dissolve(view, _cover_sequential(view, vertices))
        if len(alt) < len(paths):
            paths = alt
    if len(paths) > k:
        raise ConstructionError(
            "path-cover", f"needed {len(paths)} paths, budget {k}", witness=len(paths)
        )
    return PathSystem([Path(tuple(p)) for p in paths], host=d)


def split_paths(ps: PathSystem, target: int) -> PathSystem:
    """Split paths (each cut severs one path into prefix + suffix) until
    exactly ``target`` paths remain; vertex union unchanged."""
    total = ps.total_vertices()
    if not (len(ps.paths) <= target <= total):
        raise ValueError(f"target {target} outside [{len(ps.paths)}, {total}]")
    paths = [list(p.vertices) for p in ps.paths]
    while len(paths) < target:
        idx = max(range(len(paths)), key=lambda i: (len(paths[i]), -i))
        p = paths[idx]
        assert len(p) >= 2
        cut = (len(p) + 1) // 2
        paths[idx : idx + 1] = [p[:cut], p[cut:]]
    return PathSystem([Path(tuple(p)) for p in paths], host=ps.host)


# -- Menger routing ------------------------------------------------------


def menger_route(
    t: Host,
    sources: list[int],
    sinks: list[int],
    forbidden: set[int] | frozenset[int] = frozenset(),
) -> tuple[PathSystem, list[int]]:
    """Vertex-disjoint paths from sources onto sinks (some pairing sigma).

    Returns (paths, sigma) with path i running sources[i] -> sinks[sigma[i]].
    Infeasible routing raises with a separating-cut certificate of size <
    len(sources).
    """
    q = len(sources)
    if len(sinks) != q:
        raise ValueError("sources and sinks must have equal length")
    pool = set(sources) | set(sinks) | set(forbidden)
    if len(pool) != len(sources) + len(sinks) + len(forbidden):
        raise ValueError("sources, sinks and forbidden must be pairwise disjoint")
    engine = max_disjoint_paths(t, sources, sinks, forbidden=forbidden, need=q)
    if engine.flow < q:
        raise ConstructionError(
            "menger",
            f"only {engine.flow} of {q} disjoint paths exist",
            witness={"cut": engine.cut()},
        )
    paths = engine.paths()
    sink_pos = {s: i for i, s in enumerate(sinks)}
    sigma = [sink_pos[p.end] for p in paths]
    return PathSystem(list(paths), host=t), sigma
