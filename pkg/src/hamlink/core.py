"""Tournament and digraph data model.

Adjacency is a dense bit relation: row ``i`` is a Python int whose bit ``j``
is set iff the arc ``i -> j`` is present.  Arbitrary-precision ints give
word-parallel set operations, which keeps hosts up to ~20000 vertices
workable.  All structures are immutable after construction and reference
host vertex ids directly; only :meth:`Tournament.induced` relabels, and it
returns the relabeling map alongside the subtournament.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence


def bit(i: int) -> int:
    return 1 << i


def bits_of(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Tournament:
    """Complete oriented graph on vertices ``0..n-1``."""

    __slots__ = ("n", "_out", "_all", "_in", "_outdeg")

    def __init__(self, n: int, out_rows: Sequence[int], validate: bool = True):
        if n < 1:
            raise ValueError("tournament needs at least one vertex")
        self.n = n
        self._out = list(out_rows)
        self._all = (1 << n) - 1
        self._in: list[int] | None = None
        self._outdeg: list[int] | None = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        n, full = self.n, self._all
        if len(self._out) != n:
            raise ValueError("adjacency must have one row per vertex")
        for i, row in enumerate(self._out):
            if row & ~full:
                raise ValueError(f"row {i} has bits outside the vertex range")
            if row & bit(i):
                raise ValueError(f"self-loop at vertex {i}")
        for i in range(n):
            for j in range(i + 1, n):
                fwd = (self._out[i] >> j) & 1
                back = (self._out[j] >> i) & 1
                if fwd == back:
                    kind = "both" if fwd else "neither"
                    raise ValueError(f"pair {{{i},{j}}} oriented {kind} ways")

    # -- construction -------------------------------------------------

    @classmethod
    def from_decider(cls, n: int, arc_decider: Callable[[int, int], bool]) -> "Tournament":
        """Build from a total orientation rule.

        ``arc_decider(i, j)`` (called with i < j) returns True for ``i -> j``.
        """
        if n < 1:
            raise ValueError("tournament needs at least one vertex")
        rows = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if arc_decider(i, j):
                    rows[i] |= bit(j)
                else:
                    rows[j] |= bit(i)
        return cls(n, rows, validate=False)

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        """TT_n with vertex order 0..n-1 (all arcs forward)."""
        full = (1 << n) - 1
        rows = [full ^ ((1 << (i + 1)) - 1) for i in range(n)]
        return cls(n, rows, validate=False)

    @classmethod
    def cyclic(cls, n: int) -> "Tournament":
        """Rotational tournament: i -> j iff (j - i) mod n in 1..(n-1)/2."""
        if n % 2 == 0:
            raise ValueError("rotational tournament needs odd n")
        return cls.from_decider(n, lambda i, j: (j - i) % n <= (n - 1) // 2)

    # -- queries ------------------------------------------------------

    def out_mask(self, v: int) -> int:
        return self._out[v]

    def in_mask(self, v: int) -> int:
        if self._in is None:
            full = self._all
            self._in = [full ^ row ^ bit(i) for i, row in enumerate(self._out)]
        return self._in[v]

    def all_mask(self) -> int:
        return self._all

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self._out[u] >> v) & 1)

    def out_degree(self, v: int) -> int:
        if self._outdeg is None:
            self._outdeg = [row.bit_count() for row in self._out]
        return self._outdeg[v]

    def in_degree(self, v: int) -> int:
        return self.n - 1 - self.out_degree(v)

    def degree(self, v: int) -> int:
        return self.n - 1

    def vertices(self) -> range:
        return range(self.n)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits_of(self._out[u]):
                yield (u, v)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Tournament)
            and other.n == self.n
            and other._out == self._out
        )

    def __hash__(self):
        return hash((self.n, tuple(self._out)))

    def __repr__(self):
        return f"Tournament(n={self.n})"

    # -- derived tournaments -------------------------------------------

    def reverse(self) -> "Tournament":
        """Arc-reversed copy; an involution."""
        rows = [self.in_mask(v) for v in range(self.n)]
        return Tournament(self.n, rows, validate=False)

    def induced(self, subset: Iterable[int]) -> tuple["Tournament", list[int]]:
        """Subtournament on ``subset`` plus the new-index -> host-id map."""
        order = sorted(set(subset))
        if not order:
            raise ValueError("induced subtournament needs a nonempty vertex set")
        if order[0] < 0 or order[-1] >= self.n:
            raise ValueError("subset contains vertices outside the host")
        pos = {v: i for i, v in enumerate(order)}
        rows = [0] * len(order)
        for i, v in enumerate(order):
            row = self._out[v]
            for j, w in enumerate(order):
                if (row >> w) & 1:
                    rows[i] |= bit(j)
        return Tournament(len(order), rows, validate=False), order

    # -- text format ----------------------------------------------------

    def to_text(self) -> str:
        """Bit-exact text form: n, then n rows of 0/1 characters."""
        lines = [str(self.n)]
        for i in range(self.n):
            row = self._out[i]
            lines.append("".join("1" if (row >> j) & 1 else "0" for j in range(self.n)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tournament":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if not lines:
            raise ValueError("empty tournament file")
        try:
            n = int(lines[0])
        except ValueError:
            raise ValueError("first line must be the vertex count") from None
        if n < 1:
            raise ValueError("vertex count must be positive")
        if len(lines) != n + 1:
            raise ValueError(f"expected {n} matrix rows, found {len(lines) - 1}")
        rows = []
        for i, ln in enumerate(lines[1:]):
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ValueError(f"row {i} is not {n} characters of 0/1")
            if ln[i] != "0":
                raise ValueError(f"diagonal entry at row {i} must be 0")
            rows.append(sum(bit(j) for j, ch in enumerate(ln) if ch == "1"))
        t = cls(n, rows, validate=False)
        # full validation catches both-or-neither orientation errors
        t._validate()
        return t

    def to_dot(self, name: str = "T") -> str:
        out = [f"digraph {name} {{"]
        for u, v in self.arcs():
            out.append(f"  {u} -> {v};")
        out.append("}")
        return "\n".join(out) + "\n"


def build_tournament(n: int, arc_decider: Callable[[int, int], bool]) -> Tournament:
    return Tournament.from_decider(n, arc_decider)


class WorkingDigraph:
    """Spanning subdigraph of a tournament with some arcs removed."""

    __slots__ = ("base", "removed", "_rem_out", "_rem_in")

    def __init__(self, base: Tournament, removed: Iterable[tuple[int, int]] = ()):
        self.base = base
        rem = frozenset(removed)
        for (u, v) in rem:
            if not base.has_arc(u, v):
                raise ValueError(f"removed arc {u}->{v} is not an arc of the base")
        self.removed = rem
        self._rem_out: dict[int, int] = {}
        self._rem_in: dict[int, int] = {}
        for (u, v) in rem:
            self._rem_out[u] = self._rem_out.get(u, 0) | bit(v)
            self._rem_in[v] = self._rem_in.get(v, 0) | bit(u)

    @property
    def n(self) -> int:
        return self.base.n

    def all_mask(self) -> int:
        return self.base.all_mask()

    def out_mask(self, v: int) -> int:
        return self.base.out_mask(v) & ~self._rem_out.get(v, 0)

    def in_mask(self, v: int) -> int:
        return self.base.in_mask(v) & ~self._rem_in.get(v, 0)

    def has_arc(self, u: int, v: int) -> bool:
        return self.base.has_arc(u, v) and (u, v) not in self.removed

    def out_degree(self, v: int) -> int:
        return self.out_mask(v).bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_mask(v).bit_count()

    def degree(self, v: int) -> int:
        return self.base.n - 1 - self._rem_out.get(v, 0).bit_count() - self._rem_in.get(v, 0).bit_count()

    def min_degree(self) -> int:
        return min(self.degree(v) for v in range(self.n))

    def min_out_degree(self) -> int:
        return min(self.out_degree(v) for v in range(self.n))

    def min_in_degree(self) -> int:
        return min(self.in_degree(v) for v in range(self.n))

    def vertices(self) -> range:
        return range(self.n)

    def without(self, more_removed: Iterable[tuple[int, int]]) -> "WorkingDigraph":
        return WorkingDigraph(self.base, self.removed | frozenset(more_removed))

    def reverse(self) -> "WorkingDigraph":
        return WorkingDigraph(self.base.reverse(), frozenset((v, u) for (u, v) in self.removed))

    def __repr__(self):
        return f"WorkingDigraph(n={self.n}, removed={len(self.removed)})"


class ReversedView:
    """Arc-reversed read-only view of a host (no copying).

    Construct through :func:`reversed_view`, which collapses double
    reversals back to the underlying host.
    """

    __slots__ = ("inner",)

    def __init__(self, inner):
        self.inner = inner

    @property
    def n(self) -> int:
        return self.inner.n

    def all_mask(self) -> int:
        return self.inner.all_mask()

    def out_mask(self, v: int) -> int:
        return self.inner.in_mask(v)

    def in_mask(self, v: int) -> int:
        return self.inner.out_mask(v)

    def has_arc(self, u: int, v: int) -> bool:
        return self.inner.has_arc(v, u)

    def out_degree(self, v: int) -> int:
        return self.inner.in_mask(v).bit_count()

    def in_degree(self, v: int) -> int:
        return self.inner.out_mask(v).bit_count()

    def degree(self, v: int) -> int:
        return self.inner.degree(v)

    def vertices(self) -> range:
        return range(self.inner.n)


def reversed_view(host):
    """Arc-reversed view; reversing twice gives back the original host."""
    if isinstance(host, ReversedView):
        return host.inner
    return ReversedView(host)


Host = Tournament | WorkingDigraph | ReversedView


@dataclass(frozen=True)
class Path:
    """Directed path as a duplicate-free vertex sequence.

    A single vertex is a valid path of length 0; arc validity is checked
    against a host on demand.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path repeats a vertex")

    @classmethod
    def of(cls, *vertices: int) -> "Path":
        return cls(tuple(vertices))

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def arcs(self) -> Iterator[tuple[int, int]]:
        return zip(self.vertices, self.vertices[1:])

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def vertex_mask(self) -> int:
        return mask_of(self.vertices)

    def is_valid_in(self, host: Host) -> bool:
        return all(host.has_arc(u, v) for u, v in self.arcs())

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def internal(self) -> tuple[int, ...]:
        return self.vertices[1:-1]


def join_paths(*pieces: Path) -> Path:
    """Concatenate paths end to start (junction arcs are the caller's duty)."""
    verts: list[int] = []
    for p in pieces:
        verts.extend(p.vertices)
    return Path(tuple(verts))


@dataclass
class PathSystem:
    """A family of paths, pairwise disjoint unless flagged internally-disjoint."""

    paths: list[Path]
    host: Host | None = None
    internally_disjoint: bool = False

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def vertex_set(self) -> set[int]:
        s: set[int] = set()
        for p in self.paths:
            s.update(p.vertices)
        return s

    def total_vertices(self) -> int:
        return sum(len(p) for p in self.paths)

    def problems(self, host: Host | None = None) -> list[str]:
        """Violations of the disjointness/arc invariants (empty = valid)."""
        host = host or self.host
        issues = []
        seen: dict[int, int] = {}
        for idx, p in enumerate(self.paths):
            verts = p.vertices if not self.internally_disjoint else p.internal()
            for v in verts:
                if v in seen:
                    issues.append(f"vertex {v} shared by paths {seen[v]} and {idx}")
                else:
                    seen[v] = idx
            if host is not None and not p.is_valid_in(host):
                bad = next((a for a in p.arcs() if not host.has_arc(*a)), None)
                issues.append(f"path {idx} uses missing arc {bad}")
        if self.internally_disjoint:
            # endpoints may coincide across paths but not with internals
            for idx, p in enumerate(self.paths):
                for v in (p.start, p.end):
                    if v in seen and len(p) > 1:
                        issues.append(f"endpoint {v} of path {idx} is internal to path {seen[v]}")
        return issues


# -- reachability and connectivity -------------------------------------


def _reach_mask(host: Host, start: int, forward: bool) -> int:
    step = host.out_mask if forward else host.in_mask
    seen = bit(start)
    frontier = seen
    while frontier:
        acc = 0
        for v in bits_of(frontier):
            acc |= step(v)
        frontier = acc & ~seen
        seen |= frontier
    return seen

def is_strongly_connected(host: Host) -> bool:
    """True iff every ordered vertex pair is joined by a directed path."""
    full = host.all_mask()
    if host.n == 1:
        return True
    return _reach_mask(host, 0, True) == full and _reach_mask(host, 0, False) == full


class _UnitFlow:
    """Unit-vertex-capacity max flow on an implicit dense digraph.

    The classical vertex-split reduction, with the split graph kept implicit:
    state ``v`` is the in-copy of vertex v and ``v + n`` its out-copy.
    ``used``/``nxt``/``prv`` describe the current path decomposition.
    """

    def __init__(self, host: Host, allowed: int, sources: Sequence[int], sinks: Sequence[int]):
        self.host = host
        self.n = host.n
        self.allowed = allowed
        self.sources = [s for s in sources if (allowed >> s) & 1]
        self.sink_mask = mask_of(sinks) & allowed
        self.used = bytearray(self.n)
        self.nxt = [-2] * self.n  # -1 = path ends here, -2 = unset
        self.prv = [-2] * self.n  # -1 = path starts here
        self.flow = 0

    def _augment_once(self) -> bool:
        n = self.n
        used, nxt, prv = self.used, self.nxt, self.prv
        host, allowed = self.host, self.allowed
        seen_in = 0
        seen_out = 0
        parent: dict[int, int] = {}
        frontier: list[int] = []
        for s in self.sources:
            if not (used[s] and prv[s] == -1):
                seen_in |= bit(s)
                parent[s] = -10  # super-source marker
                frontier.append(s)
        goal = -1
        while frontier and goal < 0:
            nxt_frontier: list[int] = []
            for state in frontier:
                if state < n:
                    v = state
                    if used[v]:
                        w = prv[v]
                        if w >= 0 and not ((seen_out >> w) & 1):
                            seen_out |= bit(w)
                            parent[w + n] = v
                            nxt_frontier.append(w + n)
                    else:
                        if not ((seen_out >> v) & 1):
                            seen_out |= bit(v)
                            parent[v + n] = v
                            nxt_frontier.append(v + n)
                else:
                    v = state - n
                    if (self.sink_mask >> v) & 1 and not (used[v] and nxt[v] == -1):
                        goal = state
                        break
                    mask = host.out_mask(v) & allowed & ~seen_in
                    if used[v] and nxt[v] >= 0:
                        mask &= ~bit(nxt[v])
                    for z in bits_of(mask):
                        seen_in |= bit(z)
                        parent[z] = state
                        nxt_frontier.append(z)
                    if used[v] and not ((seen_in >> v) & 1):
                        # cancel the unit through v
                        seen_in |= bit(v)
                        parent[v] = state
                        nxt_frontier.append(v)
            frontier = nxt_frontier
        if goal < 0:
            self._last_seen_in = seen_in
            self._last_seen_out = seen_out
            return False
        # walk back to the super-source, then apply the augmentation forward
        chain = [goal]
        cur = goal
        while parent[cur] != -10:
            cur = parent[cur]
            chain.append(cur)
        chain.reverse()
        first = chain[0]
        prv[first] = -1
        for a, b in zip(chain, chain[1:]):
            if a < n and b == a + n:
                used[a] = 1
            elif b < n and a == b + n:
                used[b] = 0
            elif a >= n and b < n:
                nxt[a - n] = b
                prv[b] = a - n
            elif a < n and b >= n:
                # reverse of flow arc (b-n) -> a
                pass
            else:
                raise AssertionError("malformed augmenting step")
        end = goal - n
        nxt[end] = -1
        self.flow += 1
        return True

    def run(self, need: int | None = None) -> int:
        limit = need if need is not None else self.n
        while self.flow < limit and self._augment_once():
            pass
        return self.flow

    def paths(self) -> list[Path]:
        out = []
        for s in self.sources:
            if self.used[s] and self.prv[s] == -1:
                verts = [s]
                while self.nxt[verts[-1]] != -1:
                    verts.append(self.nxt[verts[-1]])
                out.append(Path(tuple(verts)))
        return out

    def cut(self) -> list[int]:
        """Vertex cut of size == flow, valid after a failed augmentation."""
        seen_in = getattr(self, "_last_seen_in", 0)
        seen_out = getattr(self, "_last_seen_out", 0)
        cut = [v for v in bits_of(seen_in & ~seen_out)]
        for s in self.sources:
            if not ((seen_in >> s) & 1):
                cut.append(s)
        return sorted(set(cut))


def max_disjoint_paths(
    host: Host,
    sources: Sequence[int],
    sinks: Sequence[int],
    forbidden: Iterable[int] = (),
    need: int | None = None,
) -> _UnitFlow:
    """Vertex-disjoint source->sink routing engine (shared by connectivity
    queries and Menger-style routing)."""
    allowed = host.all_mask() & ~mask_of(forbidden)
    engine = _UnitFlow(host, allowed, sources, sinks)
    engine.run(need)
    return engine


def local_connectivity(host: Host, u: int, v: int, cap: int | None = None) -> int:
    """Max internally vertex-disjoint u->v paths (u,v uncapacitated).

    Counts the direct arc if present.
    """
    direct = 1 if host.has_arc(u, v) else 0
    allowed_forbid = [u, v]
    sources = [w for w in bits_of(host.out_mask(u) & ~bit(v))]
    sinks = [w for w in bits_of(host.in_mask(v) & ~bit(u))]
    if not sources or not sinks:
        return direct
    engine = _UnitFlow(host, host.all_mask() & ~mask_of(allowed_forbid), sources, sinks)
    budget = None if cap is None else max(0, cap - direct)
    engine.run(budget)
    return engine.flow + direct


def strong_connectivity(t: Tournament) -> int:
    """Largest k such that t stays strongly connected after deleting any
    k-1 vertices; 0 if t is not strongly connected.

    Computed as the minimum, over ordered pairs (u, v) with no arc u->v, of
    the number of internally disjoint u->v paths (pairs joined by an arc
    cannot be separated).
    """
    n = t.n
    if n == 1:
        return 0
    best = n - 1
    for u in range(n):
        in_u = t.in_mask(u)
        for v in bits_of(in_u):
            # arc v->u present, so no arc u->v: candidate separated pair
            k = local_connectivity(t, u, v, cap=best)
            if k < best:
                best = k
                if best == 0:
                    return 0
    return best
