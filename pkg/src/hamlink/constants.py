"""Exact audit of the construction's numerical skeleton.

Small constants are exact big integers.  The selection-stage sizes are
astronomical, so they are carried as power-tower bounds: ``Pow2(e)`` means
``2**e`` with ``e`` an int or another tower, and every bound absorbs
constant factors into one extra exponent level (documented per entry).
The derived chain constants are affine expressions ``a*R0 + b`` in the
record-count atom R0, whose tower lower bound settles every inequality the
assembly relies on.

Multicolour selection bound used throughout: a c-coloured complete graph on
``c**(c*(q-1))`` vertices contains a monochromatic clique of size q (the
multinomial bound ``(c(q-1))!/((q-1)!)**c`` is at most ``c**(c(q-1))``), and
a transitive subtournament of size s needs a clique of size ``2**s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Bound = Union[int, "Pow2"]


@dataclass(frozen=True)
class Pow2:
    """2**e, with e an int or a nested tower."""

    e: Bound

    def __str__(self) -> str:
        return f"2^{_fmt(self.e)}"


def _fmt(x: Bound) -> str:
    if isinstance(x, int):
        return str(x)
    return f"({x})"


_CAP_BITS = 4096


def tower_value(x: Bound, cap_bits: int = _CAP_BITS) -> int | None:
    """Exact integer value when it fits in cap_bits bits, else None."""
    if isinstance(x, int):
        return x if x.bit_length() <= cap_bits else None
    inner = tower_value(x.e, 64)
    if inner is None or inner > cap_bits:
        return None
    return 1 << inner


def tower_geq(a: Bound, b: Bound) -> bool:
    """a >= b for tower bounds (monotone descent through exponents)."""
    va, vb = tower_value(a), tower_value(b)
    if va is not None and vb is not None:
        return va >= vb
    if va is None and vb is not None:
        return True  # a exceeds the cap, b does not
    if va is not None and vb is None:
        return False
    assert isinstance(a, Pow2) and isinstance(b, Pow2)
    return tower_geq(a.e, b.e)


@dataclass(frozen=True)
class Affine:
    """a*R0 + b with exact integer coefficients, a >= 0."""

    a: int
    b: int = 0

    def __add__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.a, self.b + other)
        return Affine(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.a, self.b - other)
        return Affine(self.a - other.a, self.b - other.b)

    def scale(self, c: int) -> "Affine":
        return Affine(self.a * c, self.b * c)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Affine) and (self.a, self.b) == (other.a, other.b)

    def geq_given(self, other: "Affine | int", r0_low: Bound) -> bool:
        """self >= other whenever R0 is at least its lower bound."""
        o = other if isinstance(other, Affine) else Affine(0, other)
        da, db = self.a - o.a, self.b - o.b
        if da == 0:
            return db >= 0
        if da > 0:
            if db >= 0:
                return True
            threshold = -(-(-db) // da) if False else (-db + da - 1) // da
            return tower_geq(r0_low, threshold)
        # negative slope: can only hold if it holds for all R0 -> never here
        return False

    def text(self, atom: str = "R0") -> str:
        if self.a == 0:
            return str(self.b)
        s = f"{self.a}*{atom}"
        if self.b:
            s += f" + {self.b}" if self.b > 0 else f" - {-self.b}"
        return s


def max_linker_degree(t: int, m: int, M: int, connector_cap: int = 40) -> int:
    """Largest degree a vertex can have inside a t-linker: dominator blocks
    are transitive cliques, connectors have at most connector_cap vertices,
    and the forced boundary arcs touch block vertices, path endpoints, and
    connector terminals."""
    dominator_vertex = (2 * m + 2 * M - 1) + 5 * t
    connector_terminal = (connector_cap - 1) + M * t
    path_end = 2 + M * t
    path_singleton = 2 * M * t
    return max(dominator_vertex, connector_terminal, path_end, path_singleton)


def ramsey_color_count(m: int) -> int:
    """Colours used by the staged selection: a position in a 2m-set times an
    m-subset of the opposite set."""
    from math import comb

    return 2 * m * comb(2 * m, m)


def ramsey_upper(colors: int, t: int, ell_bits: Bound) -> Pow2:
    """Upper bound for the selection stage R(m, t, ell): the multicolour
    clique bound at clique size 2**(t+ell), collapsed one exponent level.

    ``ell_bits`` is a tower upper bound for t + ell; the result is
    2^(2^(ell_bits + ceil(log2(c*log2 c)) + 1)) collapsed conservatively.
    """
    import math

    pad = max(8, (colors * max(1, colors.bit_length())).bit_length() + 1)
    if isinstance(ell_bits, int):
        return Pow2(Pow2(ell_bits + pad))
    # tower exponent: absorb the pad into one extra level
    return Pow2(Pow2(Pow2(_bump(ell_bits))))


def _bump(x: Bound) -> Bound:
    if isinstance(x, int):
        return x + 1
    return Pow2(_bump(x.e))


@dataclass
class InequalityCheck:
    name: str
    holds: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


@dataclass
class ConstantsAudit:
    k: int
    t: int
    m: int
    M: int
    p: int
    L: int
    delta1: int
    n_tower: str
    r0_lower: Bound
    r_chain: list[str]
    c1: Affine
    c0: Affine
    big_c1: Affine
    big_c: Affine
    big_k: Affine
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "t": self.t,
            "dominator": {"m": self.m, "M": self.M, "p": self.p, "L": self.L},
            "delta1": self.delta1,
            "N": self.n_tower,
            "R0_lower_bound": str(self.r0_lower),
            "selection_chain": self.r_chain,
            "c1 (inner)": self.c1.text(),
            "C0": self.c0.text(),
            "C1": self.big_c1.text(),
            "C": self.big_c.text(),
            "K": self.big_k.text(),
            "ramsey_bound_formula": (
                "R_c(q) <= c^(c(q-1)) (multinomial bound); transitive size s "
                "needs clique size 2^s; towers absorb constant factors one "
                "exponent level up"
            ),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


N_TOWER_TEXT = "100*2^(2^(2^(2^10)))"


def audit_constants(k: int) -> ConstantsAudit:
    """Recompute the paper-scale constants as exact integers and tower
    bounds, and re-evaluate every inequality the assembly invokes."""
    if k < 1:
        raise ValueError("k must be positive")
    t, m, M, p, L = 12, 8, 8, 8, 2**25

    delta1 = max_linker_degree(t, m, M)
    colors = ramsey_color_count(M)

    # N = 100 * 2^(2^(2^(2^10))): lower bound drops the 100, the upper bound
    # bumps the innermost exponent
    n_low = Pow2(Pow2(Pow2(Pow2(10))))
    n_up = Pow2(Pow2(Pow2(Pow2(11))))

    # staged sizes, upper bounds for display and lower bounds for the atom
    rj2 = 5 * t
    rj34_up = _bump(n_up)  # N + 40t
    ri56 = t
    ri3 = 2 * ri56
    ri4 = 2 * ri56
    ri2_up = ramsey_upper(colors, ri3, rj34_up)
    ri1_up = ramsey_upper(colors, ri4, rj34_up)
    rj1_up = ramsey_upper(colors, ri2_up, rj2)
    r0_up = ramsey_upper(colors, ri1_up, rj1_up)

    # lower bounds: a selection stage needs at least its transitive target,
    # hence at least 2^(t+ell) candidates
    ri2_low = Pow2(n_low)  # >= 2^(R^J_3) >= 2^N_low
    rj1_low = Pow2(ri2_low)
    r0_low = Pow2(rj1_low)

    r_chain = [
        f"R^J_2 = {rj2}",
        f"R^J_3 = R^J_4 = N + 40t (N = {N_TOWER_TEXT})",
        f"R^I_3 = {ri3}, R^I_4 = {ri4}, R^I_5 = R^I_6 = {ri56}",
        f"R^I_2 <= {ri2_up}",
        f"R^I_1 <= {ri1_up}",
        f"R^J_1 <= {rj1_up}",
        f"R_0 <= {r0_up}, R_0 >= {r0_low}",
    ]

    r0 = Affine(1, 0)
    c1 = r0.scale(50) + 50 * 40 * t  # 50*(R0 + 40t)
    c0 = c1.scale(2**32)
    big_c1 = c0.scale(8300 * delta1)
    big_c = big_c1.scale(delta1 + 2)
    big_k = c0.scale(100 * delta1 * k)

    checks: list[InequalityCheck] = []

    def add(name: str, holds: bool, detail: str) -> None:
        checks.append(InequalityCheck(name, bool(holds), detail))

    add("L >= 2^(m+M)", L >= 2 ** (m + M), f"{L} >= {2 ** (m + M)}")
    add("p <= 2^(m-1)", p <= 2 ** (m - 1), f"{p} <= {2 ** (m - 1)}")
    add(
        "L >= 2^(m+M) + m + M",
        L >= 2 ** (m + M) + m + M,
        f"{L} >= {2 ** (m + M) + m + M}",
    )
    add("t >= 12", t >= 12, f"t = {t}")
    add(
        "C == (Delta1+2)*C1",
        big_c == big_c1.scale(delta1 + 2),
        f"C = {big_c.text()}",
    )
    add(
        "C1 == 8300*Delta1*C0",
        big_c1 == c0.scale(8300 * delta1),
        f"C1 = {big_c1.text()}",
    )
    add("C0 == 2^32 * c1", c0 == c1.scale(2**32), f"C0 = {c0.text()}")
    add(
        "K == 100*Delta1*C0*k",
        big_k == c0.scale(100 * delta1 * k),
        f"K = {big_k.text()}",
    )
    add(
        "104*t*k <= K/2",
        big_k.geq_given(Affine(0, 208 * t * k), r0_low),
        f"208tk = {208 * t * k} <= K = {big_k.text()}",
    )
    add("K/5 >= t", big_k.geq_given(Affine(0, 5 * t), r0_low), f"5t = {5 * t}")
    add(
        "common exceptional set fits: 2*(2^26*c1*k + 40t) <= C0*k",
        c0.scale(k).geq_given(c1.scale(k * 2**27) + 80 * t, r0_low),
        "2^27*c1*k + 80t <= 2^32*c1*k",
    )
    add(
        "routing connectivity survives: C0 - 96*c1 >= c1",
        (c0 - c1.scale(96)).geq_given(c1, r0_low),
        "(2^32 - 96)*c1 >= c1",
    )
    add(
        "|X_k| <= 2^27*c1*k <= C0*k",
        c0.scale(k).geq_given(c1.scale(k * 2**27), r0_low),
        "2^27 <= 2^32",
    )
    add(
        "degree slack for families: C1 - 50*Delta1*C0 >= 82*(100*Delta1*C0)",
        (big_c1 - c0.scale(50 * delta1)).geq_given(c0.scale(8200 * delta1), r0_low),
        "8300 - 50 = 8250 >= 8200",
    )
    add(
        "round digraph degrees: Delta1 + 2k <= 100*Delta1*k",
        delta1 + 2 * k <= 100 * delta1 * k,
        f"{delta1 + 2 * k} <= {100 * delta1 * k}",
    )
    add(
        "cover fits the family: Delta1 + 2k <= (Delta1+2)*k",
        delta1 + 2 * k <= (delta1 + 2) * k,
        f"{delta1 + 2 * k} <= {(delta1 + 2) * k}",
    )
    add(
        "dominator hosts large enough: C0*k >= 25*2^(2m+2M)",
        c0.scale(k).geq_given(Affine(0, 25 * 2 ** (2 * m + 2 * M)), r0_low),
        "C0 dwarfs 25*2^32",
    )
    add(
        "repeated-dominator budget: 2^26*c1*k <= C0*k/25 - 2^(2m+2M)",
        (c0.scale(k) - c1.scale(25 * k * 2**26)).geq_given(
            Affine(0, 25 * 2 ** (2 * m + 2 * M)), r0_low
        ),
        "(2^32 - 25*2^26)*c1*k >= 25*2^32",
    )
    add(
        "connector hosts large enough: C0*k >= 200*N",
        tower_geq(r0_low, _bump(_bump(n_up))),
        f"R0 >= {r0_low} >= 200*N",
    )

    return ConstantsAudit(
        k=k, t=t, m=m, M=M, p=p, L=L,
        delta1=delta1,
        n_tower=N_TOWER_TEXT,
        r0_lower=r0_low,
        r_chain=r_chain,
        c1=c1, c0=c0, big_c1=big_c1, big_c=big_c, big_k=big_k,
        checks=checks,
    )
