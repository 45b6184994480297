"""Parameter profiles: searchable desk parameters versus the exact paper
constants that only the symbolic audit ever runs with."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction


@dataclass(frozen=True)
class ParamProfile:
    """Knobs for dominator, connector, linker and pipeline construction.

    ``m``/``M``/``p``/``L`` describe the linkers' final dominators (the
    records they are refined from use outer blocks of size 2M).  Desk mode
    verifies outputs instead of trusting preconditions.
    """

    mode: str = "desk"
    m: int = 2
    M: int = 5  # threading a dominator into 5 chains needs M >= 5
    p: int = 2
    L: int = 1024
    t: int = 1
    connector_budget: int = 14
    restart_budget: int = 64
    large_fraction: Fraction = Fraction(1, 25)
    connector_cap: int = 40
    paths_cap_factor: int = 100
    extras_cap: int = 6
    family_size: int | None = None  # linkers per pipeline round; None = auto
    stage_slack: int = 3  # spare records per selection stage (desk searches)

    def __post_init__(self):
        if self.mode not in ("desk", "paper"):
            raise ValueError("mode must be 'desk' or 'paper'")
        if self.M < 5:
            raise ValueError("outer block size M must be at least 5")
        if self.m < 1 or self.p < 0 or self.L < 1 or self.t < 1:
            raise ValueError("parameters must be positive")
        if self.mode == "paper":
            if self.L < 2 ** (self.m + self.M):
                raise ValueError("paper mode needs L >= 2^(m+M)")
            if self.p > 2 ** (self.m - 1):
                raise ValueError("paper mode needs p <= 2^(m-1)")
            if self.t < 12:
                raise ValueError("paper mode needs t >= 12")

    @property
    def paper(self) -> bool:
        return self.mode == "paper"

    # sizes of the staged index selections inside a single-linker build
    @property
    def i3(self) -> int:
        return 2 * self.t

    @property
    def i4(self) -> int:
        return 2 * self.t

    @property
    def j2(self) -> int:
        return 5 * self.t

    @property
    def j3(self) -> int:
        return self.connector_budget

    @property
    def j4(self) -> int:
        return self.connector_budget

    @property
    def i2(self) -> int:
        return self.i3 + self.j3 + self.stage_slack

    @property
    def j1(self) -> int:
        return self.i2 + self.j2 + self.stage_slack

    @property
    def i1(self) -> int:
        return self.i4 + self.j4 + self.stage_slack

    @property
    def records_per_linker(self) -> int:
        return self.i1 + self.j1 + self.stage_slack

    def with_(self, **kw) -> "ParamProfile":
        return replace(self, **kw)


def desk_profile(**kw) -> ParamProfile:
    """Desk defaults sized for seeded hosts of a few thousand vertices."""
    return ParamProfile(**kw)


def pipeline_profile(**kw) -> ParamProfile:
    """Desk profile for end-to-end linker pipelines.

    The relaxed large-degree fraction keeps the transitive pools big enough
    to seed dominator records whose outer blocks (size 2M) survive
    refinement.
    """
    base = dict(large_fraction=Fraction(1, 2), connector_budget=14)
    base.update(kw)
    return ParamProfile(**base)


def paper_profile(**kw) -> ParamProfile:
    base = dict(mode="paper", m=8, M=8, p=8, L=2**25, t=12)
    base.update(kw)
    return ParamProfile(**base)
