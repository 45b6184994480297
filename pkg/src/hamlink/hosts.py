"""Host recipes that make desk-scale linker construction feasible.

Random tournaments at desk sizes never survive the staged selections: the
searches need long transitive chains, strongly dominating top/bottom
regions, and wide disjoint routing between them.  The recipe here is a
blowup of a banded base order ("staircase": forward arcs beyond a small
gap, backward inside it) with a few mid-degree "elevator" blocks that
receive from the upper half and feed the lower half, giving descending
routes that the dominator construction cannot consume.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Tournament
from .oracle import GeneratorSpec, generate


def staircase_base(blocks: int, gap: int) -> Tournament:
    """Forward arcs between blocks more than ``gap`` apart, backward inside
    the band; strongly connected, transitivity-rich."""
    if blocks < gap + 2:
        raise ValueError("need more blocks than the gap")
    return Tournament.from_decider(blocks, lambda i, j: (j - i) > gap)


def ladder_base(blocks: int, gap: int, elevators: int, cut: int | None = None) -> Tournament:
    """Staircase plus elevator vertices: block b feeds an elevator iff
    b >= cut, and every elevator feeds all blocks below the cut."""
    cut = blocks // 2 if cut is None else cut

    def decide(i: int, j: int) -> bool:
        # elevator ids sit above the staircase ids
        if j >= blocks:  # j is an elevator (or both are)
            if i >= blocks:
                return (j - i) > 0  # elevators among themselves: ordered
            return i >= cut  # high block -> elevator, elevator -> low block
        return (j - i) > gap

    return Tournament.from_decider(blocks + elevators, decide)


@dataclass(frozen=True)
class LadderHostSpec:
    """Parameters for a linker-friendly blowup host."""

    blocks: int = 120
    gap: int = 6
    elevators: int = 3
    block_size: int = 70
    seed: int = 0

    @property
    def n(self) -> int:
        return (self.blocks + self.elevators) * self.block_size

    def generator_spec(self) -> GeneratorSpec:
        base = ladder_base(self.blocks, self.gap, self.elevators)
        sizes = tuple([self.block_size] * base.n)
        return GeneratorSpec("blowup", self.n, seed=self.seed, base=base, blocks=sizes)


def ladder_host(
    blocks: int = 120,
    gap: int = 6,
    elevators: int = 3,
    block_size: int = 70,
    seed: int = 0,
) -> Tournament:
    return generate(LadderHostSpec(blocks, gap, elevators, block_size, seed).generator_spec())
