"""The pair groupoid of an equivalence relation on a space.

Arrows are the related ordered pairs (x, y).  Two arrows compose when the
first ends where the second starts, (x, y) o (y, z) = (x, z); the inverse
flips a pair and the units are the diagonal.  Everything is finite, so the
arrow set is just the disjoint union of block x block squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffspace import DiffSpace, Partition


@dataclass(frozen=True)
class Arrow:
    src: int
    dst: int


class Groupoid:
    """Pair groupoid of a partition of a space's points.

    Blocks and the positions of points inside them are fixed at build time;
    all array-valued layers (convolution algebras, operators) index fibers
    in this block order.
    """

    def __init__(self, space: DiffSpace, partition: Partition):
        if set(partition.block_of) != set(space.ids):
            raise ValueError("partition does not cover the space's point ids")
        self.space = space
        self.partition = partition
        self.blocks = partition.blocks
        # position of a point inside its block
        self._pos = {
            x: (b, i)
            for b, block in enumerate(self.blocks)
            for i, x in enumerate(block)
        }

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def arrow_count(self) -> int:
        return sum(len(b) ** 2 for b in self.blocks)

    def block_index(self, x: int) -> int:
        return self._pos[x][0]

    def position(self, x: int) -> tuple[int, int]:
        """(block index, position inside block) of a point."""
        return self._pos[x]

    def block_points(self, b: int) -> tuple[int, ...]:
        return self.blocks[b]

    def block_weights(self, b: int) -> np.ndarray:
        return np.array([self.space.weight(x) for x in self.blocks[b]])

    def has_arrow(self, a: Arrow) -> bool:
        return (
            a.src in self._pos
            and a.dst in self._pos
            and self._pos[a.src][0] == self._pos[a.dst][0]
        )

    def arrows(self):
        for block in self.blocks:
            for x in block:
                for y in block:
                    yield Arrow(x, y)

    def units(self):
        for x in self.partition.block_of:
            yield Arrow(x, x)

    def same_structure(self, other: "Groupoid") -> bool:
        return self.space is other.space and self.partition == other.partition

    def __repr__(self) -> str:
        sizes = [len(b) for b in self.blocks]
        return f"Groupoid({len(sizes)} orbits, block sizes {sizes})"


def build_groupoid(space: DiffSpace, rho: Partition) -> Groupoid:
    """Pair groupoid of (space, rho); rho must partition the space's ids."""
    return Groupoid(space, rho)


def compose(g: Groupoid, a1: Arrow, a2: Arrow) -> Arrow:
    """(x, y) o (y, z) = (x, z); raises on non-composable or foreign arrows."""
    if not g.has_arrow(a1) or not g.has_arrow(a2):
        raise ValueError(f"arrow not in groupoid: {a1} or {a2}")
    if a1.dst != a2.src:
        raise ValueError(f"non-composable arrows: {a1} then {a2}")
    return Arrow(a1.src, a2.dst)


def inverse(a: Arrow) -> Arrow:
    return Arrow(a.dst, a.src)


@dataclass(frozen=True)
class FiberReport:
    """The two fibers over a point and their intersection.

    ``outgoing`` collects arrows starting at the point, ``incoming`` arrows
    ending there.  For a pair groupoid the isotropy (their intersection) is
    the single unit arrow; it is computed here, not assumed.
    """

    base: int
    outgoing: tuple[Arrow, ...]
    incoming: tuple[Arrow, ...]
    isotropy: tuple[Arrow, ...]


def fibers(g: Groupoid, x: int) -> FiberReport:
    block = g.blocks[g.block_index(x)]
    outgoing = tuple(Arrow(x, y) for y in block)
    incoming = tuple(Arrow(y, x) for y in block)
    isotropy = tuple(a for a in outgoing if a in set(incoming))
    return FiberReport(base=x, outgoing=outgoing, incoming=incoming, isotropy=isotropy)


def is_transitive(g: Groupoid) -> bool:
    """True when the groupoid has a single orbit (the relation is total)."""
    return g.n_blocks == 1
