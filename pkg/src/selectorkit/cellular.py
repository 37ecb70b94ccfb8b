"""Finitary cellular balleans: partitions, block symmetric groups, closures."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import factorial, prod

from .ballean import (
    CoarseBase,
    Entourage,
    GeneratorSet,
    GSpaceRepresentation,
    ball,
    orbit_entourage,
)
from .core import GroundSet, Permutation
from .errors import NotEquivalence, ValidationError

DEFAULT_CLOSURE_CAP = 10**6


@dataclass(frozen=True)
class PartitionEntourage:
    ground: GroundSet
    blocks: tuple  # tuples in ground order, ordered by least element

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValidationError("empty block")
            for x in b:
                if x in seen:
                    raise ValidationError(f"{x!r} appears in two blocks")
                if x not in self.ground:
                    raise ValidationError(f"{x!r} is not in the ground set")
                seen.add(x)
        if len(seen) != len(self.ground):
            missing = [x for x in self.ground if x not in seen]
            raise ValidationError(f"{missing[0]!r} is in no block")

    @classmethod
    def from_blocks(cls, ground: GroundSet, blocks) -> PartitionEntourage:
        idx = ground.index
        ordered = [tuple(sorted(b, key=idx)) for b in blocks]
        ordered.sort(key=lambda b: idx(b[0]))
        return cls(ground, tuple(ordered))

    @property
    def bound(self) -> int:
        return max(len(b) for b in self.blocks)

    def relation(self) -> Entourage:
        return Entourage(self.ground, frozenset((x, y) for b in self.blocks for x in b for y in b))

    def block_of(self, x) -> tuple:
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)


@dataclass(frozen=True)
class PartitionBase:
    ground: GroundSet
    partitions: tuple  # (name, PartitionEntourage)

    @property
    def bounds(self) -> dict:
        return {name: p.bound for name, p in self.partitions}


def equivalence_witness(E: Entourage):
    """None for an equivalence relation, else the first violation found."""
    for x in E.ground:
        if (x, x) not in E.pairs:
            return ("reflexive", (x, x))
    for x, y in E.sorted_pairs():
        if (y, x) not in E.pairs:
            return ("symmetric", (x, y))
    for x in E.ground:
        bx = ball(E, x)
        for y in E.ground.ordered(bx):
            for z in E.ground.ordered(ball(E, y)):
                if z not in bx:
                    return ("transitive", (x, y), (y, z), (x, z))
    return None


def is_equivalence(E: Entourage):
    """``(ok, witness)``."""
    w = equivalence_witness(E)
    return w is None, w


def partitions_from_base(base: CoarseBase) -> PartitionBase:
    parts = []
    for name, E in base:
        w = equivalence_witness(E)
        if w is not None:
            raise NotEquivalence(name, w)
        blocks = []
        placed = set()
        for x in E.ground:
            if x not in placed:
                b = E.ground.ordered(ball(E, x))
                placed.update(b)
                blocks.append(b)
        parts.append((name, PartitionEntourage(E.ground, tuple(blocks))))
    return PartitionBase(base.ground, tuple(parts))


def block_generators(p: PartitionEntourage, name: str = "P") -> GeneratorSet:
    """Identity plus adjacent transpositions inside every block."""
    g = p.ground
    members = [Permutation.identity(g)]
    for b in p.blocks:
        for a, c in zip(b, b[1:]):
            members.append(Permutation.from_transpositions(g, [(a, c)]))
    return GeneratorSet(name, tuple(members))


@dataclass(frozen=True)
class ClosureResult:
    status: str  # "finite" or "cap_exceeded"
    elements: frozenset = frozenset()
    explored: int = 0

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    @property
    def order(self):
        return len(self.elements) if self.finite else None


def subgroup_closure(g: GeneratorSet, cap: int = DEFAULT_CLOSURE_CAP) -> ClosureResult:
    """Breadth-first closure of the generators under composition and inverse."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n = len(g.ground)
    gens = set()
    for p in g.members:
        gens.add(p.images)
        inv = [0] * n
        for i, j in enumerate(p.images):
            inv[j] = i
        gens.add(tuple(inv))
    gens = sorted(gens)
    identity = tuple(range(n))
    seen = {identity}
    queue = deque([identity])
    while queue:
        cur = queue.popleft()
        for s in gens:
            nxt = tuple(s[j] for j in cur)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    return ClosureResult("cap_exceeded", explored=len(seen))
                queue.append(nxt)
    # in a finite group, closure under products already contains inverses
    elements = frozenset(Permutation(g.ground, t) for t in seen)
    return ClosureResult("finite", elements, len(seen))


def block_order_bound(p: PartitionEntourage) -> int:
    """Order of the direct product of the block symmetric groups."""
    return prod(factorial(len(b)) for b in p.blocks)


def represent_cellular(base: CoarseBase, cap: int = DEFAULT_CLOSURE_CAP) -> GSpaceRepresentation:
    """Block symmetric-group generators per partition of a cellular base.

    ``closures`` holds the capped closure of each generator set, and the
    ideal base is the list of those closed groups. Use
    :func:`cellular_checks` for the per-partition orbit comparison.
    """
    pb = partitions_from_base(base)
    gens = []
    closures = []
    ideal = []
    for name, part in pb.partitions:
        gs = block_generators(part, name)
        gens.append(gs)
        cl = subgroup_closure(gs, cap)
        closures.append(cl)
        if cl.finite:
            ideal.append(GeneratorSet(name, tuple(sorted(cl.elements))))
    return GSpaceRepresentation(base, tuple(gens), tuple(ideal), (), tuple(closures))


@dataclass
class CellularCheck:
    name: str
    closure_status: str
    order: int | None
    block_product: int
    orbit_ok: bool
    divides_ok: bool

    @property
    def ok(self) -> bool:
        return self.closure_status == "finite" and self.orbit_ok and self.divides_ok


def cellular_checks(rep: GSpaceRepresentation) -> list:
    """Per partition: closure finite, orbit entourage equals the relation, order divides the block product."""
    pb = partitions_from_base(rep.base)
    out = []
    for (name, part), cl in zip(pb.partitions, rep.closures):
        bp = block_order_bound(part)
        if cl.finite:
            orbit = orbit_entourage(GeneratorSet(name, tuple(cl.elements)))
            orbit_ok = orbit.pairs == part.relation().pairs
            div_ok = bp % cl.order == 0
        else:
            orbit_ok = div_ok = False
        out.append(CellularCheck(name, cl.status, cl.order, bp, orbit_ok, div_ok))
    return out


def orbit_base(rep: GSpaceRepresentation) -> CoarseBase:
    """Base of orbit entourages of the closed groups (or the generators if a closure was capped)."""
    ents = []
    for gen, cl in zip(rep.generators, rep.closures or [None] * len(rep.generators)):
        members = tuple(cl.elements) if cl is not None and cl.finite else gen.members
        ents.append((gen.name, orbit_entourage(GeneratorSet(gen.name, members))))
    return CoarseBase(rep.base.ground, tuple(ents))


def union_closure(rep: GSpaceRepresentation, cap: int = DEFAULT_CLOSURE_CAP) -> ClosureResult:
    """Capped closure of all generators of all partitions together."""
    members = tuple(p for g in rep.generators for p in g.members)
    return subgroup_closure(GeneratorSet("all", members), cap)
