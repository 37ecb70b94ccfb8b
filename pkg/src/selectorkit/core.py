"""Ground sets, set-valued maps and permutations.

Everything here is immutable. Internally maps and permutations are stored
as tuples of ground indices so that iteration order always follows the
stored ground order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateEntry,
    GroundMismatch,
    MissingEntry,
    MissingReflexive,
    NotBijective,
    UnknownElement,
    ValidationError,
)


@dataclass(frozen=True)
class GroundSet:
    """Finite ordered set of distinct hashable tokens."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if len(set(elements)) != len(elements):
            seen = set()
            for e in elements:
                if e in seen:
                    raise ValidationError(f"duplicate ground element {e!r}")
                seen.add(e)

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(x) from None

    def sub(self, members: Iterable) -> GroundSet:
        """Subset of this ground set, kept in ground order."""
        idx = sorted(self.index(x) for x in set(members))
        return GroundSet(tuple(self.elements[i] for i in idx))

    def ordered(self, members: Iterable) -> tuple:
        return tuple(self.elements[i] for i in sorted(self.index(x) for x in set(members)))


def _same_ground(a: GroundSet, b: GroundSet):
    if a is not b and a != b:
        raise GroundMismatch()


@dataclass(frozen=True)
class SetValuedMap:
    """Reflexive set-valued map ``x -> F(x)`` on a finite ground set.

    ``rows[i]`` holds the sorted ground indices of ``F(ground.elements[i])``.
    Use :func:`build_map` to construct one from element-level entries.
    """

    ground: GroundSet
    rows: tuple

    def __post_init__(self):
        n = len(self.ground)
        if len(self.rows) != n:
            raise ValidationError("one row per ground element required")
        for i, row in enumerate(self.rows):
            if i not in row:
                raise MissingReflexive(self.ground.elements[i])
            if any(j < 0 or j >= n for j in row):
                raise ValidationError(f"row {i} has out-of-range indices")

    def __call__(self, x) -> frozenset:
        return self.image(x)

    def image(self, x) -> frozenset:
        els = self.ground.elements
        return frozenset(els[j] for j in self.rows[self.ground.index(x)])

    def ordered_image(self, x) -> tuple:
        els = self.ground.elements
        return tuple(els[j] for j in self.rows[self.ground.index(x)])

    def items(self):
        els = self.ground.elements
        for i, row in enumerate(self.rows):
            yield els[i], tuple(els[j] for j in row)

    def pairs(self) -> set:
        """All ``(x, y)`` with ``y`` in ``F(x)``."""
        return {(x, y) for x, img in self.items() for y in img}

    def to_dict(self) -> dict:
        return {x: set(img) for x, img in self.items()}

    @classmethod
    def from_dict(cls, images: Mapping, ground: Iterable | None = None) -> SetValuedMap:
        g = GroundSet(tuple(images) if ground is None else tuple(ground))
        return build_map(g, list(images.items()))


def build_map(ground: GroundSet, entries: Iterable) -> SetValuedMap:
    """Validate ``(x, subset)`` entries into a :class:`SetValuedMap`.

    Raises DuplicateEntry, UnknownElement, MissingReflexive or MissingEntry.
    """
    rows: list = [None] * len(ground)
    for x, subset in entries:
        if x not in ground:
            raise UnknownElement(x)
        i = ground.index(x)
        if rows[i] is not None:
            raise DuplicateEntry(x)
        idx = set()
        for y in subset:
            if y not in ground:
                raise UnknownElement(y, where=x)
            idx.add(ground.index(y))
        if i not in idx:
            raise MissingReflexive(x)
        rows[i] = tuple(sorted(idx))
    for i, row in enumerate(rows):
        if row is None:
            raise MissingEntry(ground.elements[i])
    return SetValuedMap(ground, tuple(rows))


def _from_index_sets(ground: GroundSet, sets) -> SetValuedMap:
    return SetValuedMap(ground, tuple(tuple(sorted(s)) for s in sets))


def inverse_map(F: SetValuedMap) -> SetValuedMap:
    """``F^-1(x) = {y : x in F(y)}``; reflexive because F is."""
    inv = [set() for _ in F.rows]
    for i, row in enumerate(F.rows):
        for j in row:
            inv[j].add(i)
    return _from_index_sets(F.ground, inv)


@dataclass(frozen=True)
class DegreeBounds:
    max_image: int
    max_preimage: int

    @property
    def m(self) -> int:
        return max(self.max_image, self.max_preimage) + 1

    @property
    def size_bound(self) -> int:
        """``m**2 * M`` with ``M = max_image``."""
        return self.m ** 2 * self.max_image


def degree_bounds(F: SetValuedMap) -> DegreeBounds:
    pre = [0] * len(F.rows)
    for row in F.rows:
        for j in row:
            pre[j] += 1
    return DegreeBounds(
        max_image=max((len(r) for r in F.rows), default=0),
        max_preimage=max(pre, default=0),
    )


def symmetry_witness(F: SetValuedMap):
    """First ``(x, y)`` in ground order with ``y in F(x)`` but ``x not in F(y)``."""
    row_sets = [set(r) for r in F.rows]
    els = F.ground.elements
    for i, row in enumerate(F.rows):
        for j in row:
            if i not in row_sets[j]:
                return els[i], els[j]
    return None


def is_symmetric(F: SetValuedMap) -> bool:
    return symmetry_witness(F) is None


def symmetrize(F: SetValuedMap) -> SetValuedMap:
    """Pointwise ``F(x) | F^-1(x)``."""
    inv = inverse_map(F)
    return _from_index_sets(F.ground, [set(a) | set(b) for a, b in zip(F.rows, inv.rows)])


@dataclass(frozen=True)
class ComponentPartition:
    ground: GroundSet
    blocks: tuple  # tuples of elements, each in ground order

    def block_of(self, x) -> tuple:
        for b in self.blocks:
            if x in b:
                return b
        raise ValueError(x)


def components(F: SetValuedMap) -> ComponentPartition:
    """Minimal subsets closed under both F and F^-1.

    Each block is grown from its least element by alternately applying
    F and F^-1 until nothing new appears.
    """
    inv = inverse_map(F)
    seen = [False] * len(F.rows)
    blocks = []
    for start in range(len(F.rows)):
        if seen[start]:
            continue
        block = {start}
        frontier = {start}
        use_forward = True
        stalled = 0
        while stalled < 2:
            rows = F.rows if use_forward else inv.rows
            grown = {j for i in frontier for j in rows[i]} - block
            if grown:
                block |= grown
                frontier = block
                stalled = 0
            else:
                stalled += 1
            use_forward = not use_forward
        for i in block:
            seen[i] = True
        blocks.append(tuple(F.ground.elements[i] for i in sorted(block)))
    return ComponentPartition(F.ground, tuple(blocks))


def restrict(F: SetValuedMap, block: Iterable) -> SetValuedMap:
    """Restriction of F to a block that is closed under F."""
    sub = F.ground.sub(block)
    entries = []
    for x in sub:
        img = F.ordered_image(x)
        entries.append((x, img))
    return build_map(sub, entries)


class Selector:
    """Total map from a ground set to itself, stored in one-line form.

    ``images[i]`` is the ground index of the image of ``ground.elements[i]``.
    """

    __slots__ = ("ground", "images", "__weakref__")

    def __init__(self, ground: GroundSet, images: Sequence[int]):
        self.ground = ground
        self.images = tuple(images)
        n = len(ground)
        if len(self.images) != n or any(not (0 <= j < n) for j in self.images):
            raise ValidationError("selector must map every ground element into the ground set")

    @classmethod
    def from_mapping(cls, ground: GroundSet, mapping: Mapping):
        missing = [x for x in ground if x not in mapping]
        if missing:
            raise MissingEntry(missing[0])
        return cls(ground, [ground.index(mapping[x]) for x in ground])

    def __call__(self, x):
        return self.ground.elements[self.images[self.ground.index(x)]]

    def one_line(self) -> list:
        els = self.ground.elements
        return [els[j] for j in self.images]

    def is_bijective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def __eq__(self, other):
        if not isinstance(other, Selector):
            return NotImplemented
        return self.images == other.images and self.ground == other.ground

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        return f"{type(self).__name__}({self.one_line()!r})"


class Permutation(Selector):
    """Bijective selector."""

    __slots__ = ()

    def __init__(self, ground: GroundSet, images: Sequence[int]):
        super().__init__(ground, images)
        if not self.is_bijective():
            raise NotBijective()

    @classmethod
    def identity(cls, ground: GroundSet) -> Permutation:
        return cls(ground, range(len(ground)))

    @classmethod
    def from_transpositions(cls, ground: GroundSet, pairs: Iterable) -> Permutation:
        """Product of transpositions with pairwise disjoint supports."""
        img = list(range(len(ground)))
        for a, b in pairs:
            i, j = ground.index(a), ground.index(b)
            img[i], img[j] = img[j], img[i]
        return cls(ground, img)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def is_involution(self) -> bool:
        im = self.images
        return all(im[im[i]] == i for i in range(len(im)))

    def support(self) -> tuple:
        els = self.ground.elements
        return tuple(els[i] for i, j in enumerate(self.images) if i != j)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``compose(p, q)(x) == p(q(x))``."""
    _same_ground(p.ground, q.ground)
    pi = p.images
    return Permutation(p.ground, [pi[j] for j in q.images])


def invert(p: Permutation) -> Permutation:
    inv = [0] * len(p.images)
    for i, j in enumerate(p.images):
        inv[j] = i
    return Permutation(p.ground, inv)


def apply(p: Selector, x):
    return p(x)


def transposition(ground: GroundSet, a, b) -> Permutation:
    return Permutation.from_transpositions(ground, [(a, b)])
