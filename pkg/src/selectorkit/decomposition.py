"""Decomposition of a set-valued map into bijective selectors.

The construction colors the conflict graph on X (x ~ y when F(x) and F(y)
meet) greedily, so that inside one color class the images are pairwise
disjoint. For each class and each index j, the product of transpositions
``(x, x_j)`` over the class is a well defined involution, where
``x_0 = x, x_1, ...`` enumerates F(x) in ground order. Taking all of them
realizes every F(x) as an orbit of x, as long as F is symmetric.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

from .core import (
    GroundSet,
    Permutation,
    SetValuedMap,
    _same_ground,
    components,
    degree_bounds,
    restrict,
    symmetrize,
    symmetry_witness,
)
from .errors import CapExceeded, NotSymmetric

Mode = Literal["strict", "relaxed"]

DEFAULT_ENUMERATION_CAP = 8
DEFAULT_COVER_CAP = 6


@dataclass(frozen=True)
class SelectorFamily:
    """Ordered family of selectors tagged with the mode that produced it."""

    members: tuple
    mode: str = "strict"

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def source(self, F: SetValuedMap) -> SetValuedMap:
        """The map whose selectors the members are supposed to be."""
        return F if self.mode == "strict" else symmetrize(F)


@dataclass(frozen=True)
class ConflictGraph:
    vertices: GroundSet
    adjacency: tuple  # adjacency[i] = sorted neighbor indices

    def neighbors(self, x) -> tuple:
        els = self.vertices.elements
        return tuple(els[j] for j in self.adjacency[self.vertices.index(x)])

    def degree(self, x) -> int:
        return len(self.adjacency[self.vertices.index(x)])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edges(self) -> set:
        els = self.vertices.elements
        return {
            (els[i], els[j])
            for i, nb in enumerate(self.adjacency)
            for j in nb
            if i < j
        }


@dataclass(frozen=True)
class VertexColoring:
    colors: tuple  # colors[i] for ground index i

    @property
    def color_count(self) -> int:
        return max(self.colors, default=-1) + 1

    def classes(self) -> list:
        out = [[] for _ in range(self.color_count)]
        for i, c in enumerate(self.colors):
            out[c].append(i)
        return out


def conflict_graph(F: SetValuedMap) -> ConflictGraph:
    # points sharing some y are exactly the preimages of y
    holders = [[] for _ in F.rows]
    for i, row in enumerate(F.rows):
        for j in row:
            holders[j].append(i)
    adjacency = []
    for i, row in enumerate(F.rows):
        nb = {k for j in row for k in holders[j]}
        nb.discard(i)
        adjacency.append(tuple(sorted(nb)))
    return ConflictGraph(F.ground, tuple(adjacency))


def greedy_color(g: ConflictGraph) -> VertexColoring:
    """First-fit coloring scanning vertices in ground order."""
    colors = [-1] * len(g.adjacency)
    for i, nb in enumerate(g.adjacency):
        used = {colors[j] for j in nb if colors[j] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    return VertexColoring(tuple(colors))


def _layers(F: SetValuedMap) -> dict:
    """Map ``(color, j)`` to the list of ground-index transpositions ``(x, x_j)``.

    Padding entries (``j >= |F(x)|``) contribute the trivial swap and are
    left out. ``j == 0`` is always trivial and is never stored.
    """
    coloring = greedy_color(conflict_graph(F))
    layers: dict = {}
    for i, row in enumerate(F.rows):
        c = coloring.colors[i]
        others = [j for j in row if j != i]
        for k, j in enumerate(others, start=1):
            layers.setdefault((c, k), []).append((i, j))
    return layers


def _layers_to_family(ground: GroundSet, layers: dict, mode: str) -> SelectorFamily:
    n = len(ground)
    perms = {tuple(range(n))}
    for swaps in layers.values():
        img = list(range(n))
        for a, b in swaps:
            img[a], img[b] = b, a
        perms.add(tuple(img))
    members = tuple(Permutation(ground, p) for p in sorted(perms))
    return SelectorFamily(members, mode)


def _prepare(F: SetValuedMap, mode: str) -> SetValuedMap:
    if mode == "strict":
        w = symmetry_witness(F)
        if w is not None:
            raise NotSymmetric(w)
        return F
    if mode == "relaxed":
        return symmetrize(F)
    raise ValueError(f"unknown mode {mode!r}")


def decompose(F: SetValuedMap, mode: Mode = "strict", workers: int = 1) -> SelectorFamily:
    """Family of bijective selectors whose orbits are the images of F.

    In strict mode F must be symmetric (NotSymmetric otherwise). In relaxed
    mode the symmetrization of F is decomposed instead. Members are
    deduplicated, sorted by one-line form, and start with the identity.

    ``workers > 1`` decomposes the components of F concurrently; the result
    is identical to the sequential one.
    """
    S = _prepare(F, mode)
    if workers > 1:
        return _decompose_blocks(S, mode, workers)
    return _layers_to_family(S.ground, _layers(S), mode)


def _decompose_blocks(S: SetValuedMap, mode: str, workers: int) -> SelectorFamily:
    blocks = components(S).blocks
    subs = [restrict(S, b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partial = list(pool.map(_layers, subs))
    # greedy coloring never looks across components, so local colors agree
    # with global ones and the layers can be merged key by key
    merged: dict = {}
    for sub, layers in zip(subs, partial):
        lift = [S.ground.index(x) for x in sub.ground]
        for key in sorted(layers):
            merged.setdefault(key, []).extend((lift[a], lift[b]) for a, b in layers[key])
    return _layers_to_family(S.ground, merged, mode)


def decompose_by_components(F: SetValuedMap, mode: Mode = "strict", workers: int = 2) -> SelectorFamily:
    """Block-parallel decomposition, always going through the component split."""
    return _decompose_blocks(_prepare(F, mode), mode, max(1, workers))


@dataclass
class VerificationReport:
    bijective_ok: bool
    selector_ok: bool
    coverage_ok: bool
    size_bound_ok: bool
    size: int
    bound: int
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijective_ok and self.selector_ok and self.coverage_ok and self.size_bound_ok


def verify_family(F: SetValuedMap, fam) -> VerificationReport:
    """Exhaustively check a family against F.

    ``fam`` is a :class:`SelectorFamily` (its mode picks F or its
    symmetrization as the reference map) or a plain sequence of selectors,
    which is checked in strict mode. Every violation is recorded as a
    witness dict.
    """
    if not isinstance(fam, SelectorFamily):
        fam = SelectorFamily(tuple(fam), "strict")
    src = fam.source(F)
    for f in fam:
        _same_ground(f.ground, F.ground)
    els = F.ground.elements
    witnesses = []
    bijective_ok = selector_ok = coverage_ok = True

    for k, f in enumerate(fam):
        if not f.is_bijective():
            bijective_ok = False
            witnesses.append({"kind": "not_bijective", "member": k})
    row_sets = [set(r) for r in src.rows]
    reached = [set() for _ in src.rows]
    for k, f in enumerate(fam):
        for i, j in enumerate(f.images):
            reached[i].add(j)
            if j not in row_sets[i]:
                selector_ok = False
                witnesses.append({"kind": "not_selector", "member": k, "x": els[i], "fx": els[j]})
    for i, row in enumerate(src.rows):
        for j in row:
            if j not in reached[i]:
                coverage_ok = False
                witnesses.append({"kind": "missing", "x": els[i], "y": els[j]})
        # extras are already reported as selector violations
    bound = degree_bounds(src).size_bound
    size_ok = len(fam) <= bound
    if not size_ok:
        witnesses.append({"kind": "size", "size": len(fam), "bound": bound})
    return VerificationReport(bijective_ok, selector_ok, coverage_ok, size_ok, len(fam), bound, witnesses)


def enumerate_bijective_selectors(F: SetValuedMap, cap: int = DEFAULT_ENUMERATION_CAP) -> list:
    """Every permutation p with p(x) in F(x), by backtracking in ground order."""
    n = len(F.ground)
    if n > cap:
        raise CapExceeded(n, cap)
    out = []
    img = [0] * n
    used = [False] * n

    def extend(i):
        if i == n:
            out.append(Permutation(F.ground, img))
            return
        for j in F.rows[i]:
            if not used[j]:
                used[j] = True
                img[i] = j
                extend(i + 1)
                used[j] = False

    extend(0)
    out.sort()
    return out


@dataclass(frozen=True)
class Infeasible:
    """Some pair ``(x, y)`` of F lies on no bijective selector."""

    witness: tuple


@dataclass(frozen=True)
class MinimalFamily:
    size: int
    family: SelectorFamily


def min_family_oracle(F: SetValuedMap, cap: int = DEFAULT_COVER_CAP):
    """Exact minimum number of bijective selectors covering F pointwise.

    Returns :class:`MinimalFamily` or :class:`Infeasible`. Exact set cover
    over :func:`enumerate_bijective_selectors`, searched by increasing size.
    """
    n = len(F.ground)
    if n > cap:
        raise CapExceeded(n, cap)
    sels = enumerate_bijective_selectors(F, cap=max(cap, n))
    els = F.ground.elements
    # pair (i, j) -> bit
    bit = {}
    for i, row in enumerate(F.rows):
        for j in row:
            bit[(i, j)] = 1 << len(bit)
    masks = [sum(bit[(i, j)] for i, j in enumerate(p.images)) for p in sels]
    covered_any = 0
    for m in masks:
        covered_any |= m
    for (i, j), b in bit.items():
        if not covered_any & b:
            return Infeasible((els[i], els[j]))

    row_bits = [sum(bit[(i, j)] for j in row) for i, row in enumerate(F.rows)]
    pair_list = sorted(bit.items(), key=lambda kv: kv[1])
    covering = {b: [k for k, m in enumerate(masks) if m & b] for _, b in pair_list}
    full = (1 << len(bit)) - 1

    def lower(uncovered):
        # each selector covers one pair per row
        return max(bin(uncovered & rb).count("1") for rb in row_bits)

    def search(uncovered, budget, chosen):
        if not uncovered:
            return list(chosen)
        if lower(uncovered) > budget:
            return None
        # branch on the uncovered pair with fewest covering selectors
        best = None
        for _, b in pair_list:
            if uncovered & b:
                if best is None or len(covering[b]) < len(covering[best]):
                    best = b
        for k in covering[best]:
            chosen.append(k)
            got = search(uncovered & ~masks[k], budget - 1, chosen)
            chosen.pop()
            if got is not None:
                return got
        return None

    k = lower(full)
    while True:
        got = search(full, k, [])
        if got is not None:
            members = tuple(sorted(sels[i] for i in got))
            return MinimalFamily(k, SelectorFamily(members, "strict"))
        k += 1

