"""Finite coarse spaces given by explicit bases of entourages.

On a finite connected set the coarse structure generated by any base is
just every relation containing the diagonal, so existential questions
("is there an entourage containing ...") are only meaningful against the
base itself or against bounded compositions of base members. Every check
here is phrased that way.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .core import GroundSet, _same_ground, build_map, is_symmetric
from .decomposition import decompose, degree_bounds
from .errors import InvalidBase, NotBijective, UnknownElement, ValidationError

FINITE_MODEL_NOTE = (
    "finite model: existence of entourages is checked against base members "
    "and bounded compositions only"
)


@dataclass(frozen=True)
class Entourage:
    ground: GroundSet
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for x, y in pairs:
            for z in (x, y):
                if z not in self.ground:
                    raise UnknownElement(z)
        for x in self.ground:
            if (x, x) not in pairs:
                raise ValidationError(f"entourage misses diagonal pair ({x!r}, {x!r})")

    @classmethod
    def from_pairs(cls, ground: GroundSet, pairs: Iterable, add_diagonal: bool = False) -> Entourage:
        pairs = set(map(tuple, pairs))
        if add_diagonal:
            pairs |= {(x, x) for x in ground}
        return cls(ground, frozenset(pairs))

    @classmethod
    def diagonal(cls, ground: GroundSet) -> Entourage:
        return cls(ground, frozenset((x, x) for x in ground))

    @classmethod
    def full(cls, ground: GroundSet) -> Entourage:
        return cls(ground, frozenset((x, y) for x in ground for y in ground))

    @cached_property
    def _balls(self) -> dict:
        out = {x: set() for x in self.ground}
        for x, y in self.pairs:
            out[x].add(y)
        return {x: frozenset(s) for x, s in out.items()}

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return pair in self.pairs

    def __le__(self, other: Entourage) -> bool:
        return self.pairs <= other.pairs

    def is_symmetric(self) -> bool:
        return all((y, x) in self.pairs for x, y in self.pairs)

    def sorted_pairs(self) -> list:
        idx = self.ground.index
        return sorted(self.pairs, key=lambda p: (idx(p[0]), idx(p[1])))


def ball(E: Entourage, x) -> frozenset:
    """``E[x] = {y : (x, y) in E}``."""
    if x not in E.ground:
        raise UnknownElement(x)
    return E._balls[x]


def ball_set(E: Entourage, A: Iterable) -> frozenset:
    out = set()
    for a in A:
        out |= ball(E, a)
    return frozenset(out)


def compose_ent(E: Entourage, E2: Entourage) -> Entourage:
    """``{(x, y) : (x, z) in E and (z, y) in E2 for some z}``."""
    _same_ground(E.ground, E2.ground)
    pairs = {(x, y) for x, z in E.pairs for y in E2._balls[z]}
    return Entourage(E.ground, frozenset(pairs))


def invert_ent(E: Entourage) -> Entourage:
    return Entourage(E.ground, frozenset((y, x) for x, y in E.pairs))


@dataclass(frozen=True)
class CoarseBase:
    ground: GroundSet
    entourages: tuple  # (name, Entourage) in declared order

    def __post_init__(self):
        object.__setattr__(self, "entourages", tuple(self.entourages))
        if not self.entourages:
            raise ValidationError("a base needs at least one entourage")
        names = [n for n, _ in self.entourages]
        if len(set(names)) != len(names):
            raise ValidationError("entourage names must be unique")
        for _, E in self.entourages:
            _same_ground(self.ground, E.ground)

    @property
    def names(self) -> list:
        return [n for n, _ in self.entourages]

    def __getitem__(self, name) -> Entourage:
        for n, E in self.entourages:
            if n == name:
                return E
        raise KeyError(name)

    def __iter__(self):
        return iter(self.entourages)

    def __len__(self):
        return len(self.entourages)


def _first_missing(rel: set, target: Entourage, ground: GroundSet):
    idx = ground.index
    missing = [p for p in rel if p not in target.pairs]
    return min(missing, key=lambda p: (idx(p[0]), idx(p[1]))) if missing else None


@dataclass
class BaseReport:
    diagonal: list = field(default_factory=list)  # names missing diagonal pairs
    composition: list = field(default_factory=list)  # (E, E2, witness pair)
    inverse: list = field(default_factory=list)  # (E, witness pair)
    connectivity: list = field(default_factory=list)  # uncovered (x, y)
    subset_axiom: str = "not applicable to a base"
    note: str = FINITE_MODEL_NOTE

    @property
    def ok_except_connectivity(self) -> bool:
        return not (self.diagonal or self.composition or self.inverse)

    @property
    def ok(self) -> bool:
        return self.ok_except_connectivity and not self.connectivity

    def lines(self) -> list:
        out = []
        for name in self.diagonal:
            out.append(f"diagonal: {name} misses the diagonal")
        for a, b, w in self.composition:
            out.append(f"composition: {a}∘{b} not inside any base member, e.g. {w}")
        for a, w in self.inverse:
            out.append(f"inverse: {a}^-1 not inside any base member, e.g. {w}")
        for w in self.connectivity:
            out.append(f"connectivity: {w} lies in no base member")
        return out


def validate_base(base: CoarseBase) -> BaseReport:
    """Check the coarse-structure axioms against the base members."""
    report = BaseReport()
    g = base.ground
    members = [E for _, E in base]
    # entourages carry the diagonal by construction; keep the check explicit
    for name, E in base:
        if any((x, x) not in E.pairs for x in g):
            report.diagonal.append(name)

    def witness(rel):
        # missing pair against the member that covers the most of rel
        best = max(members, key=lambda M: len(rel & M.pairs))
        return _first_missing(rel, best, g)

    for a, Ea in base:
        for b, Eb in base:
            comp = compose_ent(Ea, Eb).pairs
            if not any(comp <= M.pairs for M in members):
                report.composition.append((a, b, witness(comp)))
    for a, Ea in base:
        inv = invert_ent(Ea).pairs
        if not any(inv <= M.pairs for M in members):
            report.inverse.append((a, witness(inv)))
    for x in g:
        for y in g:
            if not any((x, y) in M.pairs for M in members):
                report.connectivity.append((x, y))
    return report


@dataclass
class MacroUniformWitness:
    assignment: dict
    failures: list = field(default_factory=list)  # (src name, x, offending y)

    @property
    def ok(self) -> bool:
        return not self.failures


def _as_function(f) -> Callable:
    if isinstance(f, Mapping):
        return f.__getitem__
    return f


def is_macro_uniform(f, src: CoarseBase, dst: CoarseBase) -> MacroUniformWitness:
    """First-fit assignment ``E -> E'`` with ``f(E[x]) ⊆ E'[f(x)]`` for all x.

    Target entourages are tried from smallest to largest. An entourage
    with no valid target is reported with a violation against the largest
    target.
    """
    fn = _as_function(f)
    images = {x: fn(x) for x in src.ground}
    for x, fx in images.items():
        if fx not in dst.ground:
            raise UnknownElement(fx, where=x)
    targets = sorted(dst.entourages, key=lambda ne: len(ne[1]))
    witness = MacroUniformWitness({})

    def violation(E, E2):
        for x in src.ground:
            allowed = ball(E2, images[x])
            for y in src.ground.ordered(ball(E, x)):
                if images[y] not in allowed:
                    return x, y
        return None

    for name, E in src:
        for tname, E2 in targets:
            if violation(E, E2) is None:
                witness.assignment[name] = tname
                break
        else:
            x, y = violation(E, targets[-1][1])
            witness.failures.append((name, x, y))
    return witness


@dataclass
class AsymorphismResult:
    ok: bool
    forward: MacroUniformWitness
    backward: MacroUniformWitness

    def __bool__(self):
        return self.ok


def is_asymorphism(f, src: CoarseBase, dst: CoarseBase) -> AsymorphismResult:
    fn = _as_function(f)
    forward_map = {x: fn(x) for x in src.ground}
    if len(set(forward_map.values())) != len(forward_map) or set(forward_map.values()) != set(dst.ground):
        raise NotBijective("map is not a bijection between the ground sets")
    back = {y: x for x, y in forward_map.items()}
    fw = is_macro_uniform(forward_map, src, dst)
    bw = is_macro_uniform(back, dst, src)
    return AsymorphismResult(fw.ok and bw.ok, fw, bw)


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValidationError("generator set is empty")
        g = members[0].ground
        for p in members:
            _same_ground(g, p.ground)
        if not any(p.is_identity() for p in members):
            raise ValidationError(f"generator set {self.name!r} lacks the identity")

    @property
    def ground(self) -> GroundSet:
        return self.members[0].ground

    def __len__(self):
        return len(self.members)


def orbit_entourage(g: GeneratorSet) -> Entourage:
    """``{(x, p(x)) : p in g, x in X}``."""
    els = g.ground.elements
    pairs = {(els[i], els[j]) for p in g.members for i, j in enumerate(p.images)}
    return Entourage(g.ground, frozenset(pairs))


@dataclass
class GSpaceRepresentation:
    base: CoarseBase
    generators: tuple  # GeneratorSet per base entourage, same order
    ideal_base: tuple
    symmetrized: tuple = ()  # names decomposed after E -> E ∪ E^-1
    closures: tuple = ()  # per-generator ClosureResult (cellular only)
    notes: tuple = (FINITE_MODEL_NOTE,)

    def expected(self, name) -> Entourage:
        E = self.base[name]
        if name in self.symmetrized:
            return Entourage(E.ground, E.pairs | invert_ent(E).pairs)
        return E

    def orbit_checks(self) -> list:
        """``(name, orbit == expected)`` per base entourage."""
        out = []
        for (name, _), gen in zip(self.base, self.generators):
            out.append((name, orbit_entourage(gen).pairs == self.expected(name).pairs))
        return out


def _entourage_map(E: Entourage):
    return build_map(E.ground, [(x, ball(E, x)) for x in E.ground])


def represent(base: CoarseBase, mode: str = "relaxed", workers: int = 1) -> GSpaceRepresentation:
    """Permutation families whose orbit entourages reproduce the base.

    Each entourage E becomes the map ``x -> E[x]`` and is decomposed.
    Symmetric entourages are decomposed strictly; in relaxed mode the
    others are symmetrized first and listed in ``symmetrized``. Strict
    mode refuses non-symmetric entourages with NotSymmetric.
    """
    report = validate_base(base)
    if not report.ok:
        raise InvalidBase(report)

    def one(item):
        name, E = item
        F = _entourage_map(E)
        if is_symmetric(F):
            fam = decompose(F, "strict")
        elif mode == "relaxed":
            fam = decompose(F, "relaxed")
        else:
            fam = decompose(F, "strict")  # raises NotSymmetric
        return GeneratorSet(name, fam.members), not is_symmetric(F)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, base.entourages))
    else:
        results = [one(item) for item in base.entourages]
    gens = tuple(g for g, _ in results)
    symm = tuple(g.name for g, s in results if s)
    return GSpaceRepresentation(base, gens, gens, symm)


def generator_bound(E: Entourage) -> int:
    """``m**2 * M`` for the (symmetrized) ball map of E."""
    F = _entourage_map(Entourage(E.ground, E.pairs | invert_ent(E).pairs))
    return degree_bounds(F).size_bound


@dataclass
class IdealEntry:
    label: str
    size: int | None
    dominated_by: str | None
    witness: tuple | None = None  # pair outside every candidate


@dataclass
class IdealReport:
    depth: int
    candidates: int
    entries: list = field(default_factory=list)
    note: str = FINITE_MODEL_NOTE

    @property
    def undominated(self) -> list:
        return [e for e in self.entries if e.dominated_by is None]

    @property
    def ok(self) -> bool:
        return not self.undominated


def _composition_candidates(base: CoarseBase, depth: int) -> list:
    """``(label, pairs)`` for every composition of at most ``depth`` members.

    The empty composition is the diagonal.
    """
    diag = Entourage.diagonal(base.ground)
    seen = {diag.pairs: "Δ"}
    level = [("Δ", diag)]
    for _ in range(depth):
        nxt = []
        for label, R in level:
            for name, E in base:
                C = compose_ent(R, E)
                if C.pairs not in seen:
                    new_label = name if label == "Δ" else f"{label}∘{name}"
                    seen[C.pairs] = new_label
                    nxt.append((new_label, C))
        if not nxt:
            break
        level = nxt
    return [(label, pairs) for pairs, label in seen.items()]


PRODUCT_ENUMERATION_LIMIT = 10**6


def _product_orbit(A: GeneratorSet, B: GeneratorSet):
    """Size of ``A·B^-1`` and its orbit pairs.

    Enumerated explicitly up to PRODUCT_ENUMERATION_LIMIT candidate
    products. Past that, the size is reported as None and the orbit is
    taken from ``orbit(B)^-1 ∘ orbit(A)``, which is equal because p and q
    range independently.
    """
    if len(A) * len(B) > PRODUCT_ENUMERATION_LIMIT:
        rel = compose_ent(invert_ent(orbit_entourage(B)), orbit_entourage(A))
        return None, rel.pairs
    n = len(A.ground)
    inverses = []
    for q in B.members:
        inv = [0] * n
        for i, j in enumerate(q.images):
            inv[j] = i
        inverses.append(inv)
    products = {tuple(p.images[qi[x]] for x in range(n)) for p in A.members for qi in inverses}
    els = A.ground.elements
    pairs = {(els[i], els[j]) for prod in products for i, j in enumerate(prod)}
    return len(products), frozenset(pairs)


def ideal_closure_check(rep: GSpaceRepresentation, depth: int = 2) -> IdealReport:
    """Check that recorded generator sets and their products ``A·B^-1`` stay bounded.

    Each set's orbit entourage must lie inside a composition of at most
    ``depth`` base entourages. Entries with no such dominator carry a pair
    that escapes every candidate.
    """
    cands = _composition_candidates(rep.base, depth)
    cands.sort(key=lambda c: len(c[1]))
    report = IdealReport(depth, len(cands))
    g = rep.base.ground

    def record(label, size, pairs):
        for clabel, cp in cands:
            if pairs <= cp:
                report.entries.append(IdealEntry(label, size, clabel))
                return
        biggest = cands[-1][1]
        w = _first_missing(set(pairs), Entourage(g, biggest), g)
        report.entries.append(IdealEntry(label, size, None, w))

    sets = list(rep.ideal_base)
    for A in sets:
        record(A.name, len(A), orbit_entourage(A).pairs)
    for A in sets:
        for B in sets:
            size, pairs = _product_orbit(A, B)
            record(f"{A.name}·{B.name}^-1", size, pairs)
    return report
