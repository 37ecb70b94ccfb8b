"""Brute-force oracles and random instance generators for the test suite.

Nothing here calls into the code paths it is used to check.
"""

import itertools
import random

from selectorkit import GroundSet, build_map


def random_symmetric_map(rng, n, max_degree, elements=None):
    """Reflexive symmetric map with |F(x)| <= max_degree for all x."""
    els = list(range(n)) if elements is None else list(elements)
    nbrs = {x: {x} for x in els}
    order = [(a, b) for i, a in enumerate(els) for b in els[i + 1:]]
    rng.shuffle(order)
    target = rng.randint(0, n * (max_degree - 1) // 2)
    for a, b in order:
        if target <= 0:
            break
        if len(nbrs[a]) < max_degree and len(nbrs[b]) < max_degree:
            nbrs[a].add(b)
            nbrs[b].add(a)
            target -= 1
    return build_map(GroundSet(tuple(els)), [(x, nbrs[x]) for x in els])


def random_map(rng, n, max_degree):
    """Reflexive map, not necessarily symmetric."""
    els = list(range(n))
    entries = []
    for x in els:
        k = rng.randint(1, min(max_degree, n))
        img = {x} | set(rng.sample(els, k - 1))
        entries.append((x, img))
    return build_map(GroundSet(tuple(els)), entries)


def all_symmetric_maps(n):
    """Every reflexive symmetric map on range(n), i.e. every simple graph plus loops."""
    edges = list(itertools.combinations(range(n), 2))
    g = GroundSet(tuple(range(n)))
    for mask in range(1 << len(edges)):
        nbrs = {x: {x} for x in range(n)}
        for k, (a, b) in enumerate(edges):
            if mask >> k & 1:
                nbrs[a].add(b)
                nbrs[b].add(a)
        yield build_map(g, [(x, nbrs[x]) for x in range(n)])


def naive_degrees(F):
    """(max |F(x)|, max |F^-1(x)|) by a direct double loop."""
    els = list(F.ground)
    img = {x: F.image(x) for x in els}
    max_image = max(len(img[x]) for x in els)
    max_pre = max(sum(1 for y in els if x in img[y]) for x in els)
    return max_image, max_pre


def union_find_components(F):
    parent = {x: x for x in F.ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in F.ground:
        for y in F.image(x):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    groups = {}
    for x in F.ground:
        groups.setdefault(find(x), set()).add(x)
    return {frozenset(s) for s in groups.values()}


def brute_chromatic_number(vertices, edges):
    vertices = list(vertices)
    for k in range(1, len(vertices) + 1):
        for colors in itertools.product(range(k), repeat=len(vertices)):
            c = dict(zip(vertices, colors))
            if all(c[a] != c[b] for a, b in edges):
                return k
    return 0


def brute_bijective_selectors(F):
    """All permutations (as one-line tuples) that are selectors, via itertools."""
    els = list(F.ground)
    img = {x: F.image(x) for x in els}
    out = []
    for perm in itertools.permutations(els):
        if all(perm[i] in img[x] for i, x in enumerate(els)):
            out.append(perm)
    return out


def brute_min_cover(F):
    """Smallest number of bijective selectors covering every pair, or None."""
    els = list(F.ground)
    sels = brute_bijective_selectors(F)
    pairs = F.pairs()
    covers = [frozenset(zip(els, p)) for p in sels]
    reachable = frozenset().union(*covers) if covers else frozenset()
    if not pairs <= reachable:
        return None
    for k in range(1, len(sels) + 1):
        for combo in itertools.combinations(covers, k):
            if pairs <= frozenset().union(*combo):
                return k
    return None


def brute_compose(R, S, points):
    """Composition of pair sets, straight from the definition."""
    return {
        (x, y)
        for x in points
        for y in points
        if any((x, z) in R and (z, y) in S for z in points)
    }


def line_pairs(r, n=10):
    return {(x, y) for x in range(n) for y in range(n) if abs(x - y) <= r}


def set_partitions(items):
    """Every set partition of ``items`` as a list of lists."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def integer_partitions(n, max_part):
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in integer_partitions(n - k, k):
            yield (k,) + rest


def rng(seed=0):
    return random.Random(seed)
