"""Reading and writing the text documents used by the command line.

Documents are YAML (so plain JSON also parses). Every error carries the
line and column of the offending node.

Map document::

    ground: [1, 2, 3]
    images:
      1: [1, 2]
      2: [1, 2]
      3: [3]

Ballean document, with entourages given as pair lists (the diagonal is
always added) or with partitions given as block lists::

    points: [0, 1, 2]
    entourages:
      E1: [[0, 1], [1, 0], [1, 2], [2, 1]]

    points: [1, 2, 3, 4]
    partitions:
      P: [[1, 2, 3], [4]]

Family document, one permutation per line in one-line form (images of the
ground elements in ground order)::

    ground: [1, 2, 3]
    mode: strict
    members:
    - [1, 2, 3]
    - [2, 1, 3]
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import yaml

from .ballean import CoarseBase, Entourage
from .cellular import PartitionEntourage
from .core import GroundSet, Permutation, Selector, SetValuedMap, build_map
from .decomposition import SelectorFamily
from .errors import SelectorKitError


class DocumentError(SelectorKitError):
    def __init__(self, message, line=None, column=None, path=None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        super().__init__(self.render())

    def render(self) -> str:
        where = []
        if self.path:
            where.append(str(self.path))
        if self.line is not None:
            where.append(f"line {self.line}, column {self.column}")
        prefix = ": ".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message


def _fail(node, message):
    mark = node.start_mark if node is not None else None
    if mark is None:
        raise DocumentError(message)
    raise DocumentError(message, mark.line + 1, mark.column + 1)


class _Doc:
    """Thin wrapper that keeps YAML nodes around for positioned errors."""

    def __init__(self, text: str):
        try:
            self.loader = yaml.SafeLoader(text)
            self.root = self.loader.get_single_node()
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            raise DocumentError(
                exc.problem or str(exc),
                mark.line + 1 if mark else None,
                mark.column + 1 if mark else None,
            ) from None
        except yaml.YAMLError as exc:
            raise DocumentError(str(exc)) from None
        if self.root is None:
            raise DocumentError("empty document", 1, 1)

    def mapping(self, node, what) -> list:
        if not isinstance(node, yaml.MappingNode):
            _fail(node, f"{what} must be a mapping")
        return node.value

    def sequence(self, node, what) -> list:
        if not isinstance(node, yaml.SequenceNode):
            _fail(node, f"{what} must be a list")
        return node.value

    def scalar(self, node, what):
        if not isinstance(node, yaml.ScalarNode):
            _fail(node, f"{what} must be a scalar")
        value = self.loader.construct_object(node)
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            _fail(node, f"{what} must be an integer or a string")
        return value

    def field(self, node, key, required=True):
        for k, v in self.mapping(node, "document"):
            if isinstance(k, yaml.ScalarNode) and k.value == key:
                return v
        if required:
            _fail(node, f"missing key {key!r}")
        return None

    def keys(self, node, allowed):
        for k, _ in self.mapping(node, "document"):
            if not isinstance(k, yaml.ScalarNode) or k.value not in allowed:
                _fail(k, f"unexpected key {k.value!r}")

    def ground(self, node, what) -> GroundSet:
        items = []
        seen = set()
        for n in self.sequence(node, what):
            x = self.scalar(n, "element")
            if x in seen:
                _fail(n, f"duplicate element {x!r}")
            seen.add(x)
            items.append(x)
        return GroundSet(tuple(items))

    def element(self, node, ground):
        x = self.scalar(node, "element")
        if x not in ground:
            _fail(node, f"{x!r} is not in the ground set")
        return x


def _read(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read file: {exc.strerror}", path=path) from None


def _with_path(fn, text, path):
    try:
        return fn(text)
    except DocumentError as exc:
        exc.path = path
        exc.args = (exc.render(),)
        raise


def parse_map(text: str) -> SetValuedMap:
    d = _Doc(text)
    d.keys(d.root, {"ground", "images"})
    ground = d.ground(d.field(d.root, "ground"), "ground")
    entries = []
    seen = {}
    images_node = d.field(d.root, "images")
    for knode, vnode in d.mapping(images_node, "images"):
        x = d.element(knode, ground)
        if x in seen:
            _fail(knode, f"duplicate entry for {x!r}")
        seen[x] = knode
        img = [d.element(n, ground) for n in d.sequence(vnode, f"image of {x!r}")]
        if x not in img:
            _fail(vnode, f"{x!r} is not in its own image")
        entries.append((x, img))
    for x in ground:
        if x not in seen:
            _fail(images_node, f"no entry for {x!r}")
    return build_map(ground, entries)


def load_map(path) -> SetValuedMap:
    return _with_path(parse_map, _read(path), path)


@dataclass
class BalleanDocument:
    base: CoarseBase
    partitions: bool  # True when given as block lists


def parse_ballean(text: str) -> BalleanDocument:
    d = _Doc(text)
    d.keys(d.root, {"points", "entourages", "partitions"})
    ground = d.ground(d.field(d.root, "points"), "points")
    ents_node = d.field(d.root, "entourages", required=False)
    parts_node = d.field(d.root, "partitions", required=False)
    if (ents_node is None) == (parts_node is None):
        _fail(d.root, "give exactly one of 'entourages' or 'partitions'")
    ents = []
    names = set()
    if ents_node is not None:
        for knode, vnode in d.mapping(ents_node, "entourages"):
            name = str(d.scalar(knode, "entourage name"))
            if name in names:
                _fail(knode, f"duplicate entourage {name!r}")
            names.add(name)
            pairs = []
            for pnode in d.sequence(vnode, f"entourage {name!r}"):
                pair = d.sequence(pnode, "pair")
                if len(pair) != 2:
                    _fail(pnode, "pair must have exactly two elements")
                pairs.append((d.element(pair[0], ground), d.element(pair[1], ground)))
            ents.append((name, Entourage.from_pairs(ground, pairs, add_diagonal=True)))
    else:
        for knode, vnode in d.mapping(parts_node, "partitions"):
            name = str(d.scalar(knode, "partition name"))
            if name in names:
                _fail(knode, f"duplicate partition {name!r}")
            names.add(name)
            blocks = []
            placed = set()
            for bnode in d.sequence(vnode, f"partition {name!r}"):
                block = []
                for n in d.sequence(bnode, "block"):
                    x = d.element(n, ground)
                    if x in placed:
                        _fail(n, f"{x!r} appears in two blocks")
                    placed.add(x)
                    block.append(x)
                if not block:
                    _fail(bnode, "empty block")
                blocks.append(block)
            missing = [x for x in ground if x not in placed]
            if missing:
                _fail(vnode, f"{missing[0]!r} is in no block")
            part = PartitionEntourage.from_blocks(ground, blocks)
            ents.append((name, part.relation()))
    if not ents:
        _fail(ents_node if ents_node is not None else parts_node, "no entourages given")
    return BalleanDocument(CoarseBase(ground, tuple(ents)), parts_node is not None)


def load_ballean(path) -> BalleanDocument:
    return _with_path(parse_ballean, _read(path), path)


def parse_family(text: str) -> SelectorFamily:
    d = _Doc(text)
    d.keys(d.root, {"ground", "mode", "members", "size"})
    ground = d.ground(d.field(d.root, "ground"), "ground")
    mode_node = d.field(d.root, "mode", required=False)
    mode = "strict"
    if mode_node is not None:
        mode = d.scalar(mode_node, "mode")
        if mode not in ("strict", "relaxed"):
            _fail(mode_node, "mode must be 'strict' or 'relaxed'")
    members = []
    for mnode in d.sequence(d.field(d.root, "members"), "members"):
        line = d.sequence(mnode, "member")
        if len(line) != len(ground):
            _fail(mnode, f"member has {len(line)} images, expected {len(ground)}")
        images = [ground.index(d.element(n, ground)) for n in line]
        sel = Selector(ground, images)
        members.append(Permutation(ground, images) if sel.is_bijective() else sel)
    return SelectorFamily(tuple(members), mode)


def load_family(path) -> SelectorFamily:
    return _with_path(parse_family, _read(path), path)


def token(x) -> str:
    return json.dumps(x, ensure_ascii=True)


def flow(xs) -> str:
    return "[" + ", ".join(token(x) for x in xs) + "]"


def format_family(fam: SelectorFamily, ground: GroundSet) -> str:
    lines = [
        f"ground: {flow(ground)}",
        f"mode: {fam.mode}",
        f"size: {len(fam)}",
        "members:",
    ]
    lines += [f"- {flow(p.one_line())}" for p in fam]
    return "\n".join(lines) + "\n"


def format_map(F: SetValuedMap) -> str:
    lines = [f"ground: {flow(F.ground)}", "images:"]
    lines += [f"  {token(x)}: {flow(img)}" for x, img in F.items()]
    return "\n".join(lines) + "\n"
