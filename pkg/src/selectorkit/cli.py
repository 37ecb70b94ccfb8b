"""Command line front end.

Exit codes: 0 success, 1 check failure, 2 parse or validation error,
3 non-symmetric map in strict mode, 4 base axiom failure, 5 oracle cap
exceeded.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .ballean import ideal_closure_check, represent, validate_base
from .cellular import (
    DEFAULT_CLOSURE_CAP,
    cellular_checks,
    represent_cellular,
    union_closure,
)
from .core import degree_bounds
from .decomposition import (
    DEFAULT_COVER_CAP,
    DEFAULT_ENUMERATION_CAP,
    Infeasible,
    decompose,
    enumerate_bijective_selectors,
    min_family_oracle,
    verify_family,
)
from .documents import (
    DocumentError,
    flow,
    format_family,
    load_ballean,
    load_family,
    load_map,
    token,
)
from .errors import CapExceeded, GroundMismatch, NotEquivalence, NotSymmetric, ValidationError

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_NOT_SYMMETRIC = 3
EXIT_BASE = 4
EXIT_CAP = 5


def _value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return json.dumps(list(v), separators=(",", ":"))
    if v is None:
        return "none"
    return str(v)


class Out:
    """Collects report lines in text or machine (sorted key=value) form."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def record(self, text: str, **fields):
        if self.fmt == "machine":
            click.echo(" ".join(f"{k}={_value(fields[k])}" for k in sorted(fields)))
        else:
            click.echo(text)


def _flag(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def _pair(p) -> str:
    return "(" + ", ".join(token(x) for x in p) + ")"


def _parse_error(exc, out: Out):
    if out.fmt == "machine":
        out.record("", command="error", kind="parse", message=json.dumps(str(exc)))
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_PARSE)


format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "machine"]), default="text", show_default=True
)


@click.group()
@click.version_option(__version__, prog_name="selectorkit")
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    envvar="SELECTORKIT_WORKERS",
    help="Worker threads for block-parallel work; output does not depend on it.",
)
@click.pass_context
def main(ctx, workers):
    """Decompose set-valued maps into bijective selectors and represent finite balleans."""
    ctx.obj = {"workers": workers}


@main.command("decompose")
@click.argument("map_path", metavar="MAP")
@click.option("--mode", type=click.Choice(["strict", "relaxed"]), default="relaxed", show_default=True)
@click.option("--output", "-o", "output", type=click.Path(dir_okay=False), help="Write the family here.")
@format_option
@click.pass_context
def decompose_cmd(ctx, map_path, mode, output, fmt):
    """Decompose MAP into a family of bijective selectors."""
    out = Out(fmt)
    try:
        F = load_map(map_path)
    except (DocumentError, ValidationError) as exc:
        _parse_error(exc, out)
    try:
        fam = decompose(F, mode, workers=ctx.obj["workers"])
    except NotSymmetric as exc:
        x, y = exc.pair
        out.record(
            f"not symmetric: {token(y)} in F({token(x)}) but {token(x)} not in F({token(y)})",
            command="decompose", error="not_symmetric", x=token(x), y=token(y),
        )
        sys.exit(EXIT_NOT_SYMMETRIC)
    report = verify_family(F, fam)
    src = fam.source(F)
    b = degree_bounds(src)
    out.record(
        f"decompose: mode={mode} points={len(F.ground)}\n"
        f"family size: {len(fam)}\n"
        f"bound m^2*M: {b.size_bound} (m={b.m}, M={b.max_image})\n"
        f"verification: bijective={_flag(report.bijective_ok)} selector={_flag(report.selector_ok)} "
        f"coverage={_flag(report.coverage_ok)} size_bound={_flag(report.size_bound_ok)}",
        command="decompose", mode=mode, points=len(F.ground), size=len(fam),
        bound=b.size_bound, m=b.m, max_image=b.max_image,
        bijective_ok=report.bijective_ok, selector_ok=report.selector_ok,
        coverage_ok=report.coverage_ok, size_bound_ok=report.size_bound_ok,
    )
    doc = format_family(fam, F.ground)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(doc)
    elif fmt == "machine":
        for k, p in enumerate(fam):
            out.record("", record="member", index=k, images=p.one_line())
    else:
        click.echo("")
        click.echo(doc, nl=False)
    sys.exit(EXIT_OK if report.ok else EXIT_CHECK)


def _witness_text(w) -> str:
    kind = w["kind"]
    if kind == "missing":
        return f"coverage: {token(w['y'])} in F({token(w['x'])}) is reached by no member"
    if kind == "not_selector":
        return f"selector: member {w['member']} sends {token(w['x'])} to {token(w['fx'])}, outside F({token(w['x'])})"
    if kind == "not_bijective":
        return f"bijective: member {w['member']} is not a permutation"
    return f"size: {w['size']} members exceed the bound {w['bound']}"


@main.command("verify")
@click.argument("map_path", metavar="MAP")
@click.argument("family_path", metavar="FAMILY")
@format_option
def verify_cmd(map_path, family_path, fmt):
    """Check that FAMILY is a selector decomposition of MAP."""
    out = Out(fmt)
    try:
        F = load_map(map_path)
        fam = load_family(family_path)
    except (DocumentError, ValidationError) as exc:
        _parse_error(exc, out)
    try:
        report = verify_family(F, fam)
    except GroundMismatch:
        _parse_error(DocumentError("family and map have different ground sets", path=family_path), out)
    out.record(
        f"verify: mode={fam.mode} size={report.size} bound={report.bound}\n"
        f"bijective={_flag(report.bijective_ok)} selector={_flag(report.selector_ok)} "
        f"coverage={_flag(report.coverage_ok)} size_bound={_flag(report.size_bound_ok)}",
        command="verify", mode=fam.mode, size=report.size, bound=report.bound,
        bijective_ok=report.bijective_ok, selector_ok=report.selector_ok,
        coverage_ok=report.coverage_ok, size_bound_ok=report.size_bound_ok,
        witnesses=len(report.witnesses),
    )
    for w in report.witnesses:
        fields = {k: token(v) if k in ("x", "y", "fx") else v for k, v in w.items()}
        out.record(_witness_text(w), record="witness", **fields)
    sys.exit(EXIT_OK if report.ok else EXIT_CHECK)


@main.command("represent")
@click.argument("ballean_path", metavar="BALLEAN")
@click.option("--cellular", is_flag=True, help="Use block symmetric groups of a partition base.")
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--mode", type=click.Choice(["strict", "relaxed"]), default="relaxed", show_default=True)
@click.option("--cap", type=click.IntRange(min=1), default=DEFAULT_CLOSURE_CAP, show_default=True,
              help="Closure size cap for --cellular.")
@format_option
@click.pass_context
def represent_cmd(ctx, ballean_path, cellular, depth, mode, cap, fmt):
    """Represent a finite ballean by permutation families."""
    out = Out(fmt)
    try:
        doc = load_ballean(ballean_path)
    except (DocumentError, ValidationError) as exc:
        _parse_error(exc, out)
    base = doc.base
    report = validate_base(base)
    fatal = report.ok_except_connectivity if cellular else report.ok
    out.record(
        f"represent: points={len(base.ground)} entourages={len(base)} "
        f"{'cellular' if cellular else 'mode=' + mode} depth={depth}\n"
        f"note: {report.note}",
        command="represent", points=len(base.ground), entourages=len(base),
        cellular=cellular, mode=mode, depth=depth,
    )
    for line in report.lines():
        if cellular and line.startswith("connectivity"):
            continue
        out.record(f"base: {line}", record="base_failure", detail=json.dumps(line))
    if cellular and report.connectivity:
        out.record(
            f"base: not connected ({len(report.connectivity)} uncovered pairs), allowed for cellular bases",
            record="base_note", uncovered=len(report.connectivity),
        )
    out.record(f"base axioms: {_flag(fatal)}", record="base", ok=fatal)
    if not fatal:
        sys.exit(EXIT_BASE)

    all_ok = True
    if cellular:
        try:
            rep = represent_cellular(base, cap)
        except NotEquivalence as exc:
            out.record(f"base: {exc}", record="base_failure", detail=json.dumps(str(exc)))
            sys.exit(EXIT_BASE)
        for gen, chk in zip(rep.generators, cellular_checks(rep)):
            all_ok &= chk.ok
            out.record(
                f"{gen.name}: generators={len(gen)} closure={chk.closure_status} order={_value(chk.order)} "
                f"block_product={chk.block_product} orbit={_flag(chk.orbit_ok)} divides={_flag(chk.divides_ok)}",
                record="entourage", name=gen.name, generators=len(gen), closure=chk.closure_status,
                order=chk.order, block_product=chk.block_product, orbit_ok=chk.orbit_ok,
                divides_ok=chk.divides_ok,
            )
        uc = union_closure(rep, cap)
        all_ok &= uc.finite
        out.record(
            f"all generators: closure={uc.status} order={_value(uc.order)}",
            record="union_closure", closure=uc.status, order=uc.order,
        )
    else:
        try:
            rep = represent(base, mode, workers=ctx.obj["workers"])
        except NotSymmetric as exc:
            x, y = exc.pair
            out.record(
                f"not symmetric: ({token(x)}, {token(y)}) without its reverse",
                command="represent", error="not_symmetric", x=token(x), y=token(y),
            )
            sys.exit(EXIT_NOT_SYMMETRIC)
        checks = dict(rep.orbit_checks())
        for gen in rep.generators:
            ok = checks[gen.name]
            all_ok &= ok
            sym = gen.name in rep.symmetrized
            out.record(
                f"{gen.name}: generators={len(gen)} orbit={_flag(ok)}"
                + (" (symmetrized)" if sym else ""),
                record="entourage", name=gen.name, generators=len(gen), orbit_ok=ok, symmetrized=sym,
            )
    ideal = ideal_closure_check(rep, depth)
    all_ok &= ideal.ok
    out.record(
        f"ideal closure depth={depth}: checked={len(ideal.entries)} undominated={len(ideal.undominated)}",
        record="ideal", depth=depth, checked=len(ideal.entries), undominated=len(ideal.undominated),
    )
    for e in ideal.undominated:
        out.record(
            f"  undominated: {e.label} escapes every composition of at most {depth} members, e.g. {_pair(e.witness)}",
            record="undominated", label=e.label, x=token(e.witness[0]), y=token(e.witness[1]),
        )
    sys.exit(EXIT_OK if all_ok else EXIT_CHECK)


@main.command("oracle")
@click.argument("map_path", metavar="MAP")
@click.option("--cap", type=click.IntRange(min=1), default=None,
              help=f"Size cap for both oracles (defaults {DEFAULT_ENUMERATION_CAP} and {DEFAULT_COVER_CAP}).")
@format_option
def oracle_cmd(map_path, cap, fmt):
    """Brute-force bijective selectors and the minimal covering family of MAP."""
    out = Out(fmt)
    try:
        F = load_map(map_path)
    except (DocumentError, ValidationError) as exc:
        _parse_error(exc, out)
    enum_cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
    cover_cap = DEFAULT_COVER_CAP if cap is None else cap
    try:
        sels = enumerate_bijective_selectors(F, enum_cap)
        out.record(
            f"oracle: points={len(F.ground)}\nbijective selectors: {len(sels)}",
            command="oracle", points=len(F.ground), selectors=len(sels),
        )
        res = min_family_oracle(F, cover_cap)
    except CapExceeded as exc:
        out.record(
            f"cap exceeded: {exc.size} points, cap {exc.cap}",
            command="oracle", error="cap_exceeded", points=exc.size, cap=exc.cap,
        )
        sys.exit(EXIT_CAP)
    if isinstance(res, Infeasible):
        x, y = res.witness
        out.record(
            f"minimal family: infeasible, {token(y)} in F({token(x)}) lies on no bijective selector",
            record="minimal", feasible=False, x=token(x), y=token(y),
        )
    else:
        out.record(f"minimal family size: {res.size}", record="minimal", feasible=True, size=res.size)
        for k, p in enumerate(res.family):
            out.record(f"- {flow(p.one_line())}", record="member", index=k, images=p.one_line())
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
