"""Command-line entry point.

Exit codes: 0 on success, 1 for user errors (bad input, unknown ids,
unrealizable type vectors), 2 when an internal invariant is violated.
"""

from __future__ import annotations

import json
import logging
import math
import re
import sys
from pathlib import Path

import click

from ..border_automaton import (
    align_type_vector,
    is_aperiodic,
    parse_type_vector,
    primitive_type_vector,
    scheme_automaton,
    scheme_ptv,
)
from ..builder import (
    GraphBall,
    InvariantError,
    build_ball,
    check_rotation_systems,
    growth_class,
    prepare,
)
from ..cayley_analysis import is_cayley, stabilizer
from ..enumerator import MAX_DEGREE, SchemeFamily, counts, enumerate_schemes
from ..geometry import Geometry
from ..scheme_core import LabelingScheme, SchemeError, connectivity_of, scheme_key
from . import catalog as cat
from .figures import write_report
from .svg import render_svg

log = logging.getLogger("vtplanar")

IN_MEMORY_MAX_DEGREE = 5
LONG_DEGREE = 6
ID_RE = re.compile(r"^d(\d+)-[0-9a-f]+$")


class UserError(click.ClickException):
    exit_code = 1


def _tv_text(tv) -> str:
    return ",".join("inf" if k == math.inf else str(int(k)) for k in tv)


def _families(d: int, jobs: int = 1):
    if d > IN_MEMORY_MAX_DEGREE:
        raise UserError(f"degree {d} needs a catalog file (--catalog)")
    return enumerate_schemes(d, jobs=jobs)


def resolve_scheme(ident: str, catalog_path: str | None) -> tuple[LabelingScheme, str]:
    """Find a scheme by id, in a catalog file, or in a one-record JSON file."""
    path = Path(ident)
    if path.suffix == ".json" or path.is_file():
        records = cat.read_catalog(path)
        if len(records) != 1:
            raise UserError(f"{ident} holds {len(records)} records; pass an id with --catalog")
        rec = records[0]
        return rec.scheme(), rec.id
    if catalog_path:
        rec = cat.find_record(cat.read_catalog(catalog_path), ident)
        return rec.scheme(), rec.id
    m = ID_RE.match(ident)
    if not m:
        raise UserError(f"unknown scheme id {ident!r}")
    d = int(m.group(1))
    if not 2 <= d <= IN_MEMORY_MAX_DEGREE:
        raise UserError(f"unknown scheme id {ident!r}")
    hits = [f for f in _families(d) if cat.family_id(d, f.key).startswith(ident)]
    if len(hits) != 1:
        raise UserError(f"unknown scheme id {ident!r}" if not hits else f"ambiguous id {ident!r}")
    return hits[0].scheme, cat.family_id(d, hits[0].key)


def ball_to_dict(ball: GraphBall, scheme_id: str | None = None) -> dict:
    dist = ball.distances()
    coords = ball.coordinates()
    verts = []
    for v, vx in enumerate(ball.vertices):
        rec = {"id": v, "eps": vx.eps, "distance": dist.get(v)}
        if v in coords:
            rec["point"] = [float(c) for c in coords[v]]
        verts.append(rec)
    return {
        "format": "vtplanar-ball",
        "version": 1,
        "scheme": scheme_id,
        "xi": cat.format_xi(ball.pair.xi),
        "phi": cat.format_phi(ball.pair.phi),
        "type_vector": _tv_text(ball.tv),
        "geometry": ball.geometry.value if ball.geometry else None,
        "edge_length": ball.length,
        "radius": ball.radius,
        "closed": ball.closed,
        "counts": dict(zip(("V", "E", "F"), ball.counts())),
        "vertices": verts,
        "edges": [[a, x + 1, b, y + 1] for (a, x), (b, y) in ball.edges()],
        "faces": [
            {"color": f"f{c}", "vertices": [v for v, _ in chain]} for c, chain in ball.faces
        ],
    }


def _check_ball(ball: GraphBall) -> None:
    bad = check_rotation_systems(ball)
    if bad:
        raise InvariantError(f"vertices {bad[:5]} do not have the vertex star of the scheme")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Enumerate, build and inspect planar vertex-transitive graphs."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")


@cli.command("enumerate")
@click.option("--degree", "-d", type=int, required=True)
@click.option("--include-aperiodic", is_flag=True, help="Also write aperiodic families.")
@click.option("--jobs", "-j", type=int, default=1, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None)
@click.option("--allow-long", is_flag=True, help=f"Permit degree {LONG_DEGREE} (hours of CPU).")
def enumerate_cmd(degree, include_aperiodic, jobs, out, allow_long):
    """Enumerate all scheme families of one degree."""
    top = LONG_DEGREE if allow_long else LONG_DEGREE - 1
    if not 2 <= degree <= top:
        hint = f" (degree {LONG_DEGREE} needs --allow-long)" if degree == LONG_DEGREE else ""
        raise UserError(f"degree must lie in [2, {top}]{hint}")
    if jobs < 1:
        raise UserError("--jobs must be positive")
    fams = enumerate_schemes(degree, jobs=jobs, max_degree=MAX_DEGREE)
    if out:
        cat.write_catalog(out, fams, degree, include_aperiodic)
    p, a = counts(fams)
    click.echo(f"degree={degree} P={p} A={a}")


def _scheme_options(f):
    f = click.option("--catalog", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Catalog file to look the id up in.")(f)
    f = click.option("--scheme", "-s", "scheme_id", required=True,
                     help="Family id, or a JSON file holding one record.")(f)
    return f


@cli.command()
@_scheme_options
@click.option("--type-vector", "-t", "tv", required=True, help="e.g. 3,4,3,3,5 or 3,inf,3,4,inf")
@click.option("--radius", "-r", type=int, default=3, show_default=True)
@click.option("--coords/--no-coords", default=True, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None)
def build(scheme_id, catalog, tv, radius, coords, out):
    """Build a ball of the graph and write it as JSON."""
    scheme, sid = resolve_scheme(scheme_id, catalog)
    ball = build_ball(scheme, parse_type_vector(tv), radius, coords=coords)
    _check_ball(ball)
    text = json.dumps(ball_to_dict(ball, sid), indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    v, e, f = ball.counts()
    click.echo(f"V={v} E={e} F={f} geometry={ball.geometry.value if ball.geometry else 'none'}")


@cli.command()
@_scheme_options
@click.option("--type-vector", "-t", "tv", required=True)
@click.option("--radius", "-r", type=int, default=3, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), required=True)
def render(scheme_id, catalog, tv, radius, out):
    """Draw a ball as SVG."""
    scheme, sid = resolve_scheme(scheme_id, catalog)
    ball = build_ball(scheme, parse_type_vector(tv), radius, coords=True)
    _check_ball(ball)
    Path(out).write_text(render_svg(ball, title=f"{sid} [{_tv_text(ball.tv)}]"))
    click.echo(f"wrote {out}")


@cli.command("check-cayley")
@_scheme_options
@click.option("--type-vector", "-t", "tv", required=True)
@click.option("--radius", "-r", type=int, default=3, show_default=True)
def check_cayley(scheme_id, catalog, tv, radius):
    """Decide whether the graph is a Cayley graph."""
    scheme, _ = resolve_scheme(scheme_id, catalog)
    v = is_cayley(scheme, parse_type_vector(tv), search_radius=radius)
    click.echo(f"verdict: {v.verdict}")
    click.echo(f"reason: {v.reason}")
    if v.witness is not None:
        click.echo(f"witness: {cat.family_id(v.witness.degree, scheme_key(v.witness))}")


def _describe_scheme(scheme: LabelingScheme, sid: str, dump: bool) -> None:
    aut = scheme_automaton(scheme)
    fam = SchemeFamily(
        scheme,
        primitive_type_vector(aut),
        "A" if is_aperiodic(aut) else "P",
        connectivity_of(scheme.pair),
        scheme_key(scheme),
    )
    rec = cat.CatalogRecord.from_family(fam)
    click.echo(f"id: {sid}")
    click.echo(f"xi: {rec.xi}")
    click.echo(f"phi: {rec.phi}")
    click.echo("classes: " + " ".join(f"{g['class']}({g['i']}-{g['j']})" for g in rec.gluings))
    click.echo(f"ptv: {rec.ptv}")
    click.echo(f"periodicity: {'aperiodic' if rec.periodicity == 'A' else 'periodic'}")
    click.echo(f"connectivity: {rec.connectivity}")
    st = stabilizer(scheme)
    click.echo(f"stabilizer: {st.kind} (order {st.order})")
    for b in rec.borders:
        click.echo(f"border {b['face']}: {b['word']}")
    if dump:
        click.echo("automaton:")
        click.echo(aut.dump())


def _describe_tv(scheme: LabelingScheme, tv, radius: int) -> None:
    tv_al, g, length = prepare(scheme, tv)
    click.echo(f"type vector: [{_tv_text(tv_al)}]")
    click.echo(f"geometry: {g.value if g else 'none'}")
    if length is not None:
        click.echo(f"edge length: {length:.15g}")
    if g is Geometry.SPHERICAL:
        ball = build_ball(scheme, tv_al, 1, coords=False)
        v, e, f = ball.counts()
        click.echo(f"growth: finite (V={v} E={e} F={f})")
    elif g is not None:
        click.echo(f"growth: {growth_class(scheme, tv_al, radius=min(radius + 3, 8))}")
    v = is_cayley(scheme, tv_al, search_radius=radius)
    click.echo(f"cayley: {v.verdict} ({v.reason})")


@cli.command()
@click.option("--scheme", "-s", "scheme_id", default=None, help="Family id or one-record JSON file.")
@click.option("--catalog", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--type-vector", "-t", "tv", default=None)
@click.option("--radius", "-r", type=int, default=3, show_default=True)
@click.option("--dump-automaton", is_flag=True, help="Print the border automaton state table.")
def info(scheme_id, catalog, tv, radius, dump_automaton):
    """Describe a family, a type vector, or both."""
    if scheme_id is None and tv is None:
        raise UserError("give --scheme, --type-vector or both")
    if scheme_id is None:
        tvp = parse_type_vector(tv)
        if catalog:
            records = cat.read_catalog(catalog)
            fams = [r for r in records if r.degree == len(tvp)]
            schemes = [(r.id, r.scheme()) for r in fams]
        else:
            schemes = [
                (cat.family_id(f.degree, f.key), f.scheme) for f in _families(len(tvp))
            ]
        hits = [(i, s) for i, s in schemes if align_type_vector(scheme_ptv(s), tvp)]
        click.echo(f"type vector [{_tv_text(tvp)}]: {len(hits)} families")
        for i, s in hits:
            click.echo(f"  {i}  {scheme_ptv(s)}")
        return
    scheme, sid = resolve_scheme(scheme_id, catalog)
    _describe_scheme(scheme, sid, dump_automaton)
    if tv is not None:
        _describe_tv(scheme, parse_type_vector(tv), radius)


@cli.command()
@click.option("--max-degree", type=int, default=4, show_default=True)
@click.option("--jobs", "-j", type=int, default=1, show_default=True)
@click.option("--out", "-o", type=click.Path(file_okay=False), default="report", show_default=True)
def report(max_degree, jobs, out):
    """Write count tables (CSV) and summary figures (PNG)."""
    if not 2 <= max_degree <= IN_MEMORY_MAX_DEGREE:
        raise UserError(f"--max-degree must lie in [2, {IN_MEMORY_MAX_DEGREE}]")
    by_degree = {d: enumerate_schemes(d, jobs=jobs) for d in range(2, max_degree + 1)}
    for p in write_report(out, by_degree):
        click.echo(f"wrote {p}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="vtplanar", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except InvariantError as exc:
        click.echo(f"internal invariant violated: {exc}", err=True)
        return 2
    except (SchemeError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
