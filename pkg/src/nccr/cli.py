"""Command line front end.

Verdict-bearing commands exit 0 when certified, 2 when refuted, and 3 when
inconclusive; any error exits 1.  All file formats are the JSON shapes the
library reads and writes; output files land atomically.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

import click

from .fixtures import (
    HEXAGON,
    PENTAGON,
    PINWHEEL_TRIANGLE,
    UNIT_SQUARE,
    UNIT_TRIANGLE,
    random_polygons,
)
from .induction import InductionDatum, induce
from .lattice_geometry import LatticePolygon, as_point, group_weights
from .pipeline import (
    _atomic_write,
    certificate_json,
    overall_verdict,
    run_pipeline,
    run_stages,
    run_summary,
    weights_from_json,
    weights_json,
)
from .render import render_svg
from .triangulate import (
    assemble,
    base_triangulation,
    embed_rectangle,
    embed_triangle,
    gulotta_sequence,
    iu_sequence,
    plan_json,
    seed_gulotta,
    seed_iu,
)
from .verify import nccr_certificate, report_json

# 2 means "refuted" to scripts, so argument mistakes must not collide with it
click.exceptions.UsageError.exit_code = 1

EXIT_CODES = {"certified": 0, "refuted": 2, "inconclusive": 3}

_NAMED_FIXTURES = {
    "pentagon": PENTAGON,
    "unit-square": UNIT_SQUARE,
    "unit-triangle": UNIT_TRIANGLE,
    "hexagon": HEXAGON,
    "pinwheel-triangle": PINWHEEL_TRIANGLE,
}


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read {path}: {exc}")


def _load_polygon(path: str) -> LatticePolygon:
    data = _read_json(path)
    try:
        return LatticePolygon(data["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise click.ClickException(f"bad polygon in {path}: {exc}")


def _emit(payload: str, out) -> None:
    if out is None:
        click.echo(payload, nl=not payload.endswith("\n"))
    else:
        _atomic_write(out, payload)


def _emit_json(data, out) -> None:
    _emit(json.dumps(data, indent=2) + "\n", out)


def _signs_config(value):
    if value == "all-minus":
        return None
    if value == "all-plus":
        return "+"
    data = _read_json(value)
    if not isinstance(data, list) or any(s not in ("+", "-") for s in data):
        raise click.ClickException(f"{value} must hold a JSON list of '+'/'-'")
    return data


def _build_plan(polygon: LatticePolygon, method: str, signs):
    if method == "gulotta":
        moved, frame = embed_rectangle(polygon)
        seq = gulotta_sequence(moved, frame)
    else:
        moved, frame = embed_triangle(polygon)
        seq = iu_sequence(moved, frame)
    tri = assemble(seq, base_triangulation(moved), signs)
    return seq, tri


def _plan_datum(plan: dict):
    try:
        steps = [
            (
                s["vertex"],
                [(c["vertex"], Fraction(c["num"], c["den"])) for c in s["coeffs"]],
            )
            for s in plan["plan"]["steps"]
        ]
        datum = InductionDatum(plan["plan"]["base"], steps)
        signs = tuple(s["sign"] for s in plan["plan"]["steps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise click.ClickException(f"bad plan: {exc}")
    return datum, signs


def _seed_members(seed: str, plan: dict, datum: InductionDatum):
    if seed in ("gulotta", "iu"):
        frame = LatticePolygon(plan["nested"][0]["vertices"])
        _, _, cx, cy = frame.bounding_box()
        coll = seed_gulotta(cx, cy) if seed == "gulotta" else seed_iu(cx, cy)
        base, members = coll.base_vertices, coll.members
    else:
        base, members = weights_from_json(_read_json(seed))
    if set(base) != set(datum.base):
        raise click.ClickException("seed vertices do not match the plan's base")
    return members


def _plan_stage_payloads(plan: dict, members, mode: str, radius: int) -> list:
    tris = [tuple(as_point(p) for p in t) for t in plan["triangles"]]
    payloads = []
    for sv in plan["stage_vertices"]:
        keep = {as_point(p) for p in sv}
        stage_tris = tuple(
            tuple((p.x, p.y) for p in t) for t in tris if all(p in keep for p in t)
        )
        rows = tuple(
            tuple(((p.x, p.y), int(w[p])) for p in sorted(keep)) for w in members
        )
        payloads.append((stage_tris, rows, mode, radius))
    return payloads


@click.group()
def main() -> None:
    """Construct and certify candidate resolutions of lattice-polygon cones."""


@main.command()
@click.option("--method", type=click.Choice(["gulotta", "iu"]), default="gulotta")
@click.option("--polygon", "polygon_path", required=True, metavar="P.json")
@click.option("--signs", default="all-minus", metavar="all-minus|all-plus|FILE")
@click.option("--out", default=None, metavar="plan.json")
def triangulate(method, polygon_path, signs, out) -> None:
    """Cut a polygon out of its frame and write the full plan."""
    poly = _load_polygon(polygon_path)
    try:
        seq, tri = _build_plan(poly, method, _signs_config(signs))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _emit_json(plan_json(seq, tri), out)


@main.command("induce")
@click.option("--plan", "plan_path", required=True, metavar="plan.json")
@click.option("--seed", default="gulotta", metavar="gulotta|iu|FILE")
@click.option("--out", default=None, metavar="weights.json")
def induce_cmd(plan_path, seed, out) -> None:
    """Extend seed weights over every vertex of a plan."""
    plan = _read_json(plan_path)
    datum, signs = _plan_datum(plan)
    members = _seed_members(seed, plan, datum)
    try:
        extended = [induce(w, datum, signs) for w in members]
    except ValueError as exc:
        raise click.ClickException(str(exc))
    order = [as_point(p) for p in plan["stage_vertices"][0]]
    _emit_json(weights_json(order, extended), out)


@main.command()
@click.option("--plan", "plan_path", required=True, metavar="plan.json")
@click.option("--seed", default="gulotta", metavar="gulotta|iu|FILE")
@click.option("--mode", type=click.Choice(["chamber", "box"]), default="chamber")
@click.option("--box-radius", default=8, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("--out", default=None, metavar="reports.json")
def verify(plan_path, seed, mode, box_radius, jobs, out) -> None:
    """Run the vanishing sweep on every stage of a plan."""
    plan = _read_json(plan_path)
    datum, signs = _plan_datum(plan)
    members = _seed_members(seed, plan, datum)
    try:
        extended = [induce(w, datum, signs) for w in members]
        reports = run_stages(
            _plan_stage_payloads(plan, extended, mode, box_radius), jobs
        )
    except (ValueError, KeyError) as exc:
        raise click.ClickException(str(exc))
    verdict = overall_verdict(reports)
    _emit_json({"stages": [report_json(r) for r in reports], "verdict": verdict}, out)
    raise SystemExit(EXIT_CODES[verdict])


@main.command()
@click.option("--polygon", "polygon_path", required=True, metavar="P.json")
@click.option("--weights", "weights_path", required=True, metavar="S.json")
@click.option("--out", default=None, metavar="certificate.json")
def certify(polygon_path, weights_path, out) -> None:
    """Boundary condition plus class count against the volume."""
    poly = _load_polygon(polygon_path)
    verts, members = weights_from_json(_read_json(weights_path))
    if not set(poly.vertices) <= set(verts):
        raise click.ClickException("weights do not cover the polygon's vertices")
    members = [w.restrict(poly.vertices) for w in members]
    cert = nccr_certificate(poly, members)
    _emit_json(certificate_json(cert), out)
    raise SystemExit(0 if cert.verdict else 2)


@main.command()
@click.option("--polygon", "polygon_path", required=True, metavar="P.json")
@click.option("--out", default=None, metavar="weights.json")
def weights(polygon_path, out) -> None:
    """Character-group weights of the polygon's cone."""
    poly = _load_polygon(polygon_path)
    grp = group_weights(poly)
    _emit_json(
        {
            "vertices": [[p.x, p.y] for p in poly.vertices],
            "rank": grp.rank,
            "torsion": list(grp.torsion),
            "weights": [list(w) for w in grp.weights],
        },
        out,
    )


@main.command()
@click.option("--plan", "plan_path", default=None, metavar="plan.json")
@click.option("--polygon", "polygon_path", default=None, metavar="P.json")
@click.option("--out", default=None, metavar="figure.svg")
def render(plan_path, polygon_path, out) -> None:
    """Draw a plan or a bare polygon as SVG."""
    if (plan_path is None) == (polygon_path is None):
        raise click.ClickException("pass exactly one of --plan and --polygon")
    source = _read_json(plan_path) if plan_path else _load_polygon(polygon_path)
    _emit(render_svg(source), out)


@main.command()
@click.option("--out", default=None, metavar="DIR")
def fixtures(out) -> None:
    """List the bundled polygons, or write them as JSON files."""
    bundle = dict(_NAMED_FIXTURES)
    for i, poly in enumerate(random_polygons(), start=1):
        bundle[f"random-{i:02d}"] = poly
    if out is None:
        for name in bundle:
            click.echo(name)
        return
    os.makedirs(out, exist_ok=True)
    for name, poly in bundle.items():
        path = os.path.join(out, f"{name.replace('-', '_')}.json")
        _atomic_write(
            path,
            json.dumps({"vertices": [[p.x, p.y] for p in poly.vertices]}, indent=2)
            + "\n",
        )
        click.echo(path)


@main.command()
@click.option("--polygon", "polygon_path", default=None, metavar="P.json")
@click.option("--fixture", "fixture_name", default=None, type=click.Choice(sorted(_NAMED_FIXTURES)))
@click.option("--method", type=click.Choice(["gulotta", "iu"]), default="gulotta")
@click.option("--signs", default="all-minus", metavar="all-minus|all-plus|FILE")
@click.option("--mode", type=click.Choice(["chamber", "box"]), default="chamber")
@click.option("--box-radius", default=8, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("--out", default=None, metavar="DIR")
def run(polygon_path, fixture_name, method, signs, mode, box_radius, jobs, out) -> None:
    """Full pipeline: construct, verify every stage, certify, write artifacts."""
    if (polygon_path is None) == (fixture_name is None):
        raise click.ClickException("pass exactly one of --polygon and --fixture")
    poly = (
        _NAMED_FIXTURES[fixture_name]
        if fixture_name
        else _load_polygon(polygon_path)
    )
    try:
        record = run_pipeline(
            poly,
            mode=method,
            signs=_signs_config(signs),
            verify_mode=mode,
            box_radius=box_radius,
            jobs=jobs,
            out_dir=out,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    summary = run_summary(record)
    click.echo(json.dumps(summary, indent=2))
    raise SystemExit(EXIT_CODES[summary["verdict"]])


if __name__ == "__main__":
    main()
