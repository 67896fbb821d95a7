"""End-to-end runs: embed, cut, induce, verify each stage, certify.

A run is reproducible from its configuration alone; every product is kept
on the run record, and writing artifacts is a pure serialization of that
record.  Files are written atomically (temp file plus rename) so a crashed
run never leaves a half-written artifact behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .induction import WeightVector, induce
from .lattice_geometry import LatticePolygon, Point2, as_point
from .render import cut_diagonals, render_svg
from .triangulate import (
    NestedSequence,
    SeedCollection,
    Triangulation,
    assemble,
    base_triangulation,
    embed_rectangle,
    embed_triangle,
    gulotta_sequence,
    iu_sequence,
    plan_json,
    restrict,
    seed_gulotta,
    seed_iu,
)
from .verify import NCCRCertificate, ext_vanishing, nccr_certificate, report_json


@dataclass(frozen=True)
class PipelineRun:
    """Everything one construction-and-verification run produced.

    polygon is the translated copy sitting inside frame; weights are keyed
    by its coordinates.  reports holds one verification per stage, outermost
    first, and the certificate concerns the restricted collection on the
    polygon itself.
    """

    polygon: LatticePolygon
    frame: LatticePolygon
    mode: str
    signs: tuple
    sequence: NestedSequence
    triangulation: Triangulation
    seed: SeedCollection
    induced: tuple
    restricted: tuple
    reports: tuple
    certificate: NCCRCertificate

    def verdict(self) -> str:
        return overall_verdict(self.reports, self.certificate)


def overall_verdict(reports, certificate: NCCRCertificate = None) -> str:
    """Worst stage verdict, with a failed certificate counting as refuted."""
    verdicts = {r.verdict for r in reports}
    if "refuted" in verdicts or (certificate is not None and not certificate.verdict):
        return "refuted"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "certified"


def _run_stage(payload):
    tris, rows, mode, radius = payload
    members = [WeightVector({Point2(*p): v for p, v in row}) for row in rows]
    return ext_vanishing(tris, members, mode=mode, box_radius=radius)


def stage_payloads(triangulation: Triangulation, members, mode: str, radius: int) -> list:
    """Plain-data verification jobs, one per stage, safe to ship to workers."""
    out = []
    for i in range(len(triangulation.region_triangles) + 1):
        tris = tuple(
            tuple((p.x, p.y) for p in t) for t in triangulation.stage_triangles(i)
        )
        rows = tuple(
            tuple(((p.x, p.y), int(w[p])) for p in triangulation.stage_vertices[i])
            for w in members
        )
        out.append((tris, rows, mode, radius))
    return out


def run_stages(payloads, jobs: int = 1) -> tuple:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return tuple(pool.map(_run_stage, payloads))
    return tuple(_run_stage(p) for p in payloads)


def run_pipeline(
    polygon,
    mode: str = "gulotta",
    signs=None,
    verify_mode: str = "chamber",
    box_radius: int = 8,
    jobs: int = 1,
    out_dir=None,
) -> PipelineRun:
    """Embed, cut, triangulate, induce, verify stage by stage, and certify.

    signs follows the triangulation plan's configuration rules (None means
    all floors); verify_mode and box_radius are passed through to the
    per-stage sweeps.  With out_dir set, all artifacts are written there.
    """
    poly = polygon if isinstance(polygon, LatticePolygon) else LatticePolygon(polygon)
    if mode == "gulotta":
        moved, frame = embed_rectangle(poly)
        seq = gulotta_sequence(moved, frame)
    elif mode == "iu":
        moved, frame = embed_triangle(poly)
        seq = iu_sequence(moved, frame)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    tri = assemble(seq, base_triangulation(moved), signs)
    _, _, cx, cy = frame.bounding_box()
    seed = seed_gulotta(cx, cy) if mode == "gulotta" else seed_iu(cx, cy)
    induced = tuple(induce(s, tri.plan, tri.plan_signs) for s in seed.members)
    restricted = tuple(restrict(induced, moved.vertices))
    reports = run_stages(stage_payloads(tri, induced, verify_mode, box_radius), jobs)
    certificate = nccr_certificate(moved, restricted)
    run = PipelineRun(
        polygon=moved,
        frame=frame,
        mode=tri.mode,
        signs=tri.plan_signs,
        sequence=seq,
        triangulation=tri,
        seed=seed,
        induced=induced,
        restricted=restricted,
        reports=reports,
        certificate=certificate,
    )
    if out_dir is not None:
        write_artifacts(run, out_dir)
    return run


def weights_json(vertices, members) -> dict:
    """Weight collection in wire form: vertex list plus value rows."""
    verts = [as_point(p) for p in vertices]
    return {
        "vertices": [[p.x, p.y] for p in verts],
        "members": [[int(w[p]) for p in verts] for w in members],
    }


def weights_from_json(data) -> tuple:
    verts = [as_point(p) for p in data["vertices"]]
    members = [
        WeightVector(dict(zip(verts, (int(v) for v in row)))) for row in data["members"]
    ]
    return tuple(verts), members


def certificate_json(cert: NCCRCertificate) -> dict:
    return {
        "cm_ok": cert.cm_ok,
        "class_count": cert.class_count,
        "volume": cert.volume,
        "verdict": cert.verdict,
    }


def run_summary(run: PipelineRun) -> dict:
    return {
        "mode": run.mode,
        "polygon": [[p.x, p.y] for p in run.polygon.vertices],
        "frame": [[p.x, p.y] for p in run.frame.vertices],
        "stages": [r.verdict for r in run.reports],
        "certificate": certificate_json(run.certificate),
        "verdict": run.verdict(),
    }


def _dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _atomic_write(path: str, payload) -> None:
    data = payload.encode() if isinstance(payload, str) else payload
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report_tsv(run: PipelineRun) -> str:
    cols = (
        "stage",
        "vertices",
        "triangles",
        "members",
        "mode",
        "pairs",
        "vectors",
        "failures",
        "pruned",
        "verdict",
    )
    rows = ["\t".join(cols)]
    for i, rep in enumerate(run.reports):
        rows.append(
            "\t".join(
                str(x)
                for x in (
                    i,
                    len(run.triangulation.stage_vertices[i]),
                    len(run.triangulation.stage_triangles(i)),
                    len(run.seed.members),
                    rep.mode,
                    rep.pairs_checked,
                    rep.sign_vectors_checked,
                    len(rep.failures),
                    rep.pruned,
                    rep.verdict,
                )
            )
        )
    return "\n".join(rows) + "\n"


def _overview_png(run: PipelineRun, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plan = plan_json(run.sequence, run.triangulation)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 5))
    for t in run.triangulation.triangles:
        xs = [p.x for p in t]
        ys = [p.y for p in t]
        ax1.fill(xs, ys, color="#f3ede2", zorder=1)
        ax1.plot(xs + xs[:1], ys + ys[:1], color="#8a8578", lw=1.2, zorder=2)
    for cycle in (run.frame.vertices, run.polygon.vertices):
        xs = [p.x for p in cycle]
        ys = [p.y for p in cycle]
        ax1.plot(xs + xs[:1], ys + ys[:1], color="#23272e", lw=2.2, zorder=3)
    for u, w in cut_diagonals(plan):
        ax1.plot([u.x, w.x], [u.y, w.y], color="#b5452e", lw=2.6, zorder=4)
    if run.mode == "iu":
        removed = [c.removed for c in run.sequence.cuts]
        ax1.scatter(
            [p.x for p in removed],
            [p.y for p in removed],
            facecolors="none",
            edgecolors="#b5452e",
            s=160,
            zorder=5,
        )
    pts = run.triangulation.all_vertices
    ax1.scatter([p.x for p in pts], [p.y for p in pts], color="#23272e", s=28, zorder=6)
    ax1.set_aspect("equal")
    ax1.axis("off")
    ax1.set_title(f"{run.mode}: {run.verdict()}")
    stages = range(len(run.reports))
    ax2.bar(
        stages,
        [r.sign_vectors_checked for r in run.reports],
        color="#8a8578",
        label="sign vectors",
    )
    ax2.bar(
        stages,
        [r.pruned for r in run.reports],
        color="#b5452e",
        label="pruned",
    )
    ax2.set_xlabel("stage")
    ax2.set_xticks(list(stages))
    ax2.legend(frameon=False)
    ax2.set_title("sweep size per stage")
    fig.tight_layout()
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=140)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def write_artifacts(run: PipelineRun, out_dir: str) -> list:
    """Write every artifact of a run into out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    plan = plan_json(run.sequence, run.triangulation)
    files = {
        "plan.json": _dumps(plan),
        "seeds.json": _dumps(weights_json(run.seed.base_vertices, run.seed.members)),
        "induced.json": _dumps(
            weights_json(run.triangulation.all_vertices, run.induced)
        ),
        "restricted.json": _dumps(weights_json(run.polygon.vertices, run.restricted)),
        "reports.json": _dumps([report_json(r) for r in run.reports]),
        "certificate.json": _dumps(certificate_json(run.certificate)),
        "summary.json": _dumps(run_summary(run)),
        "figure.svg": render_svg(plan),
        "report.tsv": _report_tsv(run),
    }
    paths = []
    for name in sorted(files):
        target = os.path.join(out_dir, name)
        _atomic_write(target, files[name])
        paths.append(target)
    png = os.path.join(out_dir, "overview.png")
    _overview_png(run, png)
    paths.append(png)
    return paths
