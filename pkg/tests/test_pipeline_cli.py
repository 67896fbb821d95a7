"""End-to-end runs, artifact files, SVG output, and the command line."""

import json
import os

import pytest
from click.testing import CliRunner

from nccr.cli import main
from nccr.fixtures import PENTAGON, UNIT_SQUARE
from nccr.lattice_geometry import Point2, group_weights
from nccr.pipeline import (
    overall_verdict,
    run_pipeline,
    run_stages,
    stage_payloads,
    weights_from_json,
    weights_json,
)
from nccr.render import render_svg
from nccr.triangulate import (
    assemble,
    base_triangulation,
    embed_rectangle,
    embed_triangle,
    gulotta_sequence,
    iu_sequence,
    plan_json,
)
from nccr.verify import VerificationReport


@pytest.fixture(scope="module")
def gulotta_run():
    return run_pipeline(PENTAGON, mode="gulotta")


@pytest.fixture(scope="module")
def square_plan(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    poly = d / "square.json"
    poly.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    plan = d / "plan.json"
    res = CliRunner().invoke(
        main, ["triangulate", "--polygon", str(poly), "--out", str(plan)]
    )
    assert res.exit_code == 0, res.output
    return d, poly, plan


# ---------------------------------------------------------------- pipeline


def test_unit_square_run_is_degenerate():
    run = run_pipeline(UNIT_SQUARE)
    assert run.mode == "gulotta"
    assert len(run.sequence.cuts) == 0
    assert len(run.reports) == 1
    assert run.reports[0].verdict == "certified"
    assert run.certificate.cm_ok and run.certificate.verdict
    assert (run.certificate.class_count, run.certificate.volume) == (2, 2)
    assert run.verdict() == "certified"
    assert run.induced == run.seed.members
    assert tuple(run.restricted) == run.seed.members


def test_gulotta_pentagon_run(gulotta_run):
    run = gulotta_run
    assert len(run.sequence.cuts) == 5
    assert len(run.reports) == 6
    assert all(r.verdict == "certified" for r in run.reports)
    assert len(run.induced) == 24
    assert len(run.triangulation.all_vertices) == 10
    assert len(run.triangulation.triangles) == 9
    assert run.signs == ("-",) * len(run.triangulation.plan.steps)
    assert run.certificate.verdict
    assert run.certificate.class_count == run.certificate.volume == 16
    assert run.verdict() == "certified"


def test_iu_pentagon_run_box_mode():
    run = run_pipeline(PENTAGON, mode="iu", verify_mode="box")
    assert run.mode == "iu"
    assert {tuple(c.removed) for c in run.sequence.cuts} == {
        (0, 5), (1, 4), (0, 4), (2, 3), (0, 3), (0, 2), (0, 1), (5, 0),
    }
    assert len(run.induced) == 25
    assert all(r.verdict == "certified" for r in run.reports)
    assert run.certificate.verdict
    assert run.certificate.class_count == run.certificate.volume == 16


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        run_pipeline(UNIT_SQUARE, mode="shave")


def test_parallel_stages_match_sequential(gulotta_run):
    run = gulotta_run
    payloads = stage_payloads(run.triangulation, run.induced, "box", 6)
    assert run_stages(payloads, jobs=2) == run_stages(payloads, jobs=1)


def _report(verdict):
    return VerificationReport("chamber", 1, 1, (), verdict)


def test_overall_verdict_precedence():
    assert overall_verdict([_report("certified")]) == "certified"
    assert overall_verdict([_report("certified"), _report("inconclusive")]) == "inconclusive"
    assert overall_verdict([_report("inconclusive"), _report("refuted")]) == "refuted"
    good = run_pipeline(UNIT_SQUARE).certificate
    assert overall_verdict([_report("certified")], good) == "certified"
    bad = good.__class__(True, 1, 2, False)
    assert overall_verdict([_report("certified")], bad) == "refuted"


def test_weights_json_roundtrip(gulotta_run):
    run = gulotta_run
    data = weights_json(run.polygon.vertices, run.restricted)
    verts, members = weights_from_json(data)
    assert verts == run.polygon.vertices
    assert members == list(run.restricted)


# ---------------------------------------------------------------- artifacts


def test_artifact_files(tmp_path):
    out = tmp_path / "art"
    run = run_pipeline(UNIT_SQUARE, out_dir=str(out))
    names = sorted(os.listdir(out))
    assert names == [
        "certificate.json",
        "figure.svg",
        "induced.json",
        "overview.png",
        "plan.json",
        "report.tsv",
        "reports.json",
        "restricted.json",
        "seeds.json",
        "summary.json",
    ]
    plan = json.loads((out / "plan.json").read_text())
    assert plan["mode"] == "gulotta"
    cert = json.loads((out / "certificate.json").read_text())
    assert cert == {"cm_ok": True, "class_count": 2, "volume": 2, "verdict": True}
    summary = json.loads((out / "summary.json").read_text())
    assert summary["verdict"] == "certified"
    assert summary["stages"] == ["certified"]
    svg = (out / "figure.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    tsv = (out / "report.tsv").read_text().splitlines()
    assert tsv[0].split("\t")[0] == "stage"
    assert len(tsv) == 1 + len(run.reports)
    assert tsv[1].split("\t")[-1] == "certified"
    png = (out / "overview.png").read_bytes()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    seeds = json.loads((out / "seeds.json").read_text())
    assert len(seeds["members"]) == 2
    # writing again over existing files must be clean (atomic replace)
    run_pipeline(UNIT_SQUARE, out_dir=str(out))
    assert json.loads((out / "summary.json").read_text()) == summary


# ---------------------------------------------------------------- rendering


def _plan_for(mode):
    if mode == "gulotta":
        moved, frame = embed_rectangle(PENTAGON)
        seq = gulotta_sequence(moved, frame)
    else:
        moved, frame = embed_triangle(PENTAGON)
        seq = iu_sequence(moved, frame)
    return plan_json(seq, assemble(seq, base_triangulation(moved)))


def test_render_gulotta_plan_counts():
    svg = render_svg(_plan_for("gulotta"))
    assert svg.count('class="vertex"') == 10
    assert svg.count('class="cell"') == 9
    assert svg.count('class="diagonal"') == 1
    assert svg.count('class="removed"') == 0
    assert f'x1="{(4 - -1) * 40}"' in svg  # the diagonal leaves (4,3)


def test_render_iu_plan_counts():
    svg = render_svg(_plan_for("iu"))
    assert svg.count('class="vertex"') == 13
    assert svg.count('class="cell"') == 12
    assert svg.count('class="removed"') == 8
    assert svg.count('class="diagonal"') == 0


def test_render_bare_polygon():
    svg = render_svg(UNIT_SQUARE)
    assert svg.count('class="outline"') == 1
    assert svg.count('class="vertex"') == 0
    assert svg.count('class="cell"') == 0
    assert svg.count('class="grid"') == 8
    assert render_svg({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}) == svg


def test_render_byte_identical():
    for source in (_plan_for("gulotta"), _plan_for("iu"), UNIT_SQUARE):
        assert render_svg(source) == render_svg(source)


# ---------------------------------------------------------------- CLI


def test_cli_triangulate_and_induce(square_plan):
    d, _, plan_path = square_plan
    plan = json.loads(plan_path.read_text())
    assert plan["mode"] == "gulotta"
    assert len(plan["triangles"]) == 2
    res = CliRunner().invoke(main, ["induce", "--plan", str(plan_path)])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert len(data["members"]) == 2
    assert data["vertices"] == [[0, 0], [0, 1], [1, 0], [1, 1]]


def test_cli_verify_certified(square_plan):
    _, _, plan_path = square_plan
    for mode in ("chamber", "box"):
        res = CliRunner().invoke(
            main, ["verify", "--plan", str(plan_path), "--mode", mode]
        )
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["verdict"] == "certified"


def test_cli_verify_refuted_seed_file(square_plan):
    d, _, plan_path = square_plan
    bad = d / "bad_seeds.json"
    bad.write_text(
        json.dumps(
            {
                "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
                "members": [[0, 0, 0, 0], [0, 1, 0, 1]],
            }
        )
    )
    res = CliRunner().invoke(
        main, ["verify", "--plan", str(plan_path), "--seed", str(bad)]
    )
    assert res.exit_code == 2
    data = json.loads(res.output)
    assert data["verdict"] == "refuted"
    failures = data["stages"][0]["failures"]
    assert len(failures) == 1
    # the plan fans the square from (0,0), so here the m = 0 pattern
    # isolating {(0,1),(1,0)} is the refutation (difference taken ALT -> 0)
    assert failures[0]["witness"] == [0, 0, 0]
    assert failures[0]["signs"] == "+--+"
    assert failures[0]["b"] == [0, 1, 1, 0]
    assert failures[0]["bprime"] == [0, 0, 0, 0]
    assert failures[0]["betti"] == [1, 0]


def test_cli_certify(square_plan, tmp_path):
    d, poly, _ = square_plan
    good = tmp_path / "good.json"
    good.write_text(
        json.dumps(
            {
                "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
                "members": [[0, 0, 0, 0], [0, 0, 1, 0]],
            }
        )
    )
    res = CliRunner().invoke(
        main, ["certify", "--polygon", str(poly), "--weights", str(good)]
    )
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["verdict"] is True
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
                "members": [[0, 0, 0, 0], [0, 1, 0, 1]],
            }
        )
    )
    res = CliRunner().invoke(
        main, ["certify", "--polygon", str(poly), "--weights", str(bad)]
    )
    assert res.exit_code == 2
    assert json.loads(res.output)["cm_ok"] is False


def test_cli_weights(tmp_path):
    poly = tmp_path / "pent.json"
    poly.write_text(
        json.dumps({"vertices": [[p.x, p.y] for p in PENTAGON.vertices]})
    )
    res = CliRunner().invoke(main, ["weights", "--polygon", str(poly)])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    grp = group_weights(PENTAGON)
    assert data["rank"] == grp.rank == 2
    assert data["torsion"] == []
    assert data["weights"] == [list(w) for w in grp.weights]


def test_cli_render(square_plan):
    _, poly, plan_path = square_plan
    res = CliRunner().invoke(main, ["render", "--polygon", str(poly)])
    assert res.exit_code == 0
    assert res.output.startswith("<svg")
    res = CliRunner().invoke(main, ["render", "--plan", str(plan_path)])
    assert res.exit_code == 0
    assert 'class="cell"' in res.output
    res = CliRunner().invoke(
        main, ["render", "--polygon", str(poly), "--plan", str(plan_path)]
    )
    assert res.exit_code == 1


def test_cli_fixtures(tmp_path):
    res = CliRunner().invoke(main, ["fixtures"])
    assert res.exit_code == 0
    names = res.output.split()
    assert len(names) == 25
    assert "pentagon" in names and "random-20" in names
    out = tmp_path / "fx"
    res = CliRunner().invoke(main, ["fixtures", "--out", str(out)])
    assert res.exit_code == 0
    data = json.loads((out / "pentagon.json").read_text())
    assert [Point2(*p) for p in data["vertices"]] == list(PENTAGON.vertices)
    assert len(os.listdir(out)) == 25


def test_cli_run_square(tmp_path):
    poly = tmp_path / "sq.json"
    poly.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    res = CliRunner().invoke(
        main, ["run", "--polygon", str(poly), "--out", str(tmp_path / "art")]
    )
    assert res.exit_code == 0, res.output
    summary = json.loads(res.output)
    assert summary["verdict"] == "certified"
    assert summary["certificate"]["class_count"] == 2
    assert (tmp_path / "art" / "overview.png").exists()
    res = CliRunner().invoke(main, ["run", "--fixture", "unit-square"])
    assert res.exit_code == 0


def test_cli_error_paths(tmp_path):
    res = CliRunner().invoke(main, ["triangulate", "--polygon", "no-such.json"])
    assert res.exit_code == 1
    flat = tmp_path / "flat.json"
    flat.write_text(json.dumps({"vertices": [[0, 0], [1, 1], [2, 2]]}))
    res = CliRunner().invoke(main, ["triangulate", "--polygon", str(flat)])
    assert res.exit_code == 1
    res = CliRunner().invoke(main, ["run", "--fixture", "unit-square", "--bogus"])
    assert res.exit_code == 1
    res = CliRunner().invoke(main, ["run"])
    assert res.exit_code == 1
