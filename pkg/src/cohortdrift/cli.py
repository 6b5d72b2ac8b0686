"""Batch command line: generate/validate datasets, replay filter scripts,
emit drift reports and layout files without the HTTP service.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import csv as csv_mod
import io
import json
import sys
from pathlib import Path

import click

from cohortdrift.hierarchy import load_hierarchy
from cohortdrift.ingest import (
    IngestError,
    SyntheticSpec,
    generate_synthetic,
    parse_patient_records,
    serialize_patients,
    validate_dataset,
)
from cohortdrift.session import AnalysisSession, dumps
from cohortdrift.svg import render_dotplot_svg, render_icicle_svg, render_list_svg


class ValidationFailure(click.ClickException):
    exit_code = 1


@click.group()
def main():
    """Selection-bias tracking for cohort construction over coded event data."""


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--patients", type=int, default=1000, show_default=True)
@click.option("--systems", type=int, default=2, show_default=True)
@click.option("--branching", type=int, default=3, show_default=True)
@click.option("--depth", type=int, default=3, show_default=True)
@click.option(
    "--correlate",
    "correlations",
    multiple=True,
    metavar="A,B,S",
    help="Plant a phi-correlation S between codes A and B (system:code).",
)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
def generate(seed, patients, systems, branching, depth, correlations, out):
    """Write a seeded synthetic hierarchy + patient file (plus the spec echo)."""
    corr = []
    for text in correlations:
        a, b, s = text.split(",")
        corr.append((a, b, float(s)))
    spec = SyntheticSpec(
        seed=seed,
        patients=patients,
        systems=systems,
        branching=branching,
        depth=depth,
        correlations=tuple(corr),
    )
    try:
        hierarchy, table = generate_synthetic(spec)
    except IngestError as exc:
        raise ValidationFailure(str(exc))
    out.mkdir(parents=True, exist_ok=True)
    (out / "hierarchy.csv").write_text(hierarchy.serialize())
    (out / "patients.ndjson").write_text(serialize_patients(table))
    (out / "spec.json").write_text(dumps(spec.to_json()) + "\n")
    click.echo(f"wrote {len(table)} patients, {len(hierarchy)} dims to {out}")


@main.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--hierarchy", type=click.Path(exists=True, path_type=Path), required=True)
def validate(data, hierarchy):
    """Validate a dataset; exit 1 if any diagnostics are reported."""
    try:
        h = load_hierarchy(hierarchy.read_text())
        records = parse_patient_records(data.read_text())
    except (IngestError, ValueError) as exc:
        raise ValidationFailure(str(exc))
    report = validate_dataset(h, records)
    click.echo(dumps(report))
    if report["diagnostics"]:
        sys.exit(1)


def _load_script(path: Path | None) -> dict:
    if path is None:
        return {"steps": []}
    script = json.loads(path.read_text())
    if "steps" not in script:
        raise ValidationFailure("filter script must contain a 'steps' array")
    return script


def _run_script(session: AnalysisSession, script: dict) -> list[int]:
    """Apply the script's steps; returns the included cohort id per step."""
    included: list[int] = []
    for i, step in enumerate(script["steps"]):
        ref = step.get("parent", "root")
        if ref == "root":
            parent = session.tree.root
        else:
            ref = int(ref)
            if not 0 <= ref < len(included):
                raise ValidationFailure(f"step {i}: parent ref {ref} not an earlier step")
            parent = included[ref]
        inc, _ = session.apply_filter({**step, "parent": parent})
        included.append(inc)
    return included


def _resolve_cohort(ref, included: list[int], root: int) -> int:
    if ref in (None, "root"):
        return root
    return included[int(ref)]


@main.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--hierarchy", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--script", type=click.Path(exists=True, path_type=Path))
@click.option("--ts", type=float, default=0.05, show_default=True)
@click.option("--method", type=click.Choice(["breadth", "depth"]), default="breadth", show_default=True)
@click.option("--baseline", default=None, help="Step index or 'root'.")
@click.option("--focus", default=None, help="Step index or 'root'; default last step.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "svg"]), default="json", show_default=True)
@click.option("--dim", "dims", multiple=True, help="system:code to dump distributions for.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
def report(data, hierarchy, script, ts, method, baseline, focus, fmt, dims, out):
    """Replay a filter script and emit tree/profile/layout/overlap files."""
    try:
        session = AnalysisSession(hierarchy.read_text(), data.read_text())
        scr = _load_script(script)
        included = _run_script(session, scr)
        session.set_settings(ts, "breadth-first" if method == "breadth" else "depth-first")
        settings = scr.get("settings", {})
        if settings:
            session.set_settings(settings.get("ts"), settings.get("method"))
        session.set_baseline(
            _resolve_cohort(scr.get("baseline", baseline), included, session.tree.root)
        )
        focus_ref = scr.get("focus", focus)
        if focus_ref is not None:
            session.set_focus(_resolve_cohort(focus_ref, included, session.tree.root))
        elif included:
            session.set_focus(included[-1])

        out.mkdir(parents=True, exist_ok=True)
        write = lambda name, obj: (out / name).write_text(dumps(obj) + "\n")
        write("tree.json", session.tree_summary())
        if included or session.tree.baseline != session.tree.focus:
            profile = session.profile()
            layout = session.icicle_layout()
            dotplot = session.dotplot_layout()
            rows = session.list_layout()
            write("profile.json", profile.to_json())
            write("icicle.json", layout.to_json())
            write("dotplot.json", dotplot.to_json())
            write("list.json", [r.to_json() for r in rows])
            write("overlap.json", session.overlap_summary().to_json())
            if fmt == "svg":
                (out / "icicle.svg").write_text(render_icicle_svg(layout))
                (out / "dotplot.svg").write_text(render_dotplot_svg(dotplot))
                (out / "list.svg").write_text(render_list_svg(rows, profile.color_max))
            elif fmt == "csv":
                buf = io.StringIO()
                w = csv_mod.writer(buf, lineterminator="\n")
                w.writerow(["dim", "label", "value", "constrained"])
                for r in rows:
                    w.writerow([str(r.dim), r.label, repr(r.value), int(r.constrained)])
                (out / "list.csv").write_text(buf.getvalue())
        for text in dims:
            system, _, code = text.partition(":")
            payload = session.dimension_payload(system, code)
            write(f"distribution_{system}_{code}.json", payload)
        write("session.json", session.export())
    except ValidationFailure:
        raise
    except (ValueError, KeyError) as exc:
        raise ValidationFailure(str(exc))
    click.echo(f"report written to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8787, show_default=True)
def serve(host, port):
    """Boot the HTTP service."""
    import uvicorn

    from cohortdrift.service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
