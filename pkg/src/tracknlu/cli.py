"""Command-line entry points: extract, eval, serve, and seed-corpus tooling."""

from __future__ import annotations

import json
import sys
from datetime import datetime
from pathlib import Path

import click

from .embedding import make_embedder
from .gateway import CompletionRequest, GatewayError, make_backend
from .harness import EvalConfig, emit_report, export_qa_inputs, run_simulation
from .postprocess import coerce, parse_completion
from .prompting import render_prompt, select_shots
from .schema import values_to_wire
from .service import ServiceConfig, create_app, default_fixture_paths
from .store import StoreError, generate_seed_drafts, load_store, sample_to_record


def _load(schemas: str | None, samples: str | None):
    if not schemas or not samples:
        schemas, samples = default_fixture_paths()
    return load_store(schemas, samples)


@click.group()
def main() -> None:
    """Natural-language data capture for self-tracking."""


@main.command()
@click.option("--tracker", "tracker_id", required=True)
@click.option("--phrase", required=True)
@click.option("--schemas", type=click.Path(exists=True), default=None)
@click.option("--samples", type=click.Path(exists=True), default=None)
@click.option("--backend", "backend_spec", default="live", show_default=True)
@click.option("--time", "reference_time", default=None, help="Reference time, YYYY-MM-DDTHH:MM.")
def extract(tracker_id, phrase, schemas, samples, backend_spec, reference_time):
    """Run one extraction pass and print the result with its shot audit."""
    store = _load(schemas, samples)
    schema = store.trackers.get(tracker_id)
    if schema is None:
        raise click.ClickException(f"unknown tracker {tracker_id!r}")
    embedder = make_embedder()
    backend = make_backend(backend_spec)
    ref = datetime.strptime(reference_time, "%Y-%m-%dT%H:%M") if reference_time else None
    plan = select_shots(phrase, tracker_id, [], store, embedder, reference_time=ref)
    bundle = render_prompt(schema, plan, store.trackers)
    try:
        completion = backend.complete(
            CompletionRequest(prompt=bundle.text, stop_sequence=bundle.stop_sequence)
        )
    except GatewayError as exc:
        raise click.ClickException(f"backend failure: {exc}")
    result = coerce(schema, parse_completion(completion.text), embedder, completion.text)
    click.echo(f"Tracker: {schema.name}")
    for name, wire in values_to_wire(result.values).items():
        click.echo(f"  {name} = {wire}")
    for d in result.dropped:
        click.echo(f"  dropped {d.raw_name!r}: {d.reason}")
    click.echo("Shot audit:")
    for shot in plan.shots:
        score = f" score={shot.score:.4f}" if shot.score is not None else ""
        click.echo(f"  [{shot.role}] {shot.sample.sample_id} ({shot.sample.tracker_id}){score}")


@main.command(name="eval")
@click.option("--schemas", type=click.Path(exists=True), default=None)
@click.option("--samples", type=click.Path(exists=True), default=None)
@click.option("--styles", default="augmented", show_default=True)
@click.option("--shots", default="0,1,2,3,4", show_default=True)
@click.option("--backend", "backend_spec", default="live", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["table", "structured"]), default="table")
@click.option("--export-qa", "export_qa", type=click.Path(), default=None,
              help="Write the QA-baseline input file instead of running the simulation.")
def eval_cmd(schemas, samples, styles, shots, backend_spec, seed, out, fmt, export_qa):
    """Run the leave-one-tracker-out N-shot simulation and emit a report."""
    store = _load(schemas, samples)
    if export_qa:
        count = export_qa_inputs(store, export_qa)
        click.echo(f"wrote {count} QA prompts to {export_qa}")
        return
    style_map = {"augmented": "augmented", "zeroshot": "zero_shot", "zero_shot": "zero_shot"}
    try:
        style_tuple = tuple(style_map[s.strip()] for s in styles.split(",") if s.strip())
    except KeyError as exc:
        raise click.ClickException(f"unknown style {exc.args[0]!r}")
    config = EvalConfig(
        styles=style_tuple,
        n_shots=tuple(int(n) for n in shots.split(",") if n.strip()),
        seed=seed,
    )
    embedder = make_embedder()
    backend = make_backend(backend_spec)
    report = run_simulation(store, config, backend, embedder)
    rendered = emit_report(report, fmt)
    if out:
        Path(out).write_text(rendered, encoding="utf-8")
        click.echo(f"wrote report ({report.total_runs} runs) to {out}")
    else:
        click.echo(rendered, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--store-dir", envvar="STORE_DIR", required=True)
@click.option("--backend", "backend_spec", default="live", show_default=True)
@click.option("--schemas", type=click.Path(exists=True), default=None)
@click.option("--samples", type=click.Path(exists=True), default=None)
def serve(host, port, store_dir, backend_spec, schemas, samples):
    """Start the HTTP capture service."""
    import uvicorn

    config = ServiceConfig(
        store_dir=store_dir,
        backend_spec=backend_spec,
        schemas_path=schemas,
        samples_path=samples,
    )
    uvicorn.run(create_app(config), host=host, port=port)


@main.group()
def seeds() -> None:
    """Seed-corpus tooling."""


@seeds.command()
@click.argument("schemas", type=click.Path(exists=True))
@click.argument("samples", type=click.Path(exists=True))
def validate(schemas, samples):
    """Validate a seed corpus; exits nonzero on any violation."""
    try:
        store = load_store(schemas, samples)
    except StoreError as exc:
        click.echo(f"invalid: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ok: {len(store.trackers)} trackers, {len(store.samples)} samples")


@seeds.command()
@click.option("--tracker", "tracker_id", required=True)
@click.option("--count", type=int, default=3, show_default=True)
@click.option("--backend", "backend_spec", default="live", show_default=True)
@click.option("--schemas", type=click.Path(exists=True), default=None)
@click.option("--samples", type=click.Path(exists=True), default=None)
def draft(tracker_id, count, backend_spec, schemas, samples):
    """Generate uncurated draft samples for a tracker (curate before use)."""
    store = _load(schemas, samples)
    schema = store.trackers.get(tracker_id)
    if schema is None:
        raise click.ClickException(f"unknown tracker {tracker_id!r}")
    backend = make_backend(backend_spec)
    try:
        result = generate_seed_drafts(schema, count, backend)
    except (GatewayError, ValueError) as exc:
        raise click.ClickException(str(exc))
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    for sample in result.drafts:
        click.echo(json.dumps(sample_to_record(sample), ensure_ascii=False))


if __name__ == "__main__":
    main()
