"""Command-line interface.

Thin wrappers over the library: every subcommand reads/writes the documented
file formats and prints either DOT, an edit string, or JSON.
"""

from __future__ import annotations

import json
import random
import sys

import click

from . import dataset as ds
from .config import Config, load_config
from .correctors import ExternalModelCorrector, KeywordCorrector, NoopCorrector, RetrievalCorrector
from .edits import parse_edit, serialize_edit
from .engine import apply_edit, diff
from .graph import numbered_steps, parse_dot, serialize_dot
from .harness import FeedbackMode, emit_curve, run_eval, run_stream
from .memory import FeedbackMemory, HashingEmbedder
from .synthetic import bundled_corpus, reuse_stream


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _corrector(name: str, cfg: Config):
    if name == "noop":
        return NoopCorrector()
    if name == "keyword":
        return KeywordCorrector()
    if name == "retrieval":
        return RetrievalCorrector()
    if name == "external":
        if not cfg.external_corrector_url:
            raise click.UsageError("corrector 'external' needs external_corrector_url in config or environment")
        return ExternalModelCorrector(cfg.external_corrector_url, timeout=cfg.http_timeout)
    raise click.UsageError(f"unknown corrector {name!r}")


def _load_corpus(spec: str) -> list[ds.EvalTuple]:
    if spec == "synthetic":
        return bundled_corpus()
    return ds.load(spec)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="key=value config file")
@click.pass_context
def main(ctx: click.Context, config_path: str | None):
    """Repair partial-order scripts from natural-language feedback."""
    ctx.obj = load_config(config_path)


@main.command("parse")
@click.argument("dot_file", type=str)
def parse_cmd(dot_file: str):
    """Parse a DOT file ('-' for stdin) and print the linearized steps."""
    script = parse_dot(_read_text(dot_file))
    if script.goal:
        click.echo(f"goal: {script.goal}")
    for line in numbered_steps(script):
        click.echo(line)


@main.command("apply")
@click.argument("dot_file", type=str)
@click.argument("edit", type=str)
def apply_cmd(dot_file: str, edit: str):
    """Apply EDIT to the script in DOT_FILE; repaired DOT goes to stdout."""
    script = parse_dot(_read_text(dot_file))
    click.echo(serialize_dot(apply_edit(script, parse_edit(edit))))


@main.command("diff")
@click.argument("dot_before", type=str)
@click.argument("dot_after", type=str)
def diff_cmd(dot_before: str, dot_after: str):
    """Print the single edit that takes DOT_BEFORE to DOT_AFTER."""
    x = parse_dot(_read_text(dot_before))
    y = parse_dot(_read_text(dot_after))
    click.echo(serialize_edit(diff(x, y)))


@main.command("validate")
@click.argument("dataset_file", type=click.Path(exists=True, dir_okay=False))
def validate_cmd(dataset_file: str):
    """Check every tuple in a JSONL dataset; exit 1 if any are invalid."""
    problems = ds.validate_file(dataset_file)
    for problem in problems:
        click.echo(problem, err=True)
    count = len(ds.load(dataset_file, strict=False))
    click.echo(f"{count} valid tuples, {len(problems)} problems")
    if problems:
        raise SystemExit(1)


@main.command("import")
@click.argument("source_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@click.option("--quarantine", type=click.Path(dir_okay=False), default=None, help="where rejected records go")
def import_cmd(source_file: str, out_file: str, quarantine: str | None):
    """Convert a published-layout file into the canonical tuple format."""
    tuples = ds.import_published(source_file, quarantine_path=quarantine)
    ds.save(out_file, tuples)
    click.echo(f"imported {len(tuples)} tuples -> {out_file}")


@main.command("perturb")
@click.argument("dataset_file", type=str)
@click.argument("out_file", type=click.Path(dir_okay=False))
@click.option("--table", "table_file", type=click.Path(exists=True, dir_okay=False), default=None, help="perturbation table JSON (default: bundled)")
@click.option("--seed", type=int, default=0, show_default=True)
def perturb_cmd(dataset_file: str, out_file: str, table_file: str | None, seed: int):
    """Build perturbed twins of DATASET_FILE ('synthetic' for the bundled corpus)."""
    sources = _load_corpus(dataset_file)
    table = ds.PerturbationTable.load(table_file) if table_file else ds.PerturbationTable.bundled()
    twins = ds.build_iset(sources, table, seed=seed)
    ds.save(out_file, twins)
    click.echo(f"{len(twins)} of {len(sources)} tuples survived perturbation -> {out_file}")


@main.command("eval")
@click.option("--corpus", default="synthetic", show_default=True, help="tuple JSONL path, or 'synthetic'")
@click.option("--mode", type=click.Choice([m.value for m in FeedbackMode]), default="true_fb", show_default=True)
@click.option("--corrector", default=None, help="noop | keyword | retrieval | external (default from config)")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="also write the per-error-type CSV here")
@click.pass_obj
def eval_cmd(cfg: Config, corpus: str, mode: str, corrector: str | None, csv_path: str | None):
    """Score a corrector over a corpus; the report prints as JSON."""
    tuples = _load_corpus(corpus)
    run = run_eval(tuples, _corrector(corrector or cfg.default_corrector, cfg), FeedbackMode(mode), distractor_k=cfg.distractor_k)
    click.echo(run.report.to_json())
    if run.infrastructure_failures:
        click.echo(f"infrastructure failures: {run.infrastructure_failures}", err=True)
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(run.report.by_error_type_csv())


@main.command("simulate")
@click.option("--corpus", default="synthetic", show_default=True, help="tuple JSONL path, or 'synthetic' for the reuse stream")
@click.option("--corrector", default="retrieval", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="stream order seed")
@click.option("--write-gold/--no-write-gold", default=True, show_default=True, help="bank gold feedback after each episode")
@click.option("--curve", "curve_path", type=click.Path(dir_okay=False), default=None, help="write the learning-curve CSV here")
@click.pass_obj
def simulate_cmd(cfg: Config, corpus: str, corrector: str, seed: int, write_gold: bool, curve_path: str | None):
    """Stream a corpus against a growing memory and report the run."""
    if corpus == "synthetic":
        tuples = reuse_stream(seed=seed)
    else:
        tuples = ds.load(corpus)
        random.Random(seed).shuffle(tuples)
    memory = FeedbackMemory(embedder=HashingEmbedder(cfg.embedding_dim), threshold=cfg.similarity_threshold, path=cfg.memory_path)
    result = run_stream(tuples, _corrector(corrector, cfg), memory, write_gold=write_gold)
    click.echo(result.run.report.to_json())
    click.echo(f"memory size after run: {len(memory)}", err=True)
    if curve_path:
        with open(curve_path, "w", encoding="utf-8") as fh:
            fh.write(emit_curve(result.events))


@main.command("serve")
@click.option("--host", default=None, help="override config host")
@click.option("--port", type=int, default=None, help="override config port")
@click.pass_obj
def serve_cmd(cfg: Config, host: str | None, port: int | None):
    """Run the HTTP service."""
    from .service import serve

    if host:
        cfg.host = host
    if port:
        cfg.port = port
    serve(cfg)


if __name__ == "__main__":
    main()
