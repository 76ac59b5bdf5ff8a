"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .agents import DesignInput, run_generation_session, render_prompt, \
    synthesize_prompt
from .body import STANDARD_BODY, load_body
from .errors import GdslError, ValidationFailed
from .garments import assemble
from .pattern import (
    deserialize_pattern,
    pattern_stats,
    serialize_pattern,
    validate_pattern,
)
from .schema import (
    TokenSequence,
    default_config,
    default_schema,
    dequantize,
    load_config,
    quantize,
    validate_config,
)
from .svg import export_svg


def _fail(message: str, code: int = 1):
    click.echo(message, err=True)
    sys.exit(code)


def _load_body_opt(body_file: str | None):
    if body_file is None:
        return STANDARD_BODY
    return load_body(Path(body_file).read_text("utf-8"))


def _read_config(path: str):
    return load_config(Path(path).read_text("utf-8"))


@click.group()
def main():
    """gdsl: compile parametric design configurations into sewing patterns."""


@main.command("compile")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--svg", "svg_out", type=click.Path(dir_okay=False),
              help="write the pattern layout as SVG")
@click.option("--pattern", "pattern_out", type=click.Path(dir_okay=False),
              help="write the pattern document as JSON")
@click.option("--body", "body_file", type=click.Path(exists=True, dir_okay=False),
              help="measurements file (JSON), default: standard body")
def compile_cmd(config_file, svg_out, pattern_out, body_file):
    """Compile a configuration into a sewing pattern."""
    schema = default_schema()
    try:
        cfg = _read_config(config_file)
        body = _load_body_opt(body_file)
        pattern = assemble(cfg, body, schema)
    except ValidationFailed as exc:
        for v in exc.violations:
            click.echo(f"  {v.path}: {v.message}", err=True)
        _fail(f"error: {exc}")
    except GdslError as exc:
        _fail(f"error: {exc}")
    if svg_out:
        Path(svg_out).write_text(export_svg(pattern), "utf-8")
    if pattern_out:
        Path(pattern_out).write_text(serialize_pattern(pattern), "utf-8")
    stats = pattern_stats(pattern)
    click.echo(f"compiled: {stats.num_panels} panels, "
               f"{stats.mean_edges_per_panel:.2f} edges/panel, "
               f"{stats.num_stitches} stitches")


@main.command("validate")
@click.argument("document", type=click.Path(exists=True, dir_okay=False))
@click.option("--body", "body_file", type=click.Path(exists=True, dir_okay=False))
def validate_cmd(document, body_file):
    """Validate a configuration or pattern document."""
    schema = default_schema()
    text = Path(document).read_text("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"error: unreadable document: {exc}")
    try:
        if isinstance(doc, dict) and doc.get("format") == "gdsl-pattern":
            report = validate_pattern(deserialize_pattern(text))
            if report.passed:
                click.echo("OK: pattern is structurally valid")
                return
            for v in report.violations:
                click.echo(f"{v.code} @ {v.subject}: {v.message}", err=True)
            _fail(f"invalid pattern: {len(report.violations)} violations")
        else:
            violations = validate_config(load_config(text), schema)
            if not violations:
                click.echo("OK: configuration is valid")
                return
            for v in violations:
                click.echo(f"{v.reason} @ {v.path}: {v.message}", err=True)
            _fail(f"invalid configuration: {len(violations)} violations")
    except GdslError as exc:
        _fail(f"error: {exc}")


@main.command("tokenize")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
def tokenize_cmd(config_file):
    """Print the 122-token encoding of a configuration."""
    schema = default_schema()
    try:
        tokens = quantize(_read_config(config_file), schema)
    except ValidationFailed as exc:
        for v in exc.violations:
            click.echo(f"  {v.path}: {v.message}", err=True)
        _fail(f"error: {exc}")
    except GdslError as exc:
        _fail(f"error: {exc}")
    click.echo(" ".join(str(t) for t in tokens.tokens))


@main.command("detokenize")
@click.argument("tokens", nargs=-1, type=int)
def detokenize_cmd(tokens):
    """Decode 122 tokens (arguments or stdin) back into a configuration."""
    values = list(tokens)
    if not values:
        values = [int(t) for t in sys.stdin.read().split()]
    schema = default_schema()
    try:
        cfg = dequantize(TokenSequence(tuple(values)), schema)
    except GdslError as exc:
        _fail(f"error: {exc}")
    click.echo(cfg.to_json(schema), nl=False)


@main.command("stats")
@click.argument("pattern_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def stats_cmd(pattern_files):
    """Diversity statistics for one or more pattern documents."""
    import statistics

    rows = []
    for file in pattern_files:
        try:
            pattern = deserialize_pattern(Path(file).read_text("utf-8"))
        except GdslError as exc:
            _fail(f"error in {file}: {exc}")
        stats = pattern_stats(pattern)
        rows.append(stats)
        click.echo(f"{file}: panels={stats.num_panels} "
                   f"edges/panel={stats.mean_edges_per_panel:.4f} "
                   f"stitches={stats.num_stitches}")
    if len(rows) > 1:
        for name, values in (
            ("panels", [r.num_panels for r in rows]),
            ("edges/panel", [r.mean_edges_per_panel for r in rows]),
            ("stitches", [r.num_stitches for r in rows]),
        ):
            mean = statistics.fmean(values)
            std = statistics.pstdev(values)
            click.echo(f"aggregate {name}: mean={mean:.4f} std={std:.4f}")


@main.command("prompt")
def prompt_cmd():
    """Print the synthesized multiple-choice question set."""
    click.echo(render_prompt(synthesize_prompt(default_schema())), nl=False)


@main.command("session")
@click.argument("design")
@click.option("--agent", "agent_name", type=click.Choice(["mock", "remote"]),
              default="mock", show_default=True)
@click.option("--kind", type=click.Choice(["text", "image", "sketch"]),
              default="text", show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              help="directory for pattern.json / pattern.svg / transcript.json")
@click.option("--body", "body_file", type=click.Path(exists=True, dir_okay=False))
def session_cmd(design, agent_name, kind, out_dir, body_file):
    """Run one generation session from a design input (text or file path)."""
    from .agents import MockAgent, RemoteAgent, keyword_mock_table

    schema = default_schema()
    input_kind = {"text": "text", "image": "image-file",
                  "sketch": "sketch-file"}[kind]
    try:
        design_input = DesignInput(input_kind, design)
        if agent_name == "mock":
            agent = MockAgent(keyword_mock_table(design_input, schema))
        else:
            agent = RemoteAgent()
        result = run_generation_session(design_input, agent, schema,
                                        _load_body_opt(body_file))
    except GdslError as exc:
        _fail(f"error: {exc}")
    stats = pattern_stats(result.pattern)
    click.echo(f"generated: {stats.num_panels} panels, "
               f"{stats.num_stitches} stitches, "
               f"{len(result.transcript.rounds)} question rounds, "
               f"{len(result.transcript.defaulted)} defaulted")
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.json").write_text(result.config.to_json(schema), "utf-8")
        (out / "pattern.json").write_text(serialize_pattern(result.pattern), "utf-8")
        (out / "pattern.svg").write_text(export_svg(result.pattern), "utf-8")
        (out / "transcript.json").write_text(result.transcript.to_json(), "utf-8")
        click.echo(f"wrote {out}/config.json, pattern.json, pattern.svg, "
                   "transcript.json")
    else:
        click.echo(result.config.to_json(schema), nl=False)


@main.command("default-config")
def default_config_cmd():
    """Print the default configuration document."""
    schema = default_schema()
    click.echo(default_config(schema).to_json(schema), nl=False)


@main.command("serve")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=None,
              help="session directory [default: env GDSL_DATA_DIR or ./gdsl-data]")
@click.option("--body", "body_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--ui-dir", default=None,
              help="static web UI directory [default: env GDSL_UI_DIR]")
def serve_cmd(port, host, data_dir, body_file, ui_dir):
    """Serve the HTTP API (and the web UI, if built)."""
    import uvicorn

    from .service import create_app
    from .sessions import SessionStore

    data_dir = data_dir or os.environ.get("GDSL_DATA_DIR", "./gdsl-data")
    ui_dir = ui_dir or os.environ.get("GDSL_UI_DIR")
    store = SessionStore(data_dir, default_schema(), _load_body_opt(body_file))
    app = create_app(store, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
