import json
import statistics

import pytest
from click.testing import CliRunner

from gdsl.cli import main
from gdsl.pattern import EdgeRef, Pattern, Stitch, serialize_pattern
from gdsl.schema import default_config, default_schema

from conftest import bowtie_panel, square_panel


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def default_cfg_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "default.cfg"
    schema = default_schema()
    path.write_text(default_config(schema).to_json(schema), "utf-8")
    return str(path)


def test_tokenize_prints_122_integers(runner, default_cfg_file):
    result = runner.invoke(main, ["tokenize", default_cfg_file])
    assert result.exit_code == 0
    tokens = result.output.split()
    assert len(tokens) == 122
    assert all(t.isdigit() for t in tokens)


def test_detokenize_round_trip(runner, default_cfg_file):
    tokens = runner.invoke(main, ["tokenize", default_cfg_file]).output.split()
    result = runner.invoke(main, ["detokenize", *tokens])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    schema = default_schema()
    assert doc["assignments"]["meta.bottom.kind"] == "pants"
    assert len(doc["assignments"]) == len(schema)


def test_validate_valid_config_exit_zero(runner, default_cfg_file):
    result = runner.invoke(main, ["validate", default_cfg_file])
    assert result.exit_code == 0
    assert "OK" in result.output


def test_validate_bad_config_exit_one(runner, tmp_path):
    schema = default_schema()
    cfg = default_config(schema).replace({"bodice.length": -3})
    bad = tmp_path / "bad.cfg"
    bad.write_text(cfg.to_json(schema), "utf-8")
    result = runner.invoke(main, ["validate", str(bad)])
    assert result.exit_code == 1
    assert "out-of-range" in result.output


def test_validate_self_intersecting_pattern(runner, tmp_path):
    doc = serialize_pattern(Pattern(panels=(bowtie_panel(),)))
    path = tmp_path / "bowtie.pattern"
    path.write_text(doc, "utf-8")
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "PANEL_SELF_INTERSECT" in result.output


def test_compile_is_deterministic(runner, default_cfg_file, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert runner.invoke(main, ["compile", default_cfg_file,
                                "--svg", str(a)]).exit_code == 0
    assert runner.invoke(main, ["compile", default_cfg_file,
                                "--svg", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_compile_invalid_config_exit_one(runner, tmp_path):
    schema = default_schema()
    cfg = default_config(schema).replace({"sleeve.length": 99.0})
    bad = tmp_path / "bad.cfg"
    bad.write_text(cfg.to_json(schema), "utf-8")
    result = runner.invoke(main, ["compile", str(bad)])
    assert result.exit_code == 1


def test_usage_error_exit_two(runner):
    assert runner.invoke(main, ["no-such-command"]).exit_code == 2
    assert runner.invoke(main, ["compile"]).exit_code == 2


def test_prompt_lists_every_parameter(runner):
    result = runner.invoke(main, ["prompt"])
    assert result.exit_code == 0
    assert result.output.count("Which option best describes") == 122
    assert "full length" in result.output


def test_stats_aggregates_known_moments(runner, tmp_path):
    # synthetic corpus with known per-file counts
    files = []
    for i, n_panels in enumerate((1, 2, 3)):
        panels = tuple(square_panel(f"p{k}") for k in range(n_panels))
        stitches = tuple(
            Stitch(EdgeRef("p0", k), EdgeRef("p1", k)) for k in range(i))
        path = tmp_path / f"s{i}.pattern"
        path.write_text(serialize_pattern(Pattern(panels, stitches)), "utf-8")
        files.append(str(path))
    result = runner.invoke(main, ["stats", *files])
    assert result.exit_code == 0
    mean = statistics.fmean([1, 2, 3])
    std = statistics.pstdev([1, 2, 3])
    assert f"aggregate panels: mean={mean:.4f} std={std:.4f}" in result.output
    assert "aggregate stitches: mean=1.0000" in result.output


def test_session_mock_reacts_to_keywords(runner, tmp_path):
    out = tmp_path / "sess"
    result = runner.invoke(main, [
        "session", "a sleeveless top with a skirt", "--agent", "mock",
        "--out", str(out)])
    assert result.exit_code == 0
    config = json.loads((out / "config.json").read_text())
    assert config["assignments"]["meta.sleeves.enabled"] is False
    assert config["assignments"]["meta.bottom.kind"] == "skirt"
    assert (out / "pattern.svg").exists()
    assert (out / "transcript.json").exists()
