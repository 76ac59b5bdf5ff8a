import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdsl.errors import (
    ProjectionError,
    SchemaError,
    TokenDomainError,
    ValidationFailed,
)
from gdsl.schema import (
    Bucket,
    DesignConfiguration,
    DesignSchema,
    DressCodeSeqParams,
    ParamSpec,
    default_config,
    default_schema,
    dequantize,
    dresscode_seq_len,
    load_schema,
    quantize,
    schema_to_doc,
    validate_config,
    value_for_label,
)


@pytest.fixture(scope="module")
def schema():
    return default_schema()


@pytest.fixture
def cfg(schema):
    return default_config(schema)


def pad_params(*specs) -> tuple:
    """Pad explicit ParamSpecs with generic floats up to the 122 count."""
    fillers = tuple(
        ParamSpec(path=f"pad.p{i}", kind="float", role="geometrical",
                  default=0.0, range=(0.0, 1.0),
                  descriptive_buckets=(Bucket("low", 0.0), Bucket("high", 1.0)))
        for i in range(122 - len(specs)))
    return tuple(specs) + fillers


# --- schema loading ----------------------------------------------------------

def test_shipped_schema_has_122_params(schema):
    assert len(schema) == 122
    assert len(schema.paths()) == len(set(schema.paths()))


def test_roles_split_topological_geometrical(schema):
    roles = {p.role for p in schema.params}
    assert roles == {"topological", "geometrical"}
    topo = [p.path for p in schema.params if p.role == "topological"]
    assert "meta.sleeves.enabled" in topo
    assert "meta.bottom.kind" in topo


def test_wrong_param_count_rejected():
    with pytest.raises(SchemaError, match="WRONG_PARAM_COUNT"):
        DesignSchema(params=pad_params()[:121])


def test_single_option_select_rejected():
    with pytest.raises(SchemaError):
        ParamSpec(path="x.kind", kind="select", role="geometrical",
                  default="only", options=("only",))


def test_bad_range_rejected():
    with pytest.raises(SchemaError):
        ParamSpec(path="x.len", kind="float", role="geometrical",
                  default=1.0, range=(5.0, 5.0),
                  descriptive_buckets=(Bucket("a", 5.0), Bucket("b", 5.0)))


def test_duplicate_paths_rejected():
    spec = ParamSpec(path="dup.flag", kind="boolean", role="geometrical",
                     default=False)
    params = pad_params(spec)[:121] + (spec,)
    with pytest.raises(SchemaError, match="duplicate"):
        DesignSchema(params=params)


def test_bucket_out_of_range_rejected():
    with pytest.raises(SchemaError):
        ParamSpec(path="x.len", kind="float", role="geometrical",
                  default=1.0, range=(0.0, 2.0),
                  descriptive_buckets=(Bucket("a", 1.0), Bucket("b", 9.0)))


def test_schema_document_round_trip(schema):
    import yaml
    doc = schema_to_doc(schema)
    again = load_schema(yaml.safe_dump(doc))
    assert again == schema


# --- validate_config ---------------------------------------------------------

def test_default_config_is_valid(cfg, schema):
    assert validate_config(cfg, schema) == []


def test_out_of_range_flagged(cfg, schema):
    bad = cfg.replace({"bodice.length": -5})
    violations = validate_config(bad, schema)
    assert [(v.path, v.reason) for v in violations] == [("bodice.length", "out-of-range")]


def test_missing_param_flagged(cfg, schema):
    assignments = dict(cfg.assignments)
    del assignments["collar.kind"]
    violations = validate_config(DesignConfiguration(assignments), schema)
    assert [(v.path, v.reason) for v in violations] == [("collar.kind", "missing")]


def test_unknown_path_flagged(cfg, schema):
    bad = cfg.replace({"hat.size": 7})
    assert ("hat.size", "unknown-path") in [
        (v.path, v.reason) for v in validate_config(bad, schema)]


def test_wrong_kind_flagged(cfg, schema):
    bad = cfg.replace({"meta.sleeves.enabled": "yes"})
    assert ("meta.sleeves.enabled", "wrong-kind") in [
        (v.path, v.reason) for v in validate_config(bad, schema)]


# --- quantize / dequantize ---------------------------------------------------

def test_quantize_boolean_true_is_one(cfg, schema):
    tokens = quantize(cfg, schema)
    idx = schema.paths().index("meta.upper.enabled")
    assert cfg.get("meta.upper.enabled") is True
    assert tokens.tokens[idx] == 1


def test_quantize_float_midpoint():
    spec = ParamSpec(path="len.cm", kind="float", role="geometrical",
                     default=20.0, range=(20.0, 120.0),
                     descriptive_buckets=(Bucket("short", 20.0), Bucket("long", 120.0)))
    schema = DesignSchema(params=pad_params(spec))
    cfg = default_config(schema).replace({"len.cm": 70.0})
    assert quantize(cfg, schema).tokens[0] == 50


def test_quantize_select_zero_based_index():
    spec = ParamSpec(path="sleeve.length_class", kind="select", role="geometrical",
                     default="full length",
                     options=("full length", "half length", "three-quarter length"))
    schema = DesignSchema(params=pad_params(spec))
    cfg = default_config(schema).replace({"sleeve.length_class": "three-quarter length"})
    assert quantize(cfg, schema).tokens[0] == 2


def test_quantize_emits_122_tokens(cfg, schema):
    assert len(quantize(cfg, schema)) == 122


def test_quantize_rejects_invalid_config(cfg, schema):
    with pytest.raises(ValidationFailed):
        quantize(cfg.replace({"bodice.length": 9999}), schema)


def test_quantize_order_stable_under_assignment_permutation(cfg, schema):
    shuffled = list(cfg.assignments.items())
    random.Random(4).shuffle(shuffled)
    assert quantize(DesignConfiguration(dict(shuffled)), schema) == quantize(cfg, schema)


def test_dequantize_float_inverse():
    spec = ParamSpec(path="len.cm", kind="float", role="geometrical",
                     default=20.0, range=(20.0, 120.0),
                     descriptive_buckets=(Bucket("short", 20.0), Bucket("long", 120.0)))
    schema = DesignSchema(params=pad_params(spec))
    tokens = quantize(default_config(schema).replace({"len.cm": 70.0}), schema)
    assert dequantize(tokens, schema).get("len.cm") == pytest.approx(70.0)


def test_dequantize_select_token_out_of_domain(cfg, schema):
    tokens = list(quantize(cfg, schema).tokens)
    idx = schema.paths().index("neckline.kind")  # 4 options
    tokens[idx] = 7
    from gdsl.schema import TokenSequence
    with pytest.raises(TokenDomainError) as err:
        dequantize(TokenSequence(tuple(tokens)), schema)
    assert err.value.index == idx


def test_round_trip_exact_for_discrete_and_close_for_floats(cfg, schema):
    back = dequantize(quantize(cfg, schema), schema)
    assert validate_config(back, schema) == []
    for spec in schema.params:
        a, b = cfg.get(spec.path), back.get(spec.path)
        if spec.kind == "float":
            lo, hi = spec.range
            # 1e-9 headroom: at the rounding boundary the error equals the
            # bound exactly, modulo float representation
            assert abs(a - b) <= (hi - lo) / 200 + 1e-9
        else:
            assert a == b


def test_all_admissible_tokens_round_trip(schema):
    base = list(quantize(default_config(schema), schema).tokens)
    from gdsl.schema import TokenSequence
    for i, spec in enumerate(schema.params):
        lo, hi = spec.token_domain()
        for t in range(lo, hi + 1):
            probe = list(base)
            probe[i] = t
            seq = TokenSequence(tuple(probe))
            again = quantize(dequantize(seq, schema), schema)
            assert again.tokens[i] == t, f"{spec.path} token {t}"


@given(st.integers(0, 100))
@settings(max_examples=40, deadline=None)
def test_float_token_lattice_identity(token):
    spec = ParamSpec(path="len.cm", kind="float", role="geometrical",
                     default=20.0, range=(20.0, 120.0),
                     descriptive_buckets=(Bucket("short", 20.0), Bucket("long", 120.0)))
    schema = DesignSchema(params=pad_params(spec))
    from gdsl.schema import TokenSequence
    base = list(quantize(default_config(schema), schema).tokens)
    base[0] = token
    seq = TokenSequence(tuple(base))
    assert quantize(dequantize(seq, schema), schema).tokens[0] == token


# --- projection --------------------------------------------------------------

def test_project_bucket_label_to_representative_value(schema):
    spec = schema.param("sleeve.length")
    assert value_for_label(spec, "half length") == 0.5
    assert value_for_label(spec, "three-quarter length") == 0.75


def test_project_relative_bucket_table():
    lo, hi = 10.0, 50.0
    spec = ParamSpec(
        path="x.len", kind="float", role="geometrical", default=lo + 0.5 * (hi - lo),
        range=(lo, hi),
        descriptive_buckets=(Bucket("half", lo + 0.5 * (hi - lo)),
                             Bucket("three-quarter", lo + 0.75 * (hi - lo)),
                             Bucket("full", hi)))
    assert value_for_label(spec, "half") == lo + 0.5 * (hi - lo)


def test_project_yes_to_true(schema):
    assert value_for_label(schema.param("meta.sleeves.enabled"), "yes") is True


def test_project_select_label_is_option(schema):
    assert value_for_label(schema.param("collar.kind"), "mandarin") == "mandarin"
    assert schema.param("collar.kind").options.index("mandarin") == 2


def test_project_unknown_label_raises(schema):
    with pytest.raises(ProjectionError):
        value_for_label(schema.param("sleeve.length"), "extra long")


def test_project_answers_full_set(schema):
    from gdsl.agents import Answer
    from gdsl.schema import label_for_value, project_answers
    cfg = default_config(schema)
    answers = [Answer(p.path, label_for_value(p, cfg.get(p.path)))
               for p in schema.params]
    assert project_answers(answers, schema).assignments == cfg.assignments


# --- DressCode sequence length -----------------------------------------------

def test_dresscode_reference_value():
    assert dresscode_seq_len(DressCodeSeqParams(37, 37, 6)) == 13951


def test_dresscode_small_cases():
    assert dresscode_seq_len(DressCodeSeqParams(1, 1, 4)) == 17
    assert dresscode_seq_len(DressCodeSeqParams(2, 3, 6)) == 76


def test_fixed_length_representation_is_compact(schema):
    ratio = dresscode_seq_len(DressCodeSeqParams(37, 37, 6)) / len(schema)
    assert ratio > 114
    assert ratio >= 10
