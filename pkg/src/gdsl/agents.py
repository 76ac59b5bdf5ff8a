"""The design-understanding loop: prompts, agents, and the generation session.

The session asks a pluggable agent one multiple-choice question per schema
parameter, validates the answers against the question space, re-asks only
the missing/invalid ones (at most twice), fills the rest with schema
defaults, projects the labels into a configuration and compiles it.
"""

from __future__ import annotations

import base64
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .body import STANDARD_BODY, BodyMeasurements
from .errors import AgentError, GdslError, InvalidArgument, SchemaError
from .garments import assemble
from .pattern import Pattern
from .schema import (
    DesignConfiguration,
    DesignSchema,
    ParamSpec,
    label_for_value,
    package_data,
    project_answers,
)

MAX_REASK_ROUNDS = 2  # initial ask + at most two validation loops


@dataclass(frozen=True)
class Question:
    param_path: str
    text: str
    choices: tuple[str, ...]

    def __post_init__(self):
        if len(self.choices) < 2:
            raise InvalidArgument(f"question for {self.param_path} needs >= 2 choices")


@dataclass(frozen=True)
class Prompt:
    preamble: str
    questions: tuple[Question, ...]


@dataclass(frozen=True)
class Answer:
    param_path: str
    label: str


@dataclass(frozen=True)
class DesignInput:
    """What the user supplied: a text description or a reference file."""

    kind: str  # text | image-file | sketch-file
    payload: str

    def __post_init__(self):
        if self.kind not in ("text", "image-file", "sketch-file"):
            raise InvalidArgument(f"unknown design input kind {self.kind!r}")
        if self.kind != "text":
            path = Path(self.payload)
            if not path.is_file() or not os.access(path, os.R_OK):
                raise InvalidArgument(f"design input file not readable: {self.payload}")


@dataclass(frozen=True)
class AnswerValidation:
    missing: tuple[str, ...]
    invalid: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.missing and not self.invalid


@dataclass
class TranscriptRound:
    round_index: int
    asked: list[str]
    received: list[tuple[str, str]]
    missing: list[str]
    invalid: list[tuple[str, str]]


@dataclass
class Transcript:
    input_kind: str
    input_summary: str
    rounds: list[TranscriptRound] = field(default_factory=list)
    defaulted: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        doc = {
            "input": {"kind": self.input_kind, "summary": self.input_summary},
            "rounds": [
                {"round": r.round_index, "asked": r.asked,
                 "received": [list(x) for x in r.received],
                 "missing": r.missing,
                 "invalid": [list(x) for x in r.invalid]}
                for r in self.rounds
            ],
            "defaulted": self.defaulted,
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2) + "\n"


@dataclass
class GenerationResult:
    pattern: Pattern
    config: DesignConfiguration
    transcript: Transcript


# --- prompt synthesis ---------------------------------------------------------

def choices_for(spec: ParamSpec) -> tuple[str, ...]:
    if spec.kind == "boolean":
        return ("yes", "no")
    if spec.kind == "select":
        return tuple(spec.options)
    if not spec.descriptive_buckets:
        raise SchemaError(
            f"{spec.path}: no options or descriptive buckets to ask about")
    return tuple(b.label for b in spec.descriptive_buckets)


def synthesize_prompt(schema: DesignSchema) -> Prompt:
    """One multiple-choice question per parameter, in schema order."""
    questions = []
    for spec in schema.params:
        subject = spec.description or spec.path.replace(".", " ")
        questions.append(Question(
            param_path=spec.path,
            text=f"Which option best describes {subject}? [{spec.path}]",
            choices=choices_for(spec)))
    return Prompt(preamble=package_data("prompt_preamble.txt"),
                  questions=tuple(questions))


def render_prompt(prompt: Prompt) -> str:
    lines = [prompt.preamble.rstrip(), ""]
    for i, q in enumerate(prompt.questions, start=1):
        lines.append(f"{i}. {q.text}")
        lines.append(f"   choices: {' | '.join(q.choices)}")
    return "\n".join(lines) + "\n"


def validate_answers(answers, schema: DesignSchema) -> AnswerValidation:
    """Compare answers against the complete question space."""
    labels: dict[str, str] = {}
    for ans in answers:
        labels[ans.param_path] = ans.label
    missing, invalid = [], []
    for spec in schema.params:
        if spec.path not in labels:
            missing.append(spec.path)
            continue
        allowed = {c.lower() for c in choices_for(spec)}
        if labels[spec.path].strip().lower() not in allowed:
            invalid.append((spec.path, labels[spec.path]))
    return AnswerValidation(tuple(missing), tuple(invalid))


# --- agents ---------------------------------------------------------------------

class MockAgent:
    """Deterministic table-driven agent for tests and offline runs.

    ``omit_rounds``/``invalid_rounds`` make it adversarial: a path is left
    unanswered (or answered with garbage) for that many rounds. Paths
    absent from the table are never answered at all.
    """

    def __init__(self, table: dict[str, str], *,
                 omit_rounds: dict[str, int] | None = None,
                 invalid_rounds: dict[str, int] | None = None,
                 edit_reply: str = ""):
        self.table = dict(table)
        self.omit_rounds = dict(omit_rounds or {})
        self.invalid_rounds = dict(invalid_rounds or {})
        self.edit_reply = edit_reply
        self.calls = 0
        self.question_log: list[list[str]] = []

    def answer_questions(self, questions, design: DesignInput) -> list[Answer]:
        round_index = self.calls
        self.calls += 1
        self.question_log.append([q.param_path for q in questions])
        out = []
        for q in questions:
            if self.omit_rounds.get(q.param_path, 0) > round_index:
                continue
            if self.invalid_rounds.get(q.param_path, 0) > round_index:
                out.append(Answer(q.param_path, "definitely maybe"))
                continue
            if q.param_path in self.table:
                out.append(Answer(q.param_path, self.table[q.param_path]))
        return out

    def suggest_edits(self, query: str, design: DesignInput) -> str:
        return self.edit_reply


def answers_for_config(cfg: DesignConfiguration,
                       schema: DesignSchema) -> dict[str, str]:
    """The full answer table whose projection reproduces ``cfg``."""
    return {spec.path: label_for_value(spec, cfg.get(spec.path))
            for spec in schema.params}


_KEYWORD_RULES = (
    ("layered skirt", {"meta.bottom.kind": "layered_skirt"}),
    ("tiered skirt", {"meta.bottom.kind": "layered_skirt"}),
    ("skirt", {"meta.bottom.kind": "skirt"}),
    ("dress", {"meta.bottom.kind": "skirt", "skirt.length": "midi"}),
    ("pants", {"meta.bottom.kind": "pants"}),
    ("trousers", {"meta.bottom.kind": "pants"}),
    ("jeans", {"meta.bottom.kind": "pants"}),
    ("shorts", {"meta.bottom.kind": "pants", "pants.length": "shorts"}),
    ("sleeveless", {"meta.sleeves.enabled": "no"}),
    ("short sleeve", {"sleeve.length": "half length"}),
    ("half sleeve", {"sleeve.length": "half length"}),
    ("long sleeve", {"sleeve.length": "full length"}),
    ("v-neck", {"neckline.kind": "v"}),
    ("v neck", {"neckline.kind": "v"}),
    ("boat neck", {"neckline.kind": "boat"}),
    ("square neck", {"neckline.kind": "square"}),
    ("turtleneck", {"collar.kind": "turtleneck"}),
    ("mandarin collar", {"collar.kind": "mandarin"}),
    ("band collar", {"collar.kind": "band"}),
    ("cuff", {"meta.cuffs.enabled": "yes"}),
)


def keyword_mock_table(design: DesignInput, schema: DesignSchema) -> dict[str, str]:
    """Default-config answers, nudged by keywords found in a text input.

    Purely a deterministic convenience so demo sessions react to their
    input; it is not a design-understanding model.
    """
    from .schema import default_config

    table = answers_for_config(default_config(schema), schema)
    if design.kind == "text":
        text = design.payload.lower()
        claimed: set[str] = set()
        for needle, updates in _KEYWORD_RULES:
            if needle not in text:
                continue
            # rules are ordered most-specific first; first claim per path wins
            fresh = {p: v for p, v in updates.items() if p not in claimed}
            table.update(fresh)
            claimed.update(fresh)
    return table


class RemoteAgent:
    """Chat-completion-style HTTP client for a hosted design agent.

    Base URL comes from ``GDSL_AGENT_URL``, the bearer token from
    ``GDSL_AGENT_TOKEN``. Replies must carry a label table (JSON object
    mapping parameter paths to choice labels) as the message content.
    """

    def __init__(self, base_url: str | None = None, token: str | None = None,
                 timeout: float = 60.0, retries: int = 2, transport=None):
        self.base_url = (base_url or os.environ.get("GDSL_AGENT_URL", "")).rstrip("/")
        if not self.base_url:
            raise AgentError("no agent endpoint configured (set GDSL_AGENT_URL)")
        self.token = token if token is not None else os.environ.get("GDSL_AGENT_TOKEN")
        self.retries = retries
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def _content_blocks(self, text: str, design: DesignInput) -> list[dict]:
        blocks: list[dict] = [{"type": "text", "text": text}]
        if design.kind != "text":
            raw = Path(design.payload).read_bytes()
            blocks.append({
                "type": "input_image",
                "name": Path(design.payload).name,
                "image_base64": base64.b64encode(raw).decode("ascii"),
            })
        else:
            blocks.append({"type": "text", "text": f"Design input: {design.payload}"})
        return blocks

    def _chat(self, blocks: list[dict]) -> str:
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        payload = {"messages": [{"role": "user", "content": blocks}]}
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = self._client.post(f"{self.base_url}/v1/chat/completions",
                                         json=payload, headers=headers)
                if resp.status_code >= 500:
                    last_error = AgentError(f"agent returned {resp.status_code}")
                    continue
                resp.raise_for_status()
                return resp.json()["choices"][0]["message"]["content"]
            except httpx.HTTPError as exc:
                last_error = exc
        raise AgentError(f"agent transport failed after retries: {last_error}")

    @staticmethod
    def _parse_label_table(text: str) -> dict[str, str]:
        stripped = re.sub(r"^```[a-z]*\n|\n```$", "", text.strip())
        try:
            table = json.loads(stripped)
            if isinstance(table, dict):
                return {str(k): str(v) for k, v in table.items()}
        except json.JSONDecodeError:
            pass
        table = {}
        for line in stripped.splitlines():
            if ":" in line:
                path, label = line.split(":", 1)
                table[path.strip()] = label.strip()
        if not table:
            raise AgentError("agent reply is not a parseable label table")
        return table

    def answer_questions(self, questions, design: DesignInput) -> list[Answer]:
        prompt = Prompt(preamble=package_data("prompt_preamble.txt"),
                        questions=tuple(questions))
        table = self._parse_label_table(
            self._chat(self._content_blocks(render_prompt(prompt), design)))
        return [Answer(path, label) for path, label in table.items()]

    def suggest_edits(self, query: str, design: DesignInput) -> str:
        return self._chat(self._content_blocks(query, design))


# --- the generation session -----------------------------------------------------

def run_generation_session(design: DesignInput, agent, schema: DesignSchema,
                           body: BodyMeasurements = STANDARD_BODY) -> GenerationResult:
    """Ask, validate, re-ask (bounded), default, project, assemble."""
    prompt = synthesize_prompt(schema)
    by_path = {q.param_path: q for q in prompt.questions}
    pending = list(prompt.questions)
    labels: dict[str, str] = {}
    transcript = Transcript(input_kind=design.kind,
                            input_summary=design.payload[:120])

    problems: list[str] = []
    for round_index in range(MAX_REASK_ROUNDS + 1):
        try:
            received = agent.answer_questions(pending, design)
        except GdslError:
            raise
        except Exception as exc:  # transport/driver failures become AgentError
            raise AgentError(f"agent failed while answering: {exc}") from exc
        for ans in received:
            if ans.param_path in by_path:
                labels[ans.param_path] = ans.label
            else:
                transcript.notes.append(
                    f"ignored answer for unknown parameter {ans.param_path!r}")
        validation = validate_answers(
            [Answer(p, l) for p, l in labels.items()], schema)
        transcript.rounds.append(TranscriptRound(
            round_index=round_index,
            asked=[q.param_path for q in pending],
            received=[(a.param_path, a.label) for a in received],
            missing=list(validation.missing),
            invalid=[tuple(x) for x in validation.invalid],
        ))
        problems = list(validation.missing) + [p for p, _ in validation.invalid]
        if not problems:
            break
        pending = [by_path[p] for p in problems]

    final_answers = []
    defaulted = set(problems)
    for spec in schema.params:
        if spec.path in defaulted or spec.path not in labels:
            final_answers.append(Answer(spec.path, label_for_value(spec, spec.default)))
            transcript.defaulted.append(spec.path)
            transcript.notes.append(
                f"parameter {spec.path} unanswered after "
                f"{len(transcript.rounds)} rounds; using schema default")
        else:
            final_answers.append(Answer(spec.path, labels[spec.path]))

    config = project_answers(final_answers, schema)
    try:
        pattern = assemble(config, body, schema)
    except GdslError as exc:
        exc.transcript = transcript  # let callers inspect what was asked
        raise
    return GenerationResult(pattern=pattern, config=config, transcript=transcript)


def refinement_round(result: GenerationResult, agent, schema: DesignSchema,
                     design: DesignInput | None = None) -> list:
    """Ask the agent to compare input and output; parse its edit suggestions."""
    from .edits import parse_edit_instruction
    from .errors import ParseError

    design = design or DesignInput("text", result.transcript.input_summary)
    summary = "\n".join(
        f"{spec.path}: {result.config.get(spec.path)}"
        for spec in schema.params if spec.role == "topological")
    query = (package_data("comparison_prompt.txt")
             + "\nCurrent design summary:\n" + summary + "\n")
    try:
        reply = agent.suggest_edits(query, design)
    except GdslError:
        raise
    except Exception as exc:
        raise AgentError(f"agent failed while comparing designs: {exc}") from exc

    commands = []
    for line in reply.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            commands.append(parse_edit_instruction(line))
        except ParseError as exc:
            result.transcript.notes.append(
                f"dropped unparseable suggestion {line!r}: {exc}")
    return commands
