"""Shot selection and prompt rendering: augmented 10-shot, zero-shot baseline,
and the extractive-QA baseline input format."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Mapping, Sequence

from .embedding import Embedder, rank_by_similarity
from .schema import (
    DATE,
    LIKERT,
    LONG_TEXT,
    MULTI_CHOICE,
    NUMBER,
    SHORT_TEXT,
    SINGLE_CHOICE,
    TIME_POINT,
    TIME_RANGE,
    FieldKind,
    FieldValue,
    TrackerSchema,
    render_value,
)
from .store import Sample, SampleStore

INSTRUCTION = (
    "Extract the field values for the tracker from the sentence. "
    "Only include fields the sentence specifies."
)
STOP_SEQUENCE = "\n###"

MAX_SHOTS = 10
MAX_USER_SHOTS = 8

ROLE_FARTHEST = "farthest"
ROLE_NEAREST = "nearest"
ROLE_USER = "user"

STYLE_AUGMENTED = "augmented"
STYLE_ZERO_SHOT = "zero_shot"
STYLE_QA = "qa"


@dataclass(frozen=True)
class Shot:
    sample: Sample
    role: str
    score: float | None = None


@dataclass(frozen=True)
class ShotPlan:
    shots: tuple[Shot, ...]
    query_tracker_id: str
    query_phrase: str
    reference_time: datetime | None = None


@dataclass(frozen=True)
class PromptBundle:
    text: str
    stop_sequence: str
    shot_plan: ShotPlan
    style: str


def shot_budget(k: int, available: int) -> tuple[int, int]:
    """Role budget (farthest, nearest) for k user shots and a seed view of the
    given size.

    User shots displace nearest slots first, but at least one nearest slot is
    kept while any seed budget remains; k is assumed capped at MAX_USER_SHOTS.
    """
    m = min(MAX_SHOTS - k, available)
    if m <= 0:
        return 0, 0
    nearest = min(max(1, 5 - k), m)
    return m - nearest, nearest


def select_shots(
    phrase: str,
    query_tracker_id: str,
    user_samples: Sequence[Sample],
    seed_view: SampleStore,
    embedder: Embedder,
    reference_time: datetime | None = None,
) -> ShotPlan:
    """Pick up to 10 in-context shots: farthest seeds, nearest seeds, then the
    user's own most recent samples adjacent to the query."""
    ordered_users = sorted(user_samples, key=lambda s: (s.item.created_at, s.sample_id))
    users = ordered_users[-MAX_USER_SHOTS:]
    k = len(users)

    ranked = rank_by_similarity(
        phrase, [(s.sample_id, s.phrase) for s in seed_view.samples], embedder
    )
    by_id = {s.sample_id: s for s in seed_view.samples}
    n_far, n_near = shot_budget(k, len(ranked))

    nearest = ranked[:n_near]
    farthest = ranked[len(ranked) - n_far :] if n_far else []

    shots: list[Shot] = []
    # Both seed blocks run in ascending similarity toward the query.
    for sid, score in reversed(farthest):
        shots.append(Shot(by_id[sid], ROLE_FARTHEST, score))
    for sid, score in reversed(nearest):
        shots.append(Shot(by_id[sid], ROLE_NEAREST, score))
    for sample in users:
        shots.append(Shot(sample, ROLE_USER, None))
    return ShotPlan(
        shots=tuple(shots),
        query_tracker_id=query_tracker_id,
        query_phrase=phrase,
        reference_time=reference_time,
    )


def descriptor(kind: FieldKind) -> str:
    k = kind.kind
    if k == NUMBER:
        return "number"
    if k == LIKERT:
        return f"scale {kind.min} to {kind.max}"
    if k == SINGLE_CHOICE:
        return "one of: " + " / ".join(kind.options)
    if k == MULTI_CHOICE:
        return "any of: " + " / ".join(kind.options)
    if k == SHORT_TEXT:
        return "short text"
    if k == LONG_TEXT:
        return "long text"
    if k == DATE:
        return "date"
    if k == TIME_POINT:
        return "time"
    if k == TIME_RANGE:
        return "time range"
    raise ValueError(f"unknown kind {k!r}")


def render_values_line(schema: TrackerSchema, values: Mapping[str, FieldValue]) -> str:
    """`Field = value | ...` in schema field order, only for present fields."""
    parts = [
        f"{f.name} = {render_value(values[f.name])}"
        for f in schema.all_fields()
        if f.name in values
    ]
    return " | ".join(parts)


def _fields_line(schema: TrackerSchema) -> str:
    return "Fields: " + "; ".join(
        f"{f.name} ({descriptor(f.kind)})" for f in schema.all_fields()
    )


def _shot_block(schema: TrackerSchema, sample: Sample) -> str:
    return "\n".join(
        [
            "###",
            f"Tracker: {schema.name}",
            _fields_line(schema),
            f"Sentence: {sample.phrase}",
            f"Values: {render_values_line(schema, sample.item.values)}",
        ]
    )


def _query_block(schema: TrackerSchema, phrase: str, reference_time: datetime | None) -> str:
    lines = ["###", f"Tracker: {schema.name}", _fields_line(schema)]
    if schema.time_field is not None and reference_time is not None:
        lines.append(f"Current time: {reference_time.strftime('%Y-%m-%dT%H:%M')}")
    lines.append(f"Sentence: {phrase}")
    lines.append("Values:")
    return "\n".join(lines)


def render_prompt(
    schema: TrackerSchema,
    shot_plan: ShotPlan,
    trackers: Mapping[str, TrackerSchema],
) -> PromptBundle:
    """Render the augmented prompt; each shot carries its own tracker header."""
    blocks = []
    for shot in shot_plan.shots:
        shot_schema = trackers[shot.sample.tracker_id]
        blocks.append(_shot_block(shot_schema, shot.sample))
    blocks.append(_query_block(schema, shot_plan.query_phrase, shot_plan.reference_time))
    text = INSTRUCTION + "\n\n" + "\n".join(blocks)
    return PromptBundle(text, STOP_SEQUENCE, shot_plan, STYLE_AUGMENTED)


def render_zero_shot_prompt(
    schema: TrackerSchema, phrase: str, reference_time: datetime | None = None
) -> PromptBundle:
    """Schema-only baseline prompt: instruction plus the query block."""
    plan = ShotPlan((), schema.tracker_id, phrase, reference_time)
    text = INSTRUCTION + "\n\n" + _query_block(schema, phrase, reference_time)
    return PromptBundle(text, STOP_SEQUENCE, plan, STYLE_ZERO_SHOT)


def render_qa_inputs(schema: TrackerSchema, phrase: str) -> list[tuple[str, str]]:
    """Extractive-QA baseline inputs, one per field, in schema order.

    Every field needs a description; choice and scale fields list their
    options in the prompt.
    """
    out = []
    for f in schema.all_fields():
        if not f.description:
            raise ValueError(f"field {f.name!r} needs a description for QA export")
        question = f.description.rstrip("?")
        prompt = f"extractive question: {question}? context: user: {phrase.lower()}"
        if f.kind.kind in (SINGLE_CHOICE, MULTI_CHOICE):
            prompt += " choices: " + " or ".join(f.kind.options)
        elif f.kind.kind == LIKERT:
            prompt += " choices: " + " or ".join(
                str(v) for v in range(f.kind.min, f.kind.max + 1)
            )
        out.append((f.name, prompt))
    return out
