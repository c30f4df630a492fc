"""Seed and user sample store: loading, leave-one-tracker-out views, and
synthetic draft generation."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterable

from .gateway import CompletionBackend, CompletionRequest
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
    FieldValue,
    Item,
    TrackerSchema,
    schema_from_record,
    schema_to_record,
    validate_item,
    validate_tracker,
    values_from_wire,
    values_to_wire,
)

SYNTHETIC = "synthetic"
USER = "user"
ORIGINS = (SYNTHETIC, USER)

_EPOCH = datetime(1970, 1, 1)


class StoreError(ValueError):
    """Parse, cross-reference, or validation failure while loading a store."""


@dataclass(frozen=True)
class Sample:
    sample_id: str
    tracker_id: str
    phrase: str
    item: Item
    origin: str = SYNTHETIC


@dataclass(frozen=True)
class SampleStore:
    """Immutable snapshot of trackers and their samples."""

    trackers: dict[str, TrackerSchema]
    samples: tuple[Sample, ...]
    index: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            idx: dict[str, list[int]] = {}
            for i, s in enumerate(self.samples):
                idx.setdefault(s.tracker_id, []).append(i)
            object.__setattr__(self, "index", {k: tuple(v) for k, v in idx.items()})


def sample_to_record(sample: Sample) -> dict:
    return {
        "sample_id": sample.sample_id,
        "tracker_id": sample.tracker_id,
        "phrase": sample.phrase,
        "values": values_to_wire(sample.item.values),
        "origin": sample.origin,
        "created_at": sample.item.created_at.strftime("%Y-%m-%dT%H:%M"),
    }


def sample_from_record(rec: dict, schema: TrackerSchema) -> Sample:
    created_raw = rec.get("created_at")
    created_at = datetime.strptime(created_raw, "%Y-%m-%dT%H:%M") if created_raw else _EPOCH
    item = Item(
        item_id=rec["sample_id"],
        tracker_id=rec["tracker_id"],
        values=values_from_wire(schema, rec.get("values", {})),
        created_at=created_at,
        source_phrase=rec.get("phrase"),
    )
    return Sample(
        sample_id=rec["sample_id"],
        tracker_id=rec["tracker_id"],
        phrase=rec.get("phrase", ""),
        item=item,
        origin=rec.get("origin", SYNTHETIC),
    )


def _check_sample(sample: Sample, schema: TrackerSchema, where: str) -> Sample:
    if not sample.phrase.strip():
        raise StoreError(f"{where}: sample {sample.sample_id!r} has an empty phrase")
    if sample.origin not in ORIGINS:
        raise StoreError(f"{where}: sample {sample.sample_id!r} has unknown origin {sample.origin!r}")
    item, violations = validate_item(schema, sample.item)
    if violations:
        details = "; ".join(str(v) for v in violations)
        raise StoreError(f"{where}: sample {sample.sample_id!r} invalid: {details}")
    assert item is not None
    return replace(sample, item=item)


def load_store(schema_path: str | Path, sample_path: str | Path) -> SampleStore:
    """Load and fully validate a store; any invalid record fails the whole load."""
    trackers: dict[str, TrackerSchema] = {}
    for lineno, line in _read_lines(schema_path):
        try:
            rec = json.loads(line)
            schema = schema_from_record(rec)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise StoreError(f"{schema_path}:{lineno}: bad tracker record: {exc}") from None
        violations = validate_tracker(schema)
        if violations:
            details = "; ".join(str(v) for v in violations)
            raise StoreError(f"{schema_path}:{lineno}: tracker {schema.tracker_id!r} invalid: {details}")
        if schema.tracker_id in trackers:
            raise StoreError(f"{schema_path}:{lineno}: duplicate tracker id {schema.tracker_id!r}")
        trackers[schema.tracker_id] = schema

    samples: list[Sample] = []
    seen_ids: set[str] = set()
    for lineno, line in _read_lines(sample_path):
        where = f"{sample_path}:{lineno}"
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StoreError(f"{where}: bad sample record: {exc}") from None
        tracker_id = rec.get("tracker_id")
        schema = trackers.get(tracker_id)
        if schema is None:
            raise StoreError(
                f"{where}: sample {rec.get('sample_id')!r} references missing tracker {tracker_id!r}"
            )
        try:
            sample = sample_from_record(rec, schema)
        except (KeyError, TypeError, ValueError) as exc:
            raise StoreError(
                f"{where}: sample {rec.get('sample_id')!r} invalid: {exc}"
            ) from None
        if sample.sample_id in seen_ids:
            raise StoreError(f"{where}: duplicate sample id {sample.sample_id!r}")
        seen_ids.add(sample.sample_id)
        samples.append(_check_sample(sample, schema, where))
    return SampleStore(trackers=trackers, samples=tuple(samples))


def save_store(store: SampleStore, schema_path: str | Path, sample_path: str | Path) -> None:
    """Write a store back to line-delimited files with canonical key ordering."""
    with open(schema_path, "w", encoding="utf-8") as fh:
        for schema in store.trackers.values():
            fh.write(json.dumps(schema_to_record(schema), ensure_ascii=False) + "\n")
    with open(sample_path, "w", encoding="utf-8") as fh:
        for sample in store.samples:
            fh.write(json.dumps(sample_to_record(sample), ensure_ascii=False) + "\n")


def _read_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                yield lineno, line


def exclude_tracker(store: SampleStore, tracker_id: str) -> SampleStore:
    """Leave-one-tracker-out view: all samples except the given tracker's."""
    if tracker_id not in store.trackers:
        raise KeyError(f"unknown tracker {tracker_id!r}")
    kept = tuple(s for s in store.samples if s.tracker_id != tracker_id)
    return SampleStore(trackers=store.trackers, samples=kept)


def samples_for_tracker(
    store: SampleStore, tracker_id: str, origin: str | None = None
) -> list[Sample]:
    """Samples of one tracker in stable chronological order."""
    if tracker_id not in store.trackers:
        raise KeyError(f"unknown tracker {tracker_id!r}")
    picked = [store.samples[i] for i in store.index.get(tracker_id, ())]
    if origin is not None:
        if origin not in ORIGINS:
            raise ValueError(f"unknown origin filter {origin!r}")
        picked = [s for s in picked if s.origin == origin]
    picked.sort(key=lambda s: (s.item.created_at, s.sample_id))
    return picked


# --- synthetic draft generation ---------------------------------------------

_DRAFT_WORDS = (
    "morning", "short", "quick", "long", "evening", "calm", "busy", "steady",
    "late", "early", "light", "heavy", "focused", "slow",
)


def draft_text_prompt(schema: TrackerSchema, field_name: str) -> str:
    """Backend prompt asking for a plausible text value for one field."""
    return (
        f"Write a plausible value for the field '{field_name}' of the "
        f"'{schema.name}' tracker. Reply with the value only."
    )


def draft_phrase_prompt(schema: TrackerSchema, values_line: str) -> str:
    """Backend prompt asking for a phrase describing a drafted item."""
    return (
        f"Write one casual sentence in which a person reports this "
        f"'{schema.name}' entry: {values_line}. Reply with the sentence only."
    )


@dataclass
class DraftResult:
    drafts: list[Sample]
    warnings: list[str]


def generate_seed_drafts(
    schema: TrackerSchema,
    count: int,
    backend: CompletionBackend,
    rng: random.Random | None = None,
) -> DraftResult:
    """Generate uncurated draft samples: random items plus backend-written
    phrases. Drafts are never added to a store; curation is a separate,
    mandatory step."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = rng or random.Random(0)
    drafts: list[Sample] = []
    warnings: list[str] = []
    for i in range(count):
        values: dict[str, FieldValue] = {}
        fields = list(schema.all_fields())
        chosen = [f for f in fields if rng.random() < 0.75] or [rng.choice(fields)]
        for f in chosen:
            values[f.name] = _random_value(schema, f.name, f.kind, backend, rng)
        values_line = " | ".join(f"{k} = {v}" for k, v in values_to_wire(values).items())
        phrase = _complete_text(backend, draft_phrase_prompt(schema, values_line))
        draft_id = f"draft-{schema.tracker_id}-{i}"
        item = Item(
            item_id=draft_id,
            tracker_id=schema.tracker_id,
            values=values,
            created_at=_EPOCH,
            source_phrase=phrase,
        )
        if not phrase.strip():
            warnings.append(f"{draft_id}: backend returned an empty phrase; dropped")
            continue
        sample = Sample(draft_id, schema.tracker_id, phrase.strip(), item, origin=SYNTHETIC)
        checked, violations = validate_item(schema, item)
        if violations:
            warnings.append(f"{draft_id}: draft failed validation; dropped")
            continue
        drafts.append(replace(sample, item=checked))
    return DraftResult(drafts=drafts, warnings=warnings)


def _random_value(schema, field_name, kind, backend, rng: random.Random) -> FieldValue:
    k = kind.kind
    if k == NUMBER:
        return FieldValue(NUMBER, float(round(rng.uniform(0, 100), 1)))
    if k == LIKERT:
        return FieldValue(LIKERT, rng.randint(kind.min, kind.max))
    if k == SINGLE_CHOICE:
        return FieldValue(SINGLE_CHOICE, rng.choice(kind.options))
    if k == MULTI_CHOICE:
        n = rng.randint(1, min(2, len(kind.options)))
        picked = rng.sample(list(kind.options), n)
        return FieldValue(MULTI_CHOICE, tuple(o for o in kind.options if o in picked))
    if k in (SHORT_TEXT, LONG_TEXT):
        text = _complete_text(backend, draft_text_prompt(schema, field_name))
        if not text.strip():
            text = " ".join(rng.sample(_DRAFT_WORDS, 2))
        return FieldValue(k, text.strip())
    base = datetime(2023, 4, 1) + timedelta(days=rng.randint(0, 27), minutes=rng.randint(0, 1439))
    if k == DATE:
        return FieldValue(DATE, base.date())
    if k == TIME_POINT:
        return FieldValue(TIME_POINT, base)
    if k == TIME_RANGE:
        return FieldValue(TIME_RANGE, (base, base + timedelta(minutes=rng.randint(5, 120))))
    raise ValueError(f"unknown kind {k!r}")


def _complete_text(backend: CompletionBackend, prompt: str) -> str:
    result = backend.complete(CompletionRequest(prompt=prompt, stop_sequence="\n"))
    return result.text.strip()
