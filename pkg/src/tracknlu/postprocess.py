"""Parse completion text into typed extraction results, snapping
out-of-vocabulary choice labels to the nearest schema option."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .embedding import Embedder, cosine
from .schema import (
    MULTI_CHOICE,
    SINGLE_CHOICE,
    CoercionError,
    FieldKind,
    FieldSpec,
    FieldValue,
    Item,
    TrackerSchema,
    canon,
    normalize_value,
    validate_item,
)

_EPOCH_ITEM_ID = "extraction"


@dataclass(frozen=True)
class SnappedLabel:
    raw: str
    option: str
    similarity: float


@dataclass(frozen=True)
class FieldProvenance:
    kind: str  # "verbatim" | "choice_snapped"
    snaps: tuple[SnappedLabel, ...] = ()

    @classmethod
    def verbatim(cls) -> "FieldProvenance":
        return cls("verbatim")

    @classmethod
    def snapped(cls, snaps: tuple[SnappedLabel, ...]) -> "FieldProvenance":
        return cls("choice_snapped", snaps)


@dataclass(frozen=True)
class Dropped:
    raw_name: str
    raw_value: str
    reason: str


@dataclass(frozen=True)
class ParsedCompletion:
    pairs: tuple[tuple[str, str], ...]
    malformed: tuple[str, ...] = ()


@dataclass
class ExtractionResult:
    tracker_id: str
    values: dict[str, FieldValue]
    provenance: dict[str, FieldProvenance]
    dropped: list[Dropped] = field(default_factory=list)
    raw_completion: str = ""


def parse_completion(text: str) -> ParsedCompletion:
    """Split the first completion line into (name, value) pairs.

    Segments are ` | `-separated; each splits on its first ` = `. Segments
    without the separator are recorded as malformed, not raised.
    """
    first = text.split("\n", 1)[0]
    if not first.strip():
        return ParsedCompletion(())
    pairs: list[tuple[str, str]] = []
    malformed: list[str] = []
    for segment in first.split(" | "):
        seg = segment.strip()
        if not seg:
            continue
        if " = " not in seg:
            malformed.append(seg)
            continue
        name, value = seg.split(" = ", 1)
        name = name.strip()
        if not name:
            malformed.append(seg)
            continue
        pairs.append((name, value.strip()))
    return ParsedCompletion(tuple(pairs), tuple(malformed))


def snap_choice(options: tuple[str, ...], raw: str, embedder: Embedder) -> SnappedLabel:
    """Nearest schema option by embedding cosine; ties keep schema order."""
    raw_vec = embedder.embed(raw)
    best_opt = options[0]
    best_score = cosine(raw_vec, embedder.embed(options[0]))
    for opt in options[1:]:
        score = cosine(raw_vec, embedder.embed(opt))
        if score > best_score:
            best_opt, best_score = opt, score
    return SnappedLabel(raw=raw, option=best_opt, similarity=best_score)


def _coerce_choice(
    spec: FieldSpec, raw: str, embedder: Embedder
) -> tuple[FieldValue, FieldProvenance]:
    kind = spec.kind
    if kind.kind == SINGLE_CHOICE:
        try:
            return normalize_value(kind, raw), FieldProvenance.verbatim()
        except CoercionError:
            snap = snap_choice(kind.options, raw, embedder)
            return FieldValue(SINGLE_CHOICE, snap.option), FieldProvenance.snapped((snap,))

    labels = [p.strip() for p in raw.split(", ") if p.strip()]
    if not labels:
        raise CoercionError("empty choice list")
    as_single = FieldKind(SINGLE_CHOICE, options=kind.options)
    matched: list[str] = []
    snaps: list[SnappedLabel] = []
    for label in labels:
        try:
            option = normalize_value(as_single, label).value
        except CoercionError:
            snap = snap_choice(kind.options, label, embedder)
            snaps.append(snap)
            option = snap.option
        if option not in matched:
            matched.append(option)
    ordered = tuple(o for o in kind.options if o in matched)
    prov = FieldProvenance.snapped(tuple(snaps)) if snaps else FieldProvenance.verbatim()
    return FieldValue(MULTI_CHOICE, ordered), prov


def coerce(
    schema: TrackerSchema,
    parsed: ParsedCompletion,
    embedder: Embedder,
    raw_completion: str = "",
) -> ExtractionResult:
    """Turn raw pairs into typed values; every failure becomes a dropped entry.

    Field names match schema fields case-insensitively; duplicates keep the
    last occurrence. Never raises on malformed completions.
    """
    fmap = schema.field_map()
    dropped: list[Dropped] = [Dropped(seg, "", "malformed segment") for seg in parsed.malformed]

    # Last occurrence of each field wins; earlier ones are dropped.
    winners: dict[str, tuple[str, str]] = {}
    for raw_name, raw_value in parsed.pairs:
        spec = fmap.get(canon(raw_name))
        if spec is None:
            dropped.append(Dropped(raw_name, raw_value, "unknown field name"))
            continue
        if spec.name in winners:
            prev_name, prev_value = winners[spec.name]
            dropped.append(Dropped(prev_name, prev_value, "duplicate field; later value wins"))
        winners[spec.name] = (raw_name, raw_value)

    values: dict[str, FieldValue] = {}
    provenance: dict[str, FieldProvenance] = {}
    for field_name, (raw_name, raw_value) in winners.items():
        spec = fmap[canon(field_name)]
        try:
            if spec.kind.kind in (SINGLE_CHOICE, MULTI_CHOICE):
                fv, prov = _coerce_choice(spec, raw_value, embedder)
            else:
                fv = normalize_value(spec.kind, raw_value)
                prov = FieldProvenance.verbatim()
        except CoercionError as exc:
            dropped.append(Dropped(raw_name, raw_value, f"{spec.kind.kind} coercion failed: {exc}"))
            continue
        values[spec.name] = fv
        provenance[spec.name] = prov

    # Defensive re-validation; anything that slipped through is dropped.
    item = Item(_EPOCH_ITEM_ID, schema.tracker_id, values, datetime(1970, 1, 1))
    checked, violations = validate_item(schema, item, allow_empty=True)
    if violations:
        bad = {v.path.removeprefix("values.") for v in violations if v.path.startswith("values.")}
        for name in bad:
            if name in values:
                dropped.append(Dropped(name, "", "failed item validation"))
                values.pop(name, None)
                provenance.pop(name, None)
    else:
        assert checked is not None
        values = dict(checked.values)

    ordered = {f.name: values[f.name] for f in schema.all_fields() if f.name in values}
    return ExtractionResult(
        tracker_id=schema.tracker_id,
        values=ordered,
        provenance={k: provenance[k] for k in ordered},
        dropped=dropped,
        raw_completion=raw_completion,
    )
