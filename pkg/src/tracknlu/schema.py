"""Tracker schemas, items, field values, and their validation rules."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from datetime import date, datetime
from typing import Any, Mapping

NUMBER = "number"
LIKERT = "likert"
SINGLE_CHOICE = "single_choice"
MULTI_CHOICE = "multi_choice"
SHORT_TEXT = "short_text"
LONG_TEXT = "long_text"
DATE = "date"
TIME_POINT = "time_point"
TIME_RANGE = "time_range"

FIELD_KINDS = (NUMBER, LIKERT, SINGLE_CHOICE, MULTI_CHOICE, SHORT_TEXT, LONG_TEXT)
TIME_KINDS = (DATE, TIME_POINT, TIME_RANGE)
CHOICE_KINDS = (SINGLE_CHOICE, MULTI_CHOICE)

LIKERT_MAX_STEPS = 20

TIME_POINT_FMT = "%Y-%m-%dT%H:%M"
_TIME_POINT_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}$")
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def canon(text: str) -> str:
    """Canonical form used for name/label comparisons: trim + case-fold."""
    return text.strip().casefold()


class CoercionError(ValueError):
    """A raw string could not be coerced into a typed field value."""


@dataclass(frozen=True)
class FieldKind:
    """Type descriptor for one tracker field (including time kinds)."""

    kind: str
    min: int | None = None
    max: int | None = None
    options: tuple[str, ...] = ()

    @classmethod
    def number(cls) -> "FieldKind":
        return cls(NUMBER)

    @classmethod
    def likert(cls, lo: int, hi: int) -> "FieldKind":
        return cls(LIKERT, min=lo, max=hi)

    @classmethod
    def single_choice(cls, options: list[str] | tuple[str, ...]) -> "FieldKind":
        return cls(SINGLE_CHOICE, options=tuple(options))

    @classmethod
    def multi_choice(cls, options: list[str] | tuple[str, ...]) -> "FieldKind":
        return cls(MULTI_CHOICE, options=tuple(options))

    @classmethod
    def short_text(cls) -> "FieldKind":
        return cls(SHORT_TEXT)

    @classmethod
    def long_text(cls) -> "FieldKind":
        return cls(LONG_TEXT)

    @classmethod
    def time(cls, kind: str) -> "FieldKind":
        if kind not in TIME_KINDS:
            raise ValueError(f"not a time kind: {kind!r}")
        return cls(kind)


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: FieldKind
    description: str | None = None


@dataclass(frozen=True)
class TrackerSchema:
    tracker_id: str
    name: str
    fields: tuple[FieldSpec, ...]
    time_field: FieldSpec | None = None

    def all_fields(self) -> tuple[FieldSpec, ...]:
        """Regular fields in declared order, with the time field appended last."""
        if self.time_field is None:
            return self.fields
        return self.fields + (self.time_field,)

    def field_map(self) -> dict[str, FieldSpec]:
        """Canonical name -> spec, over all fields including the time field."""
        return {canon(f.name): f for f in self.all_fields()}


@dataclass(frozen=True)
class FieldValue:
    """Typed value tagged with its field kind.

    Payloads by kind: number -> float; likert -> int; single_choice -> str;
    multi_choice -> tuple[str, ...] (schema option order); short/long text -> str;
    date -> datetime.date; time_point -> datetime; time_range -> (datetime, datetime).
    """

    kind: str
    value: Any


@dataclass(frozen=True)
class Item:
    item_id: str
    tracker_id: str
    values: dict[str, FieldValue]
    created_at: datetime
    source_phrase: str | None = None


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def validate_tracker(schema: TrackerSchema) -> list[Violation]:
    """Return every violated schema invariant; empty list means ok."""
    out: list[Violation] = []
    if not schema.tracker_id:
        out.append(Violation("tracker_id", "must be non-empty"))
    if not schema.fields:
        out.append(Violation("fields", "fields empty"))

    seen: dict[str, str] = {}
    for i, f in enumerate(schema.all_fields()):
        path = f"fields[{i}]" if f is not schema.time_field else "time_field"
        if not f.name.strip():
            out.append(Violation(path, "field name empty"))
            continue
        key = canon(f.name)
        if key in seen:
            out.append(Violation(path, f"duplicate field name {f.name!r}"))
        seen[key] = f.name
        is_time = f is schema.time_field
        if is_time:
            if f.kind.kind not in TIME_KINDS:
                out.append(Violation(path, f"time field kind must be one of {TIME_KINDS}"))
            continue
        if f.kind.kind not in FIELD_KINDS:
            out.append(Violation(path, f"unknown field kind {f.kind.kind!r}"))
            continue
        if f.kind.kind == LIKERT:
            lo, hi = f.kind.min, f.kind.max
            if not isinstance(lo, int) or not isinstance(hi, int):
                out.append(Violation(path, "likert bounds must be integers"))
            elif lo >= hi:
                out.append(Violation(path, "likert requires min < max"))
            elif hi - lo > LIKERT_MAX_STEPS:
                out.append(Violation(path, f"likert span exceeds {LIKERT_MAX_STEPS} steps"))
        elif f.kind.kind in CHOICE_KINDS:
            opts = f.kind.options
            if len(opts) < 2:
                out.append(Violation(path, "choice fields need at least 2 options"))
            if any(not o.strip() for o in opts):
                out.append(Violation(path, "choice option labels must be non-empty"))
            if len({canon(o) for o in opts}) != len(opts):
                out.append(Violation(path, "choice options must be unique after normalization"))
    return out


def _match_option(options: tuple[str, ...], raw: str) -> str | None:
    key = canon(raw)
    for opt in options:
        if canon(opt) == key:
            return opt
    return None


def normalize_value(kind: FieldKind, raw: str) -> FieldValue:
    """Coerce a wire-form string into a typed FieldValue; raises CoercionError."""
    if not raw or not raw.strip():
        raise CoercionError("empty raw value")
    raw = raw.strip()
    k = kind.kind
    if k == NUMBER:
        try:
            num = float(raw)
        except ValueError:
            raise CoercionError(f"not a decimal number: {raw!r}") from None
        if not math.isfinite(num):
            raise CoercionError(f"non-finite number: {raw!r}")
        return FieldValue(NUMBER, num)
    if k == LIKERT:
        try:
            num_i = int(raw)
        except ValueError:
            raise CoercionError(f"not an integer: {raw!r}") from None
        assert kind.min is not None and kind.max is not None
        if not (kind.min <= num_i <= kind.max):
            raise CoercionError(f"{num_i} outside likert range [{kind.min}, {kind.max}]")
        return FieldValue(LIKERT, num_i)
    if k == SINGLE_CHOICE:
        opt = _match_option(kind.options, raw)
        if opt is None:
            raise CoercionError(f"not a valid option: {raw!r}")
        return FieldValue(SINGLE_CHOICE, opt)
    if k == MULTI_CHOICE:
        labels = [p for p in raw.split(", ") if p.strip()]
        if not labels:
            raise CoercionError("empty choice list")
        matched = []
        for label in labels:
            opt = _match_option(kind.options, label)
            if opt is None:
                raise CoercionError(f"not a valid option: {label!r}")
            if opt not in matched:
                matched.append(opt)
        ordered = tuple(o for o in kind.options if o in matched)
        return FieldValue(MULTI_CHOICE, ordered)
    if k in (SHORT_TEXT, LONG_TEXT):
        return FieldValue(k, raw)
    if k == DATE:
        if not _DATE_RE.match(raw):
            raise CoercionError(f"not a date (YYYY-MM-DD): {raw!r}")
        try:
            return FieldValue(DATE, date.fromisoformat(raw))
        except ValueError as exc:
            raise CoercionError(str(exc)) from None
    if k == TIME_POINT:
        return FieldValue(TIME_POINT, _parse_time_point(raw))
    if k == TIME_RANGE:
        parts = raw.split(" to ")
        if len(parts) != 2:
            raise CoercionError(f"not a time range (<start> to <end>): {raw!r}")
        start, end = (_parse_time_point(p.strip()) for p in parts)
        if start > end:
            raise CoercionError("time range start after end")
        return FieldValue(TIME_RANGE, (start, end))
    raise CoercionError(f"unknown kind {k!r}")


def _parse_time_point(raw: str) -> datetime:
    if not _TIME_POINT_RE.match(raw):
        raise CoercionError(f"not a time point (YYYY-MM-DDTHH:MM): {raw!r}")
    try:
        return datetime.strptime(raw, TIME_POINT_FMT)
    except ValueError as exc:
        raise CoercionError(str(exc)) from None


def render_number(num: float) -> str:
    """Decimal string without trailing zeros; integral values have no point."""
    if num == int(num) and abs(num) < 1e16:
        return str(int(num))
    return repr(float(num))


def render_value(fv: FieldValue) -> str:
    """Wire-form string for a typed value (inverse of normalize_value)."""
    k = fv.kind
    if k == NUMBER:
        return render_number(fv.value)
    if k == LIKERT:
        return str(fv.value)
    if k in (SINGLE_CHOICE, SHORT_TEXT, LONG_TEXT):
        return fv.value
    if k == MULTI_CHOICE:
        return ", ".join(fv.value)
    if k == DATE:
        return fv.value.isoformat()
    if k == TIME_POINT:
        return fv.value.strftime(TIME_POINT_FMT)
    if k == TIME_RANGE:
        start, end = fv.value
        return f"{start.strftime(TIME_POINT_FMT)} to {end.strftime(TIME_POINT_FMT)}"
    raise ValueError(f"unknown kind {k!r}")


def _check_value(kind: FieldKind, fv: FieldValue, path: str) -> tuple[FieldValue | None, list[Violation]]:
    """Type-check one value against its field kind, normalizing choice labels."""
    if fv.kind != kind.kind:
        return None, [Violation(path, f"kind mismatch: field is {kind.kind}, value is {fv.kind}")]
    k = kind.kind
    if k == NUMBER:
        if not isinstance(fv.value, (int, float)) or isinstance(fv.value, bool) or not math.isfinite(fv.value):
            return None, [Violation(path, "number value must be a finite decimal")]
        return FieldValue(NUMBER, float(fv.value)), []
    if k == LIKERT:
        if not isinstance(fv.value, int) or isinstance(fv.value, bool):
            return None, [Violation(path, "likert value must be an integer")]
        assert kind.min is not None and kind.max is not None
        if not (kind.min <= fv.value <= kind.max):
            return None, [Violation(path, f"likert value {fv.value} outside [{kind.min}, {kind.max}]")]
        return fv, []
    if k == SINGLE_CHOICE:
        if not isinstance(fv.value, str):
            return None, [Violation(path, "choice value must be a string label")]
        opt = _match_option(kind.options, fv.value)
        if opt is None:
            return None, [Violation(path, f"label {fv.value!r} not among options")]
        return FieldValue(SINGLE_CHOICE, opt), []
    if k == MULTI_CHOICE:
        labels = fv.value
        if not isinstance(labels, (tuple, list, set, frozenset)) or not labels:
            return None, [Violation(path, "multi-choice value must be a non-empty label collection")]
        matched = []
        for label in labels:
            opt = _match_option(kind.options, str(label))
            if opt is None:
                return None, [Violation(path, f"label {label!r} not among options")]
            if opt not in matched:
                matched.append(opt)
        return FieldValue(MULTI_CHOICE, tuple(o for o in kind.options if o in matched)), []
    if k in (SHORT_TEXT, LONG_TEXT):
        if not isinstance(fv.value, str) or not fv.value.strip():
            return None, [Violation(path, "text value must be a non-empty string")]
        return fv, []
    if k == DATE:
        if not isinstance(fv.value, date) or isinstance(fv.value, datetime):
            return None, [Violation(path, "date value must be a calendar date")]
        return fv, []
    if k == TIME_POINT:
        if not isinstance(fv.value, datetime):
            return None, [Violation(path, "time point value must be a datetime")]
        return FieldValue(TIME_POINT, fv.value.replace(second=0, microsecond=0)), []
    if k == TIME_RANGE:
        val = fv.value
        if not (isinstance(val, tuple) and len(val) == 2 and all(isinstance(t, datetime) for t in val)):
            return None, [Violation(path, "time range value must be a (start, end) datetime pair")]
        start, end = (t.replace(second=0, microsecond=0) for t in val)
        if start > end:
            return None, [Violation(path, "time range start after end")]
        return FieldValue(TIME_RANGE, (start, end)), []
    return None, [Violation(path, f"unknown kind {k!r}")]


def validate_item(schema: TrackerSchema, item: Item, allow_empty: bool = False) -> tuple[Item | None, list[Violation]]:
    """Check subset-and-type invariants; returns (normalized item, violations).

    On success the returned item carries canonical option spellings and
    values keyed by the schema's declared field names.
    """
    out: list[Violation] = []
    if item.tracker_id != schema.tracker_id:
        out.append(Violation("tracker_id", f"item targets {item.tracker_id!r}, schema is {schema.tracker_id!r}"))
    if not item.values and not allow_empty:
        out.append(Violation("values", "committed items must set at least one field"))
    fmap = schema.field_map()
    normalized: dict[str, FieldValue] = {}
    for name, fv in item.values.items():
        spec = fmap.get(canon(name))
        if spec is None:
            out.append(Violation(f"values.{name}", "unknown field name"))
            continue
        if spec.name in normalized:
            out.append(Violation(f"values.{name}", "duplicate field after normalization"))
            continue
        checked, violations = _check_value(spec.kind, fv, f"values.{spec.name}")
        if violations:
            out.extend(violations)
        else:
            assert checked is not None
            normalized[spec.name] = checked
    if out:
        return None, out
    ordered = {f.name: normalized[f.name] for f in schema.all_fields() if f.name in normalized}
    return replace(item, values=ordered), []


# --- wire records (line-delimited schema/sample files) ----------------------

def schema_to_record(schema: TrackerSchema) -> dict:
    rec: dict[str, Any] = {
        "tracker_id": schema.tracker_id,
        "name": schema.name,
        "fields": [],
    }
    for f in schema.fields:
        fr: dict[str, Any] = {"name": f.name, "kind": f.kind.kind}
        if f.kind.kind == LIKERT:
            fr["min"] = f.kind.min
            fr["max"] = f.kind.max
        if f.kind.kind in CHOICE_KINDS:
            fr["options"] = list(f.kind.options)
        if f.description is not None:
            fr["description"] = f.description
        rec["fields"].append(fr)
    if schema.time_field is not None:
        tf: dict[str, Any] = {"name": schema.time_field.name, "kind": schema.time_field.kind.kind}
        if schema.time_field.description is not None:
            tf["description"] = schema.time_field.description
        rec["time_field"] = tf
    return rec


def schema_from_record(rec: Mapping[str, Any]) -> TrackerSchema:
    fields = []
    for fr in rec.get("fields", []):
        kind = FieldKind(
            fr["kind"],
            min=fr.get("min"),
            max=fr.get("max"),
            options=tuple(fr.get("options", ())),
        )
        fields.append(FieldSpec(fr["name"], kind, fr.get("description")))
    time_field = None
    if rec.get("time_field"):
        tf = rec["time_field"]
        time_field = FieldSpec(tf["name"], FieldKind(tf["kind"]), tf.get("description"))
    return TrackerSchema(
        tracker_id=rec["tracker_id"],
        name=rec["name"],
        fields=tuple(fields),
        time_field=time_field,
    )


def values_to_wire(values: Mapping[str, FieldValue]) -> dict[str, str]:
    return {name: render_value(fv) for name, fv in values.items()}


def values_from_wire(schema: TrackerSchema, wire: Mapping[str, str]) -> dict[str, FieldValue]:
    """Parse a wire-form values map; raises CoercionError on any bad entry."""
    fmap = schema.field_map()
    out: dict[str, FieldValue] = {}
    for name, raw in wire.items():
        spec = fmap.get(canon(name))
        if spec is None:
            raise CoercionError(f"unknown field {name!r}")
        out[spec.name] = normalize_value(spec.kind, raw)
    return out
