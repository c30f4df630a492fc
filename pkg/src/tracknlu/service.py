"""HTTP capture service: tracker CRUD, extraction, and append-only persistence.

Committed items with a source phrase become user samples, so each commit
improves the next extraction for that tracker.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from .embedding import Embedder, make_embedder
from .gateway import CompletionBackend, CompletionRequest, GatewayError, make_backend
from .postprocess import ExtractionResult, coerce, parse_completion
from .prompting import render_prompt, select_shots
from .schema import (
    CoercionError,
    Item,
    TrackerSchema,
    schema_from_record,
    schema_to_record,
    validate_item,
    validate_tracker,
    values_from_wire,
    values_to_wire,
)
from .store import USER, Sample, SampleStore, load_store

EVENTS_FILE = "events.jsonl"


@dataclass
class ServiceConfig:
    store_dir: str
    backend_spec: str = "live"
    schemas_path: str | None = None
    samples_path: str | None = None


def default_fixture_paths() -> tuple[str, str]:
    from importlib.resources import files

    base = files("tracknlu") / "fixtures"
    return str(base / "seed_trackers.jsonl"), str(base / "seed_samples.jsonl")


class CaptureStore:
    """In-memory state replayed from an append-only event log."""

    def __init__(self, store_dir: str | Path) -> None:
        self.dir = Path(store_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.events_path = self.dir / EVENTS_FILE
        self.trackers: dict[str, TrackerSchema] = {}
        self.items: dict[str, Item] = {}
        self.samples: dict[str, Sample] = {}
        self.item_sample: dict[str, str] = {}  # item_id -> linked sample_id
        self._lock = threading.RLock()
        self._replay()

    def _replay(self) -> None:
        if not self.events_path.exists():
            return
        with open(self.events_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    self._apply(json.loads(line))

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "tracker_created":
            schema = schema_from_record(event["tracker"])
            self.trackers[schema.tracker_id] = schema
        elif kind == "item_committed":
            item = self._item_from_event(event)
            self.items[item.item_id] = item
            if event.get("sample_id"):
                sample = Sample(
                    sample_id=event["sample_id"],
                    tracker_id=item.tracker_id,
                    phrase=item.source_phrase or "",
                    item=item,
                    origin=USER,
                )
                self.samples[sample.sample_id] = sample
                self.item_sample[item.item_id] = sample.sample_id
        elif kind == "item_corrected":
            prev = self.items[event["item_id"]]
            schema = self.trackers[prev.tracker_id]
            updated = replace(prev, values=values_from_wire(schema, event["values"]))
            self.items[updated.item_id] = updated
            sid = self.item_sample.get(updated.item_id)
            if sid:
                self.samples[sid] = replace(self.samples[sid], item=updated)

    def _item_from_event(self, event: dict) -> Item:
        schema = self.trackers[event["tracker_id"]]
        return Item(
            item_id=event["item_id"],
            tracker_id=event["tracker_id"],
            values=values_from_wire(schema, event["values"]),
            created_at=datetime.strptime(event["created_at"], "%Y-%m-%dT%H:%M"),
            source_phrase=event.get("source_phrase"),
        )

    def append(self, event: dict) -> None:
        with self._lock:
            with open(self.events_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            self._apply(event)

    def user_samples(self, tracker_id: str) -> list[Sample]:
        picked = [s for s in self.samples.values() if s.tracker_id == tracker_id]
        picked.sort(key=lambda s: (s.item.created_at, s.sample_id))
        return picked

    def items_for(self, tracker_id: str) -> list[Item]:
        picked = [i for i in self.items.values() if i.tracker_id == tracker_id]
        picked.sort(key=lambda i: (i.created_at, i.item_id))
        return picked


def _error(status: int, code: str, message: str, details: list | None = None) -> JSONResponse:
    headers = {"Retry-After": "5"} if status == 503 else None
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or []},
        headers=headers,
    )


def _item_json(item: Item) -> dict:
    return {
        "item_id": item.item_id,
        "tracker_id": item.tracker_id,
        "values": values_to_wire(item.values),
        "created_at": item.created_at.strftime("%Y-%m-%dT%H:%M"),
        "source_phrase": item.source_phrase,
    }


def _extraction_json(result: ExtractionResult) -> dict:
    provenance = {}
    for name, prov in result.provenance.items():
        provenance[name] = {
            "kind": prov.kind,
            "snaps": [
                {"raw": s.raw, "option": s.option, "similarity": s.similarity}
                for s in prov.snaps
            ],
        }
    return {
        "tracker_id": result.tracker_id,
        "values": values_to_wire(result.values),
        "provenance": provenance,
        "dropped": [
            {"raw_name": d.raw_name, "raw_value": d.raw_value, "reason": d.reason}
            for d in result.dropped
        ],
        "raw_completion": result.raw_completion,
    }


def create_app(
    config: ServiceConfig,
    backend: CompletionBackend | None = None,
    embedder: Embedder | None = None,
    seed_store: SampleStore | None = None,
) -> FastAPI:
    app = FastAPI(title="tracknlu")
    store = CaptureStore(config.store_dir)
    backend = backend or make_backend(config.backend_spec)
    embedder = embedder or make_embedder()
    if seed_store is None:
        schemas = config.schemas_path
        samples = config.samples_path
        if not schemas or not samples:
            schemas, samples = default_fixture_paths()
        seed_store = load_store(schemas, samples)

    def resolve_tracker(tracker_id: str) -> TrackerSchema | None:
        return store.trackers.get(tracker_id) or seed_store.trackers.get(tracker_id)

    @app.post("/api/trackers")
    def create_tracker(payload: dict = Body(...)):
        record = dict(payload)
        record.setdefault("tracker_id", uuid.uuid4().hex[:12])
        try:
            schema = schema_from_record(record)
        except (KeyError, TypeError) as exc:
            return _error(400, "bad_request", f"malformed tracker record: {exc}")
        violations = validate_tracker(schema)
        if violations:
            return _error(400, "validation", "tracker schema invalid", [str(v) for v in violations])
        if resolve_tracker(schema.tracker_id) is not None:
            return _error(409, "conflict", f"tracker {schema.tracker_id!r} already exists")
        store.append({"type": "tracker_created", "tracker": schema_to_record(schema)})
        return schema_to_record(schema)

    @app.get("/api/trackers")
    def list_trackers():
        records = [schema_to_record(s) for s in store.trackers.values()]
        return {"trackers": records}

    @app.get("/api/trackers/{tracker_id}")
    def get_tracker(tracker_id: str):
        schema = resolve_tracker(tracker_id)
        if schema is None:
            return _error(404, "not_found", f"unknown tracker {tracker_id!r}")
        return schema_to_record(schema)

    @app.post("/api/trackers/{tracker_id}/extract")
    def extract(tracker_id: str, payload: dict = Body(...)):
        schema = resolve_tracker(tracker_id)
        if schema is None:
            return _error(404, "not_found", f"unknown tracker {tracker_id!r}")
        phrase = (payload.get("phrase") or "").strip()
        if not phrase:
            return _error(400, "bad_request", "phrase must be non-empty")
        reference_time: datetime | None = None
        if payload.get("reference_time"):
            try:
                reference_time = datetime.strptime(payload["reference_time"], "%Y-%m-%dT%H:%M")
            except ValueError:
                return _error(400, "bad_request", "reference_time must be YYYY-MM-DDTHH:MM")
        elif schema.time_field is not None:
            reference_time = datetime.now().replace(second=0, microsecond=0)

        plan = select_shots(
            phrase,
            tracker_id,
            store.user_samples(tracker_id),
            seed_store,
            embedder,
            reference_time=reference_time,
        )
        trackers = dict(seed_store.trackers)
        trackers.update(store.trackers)
        bundle = render_prompt(schema, plan, trackers)
        try:
            completion = backend.complete(
                CompletionRequest(prompt=bundle.text, stop_sequence=bundle.stop_sequence)
            )
        except GatewayError as exc:
            return _error(503, "backend_unavailable", str(exc))
        result = coerce(schema, parse_completion(completion.text), embedder, completion.text)
        return {
            "request_id": uuid.uuid4().hex,
            "tracker_id": tracker_id,
            "phrase": phrase,
            "reference_time": reference_time.strftime("%Y-%m-%dT%H:%M") if reference_time else None,
            "result": _extraction_json(result),
            "shot_audit": [
                {
                    "sample_id": shot.sample.sample_id,
                    "tracker_id": shot.sample.tracker_id,
                    "role": shot.role,
                    "score": shot.score,
                }
                for shot in plan.shots
            ],
        }

    @app.post("/api/trackers/{tracker_id}/items")
    def commit_item(tracker_id: str, payload: dict = Body(...)):
        schema = resolve_tracker(tracker_id)
        if schema is None:
            return _error(404, "not_found", f"unknown tracker {tracker_id!r}")
        try:
            values = values_from_wire(schema, payload.get("values") or {})
        except CoercionError as exc:
            return _error(400, "validation", "value coercion failed", [str(exc)])
        source_phrase = (payload.get("source_phrase") or "").strip() or None
        item = Item(
            item_id=uuid.uuid4().hex[:12],
            tracker_id=tracker_id,
            values=values,
            created_at=datetime.now().replace(second=0, microsecond=0),
            source_phrase=source_phrase,
        )
        checked, violations = validate_item(schema, item)
        if violations:
            return _error(400, "validation", "item invalid", [str(v) for v in violations])
        assert checked is not None
        event: dict[str, Any] = {
            "type": "item_committed",
            "item_id": checked.item_id,
            "tracker_id": tracker_id,
            "values": values_to_wire(checked.values),
            "created_at": checked.created_at.strftime("%Y-%m-%dT%H:%M"),
            "source_phrase": source_phrase,
        }
        if source_phrase:
            event["sample_id"] = f"user-{checked.item_id}"
        store.append(event)
        return _item_json(store.items[checked.item_id])

    @app.get("/api/trackers/{tracker_id}/items")
    def list_items(tracker_id: str):
        if resolve_tracker(tracker_id) is None:
            return _error(404, "not_found", f"unknown tracker {tracker_id!r}")
        return {"items": [_item_json(i) for i in store.items_for(tracker_id)]}

    @app.patch("/api/items/{item_id}")
    def correct_item(item_id: str, payload: dict = Body(...)):
        item = store.items.get(item_id)
        if item is None:
            return _error(404, "not_found", f"unknown item {item_id!r}")
        schema = resolve_tracker(item.tracker_id)
        assert schema is not None
        try:
            values = values_from_wire(schema, payload.get("values") or {})
        except CoercionError as exc:
            return _error(400, "validation", "value coercion failed", [str(exc)])
        candidate = replace(item, values=values)
        checked, violations = validate_item(schema, candidate)
        if violations:
            return _error(400, "validation", "item invalid", [str(v) for v in violations])
        assert checked is not None
        store.append(
            {
                "type": "item_corrected",
                "item_id": item_id,
                "values": values_to_wire(checked.values),
            }
        )
        return _item_json(store.items[item_id])

    return app
