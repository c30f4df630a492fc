from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from tracknlu.gateway import GatewayError, StaticBackend
from tracknlu.service import CaptureStore, ServiceConfig, create_app

EXERCISE_TRACKER = {
    "tracker_id": "my-exercise",
    "name": "My Exercise",
    "fields": [
        {"name": "Exercise", "kind": "short_text", "description": "what was done"},
        {"name": "Repetitions", "kind": "number", "description": "how many reps"},
        {
            "name": "Intensity",
            "kind": "single_choice",
            "options": ["light", "moderate", "vigorous"],
            "description": "how hard it felt",
        },
    ],
    "time_field": {"name": "Time", "kind": "time_point", "description": "when"},
}


@pytest.fixture()
def client(tmp_path, seed_store, embedder):
    app = create_app(
        ServiceConfig(store_dir=str(tmp_path / "svc")),
        backend=StaticBackend("Exercise = push-ups | Repetitions = 3 | Intensity = light"),
        embedder=embedder,
        seed_store=seed_store,
    )
    return TestClient(app)


class TestTrackers:
    def test_create_and_fetch(self, client):
        created = client.post("/api/trackers", json=EXERCISE_TRACKER)
        assert created.status_code == 200
        fetched = client.get("/api/trackers/my-exercise")
        assert fetched.status_code == 200
        assert fetched.json()["name"] == "My Exercise"
        listed = client.get("/api/trackers").json()["trackers"]
        assert [t["tracker_id"] for t in listed] == ["my-exercise"]

    def test_tracker_id_assigned_when_missing(self, client):
        payload = {k: v for k, v in EXERCISE_TRACKER.items() if k != "tracker_id"}
        created = client.post("/api/trackers", json=payload).json()
        assert created["tracker_id"]
        assert client.get(f"/api/trackers/{created['tracker_id']}").status_code == 200

    def test_duplicate_conflicts(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        dup = client.post("/api/trackers", json=EXERCISE_TRACKER)
        assert dup.status_code == 409
        assert dup.json()["code"] == "conflict"

    def test_seed_tracker_id_also_conflicts(self, client):
        payload = dict(EXERCISE_TRACKER, tracker_id="exercise")
        assert client.post("/api/trackers", json=payload).status_code == 409

    def test_invalid_schema_lists_violations(self, client):
        payload = dict(EXERCISE_TRACKER, tracker_id="bad", fields=[
            {"name": "Level", "kind": "likert", "min": 5, "max": 1},
        ])
        resp = client.post("/api/trackers", json=payload)
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "validation"
        assert body["details"]

    def test_unknown_tracker_404(self, client):
        resp = client.get("/api/trackers/ghost")
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"


class TestExtract:
    def test_extracts_values_with_provenance(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        resp = client.post(
            "/api/trackers/my-exercise/extract",
            json={"phrase": "I did push-ups for three repetitions at light intensity",
                  "reference_time": "2023-05-01T18:00"},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["result"]["values"] == {
            "Exercise": "push-ups", "Repetitions": "3", "Intensity": "light",
        }
        assert body["result"]["provenance"]["Intensity"]["kind"] == "verbatim"
        assert body["reference_time"] == "2023-05-01T18:00"
        assert body["request_id"]

    def test_first_extraction_uses_only_seed_shots(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        body = client.post(
            "/api/trackers/my-exercise/extract", json={"phrase": "did some squats"}
        ).json()
        audit = body["shot_audit"]
        assert len(audit) == 10
        roles = [s["role"] for s in audit]
        assert roles.count("farthest") == 5 and roles.count("nearest") == 5
        assert all(s["tracker_id"] != "my-exercise" for s in audit)

    def test_commit_with_phrase_feeds_next_extraction(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        commit = client.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Exercise": "squats", "Repetitions": "20"},
                  "source_phrase": "20 squats before breakfast"},
        )
        assert commit.status_code == 200
        body = client.post(
            "/api/trackers/my-exercise/extract", json={"phrase": "more squats today"}
        ).json()
        user_shots = [s for s in body["shot_audit"] if s["role"] == "user"]
        assert len(user_shots) == 1
        assert user_shots[0]["tracker_id"] == "my-exercise"
        assert user_shots[0]["sample_id"] == f"user-{commit.json()['item_id']}"
        assert len(body["shot_audit"]) == 10

    def test_extract_against_seed_tracker(self, client):
        resp = client.post(
            "/api/trackers/exercise/extract",
            json={"phrase": "push-ups, light", "reference_time": "2023-05-01T08:00"},
        )
        assert resp.status_code == 200

    def test_empty_phrase_rejected(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        resp = client.post("/api/trackers/my-exercise/extract", json={"phrase": "  "})
        assert resp.status_code == 400

    def test_bad_reference_time(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        resp = client.post(
            "/api/trackers/my-exercise/extract",
            json={"phrase": "x", "reference_time": "yesterday"},
        )
        assert resp.status_code == 400

    def test_backend_failure_is_503_with_retry_after(self, tmp_path, seed_store, embedder):
        class Down:
            def complete(self, req):
                raise GatewayError("no backend")

        app = create_app(
            ServiceConfig(store_dir=str(tmp_path / "svc")),
            backend=Down(), embedder=embedder, seed_store=seed_store,
        )
        client = TestClient(app)
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        resp = client.post("/api/trackers/my-exercise/extract", json={"phrase": "x"})
        assert resp.status_code == 503
        assert resp.headers["retry-after"] == "5"
        assert resp.json()["code"] == "backend_unavailable"


class TestItems:
    def test_commit_validates_values(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        resp = client.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Repetitions": "three"}},
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "validation"

    def test_commit_without_phrase_creates_no_sample(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        client.post("/api/trackers/my-exercise/items",
                    json={"values": {"Exercise": "rowing"}})
        body = client.post(
            "/api/trackers/my-exercise/extract", json={"phrase": "rowing again"}
        ).json()
        assert all(s["role"] != "user" for s in body["shot_audit"])

    def test_list_items_sorted(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        for name in ("rowing", "squats"):
            client.post("/api/trackers/my-exercise/items",
                        json={"values": {"Exercise": name}})
        items = client.get("/api/trackers/my-exercise/items").json()["items"]
        assert {i["values"]["Exercise"] for i in items} == {"rowing", "squats"}
        keys = [(i["created_at"], i["item_id"]) for i in items]
        assert keys == sorted(keys)

    def test_correction_updates_item_and_linked_sample(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        item = client.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Exercise": "squats", "Repetitions": "20"},
                  "source_phrase": "20 squats"},
        ).json()
        patched = client.patch(
            f"/api/items/{item['item_id']}",
            json={"values": {"Exercise": "squats", "Repetitions": "25"}},
        )
        assert patched.status_code == 200
        assert patched.json()["values"]["Repetitions"] == "25"

    def test_correct_unknown_item(self, client):
        assert client.patch("/api/items/ghost", json={"values": {}}).status_code == 404

    def test_correction_rejects_invalid_values(self, client):
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        item = client.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Intensity": "light"}},
        ).json()
        resp = client.patch(
            f"/api/items/{item['item_id']}", json={"values": {"Repetitions": "lots"}}
        )
        assert resp.status_code == 400


class TestPersistence:
    def test_state_survives_restart(self, tmp_path, seed_store, embedder):
        store_dir = str(tmp_path / "svc")
        backend = StaticBackend("Exercise = rowing")

        def boot():
            app = create_app(ServiceConfig(store_dir=store_dir),
                             backend=backend, embedder=embedder, seed_store=seed_store)
            return TestClient(app)

        first = boot()
        first.post("/api/trackers", json=EXERCISE_TRACKER)
        item = first.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Exercise": "rowing"}, "source_phrase": "rowed a bit"},
        ).json()

        second = boot()
        assert second.get("/api/trackers/my-exercise").status_code == 200
        items = second.get("/api/trackers/my-exercise/items").json()["items"]
        assert [i["item_id"] for i in items] == [item["item_id"]]
        audit = second.post(
            "/api/trackers/my-exercise/extract", json={"phrase": "rowing again"}
        ).json()["shot_audit"]
        assert any(s["role"] == "user" for s in audit)

    def test_event_log_is_append_only_jsonl(self, tmp_path, seed_store, embedder):
        store_dir = tmp_path / "svc"
        app = create_app(ServiceConfig(store_dir=str(store_dir)),
                         backend=StaticBackend("x"), embedder=embedder, seed_store=seed_store)
        client = TestClient(app)
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        client.post("/api/trackers/my-exercise/items", json={"values": {"Exercise": "rowing"}})
        import json as _json

        lines = (store_dir / "events.jsonl").read_text().splitlines()
        events = [_json.loads(line) for line in lines]
        assert [e["type"] for e in events] == ["tracker_created", "item_committed"]

    def test_capture_store_replays_corrections(self, tmp_path, seed_store, embedder):
        store_dir = tmp_path / "svc"
        app = create_app(ServiceConfig(store_dir=str(store_dir)),
                         backend=StaticBackend("x"), embedder=embedder, seed_store=seed_store)
        client = TestClient(app)
        client.post("/api/trackers", json=EXERCISE_TRACKER)
        item = client.post(
            "/api/trackers/my-exercise/items",
            json={"values": {"Exercise": "rowing"}, "source_phrase": "rowed"},
        ).json()
        client.patch(f"/api/items/{item['item_id']}", json={"values": {"Exercise": "sculling"}})

        replayed = CaptureStore(store_dir)
        assert replayed.items[item["item_id"]].values["Exercise"].value == "sculling"
        sample_id = replayed.item_sample[item["item_id"]]
        assert replayed.samples[sample_id].item.values["Exercise"].value == "sculling"
