from __future__ import annotations

from pathlib import Path

import pytest

from tracknlu.embedding import LocalEmbedder
from tracknlu.store import SampleStore, load_store

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "tracknlu" / "fixtures"
SCHEMAS = FIXTURES / "seed_trackers.jsonl"
SAMPLES = FIXTURES / "seed_samples.jsonl"


@pytest.fixture(scope="session")
def seed_store() -> SampleStore:
    return load_store(SCHEMAS, SAMPLES)


@pytest.fixture(scope="session")
def embedder() -> LocalEmbedder:
    return LocalEmbedder()


@pytest.fixture(scope="session")
def desk_store(seed_store) -> SampleStore:
    """Small 3-tracker x 7-sample corpus carved out of the seed fixtures."""
    tracker_ids = sorted(seed_store.trackers)[:3]
    trackers = {tid: seed_store.trackers[tid] for tid in tracker_ids}
    samples = []
    per_tracker: dict[str, int] = {}
    for s in seed_store.samples:
        if s.tracker_id in trackers and per_tracker.get(s.tracker_id, 0) < 7:
            samples.append(s)
            per_tracker[s.tracker_id] = per_tracker.get(s.tracker_id, 0) + 1
    return SampleStore(trackers=trackers, samples=tuple(samples))


@pytest.fixture()
def exercise_schema(seed_store):
    return seed_store.trackers["exercise"]
