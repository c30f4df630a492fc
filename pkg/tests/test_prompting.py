from __future__ import annotations

import random
from datetime import datetime, timedelta
from pathlib import Path

import pytest

from tracknlu.embedding import LocalEmbedder
from tracknlu.prompting import (
    MAX_SHOTS,
    ROLE_FARTHEST,
    ROLE_NEAREST,
    ROLE_USER,
    render_prompt,
    render_qa_inputs,
    render_zero_shot_prompt,
    select_shots,
    shot_budget,
)
from tracknlu.schema import FieldValue, Item
from tracknlu.store import Sample, SampleStore, exclude_tracker

GOLDEN = Path(__file__).parent / "golden"


def user_sample(i: int, phrase: str, values: dict, ts: datetime) -> Sample:
    item = Item(f"u{i}", "exercise", values, ts, phrase)
    return Sample(f"user-{i}", "exercise", phrase, item, origin="user")


def fig1_user_samples() -> list[Sample]:
    return [
        user_sample(
            1,
            "Did 20 squats at moderate intensity",
            {
                "Exercise": FieldValue("short_text", "squats"),
                "Repetitions": FieldValue("number", 20.0),
                "Intensity": FieldValue("single_choice", "moderate"),
            },
            datetime(2023, 4, 28, 8, 0),
        ),
        user_sample(
            2,
            "quick set of lunges, light effort",
            {
                "Exercise": FieldValue("short_text", "lunges"),
                "Intensity": FieldValue("single_choice", "light"),
            },
            datetime(2023, 4, 29, 9, 30),
        ),
    ]

PHRASE = "I did push-ups for three repetitions at light intensity"


def role_counts(plan) -> dict[str, int]:
    counts = {ROLE_FARTHEST: 0, ROLE_NEAREST: 0, ROLE_USER: 0}
    for shot in plan.shots:
        counts[shot.role] += 1
    return counts


class TestShotBudget:
    @pytest.mark.parametrize(
        "k,expected",
        [
            (0, (5, 5)),
            (1, (5, 4)),
            (2, (5, 3)),
            (3, (5, 2)),
            (4, (5, 1)),
            (5, (4, 1)),
            (6, (3, 1)),
            (7, (2, 1)),
            (8, (1, 1)),
        ],
    )
    def test_user_shots_displace_nearest_first(self, k, expected):
        assert shot_budget(k, 504) == expected

    def test_small_view_prioritizes_nearest(self):
        assert shot_budget(0, 3) == (0, 3)
        assert shot_budget(0, 7) == (2, 5)
        assert shot_budget(2, 5) == (2, 3)

    def test_empty_view(self):
        assert shot_budget(0, 0) == (0, 0)


class TestSelectShots:
    def test_no_user_items_is_5_plus_5(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        plan = select_shots(PHRASE, "exercise", [], view, embedder)
        assert role_counts(plan) == {ROLE_FARTHEST: 5, ROLE_NEAREST: 5, ROLE_USER: 0}

    def test_two_user_items(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        plan = select_shots(PHRASE, "exercise", fig1_user_samples(), view, embedder)
        assert role_counts(plan) == {ROLE_FARTHEST: 5, ROLE_NEAREST: 3, ROLE_USER: 2}
        roles = [s.role for s in plan.shots]
        assert roles == sorted(roles, key=[ROLE_FARTHEST, ROLE_NEAREST, ROLE_USER].index)

    def test_empty_seed_view_degenerates(self, seed_store, embedder):
        empty = SampleStore(trackers=seed_store.trackers, samples=())
        plan = select_shots(PHRASE, "exercise", [], empty, embedder)
        assert plan.shots == ()

    def test_small_view_sets_disjoint(self, seed_store, embedder):
        view = SampleStore(
            trackers=seed_store.trackers,
            samples=tuple(s for s in seed_store.samples if s.tracker_id == "mood")[:12],
        )
        plan = select_shots(PHRASE, "exercise", [], view, embedder)
        far = {s.sample.sample_id for s in plan.shots if s.role == ROLE_FARTHEST}
        near = {s.sample.sample_id for s in plan.shots if s.role == ROLE_NEAREST}
        assert far.isdisjoint(near)
        assert len(far | near) == 10

    def test_user_shots_oldest_to_newest_and_capped(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        users = [
            user_sample(i, f"session number {i}", {"Exercise": FieldValue("short_text", f"set {i}")},
                        datetime(2023, 4, 1) + timedelta(days=i))
            for i in range(12)
        ]
        shuffled = users[:]
        random.Random(3).shuffle(shuffled)
        plan = select_shots(PHRASE, "exercise", shuffled, view, embedder)
        user_shots = [s for s in plan.shots if s.role == ROLE_USER]
        assert len(user_shots) == 8
        # the 8 most recent, oldest first
        assert [s.sample.sample_id for s in user_shots] == [u.sample_id for u in users[4:]]

    def test_plan_size_law(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        for k in range(9):
            users = fig1_user_samples() * 4
            plan = select_shots(PHRASE, "exercise", users[:k], view, embedder)
            assert len(plan.shots) == min(MAX_SHOTS, k + len(view.samples))

    def test_nearest_scores_dominate_farthest(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        plan = select_shots(PHRASE, "exercise", [], view, embedder)
        near_scores = [s.score for s in plan.shots if s.role == ROLE_NEAREST]
        far_scores = [s.score for s in plan.shots if s.role == ROLE_FARTHEST]
        assert min(near_scores) >= max(far_scores)
        # both blocks run in ascending similarity
        assert far_scores == sorted(far_scores)
        assert near_scores == sorted(near_scores)

    def test_no_query_tracker_leakage_from_excluded_view(self, seed_store, embedder):
        view = exclude_tracker(seed_store, "exercise")
        plan = select_shots(PHRASE, "exercise", [], view, embedder)
        assert all(s.sample.tracker_id != "exercise" for s in plan.shots)


class TestRenderPrompt:
    def test_fig1_golden(self, seed_store, embedder, exercise_schema):
        view = exclude_tracker(seed_store, "exercise")
        plan = select_shots(
            PHRASE, "exercise", fig1_user_samples(), view, embedder,
            reference_time=datetime(2023, 5, 1, 18, 0),
        )
        bundle = render_prompt(exercise_schema, plan, seed_store.trackers)
        assert bundle.text == (GOLDEN / "prompt_fig1.txt").read_text()
        assert bundle.stop_sequence == "\n###"
        assert bundle.text.endswith("Values:")

    def test_empty_plan_is_instruction_plus_query(self, seed_store, embedder, exercise_schema):
        empty = SampleStore(trackers=seed_store.trackers, samples=())
        plan = select_shots(PHRASE, "exercise", [], empty, embedder)
        bundle = render_prompt(exercise_schema, plan, seed_store.trackers)
        assert bundle.text.count("###") == 1
        assert bundle.text.endswith("Values:")

    def test_single_field_shot_has_no_separator(self, seed_store, embedder, exercise_schema):
        users = [user_sample(1, "just lunges today",
                             {"Exercise": FieldValue("short_text", "lunges")},
                             datetime(2023, 4, 20))]
        empty = SampleStore(trackers=seed_store.trackers, samples=())
        plan = select_shots(PHRASE, "exercise", users, empty, embedder)
        bundle = render_prompt(exercise_schema, plan, seed_store.trackers)
        assert "Values: Exercise = lunges\n" in bundle.text
        assert " | " not in bundle.text.split("Values: Exercise = lunges")[0].split("\n")[-1]

    def test_byte_identical_reruns(self, seed_store, embedder, exercise_schema):
        view = exclude_tracker(seed_store, "exercise")

        def build():
            plan = select_shots(PHRASE, "exercise", [], view, LocalEmbedder())
            return render_prompt(exercise_schema, plan, seed_store.trackers).text

        assert build() == build()

    def test_current_time_only_with_time_field_and_reference(self, seed_store, embedder, exercise_schema):
        empty = SampleStore(trackers=seed_store.trackers, samples=())
        plan = select_shots(PHRASE, "exercise", [], empty, embedder)
        bundle = render_prompt(exercise_schema, plan, seed_store.trackers)
        assert "Current time:" not in bundle.text


class TestZeroShotPrompt:
    def test_golden(self, seed_store, exercise_schema):
        bundle = render_zero_shot_prompt(
            exercise_schema, PHRASE, reference_time=datetime(2023, 5, 1, 18, 0)
        )
        assert bundle.text == (GOLDEN / "prompt_zero_shot.txt").read_text()
        assert bundle.shot_plan.shots == ()

    def test_no_time_field_omits_current_time(self, seed_store):
        from dataclasses import replace

        schema = replace(seed_store.trackers["exercise"], time_field=None)
        bundle = render_zero_shot_prompt(schema, PHRASE, reference_time=datetime(2023, 5, 1))
        assert "Current time:" not in bundle.text

    def test_deterministic(self, exercise_schema):
        a = render_zero_shot_prompt(exercise_schema, PHRASE).text
        b = render_zero_shot_prompt(exercise_schema, PHRASE).text
        assert a == b


class TestQaInputs:
    def test_repetitions_matches_published_format(self, exercise_schema):
        prompts = dict(render_qa_inputs(
            exercise_schema, "I did push-ups for 3 repetitions at light intensity."
        ))
        assert prompts["Repetitions"] == (
            "extractive question: the number of repetitions or laps of the exercise? "
            "context: user: i did push-ups for 3 repetitions at light intensity."
        )

    def test_choice_field_lists_options(self, exercise_schema):
        prompts = dict(render_qa_inputs(exercise_schema, "some phrase"))
        assert prompts["Intensity"].endswith("choices: light or moderate or vigorous")

    def test_likert_field_lists_scale_values(self, seed_store):
        schema = seed_store.trackers["sleep"]
        prompts = dict(render_qa_inputs(schema, "slept fine"))
        assert prompts["Quality"].endswith("choices: 1 or 2 or 3 or 4 or 5")

    def test_one_prompt_per_field_in_schema_order(self, exercise_schema):
        prompts = render_qa_inputs(exercise_schema, "x")
        assert [name for name, _ in prompts] == ["Exercise", "Repetitions", "Intensity", "Time"]

    def test_missing_description_rejected(self, exercise_schema):
        from dataclasses import replace

        bare = replace(
            exercise_schema,
            fields=(replace(exercise_schema.fields[0], description=None),)
            + exercise_schema.fields[1:],
        )
        with pytest.raises(ValueError, match="description"):
            render_qa_inputs(bare, "x")
