#!/usr/bin/env python3
"""Generate the shipped seed corpus fixtures: 24 trackers x 21 samples.

Deterministic: reruns reproduce the same files byte-for-byte. Run from the
repository root:

    python tools/gen_seed_corpus.py
"""

from __future__ import annotations

import json
import random
import sys
from datetime import datetime, timedelta
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
OUT_DIR = ROOT / "src" / "tracknlu" / "fixtures"
SAMPLES_PER_TRACKER = 21

PREFIXES = ["I", "Just", "Today I", "This morning I", "Earlier I", "Tonight I"]
SUMMARY_PREFIXES = ["Today", "For today,", "Looking back,", "End of day:", "Today's summary:"]


def n(name, desc, fmt, pool):
    return {"name": name, "kind": "number", "description": desc, "fmt": fmt, "pool": pool}


def lk(name, lo, hi, desc, fmt):
    return {"name": name, "kind": "likert", "min": lo, "max": hi, "description": desc, "fmt": fmt}


def sc(name, options, desc, fmt):
    return {"name": name, "kind": "single_choice", "options": options, "description": desc, "fmt": fmt}


def mc(name, options, desc, fmt):
    return {"name": name, "kind": "multi_choice", "options": options, "description": desc, "fmt": fmt}


def st(name, desc, fmt, pool):
    return {"name": name, "kind": "short_text", "description": desc, "fmt": fmt, "pool": pool}


def lt(name, desc, fmt, pool):
    return {"name": name, "kind": "long_text", "description": desc, "fmt": fmt, "pool": pool}


TRACKERS = [
    {
        "tracker_id": "exercise",
        "name": "Exercise Log",
        "daily": False,
        "time": ("Time", "time_point", "the time when the exercise was performed"),
        "fields": [
            st("Exercise", "the name of the exercise performed", "did {v}",
               ["push-ups", "squats", "jumping jacks", "lunges", "pull-ups", "planks", "burpees"]),
            n("Repetitions", "the number of repetitions or laps of the exercise",
              "for {v} repetitions", ["3", "5", "8", "10", "12", "15", "20", "25", "30"]),
            sc("Intensity", ["light", "moderate", "vigorous"],
               "the intensity level of the exercise", "at {v} intensity"),
        ],
    },
    {
        "tracker_id": "running",
        "name": "Running Session",
        "daily": False,
        "time": ("Session", "time_range", "the start and end time of the run"),
        "fields": [
            n("Distance", "the distance of the run in kilometers", "ran {v} km",
              ["2", "3.5", "5", "6.2", "8", "10", "12.5", "15"]),
            st("Route", "the route or place of the run", "along the {v}",
               ["riverside", "park loop", "old town", "beach path", "forest trail", "track"]),
            lk("Effort", 1, 5, "how hard the run felt on a scale of 1 to 5",
               "effort {v} out of 5"),
        ],
    },
    {
        "tracker_id": "steps",
        "name": "Daily Steps",
        "daily": True,
        "time": ("Date", "date", "the date of the step count"),
        "fields": [
            n("Steps", "the total number of steps walked", "walked {v} steps",
              ["3200", "4800", "6500", "8000", "9400", "10500", "12000", "15200"]),
            lk("Activeness", 1, 5, "how active the day felt on a scale of 1 to 5",
               "felt active about {v} out of 5"),
        ],
    },
    {
        "tracker_id": "weight",
        "name": "Body Weight",
        "daily": True,
        "time": ("Date", "date", "the date of the weigh-in"),
        "fields": [
            n("Weight", "the measured body weight in kilograms", "weighed {v} kg",
              ["61.4", "62", "63.8", "70.2", "72", "75.5", "80.1", "85"]),
            sc("Trend", ["up", "down", "steady"], "whether the weight is trending up, down, or steady",
               "trending {v}"),
        ],
    },
    {
        "tracker_id": "coffee",
        "name": "Coffee Intake",
        "daily": False,
        "time": ("Time", "time_point", "the time the drink was consumed"),
        "fields": [
            st("Drink", "the kind of coffee drink consumed", "had a {v}",
               ["americano", "latte", "espresso", "cappuccino", "cold brew", "flat white", "mocha"]),
            n("Cups", "the number of cups consumed", "{v} cup(s)", ["1", "2", "3"]),
            sc("Caffeine", ["caffeinated", "decaf"], "whether the drink was caffeinated or decaf",
               "it was {v}"),
        ],
    },
    {
        "tracker_id": "meal",
        "name": "Meal Log",
        "daily": False,
        "time": ("Time", "time_point", "the time of the meal"),
        "fields": [
            st("Food", "the main food eaten at the meal", "ate {v}",
               ["pasta", "grilled chicken salad", "ramen", "a burrito", "sushi", "pizza", "oatmeal"]),
            sc("Portion", ["small", "medium", "large"], "the portion size of the meal",
               "a {v} portion"),
            lk("Healthiness", 1, 5, "how healthy the meal was on a scale of 1 to 5",
               "healthiness {v} of 5"),
        ],
    },
    {
        "tracker_id": "water",
        "name": "Water Intake",
        "daily": True,
        "time": ("Date", "date", "the date of the water intake"),
        "fields": [
            n("Glasses", "the number of glasses of water drunk", "drank {v} glasses of water",
              ["2", "3", "4", "5", "6", "7", "8", "9", "10"]),
        ],
    },
    {
        "tracker_id": "snack",
        "name": "Snack Log",
        "daily": False,
        "time": ("Time", "time_point", "the time of the snack"),
        "fields": [
            st("Snack", "the snack that was eaten", "snacked on {v}",
               ["almonds", "a granola bar", "chips", "dark chocolate", "an apple", "yogurt", "cookies"]),
            lk("Craving", 1, 5, "how strong the craving was on a scale of 1 to 5",
               "craving level {v}"),
        ],
    },
    {
        "tracker_id": "mood",
        "name": "Mood Check-in",
        "daily": False,
        "time": ("Time", "time_point", "the time of the mood check-in"),
        "fields": [
            sc("Mood", ["happy", "sad", "angry", "anxious", "calm", "tired"],
               "the mood felt at the moment", "feeling {v}"),
            lt("Note", "a free-form note about the mood and its context", "note: {v}",
               ["work was overwhelming but the evening walk helped me settle down",
                "had a great chat with an old friend and it lifted my spirits",
                "could not stop worrying about the upcoming presentation",
                "the rainy weather made everything feel slow and heavy",
                "finished a big task early and felt light the whole afternoon",
                "slept badly and small things kept getting on my nerves"]),
        ],
    },
    {
        "tracker_id": "stress",
        "name": "Stress Episode",
        "daily": False,
        "time": ("Time", "time_point", "the time of the stress episode"),
        "fields": [
            lk("Level", 1, 10, "the stress level on a scale of 1 to 10", "stress level {v}"),
            st("Trigger", "what triggered the stress", "triggered by {v}",
               ["a deadline", "traffic", "an argument", "emails piling up", "a noisy office", "money worries"]),
            mc("Coping", ["breathing", "walk", "music", "talk"],
               "the coping actions taken", "coped with {v}"),
        ],
    },
    {
        "tracker_id": "gratitude",
        "name": "Gratitude Journal",
        "daily": True,
        "time": ("Date", "date", "the date of the gratitude entry"),
        "fields": [
            lt("Entry", "the free-form gratitude reflection", "grateful that {v}",
               ["my sister called just to check in and we laughed for an hour",
                "the morning coffee on the balcony felt like a small vacation",
                "a stranger helped me carry groceries up the stairs",
                "my project partner covered for me when I was exhausted",
                "the garden tomatoes finally ripened after weeks of waiting",
                "I got home before the storm and watched it from the window"]),
            sc("Category", ["people", "health", "work", "other"],
               "the category of the gratitude entry", "category {v}"),
        ],
    },
    {
        "tracker_id": "sleep",
        "name": "Sleep Summary",
        "daily": True,
        "time": ("Night", "time_range", "the time span of the sleep"),
        "fields": [
            n("Duration", "the sleep duration in hours", "slept {v} hours",
              ["5", "5.5", "6", "6.5", "7", "7.5", "8", "8.5", "9"]),
            lk("Quality", 1, 5, "the sleep quality on a scale of 1 to 5", "quality {v} of 5"),
            st("Dream", "a short description of any dream", "dreamt about {v}",
               ["flying", "an endless hallway", "an old classmate", "the ocean", "missing a train"]),
        ],
    },
    {
        "tracker_id": "nap",
        "name": "Nap Log",
        "daily": False,
        "time": ("Span", "time_range", "the start and end time of the nap"),
        "fields": [
            n("Minutes", "the nap length in minutes", "napped for {v} minutes",
              ["10", "15", "20", "25", "30", "45", "60", "90"]),
            lk("Refreshed", 1, 5, "how refreshed the nap felt on a scale of 1 to 5",
               "feeling refreshed {v} of 5"),
        ],
    },
    {
        "tracker_id": "worksession",
        "name": "Work Session",
        "daily": False,
        "time": ("Span", "time_range", "the start and end time of the work session"),
        "fields": [
            st("Task", "the task worked on during the session", "worked on {v}",
               ["the quarterly report", "bug fixes", "slide deck", "code review", "planning doc", "inbox zero"]),
            lk("Focus", 1, 5, "the focus level during the session on a scale of 1 to 5",
               "focus {v} of 5"),
            mc("Distractions", ["phone", "email", "chat", "noise"],
               "the distractions encountered", "distracted by {v}"),
        ],
    },
    {
        "tracker_id": "productivity",
        "name": "Productivity Review",
        "daily": True,
        "time": ("Date", "date", "the date of the productivity review"),
        "fields": [
            lk("Score", 1, 10, "the overall productivity score on a scale of 1 to 10",
               "productivity {v} of 10"),
            lt("Highlight", "the free-form highlight of the day", "highlight: {v}",
               ["shipped the feature that had been stuck in review for a week",
                "cleared the whole backlog column before lunch somehow",
                "finally understood the scheduling bug after pairing with a colleague",
                "wrote three pages of the proposal without touching my phone",
                "cleaned up the test suite and it runs twice as fast now",
                "mentored the new hire and their first patch landed"]),
        ],
    },
    {
        "tracker_id": "spending",
        "name": "Spending Log",
        "daily": False,
        "time": ("Time", "time_point", "the time of the purchase"),
        "fields": [
            n("Amount", "the amount spent in dollars", "spent {v} dollars",
              ["3.5", "8", "12.99", "24", "36.5", "49.99", "75", "120"]),
            sc("Category", ["food", "transport", "entertainment", "bills", "shopping"],
               "the spending category", "on {v}"),
            st("Merchant", "the merchant or place of purchase", "at {v}",
               ["the corner cafe", "the grocery store", "the gas station", "an online shop", "the cinema"]),
        ],
    },
    {
        "tracker_id": "budget",
        "name": "Budget Review",
        "daily": True,
        "time": ("Date", "date", "the date of the budget review"),
        "fields": [
            n("Saved", "the amount saved today in dollars", "saved {v} dollars",
              ["0", "5", "10", "15.5", "20", "32", "50", "75"]),
            sc("OnTrack", ["yes", "no"], "whether the budget is on track", "on track: {v}"),
        ],
    },
    {
        "tracker_id": "social",
        "name": "Social Activity",
        "daily": False,
        "time": ("Span", "time_range", "the start and end time of the activity"),
        "fields": [
            st("Person", "the person the activity was with", "met {v}",
               ["Alex", "Sam", "my neighbor", "Jordan", "an old friend", "my cousin"]),
            st("Activity", "what was done together", "we {v}",
               ["grabbed coffee", "played board games", "went hiking", "watched a movie", "cooked dinner"]),
            lk("Enjoyment", 1, 5, "how enjoyable it was on a scale of 1 to 5",
               "enjoyment {v} of 5"),
        ],
    },
    {
        "tracker_id": "familycall",
        "name": "Family Call",
        "daily": False,
        "time": ("Time", "time_point", "the time of the call"),
        "fields": [
            st("Person", "the family member called", "called {v}",
               ["mom", "dad", "grandma", "my brother", "my sister", "uncle Joe"]),
            lt("Topic", "the free-form summary of what was discussed", "we talked about {v}",
               ["the garden, the neighbors, and plans for the summer visit",
                "her new physical therapy routine and how the knee is healing",
                "the family reunion logistics and who is bringing what dish",
                "his job interview next week and how nervous he is about it",
                "old photos she found in the attic from the lake house years",
                "nothing in particular, just catching up on the week"]),
        ],
    },
    {
        "tracker_id": "symptom",
        "name": "Symptom Log",
        "daily": False,
        "time": ("Time", "time_point", "the time the symptoms were noticed"),
        "fields": [
            mc("Symptoms", ["headache", "nausea", "fatigue", "dizziness", "fever"],
               "the symptoms experienced", "experienced {v}"),
            lk("Severity", 1, 10, "the severity on a scale of 1 to 10", "severity {v}"),
            lt("Note", "a free-form note about the symptoms", "note: {v}",
               ["it started right after lunch and eased once I lay down for a bit",
                "probably from staring at the screen all day without breaks",
                "came in waves during the meeting and made it hard to focus",
                "similar to last week's episode but noticeably milder this time",
                "drinking water and stepping outside helped more than expected",
                "woke up with it and it lingered through most of the morning"]),
        ],
    },
    {
        "tracker_id": "medication",
        "name": "Medication Log",
        "daily": False,
        "time": ("Time", "time_point", "the time the dose was due or taken"),
        "fields": [
            st("Medicine", "the name of the medicine", "took {v}",
               ["ibuprofen", "vitamin D", "allergy pills", "iron supplement", "melatonin", "antibiotic"]),
            n("Dose", "the dose in number of pills", "{v} pill(s)", ["0.5", "1", "2", "3"]),
            sc("Status", ["taken", "skipped"], "whether the dose was taken or skipped",
               "status {v}"),
        ],
    },
    {
        "tracker_id": "reading",
        "name": "Reading Session",
        "daily": False,
        "time": ("Span", "time_range", "the start and end time of the reading session"),
        "fields": [
            st("Book", "the book being read", "read {v}",
               ["the mystery novel", "a history of bridges", "the sci-fi trilogy", "a poetry collection",
                "the biography", "a cookbook"]),
            n("Pages", "the number of pages read", "{v} pages", ["8", "12", "20", "25", "30", "42", "55"]),
            lk("Engagement", 1, 5, "how engaging the session was on a scale of 1 to 5",
               "engagement {v} of 5"),
        ],
    },
    {
        "tracker_id": "screentime",
        "name": "Screen Time Summary",
        "daily": True,
        "time": ("Date", "date", "the date of the screen time summary"),
        "fields": [
            n("Hours", "the total screen time in hours", "{v} hours of screen time",
              ["1.5", "2", "2.5", "3", "4", "4.5", "5.5", "6"]),
            st("TopApp", "the app used the most", "mostly on {v}",
               ["the news app", "video calls", "a puzzle game", "social feeds", "the map app", "email"]),
            lk("Guilt", 1, 5, "how guilty the usage feels on a scale of 1 to 5",
               "guilt {v} of 5"),
        ],
    },
    {
        "tracker_id": "journal",
        "name": "Daily Journal",
        "daily": True,
        "time": ("Date", "date", "the date of the journal entry"),
        "fields": [
            lt("Reflection", "the free-form reflection on the day", "{v}",
               ["the day moved slowly but I kept my promises to myself, which counts",
                "too many meetings, yet the walk home under the maples fixed it",
                "I keep circling the same decision; writing it down made it smaller",
                "good food, good company, and an early night, nothing to add",
                "a frustrating morning turned around after one honest conversation",
                "I noticed I reach for my phone whenever a task gets hard"]),
            lk("DayRating", 1, 10, "the overall day rating on a scale of 1 to 10",
               "rating the day {v} of 10"),
            sc("Weather", ["sunny", "cloudy", "rainy", "snowy"], "the day's weather", "it was {v}"),
        ],
    },
]


def field_record(f):
    rec = {"name": f["name"], "kind": f["kind"]}
    if f["kind"] == "likert":
        rec["min"] = f["min"]
        rec["max"] = f["max"]
    if f["kind"] in ("single_choice", "multi_choice"):
        rec["options"] = f["options"]
    rec["description"] = f["description"]
    return rec


def tracker_record(t):
    tf_name, tf_kind, tf_desc = t["time"]
    return {
        "tracker_id": t["tracker_id"],
        "name": t["name"],
        "fields": [field_record(f) for f in t["fields"]],
        "time_field": {"name": tf_name, "kind": tf_kind, "description": tf_desc},
    }


def pick_value(f, rng):
    kind = f["kind"]
    if kind == "number":
        return rng.choice(f["pool"])
    if kind == "likert":
        return str(rng.randint(f["min"], f["max"]))
    if kind == "single_choice":
        return rng.choice(f["options"])
    if kind == "multi_choice":
        count = rng.randint(1, min(2, len(f["options"])))
        chosen = rng.sample(f["options"], count)
        return ", ".join(o for o in f["options"] if o in chosen)
    return rng.choice(f["pool"])


def time_value(kind, created, rng):
    stamp = created.strftime("%Y-%m-%dT%H:%M")
    if kind == "date":
        day = created.strftime("%Y-%m-%d")
        return day, f"on {day}"
    if kind == "time_point":
        return stamp, f"at {created.strftime('%H:%M')}"
    end = created + timedelta(minutes=rng.choice([20, 30, 45, 60, 90]))
    wire = f"{stamp} to {end.strftime('%Y-%m-%dT%H:%M')}"
    return wire, f"from {created.strftime('%H:%M')} to {end.strftime('%H:%M')}"


def gen_samples(t, rng):
    samples = []
    tf_name, tf_kind, _ = t["time"]
    for i in range(SAMPLES_PER_TRACKER):
        created = datetime(2023, 4, 1, rng.randint(7, 21), rng.choice([0, 10, 20, 30, 40, 50]))
        created += timedelta(days=i)
        subset = [f for f in t["fields"] if rng.random() < 0.72]
        if not subset:
            subset = [rng.choice(t["fields"])]
        values, frags = {}, []
        for f in t["fields"]:
            if f not in subset:
                continue
            v = pick_value(f, rng)
            values[f["name"]] = v
            frags.append(f["fmt"].format(v=v))
        if rng.random() < 0.5:
            wire, frag = time_value(tf_kind, created, rng)
            values[tf_name] = wire
            frags.append(frag)
        prefix = rng.choice(SUMMARY_PREFIXES if t["daily"] else PREFIXES)
        phrase = f"{prefix} {', '.join(frags)}."
        samples.append(
            {
                "sample_id": f"{t['tracker_id']}-{i:02d}",
                "tracker_id": t["tracker_id"],
                "phrase": phrase,
                "values": values,
                "origin": "synthetic",
                "created_at": created.strftime("%Y-%m-%dT%H:%M"),
            }
        )
    return samples


def main():
    rng = random.Random(20230401)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    schema_path = OUT_DIR / "seed_trackers.jsonl"
    sample_path = OUT_DIR / "seed_samples.jsonl"
    with open(schema_path, "w", encoding="utf-8") as fh:
        for t in TRACKERS:
            fh.write(json.dumps(tracker_record(t), ensure_ascii=False) + "\n")
    with open(sample_path, "w", encoding="utf-8") as fh:
        for t in TRACKERS:
            for rec in gen_samples(t, rng):
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")

    sys.path.insert(0, str(ROOT / "src"))
    from tracknlu.store import load_store

    store = load_store(schema_path, sample_path)
    assert len(store.trackers) == 24, len(store.trackers)
    assert len(store.samples) == 24 * SAMPLES_PER_TRACKER, len(store.samples)
    print(f"wrote {len(store.trackers)} trackers, {len(store.samples)} samples")


if __name__ == "__main__":
    main()
