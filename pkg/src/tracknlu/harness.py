"""Leave-one-tracker-out N-shot simulation harness and report emission."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .embedding import Embedder
from .gateway import CompletionBackend, CompletionRequest, GatewayError, MockBackend
from .metrics import F1Counts, f1_counts, jga, score_long_text, slot_set
from .postprocess import coerce, parse_completion
from .prompting import (
    STYLE_AUGMENTED,
    STYLE_ZERO_SHOT,
    PromptBundle,
    render_prompt,
    render_qa_inputs,
    render_values_line,
    render_zero_shot_prompt,
    select_shots,
)
from .store import Sample, SampleStore, exclude_tracker, samples_for_tracker

STYLES = (STYLE_AUGMENTED, STYLE_ZERO_SHOT)


@dataclass(frozen=True)
class EvalConfig:
    styles: tuple[str, ...] = (STYLE_AUGMENTED,)
    n_shots: tuple[int, ...] = (0, 1, 2, 3, 4)
    seed: int = 0
    collect_audits: bool = False


@dataclass
class ConditionResult:
    style: str
    n_shot: int
    examples: int = 0
    jga_hits: int = 0
    counts: F1Counts = field(default_factory=F1Counts)
    bleu_sum: float = 0.0
    rouge_sum: float = 0.0
    text_fields: int = 0
    runs: int = 0
    shortfalls: int = 0
    partial: bool = False

    @property
    def jga(self) -> float:
        return 100.0 * self.jga_hits / self.examples if self.examples else 0.0

    @property
    def f1(self) -> float:
        return self.counts.f1

    @property
    def bleu4(self) -> float:
        return 100.0 * self.bleu_sum / self.text_fields if self.text_fields else 0.0

    @property
    def rouge_l(self) -> float:
        return 100.0 * self.rouge_sum / self.text_fields if self.text_fields else 0.0


@dataclass
class EvalReport:
    seed: int
    conditions: list[ConditionResult]
    per_tracker: dict[str, dict[str, dict]]  # "style/N" -> tracker -> stats
    audits: list[dict] = field(default_factory=list)

    @property
    def total_runs(self) -> int:
        return sum(c.runs for c in self.conditions)


@dataclass(frozen=True)
class PromptJob:
    style: str
    n_shot: int
    sample: Sample
    bundle: PromptBundle
    shortfall: bool


def prior_samples(
    store: SampleStore, sample: Sample, n: int, seed: int
) -> tuple[list[Sample], bool]:
    """N same-tracker priors drawn without replacement by a keyed, seeded RNG."""
    others = [
        s
        for s in samples_for_tracker(store, sample.tracker_id)
        if s.sample_id != sample.sample_id
    ]
    rng = random.Random(f"{seed}|{sample.tracker_id}|{sample.sample_id}|{n}")
    take = min(n, len(others))
    return rng.sample(others, take), take < n


def iter_prompt_jobs(
    store: SampleStore, config: EvalConfig, embedder: Embedder
) -> Iterator[PromptJob]:
    """Yield every (style, N, sample) prompt of the simulation, in a stable
    order: style, then N, then tracker id, then sample order."""
    for style in config.styles:
        if style not in STYLES:
            raise ValueError(f"unknown style {style!r}")
        for n in config.n_shots:
            for tracker_id in sorted(store.trackers):
                if not store.index.get(tracker_id):
                    continue
                schema = store.trackers[tracker_id]
                view = exclude_tracker(store, tracker_id)
                for sample in samples_for_tracker(store, tracker_id):
                    priors, shortfall = prior_samples(store, sample, n, config.seed)
                    reference_time = sample.item.created_at
                    if style == STYLE_ZERO_SHOT:
                        bundle = render_zero_shot_prompt(schema, sample.phrase, reference_time)
                    else:
                        plan = select_shots(
                            sample.phrase,
                            tracker_id,
                            priors,
                            view,
                            embedder,
                            reference_time=reference_time,
                        )
                        bundle = render_prompt(schema, plan, store.trackers)
                    yield PromptJob(style, n, sample, bundle, shortfall)


def run_simulation(
    store: SampleStore,
    config: EvalConfig,
    backend: CompletionBackend,
    embedder: Embedder,
) -> EvalReport:
    """Run the full simulation; deterministic given (store, config, backend)."""
    conditions: dict[tuple[str, int], ConditionResult] = {
        (style, n): ConditionResult(style, n)
        for style in config.styles
        for n in config.n_shots
    }
    per_tracker: dict[str, dict[str, dict]] = {}
    audits: list[dict] = []
    aborted: set[tuple[str, int]] = set()

    for job in iter_prompt_jobs(store, config, embedder):
        key = (job.style, job.n_shot)
        if key in aborted:
            continue
        cond = conditions[key]
        schema = store.trackers[job.sample.tracker_id]
        try:
            result = backend.complete(
                CompletionRequest(prompt=job.bundle.text, stop_sequence=job.bundle.stop_sequence)
            )
        except GatewayError:
            cond.partial = True
            aborted.add(key)
            continue
        extraction = coerce(schema, parse_completion(result.text), embedder, result.text)

        gold = slot_set(schema, job.sample.item.values)
        pred = slot_set(schema, extraction.values)
        cond.runs += 1
        cond.examples += 1
        cond.jga_hits += jga(gold, pred)
        cond.counts = cond.counts + f1_counts(gold, pred)
        for b4, rl in score_long_text(schema, job.sample.item.values, extraction.values).values():
            cond.bleu_sum += b4
            cond.rouge_sum += rl
            cond.text_fields += 1
        if job.shortfall:
            cond.shortfalls += 1

        bucket = per_tracker.setdefault(f"{job.style}/{job.n_shot}", {}).setdefault(
            job.sample.tracker_id, {"examples": 0, "jga_hits": 0, "tp": 0, "fp": 0, "fn": 0}
        )
        bucket["examples"] += 1
        bucket["jga_hits"] += jga(gold, pred)
        counts = f1_counts(gold, pred)
        bucket["tp"] += counts.tp
        bucket["fp"] += counts.fp
        bucket["fn"] += counts.fn

        if config.collect_audits:
            audits.append(
                {
                    "style": job.style,
                    "n_shot": job.n_shot,
                    "tracker_id": job.sample.tracker_id,
                    "sample_id": job.sample.sample_id,
                    "shots": [
                        {
                            "sample_id": shot.sample.sample_id,
                            "tracker_id": shot.sample.tracker_id,
                            "role": shot.role,
                        }
                        for shot in job.bundle.shot_plan.shots
                    ],
                }
            )

    ordered = [conditions[(style, n)] for style in config.styles for n in config.n_shots]
    return EvalReport(seed=config.seed, conditions=ordered, per_tracker=per_tracker, audits=audits)


def record_oracle_fixtures(
    store: SampleStore,
    config: EvalConfig,
    embedder: Embedder,
    fixtures_dir: str | Path,
    completion_for: Callable[[Sample], str] | None = None,
) -> int:
    """Write a mock fixture for every simulation prompt.

    By default each fixture answers with the gold values line, which makes a
    mock-backed run exercise the whole pipeline deterministically.
    """
    mock = MockBackend(fixtures_dir)
    written = 0
    for job in iter_prompt_jobs(store, config, embedder):
        if completion_for is not None:
            text = completion_for(job.sample)
        else:
            schema = store.trackers[job.sample.tracker_id]
            text = render_values_line(schema, job.sample.item.values)
        mock.record(job.bundle.text, text)
        written += 1
    return written


def export_qa_inputs(store: SampleStore, out_path: str | Path) -> int:
    """Write the QA-baseline input file: one prompt per line, per sample per
    field, in stable tracker/sample/field order."""
    lines: list[str] = []
    for tracker_id in sorted(store.trackers):
        schema = store.trackers[tracker_id]
        for sample in samples_for_tracker(store, tracker_id):
            for _, prompt in render_qa_inputs(schema, sample.phrase):
                lines.append(prompt)
    Path(out_path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return len(lines)


def emit_report(report: EvalReport, fmt: str = "table") -> str:
    """Render a report: a Table-1-shaped text table or a structured JSON dump."""
    if fmt == "table":
        header = f"{'Style':<12}{'N-shot':>8}{'JGA':>8}{'F1':>8}{'B-4':>8}{'R-L':>8}{'Runs':>8}"
        rows = [header, "-" * len(header)]
        for c in report.conditions:
            flag = " (partial)" if c.partial else ""
            rows.append(
                f"{c.style:<12}{c.n_shot:>8}{c.jga:>8.1f}{c.f1:>8.1f}"
                f"{c.bleu4:>8.1f}{c.rouge_l:>8.1f}{c.runs:>8}{flag}"
            )
        return "\n".join(rows) + "\n"
    if fmt == "structured":
        payload = {
            "seed": report.seed,
            "total_runs": report.total_runs,
            "conditions": [
                {
                    "style": c.style,
                    "n_shot": c.n_shot,
                    "jga": c.jga,
                    "f1": c.f1,
                    "precision": c.counts.precision,
                    "recall": c.counts.recall,
                    "bleu4": c.bleu4,
                    "rouge_l": c.rouge_l,
                    "examples": c.examples,
                    "slots": c.counts.tp + c.counts.fn,
                    "runs": c.runs,
                    "shortfalls": c.shortfalls,
                    "partial": c.partial,
                }
                for c in report.conditions
            ],
            "per_tracker": report.per_tracker,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
