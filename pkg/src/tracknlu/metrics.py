"""Slot-set metrics (JGA, micro F1) and text metrics (BLEU-4, ROUGE-L)."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .schema import LONG_TEXT, FieldValue, TrackerSchema, canon, render_value

BLEU_EPSILON = 0.1  # numerator floor for zero-matched n >= 2 counts

_TOKEN_CLEAN = re.compile(r"[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation to spaces, split on whitespace."""
    return _TOKEN_CLEAN.sub(" ", text.lower()).split()


def canonical_slot_value(fv: FieldValue) -> str:
    """Canonical comparison string: wire form, case-folded and trimmed.

    Multi-choice labels are sorted so option order never affects matching.
    """
    if fv.kind == "multi_choice":
        return canon(", ".join(sorted(canon(label) for label in fv.value)))
    return canon(render_value(fv))


def slot_set(schema: TrackerSchema, values: Mapping[str, FieldValue]) -> frozenset[tuple[str, str]]:
    """(field, value) pairs over close-ended fields (everything but long text)."""
    close_ended = {f.name for f in schema.all_fields() if f.kind.kind != LONG_TEXT}
    return frozenset(
        (canon(name), canonical_slot_value(fv))
        for name, fv in values.items()
        if name in close_ended
    )


def jga(gold: frozenset, pred: frozenset) -> int:
    """1 iff the predicted slot set exactly equals gold."""
    return 1 if gold == pred else 0


@dataclass(frozen=True)
class F1Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "F1Counts") -> "F1Counts":
        return F1Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        return 100.0 * self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return 100.0 * self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fp + self.fn
        return 100.0 * 2 * self.tp / denom if denom else 0.0


def f1_counts(gold: frozenset, pred: frozenset) -> F1Counts:
    tp = len(gold & pred)
    return F1Counts(tp=tp, fp=len(pred) - tp, fn=len(gold) - tp)


def slot_f1(examples: Iterable[tuple[frozenset, frozenset]]) -> tuple[float, float, float]:
    """Micro-averaged precision, recall, F1 (each scaled to 0..100)."""
    total = F1Counts()
    for gold, pred in examples:
        total = total + f1_counts(gold, pred)
    return total.precision, total.recall, total.f1


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu4(reference: str, hypothesis: str) -> float:
    """Sentence BLEU-4 with a fixed epsilon numerator for zero counts (n >= 2)."""
    ref = tokenize(reference)
    hyp = tokenize(hypothesis)
    if not hyp:
        return 0.0
    log_sum = 0.0
    for n in range(1, 5):
        hyp_grams = _ngram_counts(hyp, n)
        ref_grams = _ngram_counts(ref, n)
        total = sum(hyp_grams.values())
        matched = sum(min(c, ref_grams[g]) for g, c in hyp_grams.items())
        if total == 0:
            # hypothesis shorter than n tokens
            p_n = BLEU_EPSILON
        elif matched == 0:
            if n == 1:
                return 0.0
            p_n = BLEU_EPSILON / total
        else:
            p_n = matched / total
        log_sum += math.log(p_n)
    bp = 1.0 if len(hyp) >= len(ref) else math.exp(1.0 - len(ref) / len(hyp))
    return bp * math.exp(log_sum / 4.0)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(reference: str, hypothesis: str) -> float:
    """ROUGE-L F-measure with the reference length as the recall denominator."""
    ref = tokenize(reference)
    hyp = tokenize(hypothesis)
    if not ref or not hyp:
        return 0.0
    lcs = _lcs_length(ref, hyp)
    if lcs == 0:
        return 0.0
    recall = lcs / len(ref)
    precision = lcs / len(hyp)
    return 2 * precision * recall / (precision + recall)


def score_long_text(
    schema: TrackerSchema,
    gold_values: Mapping[str, FieldValue],
    pred_values: Mapping[str, FieldValue],
) -> dict[str, tuple[float, float]]:
    """(BLEU-4, ROUGE-L) per long-text field present in gold; missing
    predictions score 0."""
    out: dict[str, tuple[float, float]] = {}
    for f in schema.all_fields():
        if f.kind.kind != LONG_TEXT or f.name not in gold_values:
            continue
        gold_text = gold_values[f.name].value
        pred_fv = pred_values.get(f.name)
        pred_text = pred_fv.value if pred_fv is not None else ""
        out[f.name] = (bleu4(gold_text, pred_text), rouge_l(gold_text, pred_text))
    return out
