"""Evaluation harness: one-shot scoring runs and the interaction stream.

run_eval answers "how good is this corrector on this corpus" under three
feedback regimes; run_stream simulates deployment, where every episode first
consults the growing memory and then (optionally) banks the true feedback for
later reuse.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import requests

from .correctors import CorrectionRequest, ExternalCorrectorError, FeedbackSource, correct
from .dataset import EvalTuple, attach_distractors
from .edits import EditCommand, noop
from .memory import FeedbackMemory
from .metrics import MetricsReport, ScoredPair, exact_match, score_corpus


class FeedbackMode(Enum):
    TRUE_FB = "true_fb"
    NO_FB = "no_fb"
    DISTRACTOR_FB = "distractor_fb"


@dataclass(frozen=True)
class EvalRun:
    report: MetricsReport
    infrastructure_failures: int


def _predict(request: CorrectionRequest, corrector) -> tuple[EditCommand, bool]:
    """Run a corrector; infrastructure failures score as noop."""
    try:
        return correct(request, corrector).edit, False
    except (ExternalCorrectorError, requests.RequestException):
        return noop(), True


def run_eval(tuples: list[EvalTuple], corrector, mode: FeedbackMode, distractor_k: int = 4) -> EvalRun:
    """Score a corrector over a corpus under one feedback regime.

    true_fb feeds the first gold paraphrase, no_fb feeds nothing, and
    distractor_fb feeds the rank-k neighbor's feedback. Every tuple is scored;
    infrastructure failures count separately and score as noop.
    """
    if mode is FeedbackMode.DISTRACTOR_FB:
        feeds = [fb for _, fb in attach_distractors(tuples, k=distractor_k)]
    elif mode is FeedbackMode.TRUE_FB:
        feeds = [t.feedbacks[0] for t in tuples]
    else:
        feeds = [None] * len(tuples)

    pairs: list[ScoredPair] = []
    failures = 0
    for t, fb in zip(tuples, feeds):
        source = FeedbackSource.USER if fb is not None else FeedbackSource.NONE
        request = CorrectionRequest(t.script_x, fb, source)
        predicted, failed = _predict(request, corrector)
        failures += int(failed)
        etype = t.error_type.value if t.error_type else None
        pairs.append(ScoredPair(t.gold_edit, predicted, etype))
    return EvalRun(score_corpus(pairs), failures)


@dataclass(frozen=True)
class StreamEvent:
    index: int
    tuple_id: str
    retrieved_id: int | None
    similarity: float | None
    predicted_edit: EditCommand
    em: int
    memory_size_after: int


@dataclass(frozen=True)
class StreamResult:
    events: tuple[StreamEvent, ...]
    run: EvalRun


def run_stream(
    tuples: list[EvalTuple],
    corrector,
    memory: FeedbackMemory,
    write_gold: bool = True,
) -> StreamResult:
    """Process tuples in order against a growing memory.

    Per episode: look the script up in memory, correct with the retrieved
    feedback (or none), score, then bank the episode's own script, true
    feedback, and gold edit when write_gold is set. With write_gold off the
    memory is left exactly as it was.
    """
    events: list[StreamEvent] = []
    pairs: list[ScoredPair] = []
    failures = 0
    for i, t in enumerate(tuples):
        hit = memory.lookup(t.script_x)
        if hit is not None:
            request = CorrectionRequest(t.script_x, hit.record.feedback, FeedbackSource.MEMORY, retrieved=hit)
        else:
            request = CorrectionRequest(t.script_x)
        predicted, failed = _predict(request, corrector)
        failures += int(failed)
        em = exact_match(t.gold_edit, predicted)
        if write_gold:
            memory.write(t.script_x, t.feedbacks[0], t.gold_edit)
        events.append(
            StreamEvent(
                index=i,
                tuple_id=t.id,
                retrieved_id=hit.record.id if hit else None,
                similarity=hit.similarity if hit else None,
                predicted_edit=predicted,
                em=em,
                memory_size_after=len(memory),
            )
        )
        etype = t.error_type.value if t.error_type else None
        pairs.append(ScoredPair(t.gold_edit, predicted, etype))
    return StreamResult(tuple(events), EvalRun(score_corpus(pairs), failures))


def emit_curve(events: list[StreamEvent] | tuple[StreamEvent, ...]) -> str:
    """Learning-curve CSV: memory size, cumulative correct, running EM."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["memory_size", "cumulative_correct", "running_em"])
    correct_so_far = 0
    for i, ev in enumerate(events, start=1):
        correct_so_far += ev.em
        writer.writerow([ev.memory_size_after, correct_so_far, f"{correct_so_far / i:.6f}"])
    return buf.getvalue()
