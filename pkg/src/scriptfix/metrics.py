"""Scoring predicted edits against gold edits.

Exact match works on canonical edit strings (quote/bracket/case variation is
normalized away first); component match scores the location and type facets
separately. BLEU here is sentence-level BLEU-4 over whitespace tokens of the
canonical strings, with add-one smoothing for the higher orders only when
their match count is zero; ROUGE-L is the usual LCS F1.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .edits import EditCommand, canonical_edit_text, decompose, serialize_edit
from .engine import EditApplicationError, apply_edit, scripts_equivalent
from .graph import Script


def edit_text(e: EditCommand) -> str:
    return canonical_edit_text(serialize_edit(e))


def exact_match(gold: EditCommand, pred: EditCommand) -> int:
    return int(edit_text(gold) == edit_text(pred))


def component_match(gold: EditCommand, pred: EditCommand) -> tuple[int, int]:
    """(em_loc, em_type) for the decomposed edits."""
    g, p = decompose(gold), decompose(pred)
    return int(g.loc_text == p.loc_text), int(g.type_text == p.type_text)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(gold_text: str, pred_text: str) -> float:
    """Sentence BLEU-4 on canonicalized, whitespace-tokenized edit strings.

    Precisions are the usual clipped counts; for n >= 2 a zero match count is
    smoothed to (m+1)/(h+1) so near misses are graded rather than zeroed. An
    empty prediction, or one sharing no unigram with the gold, scores 0.
    Brevity penalty exp(1 - r/c) applies when the prediction is shorter.
    """
    ref = canonical_edit_text(gold_text).split()
    hyp = canonical_edit_text(pred_text).split()
    if not hyp or not ref:
        return 0.0
    log_sum = 0.0
    for n in range(1, 5):
        hyp_grams = _ngrams(hyp, n)
        ref_grams = _ngrams(ref, n)
        hits = sum(min(c, ref_grams[g]) for g, c in hyp_grams.items())
        total = max(len(hyp) - n + 1, 0)
        if n == 1:
            if hits == 0:
                return 0.0
            p = hits / total
        elif hits == 0:
            p = (hits + 1) / (total + 1)
        else:
            p = hits / total
        log_sum += math.log(p)
    bp = 1.0 if len(hyp) >= len(ref) else math.exp(1.0 - len(ref) / len(hyp))
    return bp * math.exp(log_sum / 4.0)


def _lcs_len(a: list[str], b: list[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[-1]))
        prev = cur
    return prev[-1]


def rouge_l(gold_text: str, pred_text: str) -> float:
    """LCS-based F1 over the canonicalized token sequences."""
    ref = canonical_edit_text(gold_text).split()
    hyp = canonical_edit_text(pred_text).split()
    if not ref or not hyp:
        return 0.0
    lcs = _lcs_len(ref, hyp)
    if lcs == 0:
        return 0.0
    precision = lcs / len(hyp)
    recall = lcs / len(ref)
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class ScoredPair:
    gold: EditCommand
    pred: EditCommand
    error_type: str | None = None


@dataclass
class MetricsReport:
    """Macro-averaged corpus scores, x100, plus per-error-type breakdown."""

    em: float
    em_type: float
    em_loc: float
    bleu: float
    rouge_l: float
    n: int
    by_error_type: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "em": self.em,
                "em_type": self.em_type,
                "em_loc": self.em_loc,
                "bleu": self.bleu,
                "rouge_l": self.rouge_l,
                "n": self.n,
                "by_error_type": self.by_error_type,
            },
            indent=2,
            sort_keys=True,
        )

    def by_error_type_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["error_type", "em", "em_type", "n"])
        for etype in sorted(self.by_error_type):
            row = self.by_error_type[etype]
            writer.writerow([etype, row["em"], row["em_type"], row["n"]])
        return buf.getvalue()


def score_corpus(pairs: list[ScoredPair]) -> MetricsReport:
    """Macro-average all metrics over the corpus (scores x100)."""
    if not pairs:
        raise ValueError("cannot score an empty corpus")
    ems, types_, locs, bleus, rouges = [], [], [], [], []
    buckets: dict[str, list[tuple[int, int]]] = {}
    for pair in pairs:
        em = exact_match(pair.gold, pair.pred)
        em_loc, em_type = component_match(pair.gold, pair.pred)
        g_text, p_text = serialize_edit(pair.gold), serialize_edit(pair.pred)
        ems.append(em)
        types_.append(em_type)
        locs.append(em_loc)
        bleus.append(bleu(g_text, p_text))
        rouges.append(rouge_l(g_text, p_text))
        key = pair.error_type or "unspecified"
        buckets.setdefault(key, []).append((em, em_type))
    n = len(pairs)
    by_type = {
        key: {
            "em": 100.0 * sum(e for e, _ in rows) / len(rows),
            "em_type": 100.0 * sum(t for _, t in rows) / len(rows),
            "n": len(rows),
        }
        for key, rows in buckets.items()
    }
    return MetricsReport(
        em=100.0 * sum(ems) / n,
        em_type=100.0 * sum(types_) / n,
        em_loc=100.0 * sum(locs) / n,
        bleu=100.0 * sum(bleus) / n,
        rouge_l=100.0 * sum(rouges) / n,
        n=n,
        by_error_type=by_type,
    )


@dataclass(frozen=True)
class ConsistencyGroup:
    """One script with the predicted edits for each feedback paraphrase."""

    script: Script
    predictions: tuple[EditCommand, ...]


def consistency(groups: list[ConsistencyGroup]) -> float:
    """Fraction of groups whose repaired scripts all agree pairwise.

    An edit that fails to apply leaves the script unrepaired, matching the
    corrector contract's fall-back-to-noop behavior.
    """
    if not groups:
        raise ValueError("cannot score an empty group list")
    agreed = 0
    for group in groups:
        repaired = []
        for e in group.predictions:
            try:
                repaired.append(apply_edit(group.script, e))
            except EditApplicationError:
                repaired.append(group.script)
        ok = all(
            scripts_equivalent(repaired[i], repaired[j])
            for i in range(len(repaired))
            for j in range(i + 1, len(repaired))
        )
        agreed += int(ok)
    return agreed / len(groups)
