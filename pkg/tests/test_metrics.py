import json
import math
from collections import Counter
from functools import lru_cache

import pytest

from conftest import SCORED_ROWS, XBOX_GOLD, XBOX_PRED
from scriptfix.edits import parse_edit
from scriptfix.engine import apply_edit
from scriptfix.graph import chain
from scriptfix.metrics import (
    ConsistencyGroup,
    ScoredPair,
    bleu,
    component_match,
    consistency,
    exact_match,
    rouge_l,
    score_corpus,
)

# Regression constants, frozen from the oracle implementations below on
# 2026-08-15. If these move, the metric changed, not the oracle.
XBOX_BLEU = 0.24572492027154272
ABC_ROUGE = 2.0 / 3.0


def oracle_bleu(gold: str, pred: str) -> float:
    """Independent sentence BLEU-4: clipped n-gram precisions with add-one
    smoothing for zero-hit orders above unigram (which also skips orders the
    prediction is too short to have), brevity penalty on the short side."""
    g, p = gold.lower().split(), pred.lower().split()
    if not p or not g:
        return 0.0
    logs = []
    for n in range(1, 5):
        g_counts = Counter(tuple(g[i : i + n]) for i in range(len(g) - n + 1))
        p_grams = [tuple(p[i : i + n]) for i in range(len(p) - n + 1)]
        total = len(p_grams)
        hits = sum(min(c, g_counts[gram]) for gram, c in Counter(p_grams).items())
        if n == 1:
            if hits == 0:
                return 0.0
            logs.append(math.log(hits / total))
        elif hits == 0:
            logs.append(math.log((hits + 1) / (total + 1)))
        else:
            logs.append(math.log(hits / total))
    bp = 1.0 if len(p) >= len(g) else math.exp(1 - len(g) / len(p))
    return bp * math.exp(sum(logs) / 4)


def oracle_rouge_l(gold: str, pred: str) -> float:
    g, p = tuple(gold.split()), tuple(pred.split())

    @lru_cache(maxsize=None)
    def lcs(i: int, j: int) -> int:
        if i == len(g) or j == len(p):
            return 0
        if g[i] == p[j]:
            return 1 + lcs(i + 1, j + 1)
        return max(lcs(i + 1, j), lcs(i, j + 1))

    common = lcs(0, 0)
    if common == 0 or not g or not p:
        return 0.0
    prec, rec = common / len(p), common / len(g)
    return 2 * prec * rec / (prec + rec)


def test_exact_match_is_textual_on_canonical_form():
    a = parse_edit("remove node 'pick up the pen'")
    b = parse_edit("  Remove   Node  ‘pick up the pen’ ")
    assert exact_match(a, b) == 1
    c = parse_edit("remove node 'pick up a pen'")
    assert exact_match(a, c) == 0


@pytest.mark.parametrize("gold, pred, em, em_type, em_loc", SCORED_ROWS)
def test_worked_rows_component_scores(gold, pred, em, em_type, em_loc):
    g, p = parse_edit(gold), parse_edit(pred)
    assert exact_match(g, p) == em
    got_loc, got_type = component_match(g, p)
    assert got_type == em_type
    assert got_loc == em_loc


def test_worked_corpus_scores():
    pairs = [ScoredPair(parse_edit(g), parse_edit(p)) for g, p, *_ in SCORED_ROWS]
    report = score_corpus(pairs)
    assert report.em == 25.0
    assert report.em_type == 75.0
    assert report.em_loc == 50.0
    assert report.n == 4


def test_insert_direction_counts_toward_type():
    before = parse_edit("insert node 'x' before 'a'")
    after = parse_edit("insert node 'x' after 'a'")
    _, em_type = component_match(before, after)
    assert em_type == 0


def test_bleu_identical_and_disjoint():
    text = "remove node 'pick up the pen'"
    assert bleu(text, text) == 1.0
    assert bleu("alpha beta gamma delta", "epsilon zeta eta theta") == 0.0


def test_bleu_frozen_regression_constant():
    got = bleu(XBOX_GOLD, XBOX_PRED)
    assert got == pytest.approx(XBOX_BLEU, abs=1e-9)
    assert oracle_bleu(XBOX_GOLD, XBOX_PRED) == pytest.approx(XBOX_BLEU, abs=1e-9)


def test_bleu_matches_oracle_on_varied_pairs():
    pairs = [
        (XBOX_GOLD, XBOX_PRED),
        ("remove node 'a'", "remove node 'a'"),
        ("insert node 'x y z' before 'a b'", "insert node 'x y q' before 'a b'"),
        ("a b c d e f", "a b c"),  # brevity penalty side
        ("a b", "a b c d e f"),
        ("noop", "remove node 'x'"),
    ]
    for g, p in pairs:
        assert bleu(g, p) == pytest.approx(oracle_bleu(g, p), abs=1e-12)


def test_bleu_short_sides_do_not_crash():
    assert bleu("noop", "noop") == 1.0
    assert 0.0 <= bleu("a b", "a c") <= 1.0


def test_rouge_identical_and_disjoint():
    text = "insert node 'walk to the car' after 'get the receipt'"
    assert rouge_l(text, text) == 1.0
    assert rouge_l("alpha beta", "gamma delta") == 0.0


def test_rouge_frozen_regression_constant():
    assert rouge_l("a b c", "a x c") == pytest.approx(ABC_ROUGE, abs=1e-9)
    assert oracle_rouge_l("a b c", "a x c") == pytest.approx(ABC_ROUGE, abs=1e-9)


def test_rouge_matches_oracle_on_varied_pairs():
    pairs = [
        (XBOX_GOLD, XBOX_PRED),
        ("a b c d", "b d a c"),
        ("the quick brown fox", "the brown quick fox"),
        ("x", "x y z"),
    ]
    for g, p in pairs:
        assert rouge_l(g, p) == pytest.approx(oracle_rouge_l(g, p), abs=1e-12)


def test_score_corpus_by_error_type():
    pairs = [
        ScoredPair(parse_edit("remove node 'a'"), parse_edit("remove node 'a'"), "wrong_step"),
        ScoredPair(parse_edit("remove node 'a'"), parse_edit("remove node 'b'"), "wrong_step"),
        ScoredPair(parse_edit("noop"), parse_edit("remove node 'a'"), "missing_step"),
    ]
    report = score_corpus(pairs)
    by = report.by_error_type
    assert by["wrong_step"] == {"em": 50.0, "em_type": 100.0, "n": 2}
    assert by["missing_step"]["em"] == 0.0
    csv_text = report.by_error_type_csv()
    assert csv_text.splitlines()[0] == "error_type,em,em_type,n"
    assert any(line.startswith("wrong_step,50.0,100.0,2") for line in csv_text.splitlines())


def test_score_corpus_rejects_empty():
    with pytest.raises(ValueError):
        score_corpus([])


def test_report_json_shape():
    report = score_corpus([ScoredPair(parse_edit("noop"), parse_edit("noop"))])
    data = json.loads(report.to_json())
    assert set(data) == {"em", "em_type", "em_loc", "bleu", "rouge_l", "n", "by_error_type"}
    assert data["em"] == 100.0


def test_consistency_counts_agreeing_groups():
    s = chain("", ["a", "b", "c"])
    same = ConsistencyGroup(s, (parse_edit("remove node 'b'"), parse_edit("remove node 'b'")))
    differs = ConsistencyGroup(s, (parse_edit("remove node 'b'"), parse_edit("remove node 'c'")))
    assert consistency([same]) == 1.0
    assert consistency([same, differs]) == 0.5


def test_consistency_treats_inapplicable_as_unrepaired():
    s = chain("", ["a", "b"])
    # both predictions fail to apply, so both leave s unchanged: agreement
    group = ConsistencyGroup(s, (parse_edit("remove node 'ghost'"), parse_edit("remove node 'phantom'")))
    assert consistency([group]) == 1.0
    # one applies, one does not: disagreement
    half = ConsistencyGroup(s, (parse_edit("remove node 'b'"), parse_edit("remove node 'ghost'")))
    assert consistency([half]) == 0.0


def test_consistency_uses_result_equivalence_not_edit_equality():
    s = chain("", ["a", "b", "c"])
    # inserting before c and after b land in the same place
    group = ConsistencyGroup(s, (parse_edit("insert node 'mid' before 'c'"), parse_edit("insert node 'mid' after 'b'")))
    assert consistency([group]) == 1.0
    assert apply_edit(s, group.predictions[0]).edges == apply_edit(s, group.predictions[1]).edges
