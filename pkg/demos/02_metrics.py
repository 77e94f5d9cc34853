"""Score predicted edits against gold ones, the way the harness does.

Run: python3 demos/02_metrics.py
"""

from scriptfix import ScoredPair, bleu, parse_edit, rouge_l, score_corpus

ROWS = [
    (
        "insert node 'open the back door of the car' before 'take blanket out of car'",
        "insert node 'open car door' before 'take blanket out of car'",
    ),
    (
        "insert node 'walk to the car' after 'get the receipt'",
        "insert node 'get into the car' after 'make the transaction'",
    ),
    (
        "remove node 'pick up the pen'",
        "remove node 'pick up the pen'",
    ),
    (
        "reorder edge between '< leave home and get in car , look around for the car >'",
        "remove node 'look around for the car'",
    ),
]

pairs = []
print(f"{'EM':>3} {'BLEU':>6} {'ROUGE-L':>8}  gold / predicted")
for gold_text, pred_text in ROWS:
    gold, pred = parse_edit(gold_text), parse_edit(pred_text)
    pairs.append(ScoredPair(gold, pred))
    em = int(gold == pred)
    print(f"{em:>3} {bleu(gold_text, pred_text):>6.3f} {rouge_l(gold_text, pred_text):>8.3f}  {gold_text}")
    print(f"{'':>20}  {pred_text}")

report = score_corpus(pairs)
print()
print(f"corpus of {report.n}: EM {report.em}  EM_type {report.em_type}  EM_loc {report.em_loc}")
print(f"              BLEU {report.bleu:.2f}  ROUGE-L {report.rouge_l:.2f}")
