"""Compare correctors on the bundled corpus under three feedback regimes.

True feedback should help, no feedback cannot, and distractor feedback
(a lexically similar complaint about someone else's plan) should hurt.

Run: python3 demos/04_correctors.py
"""

from scriptfix import FeedbackMode, KeywordCorrector, NoopCorrector, bundled_corpus, run_eval

corpus = bundled_corpus()
print(f"bundled corpus: {len(corpus)} tuples, error types "
      f"{sorted({t.error_type.value for t in corpus})}")
print()

print(f"{'corrector':<10} {'feedback':<12} {'EM':>6} {'EM_type':>8} {'EM_loc':>7}")
for corrector in (NoopCorrector(), KeywordCorrector()):
    for mode in (FeedbackMode.TRUE_FB, FeedbackMode.NO_FB, FeedbackMode.DISTRACTOR_FB):
        r = run_eval(corpus, corrector, mode).report
        print(f"{corrector.name:<10} {mode.value:<12} {r.em:>6.1f} {r.em_type:>8.1f} {r.em_loc:>7.1f}")

print()
r = run_eval(corpus, KeywordCorrector(), FeedbackMode.TRUE_FB).report
print("keyword corrector, true feedback, by error type:")
print(r.by_error_type_csv())
