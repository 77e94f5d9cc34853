"""Stream tuples through a growing memory and watch reuse kick in.

The stream is 50 source tuples followed by 50 identity twins. Gold
feedback is banked after each tuple, so by the time a twin arrives its
source is stored and the retrieval corrector can replay the edit.

Run: python3 demos/05_stream_simulation.py
"""

from scriptfix import FeedbackMemory, RetrievalCorrector, emit_curve, reuse_stream, run_stream

stream = reuse_stream(seed=7)
result = run_stream(stream, RetrievalCorrector(), FeedbackMemory())

hits = [ev for ev in result.events if ev.retrieved_id is not None]
print(f"{len(result.events)} tuples streamed, {len(hits)} retrieved from memory, "
      f"final EM {result.run.report.em:.1f}")

first_hit = hits[0]
print(f"first reuse at position {first_hit.index}: tuple {first_hit.tuple_id!r} "
      f"matched record {first_hit.retrieved_id} at similarity {first_hit.similarity:.3f}")
print()

curve = emit_curve(result.events).splitlines()
print("learning curve (every 10th row):")
print(curve[0])
for row in curve[10::10]:
    print(row)
