"""
Scoring hypotheses and isolating the cost of noise
==================================================

The robustness question is never "what is the BLEU on noisy text" alone; it
is "how much of the score survives compared to the same sentences cleaned
up". That is the noisy/normalized ratio. This demo fakes a weak "system" by
damaging reference translations, then walks the full scoring path: corpus
BLEU and chrF, the ratio, and a bootstrap confidence interval.
"""

import random

from ugc_bench import bootstrap, metrics, report

references = [
    "the cat sleeps on the sofa all day long .",
    "someone talks to me in the morning before i wake up .",
    "my cousin plays that game much worse than me .",
    "given his face it is normal that we never spoke of her .",
    "the door of the garden stays open every evening .",
    "it is raining again on the old roof of the house .",
]

rng = random.Random(11)


def damage(text: str, rate: float) -> str:
    # drop roughly `rate` of the tokens, a crude stand-in for an MT system
    # that degrades under noise
    words = text.split()
    kept = [w for w in words if rng.random() > rate] or words[:1]
    return " ".join(kept)


noisy_hyps = [damage(r, 0.25) for r in references]      # system on noisy input
normalized_hyps = [damage(r, 0.05) for r in references]  # same system, clean input

for metric in ("bleu-intl", "chrf"):
    noisy = metrics.score_corpus(metric, noisy_hyps, references)
    normalized = metrics.score_corpus(metric, normalized_hyps, references)
    rep = metrics.ratio(noisy, normalized, label="demo")
    print(f"{metric:9s} noisy {noisy.value:6.2f}  normalized {normalized.value:6.2f}"
          f"  ratio {rep.ratio:.2f}")

# Percentile bootstrap over sentences: resample the corpus, rescore from the
# per-sentence statistics, read the interval off the score distribution.
pairs = list(zip(noisy_hyps, references))
ci = bootstrap.bootstrap_ci(pairs, "chrf", b=1000, level=0.95, seed=42)
print(f"\nchrf on noisy input: {ci.point:.2f}  95% CI [{ci.lower:.2f}, {ci.upper:.2f}]"
      f"  (b={ci.b}, seed={ci.seed})")

# Paired ratio interval: both conditions are resampled with the SAME sentence
# indices, so sentence difficulty cancels out of the ratio.
paired = bootstrap.paired_bootstrap_ratio(
    list(zip(noisy_hyps, references)),
    list(zip(normalized_hyps, references)),
    "chrf", b=1000, level=0.95, seed=42)
print(f"ratio: {paired.point:.3f}  95% CI [{paired.lower:.3f}, {paired.upper:.3f}]")

# The same numbers as a publishable table. Cells read "ratio (noisy score)".
noisy = metrics.score_corpus("chrf", noisy_hyps, references)
normalized = metrics.score_corpus("chrf", normalized_hyps, references)
table = report.ratio_table("robustness", ("demo system",), ("chrf",),
                           [[metrics.ratio(noisy, normalized)]])
print()
print(report.render_markdown(table))
