"""
Filling <UNK> slots in hypotheses from the source sentence
==========================================================

Systems with closed vocabularies emit <UNK> for words they cannot produce.
For noisy input that is often a named entity or a creative spelling that the
reader would rather see verbatim. A word-to-word translation table trained
with EM points each <UNK> slot back at the source token most likely to have
produced it, and that token is copied through.
"""

from ugc_bench import align

parallel = [
    ("le chat dort", "the cat sleeps"),
    ("le chien dort", "the dog sleeps"),
    ("le chat mange", "the cat eats"),
    ("la porte est ouverte", "the door is open"),
    ("le chien mange", "the dog eats"),
]
pairs = [(s.split(), t.split()) for s, t in parallel]

model = align.train_ibm1(pairs, iterations=10)

# EM raises the data log-likelihood at every step; a flat tail means it
# converged.
ll = model.log_likelihood
print("log-likelihood per iteration:")
print("  " + " ".join(f"{v:.3f}" for v in ll))

print("\nmost likely translations:")
for src_word in ("chat", "dort", "chien"):
    row = model.table[src_word]
    best = max(row, key=row.get)
    print(f"  {src_word} -> {best} ({row[best]:.3f})")

# A hypothesis with two <UNK> slots. The model aligns each slot to a source
# position and copies the source token.
src = "le chat dort sur la porte".split()
hyp = "the <UNK> sleeps on the <UNK>".split()
print(f"\nsource:     {' '.join(src)}")
print(f"hypothesis: {' '.join(hyp)}")
print(f"repaired:   {align.replace_unk(model, src, hyp)}")

# Unseen source words fall back to a diagonal guess: the slot's relative
# position picks the source token.
src = "xyzzy plugh dort".split()
hyp = "<UNK> sleeps".split()
print(f"\nall-new source {src} + {hyp} -> {align.replace_unk(model, src, hyp)!r}")
