"""
Measuring how far noisy text sits from canonical text
=====================================================

"""

from ugc_bench import lm

# A canonical training corpus and two test corpora: one drawn from the same
# register, one full of nonstandard spellings.
train = [s.split() for s in [
    "le chat dort sur le canapé",
    "le chien dort dans le jardin",
    "le matin on me parle du jardin",
    "la porte de la maison est ouverte",
    "il fait beau ce matin sur la montagne",
    "le chat et le chien jouent dans la maison",
]]
close = [s.split() for s in [
    "le chat dort dans la maison",
    "il fait beau sur le canapé",
]]
far = [s.split() for s in [
    "le cha dor sur le kanapé",
    "il fé bo ce matain sur la montane",
]]

# Three complementary signals, one report each: trigram KL divergence of the
# test distribution against the smoothed training distribution, the share of
# test tokens outside the training lexicon, and test perplexity under a
# Kneser-Ney trigram model.
# Note how no single signal suffices: perplexity barely moves for the noisy
# corpus because its unknown words collapse onto the UNK symbol, but the OOV
# rate and the trigram divergence both expose the shift.
for label, test in (("same register", close), ("noisy spellings", far)):
    rep = lm.divergence_report(train, test, label=label)
    print(f"{label:16s} KL3 {rep.kl3:7.3f}   OOV {rep.oov_pct:5.1f}%   PPL {rep.ppl:8.2f}")

# The pieces are available separately.
model = lm.train_kn(train, order=3, unk_threshold=1)
print(f"\nmodel vocab: {len(model.vocab)} symbols, discounts {model.discounts[1:]}")
print(f"p('dort' | 'le chat') = {model.prob('dort', ('le', 'chat')):.4f}")
print(f"p('dort' | unseen context) = {model.prob('dort', ('zzz', 'qqq')):.4f}")

# ARPA export round-trips: the written file scores text identically.
import io

buf = io.StringIO()
lm.write_arpa(model, buf)
back = lm.read_arpa(io.StringIO(buf.getvalue()))
print(f"perplexity native {lm.perplexity(model, close):.6f} "
      f"== reloaded {lm.perplexity(back, close):.6f}")
