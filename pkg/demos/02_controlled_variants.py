"""
Generating controlled noisy variants from annotations
=====================================================

Every annotated span can be kept (left noisy) or replaced by its normalized
form. Choosing subsets of spans gives test sentences whose noise content is
known exactly, which is what makes per-phenomenon robustness measurable.
"""

from importlib.resources import files

from ugc_bench.corpus import parse_corpus
from ugc_bench.generate import exactly_n_sets, make_variant, single_type_sets

corpus = parse_corpus(files("ugc_bench").joinpath("data/sample_corpus.jsonl").read_bytes())
record = corpus.get("sample-002")

# Keep one span, normalize the rest.
for i in range(len(record.spans)):
    variant = make_variant(record, [i])
    codes = ",".join(str(c) for c in variant.kept_codes)
    print(f"keep span {i} (codes {codes}): {variant.text}")
print()

# One evaluation set per phenomenon type: each variant keeps exactly one span
# of the requested code.
for code in (2, 5, 12):
    eval_set = single_type_sets(corpus, code)
    print(f"{eval_set.label}: {len(eval_set)} variants, pure={eval_set.pure}")
    for entry in eval_set.entries[:2]:
        print(f"    {entry.variant.text}")
print()

# Noise-density bins: all ways of keeping exactly n spans. Sizes grow
# binomially, so a cap bounds the enumeration per record.
for n in (1, 2, 3):
    print(f"exactly {n} kept: {len(exactly_n_sets(corpus, n))} variants")
capped = exactly_n_sets(corpus, 2, cap=3)
print(f"exactly 2 kept, cap 3/record: {len(capped)} variants (truncated={capped.truncated})")
