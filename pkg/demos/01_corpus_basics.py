"""
Loading a span-annotated corpus and reading its statistics
==========================================================

"""

from importlib.resources import files

from ugc_bench.corpus import (
    CorpusValidationError,
    TypologyCode,
    corpus_stats,
    parse_corpus,
    src_normalized,
)

# The package bundles a four-record corpus. Each record is one noisy French
# sentence, its English translation, the normalized forms of both, and a set
# of character-offset spans tagging every nonstandard phenomenon with one or
# more numeric codes.
blob = files("ugc_bench").joinpath("data/sample_corpus.jsonl").read_bytes()
corpus = parse_corpus(blob)

for record in corpus.records:
    print(f"{record.id}: {record.src}")
    for span in record.spans:
        codes = ",".join(str(int(c)) for c in span.codes)
        print(f"    [{span.start}:{span.end}] ({codes}) {record.src[span.start:span.end]!r}"
              f" -> {span.norm!r}")
    # Applying every span's replacement yields the normalized source.
    print(f"    normalized: {src_normalized(record)}")
    print()

# Aggregate statistics: how often each phenomenon code occurs.
stats = corpus_stats(corpus)
print(f"{stats.record_count} records, {stats.span_count} spans, "
      f"{stats.avg_per_span:.2f} spans/sentence")
for code in TypologyCode:
    n = stats.per_code_counts.get(code, 0)
    if n:
        print(f"  code {int(code):2d} {code.label:<22} {n}")

# The parser is strict: offsets must index the source text, spans must not
# overlap, codes must come from the typology. A bad file never half-loads.
bad = b'{"id":"x","src":"abc","tgt":"t","tgt_norm":"t","spans":[{"start":2,"end":9,"codes":[1],"norm":""}]}\n'
try:
    parse_corpus(bad)
except CorpusValidationError as err:
    print(f"\nrejected bad record: [{err.kind}] {err}")
