"""Shared test helpers: fixture loading and randomized well-formed records."""

import random
from importlib.resources import files

from ugc_bench.corpus import parse_corpus

# Pieces deliberately include an astral-plane emoji, a combining accent and
# multi-byte letters so code point offsets get exercised against bytes.
_PIECES = ["a", "b", "c", "d", "w", "é", "à", "ï", "é", "😀", "œ", " ", " "]

NORMALIZED_SAMPLES = {
    "sample-001": "Jean qui n'arrive pas à dépasser 1 à Jean ...",
    "sample-002": "le matin à 7h on me parle alors que je suis pas encore réveillé.",
    "sample-003": "vu sa tête c'est normal qu'on a jamais parlé d'elle !",
    "sample-004": "y a ma cousine qui joue à Jean Jean elle et plus nulle que moi",
}


def sample_corpus_bytes() -> bytes:
    return files("ugc_bench").joinpath("data/sample_corpus.jsonl").read_bytes()


def load_sample_corpus():
    return parse_corpus(sample_corpus_bytes())


def random_record_dict(rng: random.Random, rid: str, max_spans: int = 4) -> dict:
    src = "".join(rng.choice(_PIECES) for _ in range(rng.randint(1, 60)))
    spans = []
    pos = 0
    while pos < len(src) and len(spans) < max_spans and rng.random() < 0.8:
        start = rng.randint(pos, len(src) - 1)
        end = rng.randint(start + 1, min(len(src), start + 6))
        spans.append({
            "start": start,
            "end": end,
            "codes": sorted(rng.sample(range(1, 14), rng.randint(1, 3))),
            "norm": rng.choice(["", "x", "norme", "l'été", "😀"]),
        })
        pos = end
    return {
        "id": rid,
        "src": src,
        "tgt": "tgt " + rid,
        "tgt_norm": "norm " + rid,
        "revision": rng.randint(0, 5),
        "spans": spans,
    }


def random_corpus_lines(seed: int, count: int) -> list[str]:
    import json

    rng = random.Random(seed)
    return [json.dumps(random_record_dict(rng, f"r{i:05d}"), ensure_ascii=False)
            for i in range(count)]
