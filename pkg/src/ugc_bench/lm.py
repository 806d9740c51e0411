"""N-gram language models and corpus divergence diagnostics.

Training builds an interpolated Kneser-Ney model. At the top order the raw
n-gram counts are discounted; every lower order uses continuation counts
(the number of distinct words observed immediately before the n-gram),
except that n-grams starting with the sentence-start symbol keep their raw
counts since nothing can precede a sentence start. Each order k has a single
absolute discount D_k = n1 / (n1 + 2 * n2) taken from the count-of-counts of
the counts actually discounted at that order; when n1 + 2 * n2 is zero the
discount falls back to 0.75 and the order is flagged. The recursion bottoms
out in a uniform distribution over the vocabulary, so every in-vocabulary
word gets nonzero mass and the conditional distributions sum to one exactly.

Rare training words (count <= unk_threshold) are mapped to an unknown-word
symbol before counting; scoring maps out-of-vocabulary words the same way.

Divergence between two corpora is summarized by the perplexity of a model
trained on one and evaluated on the other, the out-of-vocabulary token rate,
and the KL divergence between empirical trigram distributions with add-alpha
smoothing applied to the training side only.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence, Union

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

FALLBACK_DISCOUNT = 0.75


@dataclass(frozen=True)
class NGramLM:
    """Interpolated Kneser-Ney model; tables are indexed by order (entry 0 unused)."""

    order: int
    vocab: frozenset[str]
    lexicon: frozenset[str]
    unk_threshold: int
    counts: tuple[dict, ...] = field(repr=False)
    context_totals: tuple[dict, ...] = field(repr=False)
    context_types: tuple[dict, ...] = field(repr=False)
    discounts: tuple[float, ...]
    fallback_orders: tuple[int, ...] = ()

    def _map(self, token: str) -> str:
        return token if token in self.vocab else UNK

    def _p(self, k: int, ctx: tuple[str, ...], w: str) -> float:
        if k == 0:
            return 1.0 / len(self.vocab)
        lower = self._p(k - 1, ctx[1:], w) if k > 1 else self._p(0, (), w)
        total = self.context_totals[k].get(ctx)
        if not total:
            return lower
        count = self.counts[k].get(ctx + (w,), 0)
        d = self.discounts[k]
        lam = d * self.context_types[k][ctx] / total
        return max(count - d, 0.0) / total + lam * lower

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        """p(word | context). OOV words map to the unknown symbol.

        Contexts shorter than order - 1 are scored at the matching lower
        order; longer contexts are truncated on the left.
        """
        w = self._map(word)
        ctx = tuple(t if t == BOS else self._map(t) for t in context)
        if len(ctx) > self.order - 1:
            ctx = ctx[len(ctx) - (self.order - 1):] if self.order > 1 else ()
        return self._p(len(ctx) + 1, ctx, w)

    def logprob(self, word: str, context: Sequence[str] = ()) -> float:
        p = self.prob(word, context)
        return math.log(p) if p > 0.0 else -math.inf

    @classmethod
    def uniform(cls, symbols: Iterable[str]) -> "NGramLM":
        """A unigram model that spreads all mass evenly over the given symbols."""
        vocab = frozenset(symbols) | {UNK, EOS}
        empty: tuple[dict, ...] = ({}, {})
        return cls(order=1, vocab=vocab, lexicon=vocab, unk_threshold=0,
                   counts=empty, context_totals=empty, context_types=empty,
                   discounts=(0.0, 0.0))


def _padded_ngrams(tokens: list[str], order: int):
    seq = [BOS] * (order - 1) + tokens + [EOS]
    for t in range(order - 1, len(seq)):
        yield tuple(seq[t - order + 1:t + 1])


def train_kn(sentences: Iterable[Sequence[str]], order: int, unk_threshold: int = 1) -> NGramLM:
    """Train an interpolated Kneser-Ney model of the given order."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if unk_threshold < 0:
        raise ValueError(f"unk_threshold must be >= 0, got {unk_threshold}")
    sents = [list(s) for s in sentences]
    if not sents:
        raise ValueError("empty training corpus")
    for s in sents:
        for t in s:
            if t in (BOS, EOS, UNK):
                raise ValueError(f"token {t!r} collides with a reserved symbol")
    lexicon = Counter(t for s in sents for t in s)
    keep = {t for t, c in lexicon.items() if c > unk_threshold}

    raw: list[Counter] = [Counter() for _ in range(order + 1)]
    for s in sents:
        toks = [t if t in keep else UNK for t in s]
        for gram in _padded_ngrams(toks, order):
            for k in range(1, order + 1):
                raw[k][gram[order - k:]] += 1

    # Adjusted count tables: raw at the top, continuation counts below, with
    # the sentence-start exception.
    counts: list[dict] = [{} for _ in range(order + 1)]
    counts[order] = dict(raw[order])
    for k in range(order - 1, 0, -1):
        table: dict = {}
        for gram in raw[k + 1]:
            suffix = gram[1:]
            if suffix[0] == BOS:
                continue
            table[suffix] = table.get(suffix, 0) + 1
        for gram, c in raw[k].items():
            if gram[0] == BOS:
                table[gram] = c
        counts[k] = table

    totals: list[dict] = [{} for _ in range(order + 1)]
    types: list[dict] = [{} for _ in range(order + 1)]
    discounts = [0.0] * (order + 1)
    fallback = []
    for k in range(1, order + 1):
        for gram, c in counts[k].items():
            ctx = gram[:-1]
            totals[k][ctx] = totals[k].get(ctx, 0) + c
            types[k][ctx] = types[k].get(ctx, 0) + 1
        n1 = sum(1 for c in counts[k].values() if c == 1)
        n2 = sum(1 for c in counts[k].values() if c == 2)
        if n1 + 2 * n2 == 0:
            discounts[k] = FALLBACK_DISCOUNT
            fallback.append(k)
        else:
            discounts[k] = n1 / (n1 + 2 * n2)

    return NGramLM(
        order=order,
        vocab=frozenset(keep) | {UNK, EOS},
        lexicon=frozenset(lexicon),
        unk_threshold=unk_threshold,
        counts=tuple(counts),
        context_totals=tuple(totals),
        context_types=tuple(types),
        discounts=tuple(discounts),
        fallback_orders=tuple(fallback),
    )


def perplexity(lm, sentences: Iterable[Sequence[str]]) -> float:
    """exp of the mean negative log probability over all scored tokens.

    Each sentence is padded with sentence-start symbols per the model order
    and contributes its tokens plus one end-of-sentence event.
    """
    logps: list[float] = []
    history_len = lm.order - 1
    for s in sentences:
        hist = [BOS] * history_len
        for w in list(s) + [EOS]:
            logps.append(lm.logprob(w, tuple(hist)))
            if history_len:
                hist = (hist + [w])[-history_len:]
    if not logps:
        raise ValueError("empty evaluation set")
    return math.exp(-math.fsum(logps) / len(logps))


def oov_rate(vocab: Iterable[str], sentences: Iterable[Sequence[str]]) -> float:
    """Percentage of tokens not present in the vocabulary."""
    vocab = frozenset(vocab)
    total = 0
    oov = 0
    for s in sentences:
        for t in s:
            total += 1
            oov += t not in vocab
    if total == 0:
        raise ValueError("empty evaluation set")
    return 100.0 * oov / total


def _trigram_counts(sentences: Iterable[Sequence[str]]) -> Counter:
    c: Counter = Counter()
    for s in sentences:
        toks = list(s)
        for i in range(len(toks) - 2):
            c[tuple(toks[i:i + 3])] += 1
    return c


def kl3(train_sentences: Iterable[Sequence[str]], test_sentences: Iterable[Sequence[str]],
        alpha: float = 1e-3) -> float:
    """KL(test || train) in nats between empirical trigram distributions.

    Support is the union of trigram types from both sides; add-alpha
    smoothing is applied to the training distribution only, so the estimate
    is finite for test trigrams unseen in training.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    train = _trigram_counts(train_sentences)
    test = _trigram_counts(test_sentences)
    if not train:
        raise ValueError("training corpus yields no trigram (all sentences shorter than 3 tokens)")
    if not test:
        raise ValueError("test corpus yields no trigram (all sentences shorter than 3 tokens)")
    support = len(set(train) | set(test))
    train_total = sum(train.values())
    test_total = sum(test.values())
    denom = train_total + alpha * support
    kl = 0.0
    for gram, c in test.items():
        p = c / test_total
        q = (train[gram] + alpha) / denom
        kl += p * math.log(p / q)
    return kl


@dataclass(frozen=True)
class DivergenceReport:
    """Train/test divergence summary: trigram KL, OOV percentage, perplexity."""

    label: str
    kl3: float
    oov_pct: float
    ppl: float
    lm_order: int
    alpha: float

    def to_dict(self) -> dict:
        return {"label": self.label, "kl3": self.kl3, "oov_pct": self.oov_pct,
                "ppl": self.ppl, "lm_order": self.lm_order, "alpha": self.alpha}


def divergence_report(train_sentences: Sequence[Sequence[str]],
                      test_sentences: Sequence[Sequence[str]],
                      label: str = "", lm_order: int = 3, alpha: float = 1e-3,
                      unk_threshold: int = 1) -> DivergenceReport:
    """All three divergence signals of a test corpus against a training corpus."""
    train = [list(s) for s in train_sentences]
    test = [list(s) for s in test_sentences]
    lm = train_kn(train, order=lm_order, unk_threshold=unk_threshold)
    return DivergenceReport(
        label=label,
        kl3=kl3(train, test, alpha=alpha),
        oov_pct=oov_rate(lm.lexicon, test),
        ppl=perplexity(lm, test),
        lm_order=lm_order,
        alpha=alpha,
    )


# ARPA serialization. Probabilities and backoff weights are written in log10
# as is conventional; entries without a probability of their own (the
# sentence-start symbol and all-start contexts) carry the -99 placeholder.

_NO_PROB = -99.0


def write_arpa(lm: NGramLM, dest: Union[str, IO[str]]) -> None:
    """Write the model in textual ARPA backoff format."""
    own = isinstance(dest, str)
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        entries: list[list[tuple[tuple[str, ...], float, float | None]]] = []
        for k in range(1, lm.order + 1):
            grams = set(lm.counts[k])
            if k == 1:
                # the unknown symbol needs an entry even when no training
                # token was rare enough to be mapped to it
                grams.add((UNK,))
            if k < lm.order:
                grams.update(lm.context_totals[k + 1])
            rows = []
            for gram in sorted(grams):
                if gram in lm.counts[k] or gram == (UNK,):
                    logp = math.log10(lm._p(k, gram[:-1], gram[-1]))
                else:
                    logp = _NO_PROB
                bow: float | None = None
                if k < lm.order and gram in lm.context_totals[k + 1]:
                    lam = (lm.discounts[k + 1] * lm.context_types[k + 1][gram]
                           / lm.context_totals[k + 1][gram])
                    bow = math.log10(lam) if lam > 0.0 else _NO_PROB
                rows.append((gram, logp, bow))
            entries.append(rows)
        fh.write("\\data\\\n")
        for k, rows in enumerate(entries, start=1):
            fh.write(f"ngram {k}={len(rows)}\n")
        for k, rows in enumerate(entries, start=1):
            fh.write(f"\n\\{k}-grams:\n")
            for gram, logp, bow in rows:
                line = f"{logp!r}\t{' '.join(gram)}"
                if bow is not None:
                    line += f"\t{bow!r}"
                fh.write(line + "\n")
        fh.write("\n\\end\\\n")
    finally:
        if own:
            fh.close()


@dataclass(frozen=True)
class ArpaLM:
    """Backoff model reconstructed from an ARPA file; scores like NGramLM."""

    order: int
    table: dict[tuple[str, ...], tuple[float, float]] = field(repr=False)
    vocab: frozenset[str]

    def _map(self, token: str) -> str:
        return token if token in self.vocab else UNK

    def _logprob10(self, ctx: tuple[str, ...], w: str) -> float:
        entry = self.table.get(ctx + (w,))
        if entry is not None:
            return entry[0]
        if not ctx:
            return _NO_PROB
        bow = self.table.get(ctx, (0.0, 0.0))[1]
        return bow + self._logprob10(ctx[1:], w)

    def logprob10(self, word: str, context: Sequence[str] = ()) -> float:
        w = self._map(word)
        ctx = tuple(t if t == BOS else self._map(t) for t in context)
        if len(ctx) > self.order - 1:
            ctx = ctx[len(ctx) - (self.order - 1):] if self.order > 1 else ()
        return self._logprob10(ctx, w)

    def logprob(self, word: str, context: Sequence[str] = ()) -> float:
        return self.logprob10(word, context) * math.log(10.0)

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        return 10.0 ** self.logprob10(word, context)


def read_arpa(source: Union[str, IO[str]]) -> ArpaLM:
    """Parse a textual ARPA file."""
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        lines = [ln.rstrip("\n") for ln in fh]
    finally:
        if own:
            fh.close()
    table: dict[tuple[str, ...], tuple[float, float]] = {}
    order = 0
    section = None
    for raw in lines:
        line = raw.strip()
        if not line or line == "\\data\\" or line.startswith("ngram "):
            continue
        if line == "\\end\\":
            break
        m = re.fullmatch(r"\\(\d+)-grams:", line)
        if m:
            section = int(m.group(1))
            order = max(order, section)
            continue
        if section is None:
            raise ValueError(f"ARPA entry before any \\k-grams: section: {raw!r}")
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) == 2:
            logp, gram_text = fields
            bow = 0.0
        elif len(fields) == 3:
            logp, gram_text, bow = fields
            bow = float(bow)
        else:
            raise ValueError(f"malformed ARPA entry: {raw!r}")
        gram = tuple(gram_text.split())
        if len(gram) != section:
            raise ValueError(f"{len(gram)}-gram {gram_text!r} in \\{section}-grams: section")
        table[gram] = (float(logp), bow)
    if order == 0:
        raise ValueError("no n-gram sections found")
    vocab = frozenset(g[0] for g in table if len(g) == 1) - {BOS}
    return ArpaLM(order=order, table=table, vocab=vocab)
