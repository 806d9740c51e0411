"""IBM Model 1 lexical translation tables and UNK replacement.

EM training starts from a uniform table and keeps, per source word, a
distribution over the target words it co-occurs with. A NULL source token
participates in every sentence so that target words with no lexical source
can attach somewhere; its distribution is held at the uniform floor
1 / |target vocabulary| rather than re-estimated, so it absorbs what no real
source word claims without competing for words that have a clear source.
The per-iteration data log-likelihood (computed with the parameters entering
the iteration, including the uniform alignment prior) is recorded and is
non-decreasing.

UNK replacement projects source words into a hypothesis: non-UNK hypothesis
tokens are Viterbi-aligned first, then each UNK token takes the source token
at its diagonal relative position among the source tokens left unclaimed, or
the plain diagonal position when every source token is claimed.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Sequence, Union

NULL_TOKEN = "<NULL>"
DECODE_FLOOR = 1e-12


@dataclass(frozen=True)
class Ibm1Model:
    """Row-stochastic table p(target word | source word), NULL row included."""

    table: dict[str, dict[str, float]] = field(repr=False)
    iterations: int
    log_likelihood: tuple[float, ...]
    null_prob: float = DECODE_FLOOR

    def prob(self, tgt: str, src: str) -> float:
        """Table lookup with a floor for pairs never seen in training.

        The NULL word keeps its uniform probability for any target token,
        seen or not, so unattachable tokens fall to it at decode time.
        """
        if src == NULL_TOKEN:
            return max(self.table.get(src, {}).get(tgt, self.null_prob), DECODE_FLOOR)
        return max(self.table.get(src, {}).get(tgt, 0.0), DECODE_FLOOR)


def _check_pairs(pairs: Sequence[tuple[Sequence[str], Sequence[str]]]):
    if not pairs:
        raise ValueError("empty parallel corpus")
    for i, (src, tgt) in enumerate(pairs):
        if not len(src) or not len(tgt):
            raise ValueError(f"pair {i}: empty sentence")


def train_ibm1(pairs: Sequence[tuple[Sequence[str], Sequence[str]]],
               iterations: int = 10) -> Ibm1Model:
    """EM-train Model 1 on (source tokens, target tokens) pairs."""
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    _check_pairs(pairs)
    sent_pairs = [(list(src), list(tgt)) for src, tgt in pairs]
    tgt_vocab = {t for _, tgt in sent_pairs for t in tgt}
    uniform = 1.0 / len(tgt_vocab)
    table: dict[str, dict[str, float]] = defaultdict(dict)
    for src, tgt in sent_pairs:
        for s in src:
            for t in tgt:
                table[s].setdefault(t, uniform)

    trace = []
    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        row_totals: dict[str, float] = defaultdict(float)
        ll = 0.0
        for src, tgt in sent_pairs:
            for t in tgt:
                denom = uniform + sum(table[s][t] for s in src)
                ll += math.log(denom / (len(src) + 1))
                for s in src:
                    share = table[s][t] / denom
                    counts[s][t] += share
                    row_totals[s] += share
        trace.append(ll)
        for s, row in counts.items():
            total = row_totals[s]
            table[s] = {t: c / total for t, c in row.items()}

    out = {s: dict(row) for s, row in table.items()}
    out[NULL_TOKEN] = {t: uniform for t in tgt_vocab}
    return Ibm1Model(table=out, iterations=iterations, log_likelihood=tuple(trace),
                     null_prob=uniform)


def viterbi_align(model: Ibm1Model, src: Sequence[str], tgt: Sequence[str]) -> list[int | None]:
    """Best source index per target token, or None for NULL.

    Ties keep the lowest source index; NULL is considered last, so a real
    source token wins a tie against it.
    """
    out: list[int | None] = []
    for t in tgt:
        best_i: int | None = 0
        best_p = model.prob(t, src[0]) if len(src) else 0.0
        for i in range(1, len(src)):
            p = model.prob(t, src[i])
            if p > best_p:
                best_p, best_i = p, i
        if model.prob(t, NULL_TOKEN) > best_p:
            best_i = None
        out.append(best_i)
    return out


def _diagonal(j: int, hyp_len: int, positions: Sequence):
    return positions[min(len(positions) - 1, j * len(positions) // hyp_len)]


def replace_unk(model: Ibm1Model, src: Sequence[str], hyp: Sequence[str],
                unk_token: str = "<UNK>") -> str:
    """Replace UNK tokens in a hypothesis with projected source tokens.

    The output has exactly as many tokens as the hypothesis; source tokens
    are copied verbatim.
    """
    src = list(src)
    hyp = list(hyp)
    if not src:
        raise ValueError("empty source sentence")
    if not hyp:
        return ""
    alignment = viterbi_align(model, src, hyp)
    claimed = {alignment[j] for j, t in enumerate(hyp) if t != unk_token and alignment[j] is not None}
    unclaimed = [i for i in range(len(src)) if i not in claimed]
    out = []
    for j, t in enumerate(hyp):
        if t != unk_token:
            out.append(t)
        elif unclaimed:
            out.append(src[_diagonal(j, len(hyp), unclaimed)])
        else:
            out.append(src[_diagonal(j, len(hyp), range(len(src)))])
    return " ".join(out)


def write_table(model: Ibm1Model, dest: Union[str, IO[str]], min_prob: float = 0.0) -> None:
    """Write the translation table as TSV rows of source, target, probability."""
    own = isinstance(dest, str)
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for s in sorted(model.table):
            for t in sorted(model.table[s]):
                p = model.table[s][t]
                if p >= min_prob:
                    fh.write(f"{s}\t{t}\t{p!r}\n")
    finally:
        if own:
            fh.close()


def read_table(source: Union[str, IO[str]]) -> Ibm1Model:
    """Load a TSV translation table written by write_table."""
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        table: dict[str, dict[str, float]] = defaultdict(dict)
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
            s, t, p = fields
            table[s][t] = float(p)
    finally:
        if own:
            fh.close()
    null_prob = max(table.get(NULL_TOKEN, {}).values(), default=DECODE_FLOOR)
    return Ibm1Model(table=dict(table), iterations=0, log_likelihood=(),
                     null_prob=null_prob)
