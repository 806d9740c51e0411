"""Corpus-level BLEU and chrF, copy baseline, and noisy/normalized score ratios.

BLEU follows the reference scorer: modified n-gram precisions clipped per
sentence against the best reference counts, exponential smoothing for
zero-match orders (the numerator of such an order becomes 1/factor, and the
factor starts at 1 and doubles at every zero-match order), and the usual
brevity penalty. Per-sentence reference length is the one closest to the
hypothesis length, ties resolved toward the shorter. Orders with no
hypothesis n-grams at all are left out of the geometric mean so that very
short corpora still score, and identity still scores 100.

chrF computes one F-score per character n-gram order (beta = 2, orders 1..6
by default) and averages them arithmetically, skipping orders where neither
side has any n-grams.

Every metric exposes per-sentence sufficient statistics so that resampling
procedures can recompute corpus scores from sums without re-tokenizing.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .tok import TokenSeq, char_ngrams, intl_tokenize, word_tokenize

METRICS = ("bleu-intl", "bleu-word", "chrf")

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2.0


@dataclass(frozen=True)
class MetricScore:
    """A 0..100 score plus the components it was assembled from."""

    metric: str
    value: float
    components: dict

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class RatioReport:
    """Noisy score over normalized score for one evaluation condition."""

    label: str
    metric: str
    noisy: MetricScore
    normalized: MetricScore
    ratio: float | None
    undefined: bool = False
    ci: object | None = None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "metric": self.metric,
            "noisy": self.noisy.value,
            "normalized": self.normalized.value,
            "ratio": self.ratio,
            "undefined": self.undefined,
        }


def _tokens(seq) -> tuple[str, ...]:
    if isinstance(seq, TokenSeq):
        return seq.tokens
    return tuple(seq)


def _ngram_counts(tokens: Sequence[str], max_n: int) -> list[Counter]:
    counts = []
    for n in range(1, max_n + 1):
        counts.append(Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)))
    return counts


def bleu_sentence_stats(hyp, refs, max_n: int = BLEU_ORDER) -> list[int]:
    """[correct_1..correct_n, total_1..total_n, hyp_len, ref_len] for one sentence."""
    hyp_tokens = _tokens(hyp)
    ref_token_lists = [_tokens(r) for r in refs]
    if not ref_token_lists:
        raise ValueError("need at least one reference")
    hyp_counts = _ngram_counts(hyp_tokens, max_n)
    ref_counts = [_ngram_counts(r, max_n) for r in ref_token_lists]
    correct = [0] * max_n
    total = [0] * max_n
    for n in range(max_n):
        total[n] = sum(hyp_counts[n].values())
        for gram, cnt in hyp_counts[n].items():
            best = max(rc[n].get(gram, 0) for rc in ref_counts)
            correct[n] += min(cnt, best)
    hyp_len = len(hyp_tokens)
    ref_len = min((len(r) for r in ref_token_lists),
                  key=lambda L: (abs(L - hyp_len), L))
    return correct + total + [hyp_len, ref_len]


def bleu_from_stats(stats: Sequence[float], max_n: int = BLEU_ORDER) -> MetricScore:
    """Assemble a BLEU score from summed sentence statistics."""
    correct = [int(round(c)) for c in stats[:max_n]]
    total = [int(round(t)) for t in stats[max_n:2 * max_n]]
    hyp_len = int(round(stats[2 * max_n]))
    ref_len = int(round(stats[2 * max_n + 1]))
    smooth = 1.0
    precisions: list[float | None] = []
    smoothed_orders: list[int] = []
    log_sum = 0.0
    eff = 0
    for n in range(max_n):
        if total[n] == 0:
            precisions.append(None)
            continue
        if correct[n] == 0:
            smooth *= 2.0
            p = (1.0 / smooth) / total[n]
            smoothed_orders.append(n + 1)
        else:
            p = correct[n] / total[n]
        precisions.append(p)
        log_sum += math.log(p)
        eff += 1
    empty = hyp_len == 0
    if empty or eff == 0:
        bp = 0.0
        value = 0.0
    else:
        bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
        value = bp * math.exp(log_sum / eff) * 100.0
    return MetricScore(
        metric="bleu",
        value=value,
        components={
            "precisions": precisions,
            "bp": bp,
            "hyp_len": hyp_len,
            "ref_len": ref_len,
            "correct": correct,
            "total": total,
            "smoothed_orders": smoothed_orders,
            "effective_order": eff,
            "empty_hypotheses": empty,
        },
    )


def _as_ref_lists(ref) -> list:
    # a bare list of strings is one tokenized reference, not alternatives
    if isinstance(ref, TokenSeq):
        return [ref]
    if isinstance(ref, (list, tuple)):
        if all(isinstance(x, str) for x in ref):
            return [ref]
        return list(ref)
    return [ref]


def corpus_bleu(hyps: Sequence, refs: Sequence, max_n: int = BLEU_ORDER) -> MetricScore:
    """BLEU over a corpus of token sequences.

    ``refs`` holds, per sentence, either one token sequence or a list of
    alternative references.
    """
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")
    sums = [0.0] * (2 * max_n + 2)
    for hyp, ref in zip(hyps, refs):
        for i, v in enumerate(bleu_sentence_stats(hyp, _as_ref_lists(ref), max_n)):
            sums[i] += v
    return bleu_from_stats(sums, max_n)


def chrf_sentence_stats(hyp_text: str, ref_text: str, order: int = CHRF_ORDER) -> list[int]:
    """[hyp_count, ref_count, match] per n-gram order for one sentence pair."""
    stats: list[int] = []
    for n in range(1, order + 1):
        hyp_grams = char_ngrams(hyp_text, n)
        ref_grams = char_ngrams(ref_text, n)
        match = sum((hyp_grams & ref_grams).values())
        stats.extend((sum(hyp_grams.values()), sum(ref_grams.values()), match))
    return stats


def chrf_from_stats(stats: Sequence[float], order: int = CHRF_ORDER,
                    beta: float = CHRF_BETA) -> MetricScore:
    """Assemble a chrF score from summed sentence statistics."""
    f_scores: list[float | None] = []
    precisions: list[float | None] = []
    recalls: list[float | None] = []
    used: list[int] = []
    acc = 0.0
    for n in range(order):
        hyp_cnt = stats[3 * n]
        ref_cnt = stats[3 * n + 1]
        match = stats[3 * n + 2]
        if hyp_cnt == 0 and ref_cnt == 0:
            f_scores.append(None)
            precisions.append(None)
            recalls.append(None)
            continue
        p = match / hyp_cnt if hyp_cnt else 0.0
        r = match / ref_cnt if ref_cnt else 0.0
        denom = beta * beta * p + r
        f = (1 + beta * beta) * p * r / denom if denom > 0 else 0.0
        f_scores.append(f)
        precisions.append(p)
        recalls.append(r)
        used.append(n + 1)
        acc += f
    value = 100.0 * acc / len(used) if used else 0.0
    return MetricScore(
        metric="chrf",
        value=value,
        components={
            "order": order,
            "beta": beta,
            "f_scores": f_scores,
            "precisions": precisions,
            "recalls": recalls,
            "effective_orders": used,
        },
    )


def corpus_chrf(hyps: Sequence[str], refs: Sequence[str], order: int = CHRF_ORDER,
                beta: float = CHRF_BETA) -> MetricScore:
    """chrF over raw (untokenized) sentence pairs."""
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")
    sums = [0.0] * (3 * order)
    for hyp, ref in zip(hyps, refs):
        for i, v in enumerate(chrf_sentence_stats(hyp, ref, order)):
            sums[i] += v
    return chrf_from_stats(sums, order, beta)


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}, expected one of {METRICS}")


def tokenize_for(metric: str, text: str) -> TokenSeq:
    _check_metric(metric)
    if metric == "bleu-intl":
        return intl_tokenize(text)
    if metric == "bleu-word":
        return word_tokenize(text)
    raise ValueError(f"{metric} does not tokenize")


def sentence_stats(metric: str, hyp_text: str, ref_text: str) -> list[float]:
    """Per-sentence sufficient statistics; corpus score = f(sum over sentences)."""
    _check_metric(metric)
    if metric == "chrf":
        return [float(v) for v in chrf_sentence_stats(hyp_text, ref_text)]
    hyp = tokenize_for(metric, hyp_text)
    ref = tokenize_for(metric, ref_text)
    return [float(v) for v in bleu_sentence_stats(hyp, [ref])]


def score_from_stats(metric: str, sums: Sequence[float]) -> float:
    _check_metric(metric)
    if metric == "chrf":
        return chrf_from_stats(sums).value
    return bleu_from_stats(sums).value


def score_corpus(metric: str, hyp_texts: Sequence[str], ref_texts: Sequence[str]) -> MetricScore:
    """Score raw sentence pairs under a named metric, tokenizing as it requires."""
    _check_metric(metric)
    if len(hyp_texts) != len(ref_texts):
        raise ValueError(f"length mismatch: {len(hyp_texts)} hypotheses vs {len(ref_texts)} references")
    if not hyp_texts:
        raise ValueError("empty corpus")
    if metric == "chrf":
        return corpus_chrf(hyp_texts, ref_texts)
    hyps = [tokenize_for(metric, t) for t in hyp_texts]
    refs = [tokenize_for(metric, t) for t in ref_texts]
    score = corpus_bleu(hyps, refs)
    return MetricScore(metric=metric, value=score.value, components=score.components)


def copy_baseline_bleu(sources: Sequence[str], references: Sequence[str],
                       metric: str = "bleu-intl") -> MetricScore:
    """BLEU of the identity "translation": source sentences scored as hypotheses."""
    if metric not in ("bleu-intl", "bleu-word"):
        raise ValueError(f"copy baseline is a BLEU diagnostic, got {metric!r}")
    return score_corpus(metric, list(sources), list(references))


def ratio(noisy: MetricScore, normalized: MetricScore, label: str = "") -> RatioReport:
    """Noisy over normalized score. A zero normalized score leaves it undefined."""
    if noisy.metric != normalized.metric:
        raise ValueError(f"metric mismatch: {noisy.metric} vs {normalized.metric}")
    if normalized.value == 0.0:
        return RatioReport(label=label, metric=noisy.metric, noisy=noisy,
                           normalized=normalized, ratio=None, undefined=True)
    return RatioReport(label=label, metric=noisy.metric, noisy=noisy,
                       normalized=normalized, ratio=noisy.value / normalized.value)
