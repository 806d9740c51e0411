"""Toolkit for noisy UGC translation benchmarks.

Corpus handling, controlled test set generation, robustness metrics,
bootstrap intervals, language model divergence diagnostics, lexical
alignment, and an annotation server. See the README for a tour.
"""

__version__ = "0.1.0"

from .bootstrap import BootstrapResult, bootstrap_ci, paired_bootstrap_ratio
from .corpus import (
    AnnotatedRecord,
    Corpus,
    CorpusStats,
    CorpusValidationError,
    Span,
    TypologyCode,
    corpus_stats,
    parse_corpus,
    serialize_corpus,
    src_normalized,
)
from .generate import EvalSet, Variant, exactly_n_sets, make_variant, single_type_sets
from .lm import DivergenceReport, NGramLM, divergence_report, kl3, oov_rate, perplexity, train_kn
from .metrics import (
    MetricScore,
    RatioReport,
    copy_baseline_bleu,
    corpus_bleu,
    corpus_chrf,
    ratio,
    score_corpus,
)
from .align import Ibm1Model, replace_unk, train_ibm1, viterbi_align
from .tok import TokenSeq, char_ngrams, intl_tokenize, word_tokenize

__all__ = [
    "AnnotatedRecord",
    "BootstrapResult",
    "Corpus",
    "CorpusStats",
    "CorpusValidationError",
    "DivergenceReport",
    "EvalSet",
    "Ibm1Model",
    "MetricScore",
    "NGramLM",
    "RatioReport",
    "Span",
    "TokenSeq",
    "TypologyCode",
    "Variant",
    "bootstrap_ci",
    "char_ngrams",
    "copy_baseline_bleu",
    "corpus_bleu",
    "corpus_chrf",
    "corpus_stats",
    "divergence_report",
    "exactly_n_sets",
    "intl_tokenize",
    "kl3",
    "make_variant",
    "oov_rate",
    "paired_bootstrap_ratio",
    "parse_corpus",
    "perplexity",
    "ratio",
    "replace_unk",
    "score_corpus",
    "serialize_corpus",
    "single_type_sets",
    "src_normalized",
    "train_ibm1",
    "train_kn",
    "viterbi_align",
    "word_tokenize",
]
