import math
import random

import pytest

from ugc_bench import metrics as M
from ugc_bench.tok import intl_tokenize


def toks(*sents):
    return [s.split() for s in sents]


class TestBleuIdentity:
    def test_identity_scores_100(self):
        hyps = toks("le chat dort", "il pleut")
        assert M.corpus_bleu(hyps, hyps).value == pytest.approx(100.0)

    def test_identity_single_short_sentence(self):
        # one bigram, no trigrams: the missing orders must not zero the score
        hyps = toks("a b")
        score = M.corpus_bleu(hyps, hyps)
        assert score.value == pytest.approx(100.0)
        assert score.components["effective_order"] == 2
        assert score.components["precisions"][2] is None

    def test_score_corpus_identity_all_metrics(self):
        texts = ["Hello, world!", "c'est bien."]
        for metric in M.METRICS:
            assert M.score_corpus(metric, texts, texts).value == pytest.approx(100.0)


class TestBleuHandValues:
    def test_unigram_precision_two_sevenths(self):
        # hyp 1-grams: 7 total, "a" and "d" match once each
        hyps = toks("a b c", "d e f g")
        refs = toks("a x y", "z d w q")
        score = M.corpus_bleu(hyps, refs)
        comp = score.components
        assert comp["correct"] == [2, 0, 0, 0]
        assert comp["total"] == [7, 5, 3, 1]
        assert comp["precisions"][0] == pytest.approx(2 / 7)
        # zero-match orders: factor doubles before use at each one
        assert comp["precisions"][1] == pytest.approx((1 / 2) / 5)
        assert comp["precisions"][2] == pytest.approx((1 / 4) / 3)
        assert comp["precisions"][3] == pytest.approx((1 / 8) / 1)
        assert comp["smoothed_orders"] == [2, 3, 4]
        assert comp["bp"] == 1.0
        expected = 100.0 * math.exp(
            (math.log(2 / 7) + math.log(0.1) + math.log(1 / 12) + math.log(1 / 8)) / 4)
        assert score.value == pytest.approx(expected, rel=1e-12)

    def test_clipping_against_best_reference(self):
        # "a" appears twice in the hypothesis; best reference count is 2
        stats = M.bleu_sentence_stats("a a b".split(), toks("a", "a a c"))
        assert stats[0] == 2
        stats_single = M.bleu_sentence_stats("a a b".split(), toks("a"))
        assert stats_single[0] == 1

    def test_ref_len_closest_tie_prefers_shorter(self):
        stats = M.bleu_sentence_stats("a b c".split(), toks("x y", "p q r s"))
        assert stats[-1] == 2
        stats = M.bleu_sentence_stats("a b c".split(), toks("x y z w", "p q"))
        assert stats[-1] == 2

    def test_brevity_penalty_formula(self):
        rng = random.Random(7)
        for _ in range(20):
            ref_len = rng.randint(2, 40)
            hyp_len = rng.randint(1, ref_len)
            hyp = ["w"] * hyp_len
            ref = ["w"] * ref_len
            comp = M.corpus_bleu([hyp], [ref]).components
            if hyp_len >= ref_len:
                assert comp["bp"] == 1.0
            else:
                assert comp["bp"] == pytest.approx(
                    math.exp(1.0 - ref_len / hyp_len), rel=1e-9)

    def test_empty_hypothesis_scores_zero(self):
        score = M.corpus_bleu([[]], toks("a b"))
        assert score.value == 0.0
        assert score.components["bp"] == 0.0
        assert score.components["empty_hypotheses"] is True

    def test_corpus_not_average_of_sentences(self):
        # statistics pool before the ratio, so one long wrong sentence drags
        hyps = toks("a b c d", "x")
        refs = toks("a b c d", "y")
        pooled = M.corpus_bleu(hyps, refs).value
        only_good = M.corpus_bleu(hyps[:1], refs[:1]).value
        assert pooled < only_good


class TestChrf:
    def test_identity_100(self):
        assert M.corpus_chrf(["abcdef"], ["abcdef"]).value == pytest.approx(100.0)

    def test_disjoint_zero(self):
        assert M.corpus_chrf(["aaaa"], ["bbbb"]).value == pytest.approx(0.0)

    def test_hand_value_abcd_abce(self):
        # per-order F with precision == recall: 3/4, 2/3, 1/2, 0; orders 5,6 skipped
        score = M.corpus_chrf(["abcd"], ["abce"])
        assert score.value == pytest.approx(2300 / 48, abs=1e-9)
        comp = score.components
        assert comp["effective_orders"] == [1, 2, 3, 4]
        assert comp["f_scores"][:4] == pytest.approx([3 / 4, 2 / 3, 1 / 2, 0.0])
        assert comp["f_scores"][4] is None

    def test_whitespace_removed_before_ngrams(self):
        assert M.corpus_chrf(["a b"], ["ab"]).value == pytest.approx(100.0)

    def test_recall_weighted(self):
        # beta = 2 weights recall: missing reference material hurts more than
        # extra hypothesis material of the same size
        drop = M.corpus_chrf(["abcd"], ["abcdefgh"]).value
        add = M.corpus_chrf(["abcdefgh"], ["abcd"]).value
        assert drop < add

    def test_stats_sum_equals_direct(self):
        hyps = ["vu sa tête", "il pleut fort", "ok"]
        refs = ["vu sa tete", "il pleuvait fort", "ko"]
        sums = [0.0] * (3 * M.CHRF_ORDER)
        for h, r in zip(hyps, refs):
            for i, v in enumerate(M.chrf_sentence_stats(h, r)):
                sums[i] += v
        assert M.chrf_from_stats(sums).value == pytest.approx(
            M.corpus_chrf(hyps, refs).value, rel=1e-12)


class TestMetricDispatch:
    def test_sentence_stats_sum_matches_corpus(self):
        hyps = ["Hello, world!", "c'est très bien.", "ok ok ok"]
        refs = ["Hello world!", "c'est bien.", "ok ok"]
        for metric in M.METRICS:
            width = len(M.sentence_stats(metric, hyps[0], refs[0]))
            sums = [0.0] * width
            for h, r in zip(hyps, refs):
                for i, v in enumerate(M.sentence_stats(metric, h, r)):
                    sums[i] += v
            assert M.score_from_stats(metric, sums) == pytest.approx(
                M.score_corpus(metric, hyps, refs).value, rel=1e-12)

    def test_tokenizer_choice_matters(self):
        # the international tokenizer splits punctuation that word
        # tokenization leaves attached differently
        hyp = ["it's 3.5, right?"]
        ref = ["it's 3.5 right?"]
        intl = M.score_corpus("bleu-intl", hyp, ref).value
        word = M.score_corpus("bleu-word", hyp, ref).value
        assert intl != word

    def test_unknown_metric(self):
        with pytest.raises(ValueError):
            M.score_corpus("meteor", ["a"], ["a"])
        with pytest.raises(ValueError):
            M.sentence_stats("ter", "a", "a")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            M.score_corpus("chrf", ["a", "b"], ["a"])
        with pytest.raises(ValueError):
            M.score_corpus("chrf", [], [])


class TestCopyBaseline:
    def test_copy_of_reference_is_100(self):
        refs = ["the cat sleeps .", "it rains ."]
        assert M.copy_baseline_bleu(refs, refs).value == pytest.approx(100.0)

    def test_source_vs_target_is_low(self):
        srcs = ["le chat dort .", "il pleut ."]
        refs = ["the cat sleeps .", "it is raining ."]
        score = M.copy_baseline_bleu(srcs, refs)
        assert score.value < 40.0

    def test_chrf_rejected(self):
        with pytest.raises(ValueError):
            M.copy_baseline_bleu(["a"], ["a"], metric="chrf")


class TestRatio:
    def test_basic_ratio(self):
        noisy = M.score_corpus("chrf", ["abcd"], ["abce"])
        clean = M.score_corpus("chrf", ["abce"], ["abce"])
        rep = M.ratio(noisy, clean, label="demo")
        assert rep.ratio == pytest.approx(noisy.value / 100.0)
        assert not rep.undefined
        assert rep.to_dict()["label"] == "demo"

    def test_zero_normalized_undefined(self):
        zero = M.score_corpus("chrf", ["aaaa"], ["bbbb"])
        some = M.score_corpus("chrf", ["abcd"], ["abce"])
        rep = M.ratio(some, zero)
        assert rep.undefined
        assert rep.ratio is None

    def test_metric_mismatch(self):
        a = M.score_corpus("chrf", ["ab"], ["ab"])
        b = M.score_corpus("bleu-intl", ["a b"], ["a b"])
        with pytest.raises(ValueError):
            M.ratio(a, b)

    def test_identity_ratio_is_one(self):
        texts = ["vu sa tête c'est normal", "le matin à 7h"]
        s = M.score_corpus("bleu-intl", texts, texts)
        assert M.ratio(s, s).ratio == pytest.approx(1.0)


class TestTokenizeFor:
    def test_intl_splits_apostrophe_and_punct(self):
        assert list(M.tokenize_for("bleu-intl", "c'est bien.")) == \
            ["c", "'", "est", "bien", "."]

    def test_word_keeps_apostrophe(self):
        assert list(M.tokenize_for("bleu-word", "c'est bien.")) == \
            ["c'est", "bien", "."]

    def test_chrf_has_no_tokenizer(self):
        with pytest.raises(ValueError):
            M.tokenize_for("chrf", "x")

    def test_intl_matches_module_function(self):
        text = "€100 = 3.5 * x?"
        assert M.tokenize_for("bleu-intl", text).tokens == intl_tokenize(text).tokens
