import json

import pytest

from helpers import NORMALIZED_SAMPLES, load_sample_corpus, random_corpus_lines
from ugc_bench import corpus as C


def parse_lines(lines):
    return C.parse_corpus("\n".join(lines) + "\n")


def minimal(rid="r1", src="bonjour tout le monde", spans=()):
    return {"id": rid, "src": src, "tgt": "hello", "tgt_norm": "hello",
            "revision": 0, "spans": list(spans)}


class TestTypology:
    def test_thirteen_codes(self):
        assert [int(c) for c in C.TypologyCode] == list(range(1, 14))

    def test_labels_unique(self):
        labels = [c.label for c in C.TypologyCode]
        assert len(set(labels)) == 13

    def test_label_spot_checks(self):
        assert C.TypologyCode(2).label == "missing-diacritics"
        assert C.TypologyCode(10).label == "named-entity"
        assert C.TypologyCode(12).label == "repetition/stretching"


class TestParse:
    def test_minimal_record(self):
        corpus = parse_lines([json.dumps(minimal())])
        assert len(corpus) == 1
        rec = corpus.records[0]
        assert rec.spans == ()
        assert rec.revision == 0

    def test_surface_derived_from_slice(self):
        rec = parse_lines([json.dumps(minimal(
            spans=[{"start": 8, "end": 12, "codes": [3], "norm": "tous"}]))]).records[0]
        assert rec.spans[0].surface == "tout"

    def test_spans_sorted_on_parse(self):
        spans = [{"start": 8, "end": 12, "codes": [3], "norm": "x"},
                 {"start": 0, "end": 7, "codes": [2], "norm": "y"}]
        rec = parse_lines([json.dumps(minimal(spans=spans))]).records[0]
        assert [s.start for s in rec.spans] == [0, 8]

    def test_codepoint_offsets_not_bytes(self):
        # 😀 is one code point but four UTF-8 bytes
        obj = minimal(src="😀 va", spans=[{"start": 2, "end": 4, "codes": [1], "norm": "vas"}])
        rec = parse_lines([json.dumps(obj)]).records[0]
        assert rec.spans[0].surface == "va"

    def test_missing_revision_defaults_to_zero(self):
        obj = minimal()
        del obj["revision"]
        assert parse_lines([json.dumps(obj)]).records[0].revision == 0

    def test_blank_lines_skipped(self):
        corpus = C.parse_corpus(json.dumps(minimal()) + "\n\n")
        assert len(corpus) == 1

    def test_accepts_bytes_str_and_file(self, tmp_path):
        line = json.dumps(minimal(), ensure_ascii=False)
        path = tmp_path / "c.jsonl"
        path.write_text(line + "\n", encoding="utf-8")
        for data in (line, line.encode("utf-8"), open(path, "rb")):
            assert len(C.parse_corpus(data)) == 1


class TestParseErrors:
    def err(self, lines):
        with pytest.raises(C.CorpusValidationError) as exc:
            parse_lines(lines)
        return exc.value

    def test_invalid_json_reports_line(self):
        e = self.err([json.dumps(minimal()), "{nope"])
        assert e.kind == C.MALFORMED_LINE
        assert e.line == 2

    def test_missing_field(self):
        obj = minimal()
        del obj["tgt_norm"]
        assert self.err([json.dumps(obj)]).kind == C.MALFORMED_LINE

    @pytest.mark.parametrize("code", [0, 14, -3, "2", 2.0, None])
    def test_unknown_code(self, code):
        obj = minimal(spans=[{"start": 0, "end": 3, "codes": [code], "norm": ""}])
        assert self.err([json.dumps(obj)]).kind == C.UNKNOWN_CODE

    @pytest.mark.parametrize("start,end", [(-1, 3), (3, 3), (5, 2), (0, 99)])
    def test_offsets_out_of_range(self, start, end):
        obj = minimal(spans=[{"start": start, "end": end, "codes": [1], "norm": ""}])
        assert self.err([json.dumps(obj)]).kind == C.OFFSETS_OUT_OF_RANGE

    def test_overlapping_spans_names_both_indices(self):
        obj = minimal(spans=[{"start": 0, "end": 5, "codes": [1], "norm": ""},
                             {"start": 4, "end": 8, "codes": [2], "norm": ""}])
        e = self.err([json.dumps(obj)])
        assert e.kind == C.OVERLAPPING_SPANS
        assert e.spans == (0, 1)

    def test_surface_mismatch(self):
        obj = minimal(spans=[{"start": 0, "end": 7, "codes": [1], "norm": "",
                              "surface": "bonsoir"}])
        assert self.err([json.dumps(obj)]).kind == C.SURFACE_MISMATCH

    def test_explicit_matching_surface_accepted(self):
        obj = minimal(spans=[{"start": 0, "end": 7, "codes": [1], "norm": "", "surface": "bonjour"}])
        assert parse_lines([json.dumps(obj)]).records[0].spans[0].surface == "bonjour"

    def test_duplicate_id(self):
        e = self.err([json.dumps(minimal("dup")), json.dumps(minimal("dup"))])
        assert e.kind == C.DUPLICATE_ID
        assert e.line == 2

    def test_empty_target(self):
        obj = minimal()
        obj["tgt_norm"] = ""
        assert self.err([json.dumps(obj)]).kind == C.EMPTY_TARGET

    def test_empty_codes_list(self):
        obj = minimal(spans=[{"start": 0, "end": 3, "codes": [], "norm": ""}])
        assert self.err([json.dumps(obj)]).kind == C.MALFORMED_LINE

    def test_duplicate_codes(self):
        obj = minimal(spans=[{"start": 0, "end": 3, "codes": [2, 2], "norm": ""}])
        assert self.err([json.dumps(obj)]).kind == C.MALFORMED_LINE


class TestRoundTrip:
    def test_empty_corpus(self):
        corpus = C.parse_corpus("")
        assert C.serialize_corpus(corpus) == b""
        assert len(corpus) == 0

    def test_canonical_key_order(self):
        data = C.serialize_corpus(parse_lines([json.dumps(minimal())]))
        assert data.decode("utf-8").startswith('{"id":')

    def test_no_ascii_escaping(self):
        obj = minimal(src="été 😀")
        data = C.serialize_corpus(parse_lines([json.dumps(obj)]))
        assert "été 😀".encode("utf-8") in data

    def test_random_records_round_trip(self):
        lines = random_corpus_lines(seed=7, count=200)
        first = parse_lines(lines)
        second = C.parse_corpus(C.serialize_corpus(first))
        assert first == second
        assert C.serialize_corpus(second) == C.serialize_corpus(first)

    def test_sample_corpus_round_trips(self):
        corpus = load_sample_corpus()
        assert C.parse_corpus(C.serialize_corpus(corpus)) == corpus


class TestNormalization:
    def rec(self, src, spans):
        return parse_lines([json.dumps(minimal(src=src, spans=spans))]).records[0]

    def test_no_spans_identity(self):
        rec = self.rec("rien à changer ici", [])
        assert C.src_normalized(rec) == "rien à changer ici"

    def test_substitution(self):
        rec = self.rec("il et la", [{"start": 3, "end": 5, "codes": [3], "norm": "est"},
                                    {"start": 6, "end": 8, "codes": [2], "norm": "là"}])
        assert C.src_normalized(rec) == "il est là"

    def test_deletion_collapses_spaces(self):
        rec = self.rec("aa bb", [{"start": 0, "end": 2, "codes": [6], "norm": ""}])
        assert C.src_normalized(rec) == "bb"

    def test_inner_deletion(self):
        rec = self.rec("aa xx bb", [{"start": 3, "end": 5, "codes": [9], "norm": ""}])
        assert C.src_normalized(rec) == "aa bb"

    def test_idempotent_on_random_records(self):
        for line in random_corpus_lines(seed=3, count=100):
            rec = parse_lines([line]).records[0]
            once = C.src_normalized(rec)
            assert C.collapse_spaces(once) == once

    def test_sample_corpus_matches_printed_normalizations(self):
        for rec in load_sample_corpus():
            assert C.src_normalized(rec) == NORMALIZED_SAMPLES[rec.id]


class TestStats:
    def test_empty(self):
        stats = C.corpus_stats(C.parse_corpus(""))
        assert stats.record_count == 0
        assert stats.avg_per_code == 0.0

    def test_modes_differ_on_multicode_spans(self):
        obj = minimal(spans=[{"start": 0, "end": 3, "codes": [12, 13], "norm": ""},
                             {"start": 4, "end": 6, "codes": [2], "norm": "x"}])
        stats = C.corpus_stats(parse_lines([json.dumps(obj)]))
        assert stats.span_count == 2
        assert sum(stats.per_code_counts.values()) == 3
        assert sum(stats.per_span_counts.values()) == 2
        assert stats.per_code_counts[C.TypologyCode(13)] == 1
        assert stats.per_span_counts[C.TypologyCode(13)] == 0  # attributed to 12
        assert stats.avg_per_code == 3.0
        assert stats.avg_per_span == 2.0

    def test_per_code_sum_at_least_span_count_random(self):
        stats = C.corpus_stats(parse_lines(random_corpus_lines(seed=5, count=150)))
        assert sum(stats.per_code_counts.values()) >= stats.span_count
        assert sum(stats.per_span_counts.values()) == stats.span_count
        assert sum(stats.histogram.values()) == stats.record_count
        assert sum(n * c for n, c in stats.histogram.items()) == stats.span_count

    def test_sample_histogram(self):
        stats = C.corpus_stats(load_sample_corpus())
        assert stats.record_count == 4
        assert stats.span_count == 19
        assert stats.histogram == {3: 1, 4: 1, 6: 2}
