"""Data model and JSONL serialization for span-annotated parallel UGC corpora.

A corpus pairs each noisy source sentence with a reference translation, a
reference for the normalized source, and a set of non-overlapping annotated
spans. Span offsets are Unicode code point offsets into the source string,
half-open. Parsed values are immutable; edits go through the server store,
which re-validates records and bumps their revision counter.

Wire format is JSON Lines, one record per line:

    {"id": str, "src": str, "tgt": str, "tgt_norm": str, "revision": int,
     "spans": [{"start": int, "end": int, "codes": [int], "norm": str}]}

An optional ``surface`` key per span is accepted on input and checked against
the source slice; the serializer never writes it.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from typing import IO, Iterable, Union


class TypologyCode(IntEnum):
    """The 13 annotated kinds of UGC specificity."""

    LETTER_DEL_ADD = 1
    MISSING_DIACRITICS = 2
    PHONETIC_WRITING = 3
    TOKENIZATION = 4
    WRONG_TENSE = 5
    SPECIAL_CHAR = 6
    AGREEMENT = 7
    CASING = 8
    EMOJI = 9
    NAMED_ENTITY = 10
    CONTRACTION = 11
    REPETITION = 12
    INTERJECTIONS = 13

    @property
    def label(self) -> str:
        """Short canonical name used in tables and the typology endpoint."""
        return _LABELS[self]

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_LABELS = {
    TypologyCode.LETTER_DEL_ADD: "letter-del/add",
    TypologyCode.MISSING_DIACRITICS: "missing-diacritics",
    TypologyCode.PHONETIC_WRITING: "phonetic-writing",
    TypologyCode.TOKENIZATION: "tokenization",
    TypologyCode.WRONG_TENSE: "wrong-tense",
    TypologyCode.SPECIAL_CHAR: "special-char",
    TypologyCode.AGREEMENT: "agreement",
    TypologyCode.CASING: "casing",
    TypologyCode.EMOJI: "emoji",
    TypologyCode.NAMED_ENTITY: "named-entity",
    TypologyCode.CONTRACTION: "contraction",
    TypologyCode.REPETITION: "repetition/stretching",
    TypologyCode.INTERJECTIONS: "interjections",
}

_DESCRIPTIONS = {
    TypologyCode.LETTER_DEL_ADD: "letters dropped, added or swapped",
    TypologyCode.MISSING_DIACRITICS: "missing or wrong diacritics",
    TypologyCode.PHONETIC_WRITING: "word spelled the way it sounds",
    TypologyCode.TOKENIZATION: "words split or glued together",
    TypologyCode.WRONG_TENSE: "wrong verb tense",
    TypologyCode.SPECIAL_CHAR: "hashtag, mention or URL",
    TypologyCode.AGREEMENT: "gender or number agreement error",
    TypologyCode.CASING: "inconsistent upper/lower casing",
    TypologyCode.EMOJI: "emoji or emoticon",
    TypologyCode.NAMED_ENTITY: "named entity",
    TypologyCode.CONTRACTION: "contracted or abbreviated form",
    TypologyCode.REPETITION: "stretched letters or punctuation",
    TypologyCode.INTERJECTIONS: "interjection",
}

# Error kinds carried by CorpusValidationError.
MALFORMED_LINE = "malformed-line"
UNKNOWN_CODE = "unknown-code"
OFFSETS_OUT_OF_RANGE = "offsets-out-of-range"
OVERLAPPING_SPANS = "overlapping-spans"
SURFACE_MISMATCH = "surface-mismatch"
DUPLICATE_ID = "duplicate-id"
EMPTY_TARGET = "empty-target"

ERROR_KINDS = (
    MALFORMED_LINE,
    UNKNOWN_CODE,
    OFFSETS_OUT_OF_RANGE,
    OVERLAPPING_SPANS,
    SURFACE_MISMATCH,
    DUPLICATE_ID,
    EMPTY_TARGET,
)


@dataclass(frozen=True)
class Diagnostic:
    """One validation problem, with the indices of the offending spans."""

    kind: str
    message: str
    spans: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "spans": list(self.spans)}


class CorpusValidationError(ValueError):
    """A record or document that violates the corpus schema.

    ``kind`` is one of the ERROR_KINDS constants, ``line`` the 1-based input
    line for parse errors, ``diagnostics`` the full list of problems found in
    the offending record.
    """

    def __init__(self, kind: str, message: str, *, line: int | None = None,
                 record_id: str | None = None, spans: Iterable[int] = (),
                 diagnostics: list[Diagnostic] | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.kind = kind
        self.line = line
        self.record_id = record_id
        self.spans = tuple(spans)
        self.diagnostics = list(diagnostics) if diagnostics else [Diagnostic(kind, message, tuple(spans))]


@dataclass(frozen=True)
class Span:
    """Annotated source span. Offsets count code points, end exclusive."""

    start: int
    end: int
    codes: tuple[TypologyCode, ...]
    norm: str
    surface: str

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "codes": [int(c) for c in self.codes],
            "norm": self.norm,
        }


@dataclass(frozen=True)
class AnnotatedRecord:
    """One sentence pair with its annotations."""

    id: str
    src: str
    tgt: str
    tgt_norm: str
    spans: tuple[Span, ...]
    revision: int = 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "src": self.src,
            "tgt": self.tgt,
            "tgt_norm": self.tgt_norm,
            "revision": self.revision,
            "spans": [s.to_dict() for s in self.spans],
        }


@dataclass(frozen=True)
class Corpus:
    name: str
    src_lang: str
    tgt_lang: str
    records: tuple[AnnotatedRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def get(self, record_id: str) -> AnnotatedRecord | None:
        return next((r for r in self.records if r.id == record_id), None)


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-level annotation statistics under both counting modes.

    per_code_counts counts a multi-code span once per listed code, so the
    column sum can exceed span_count. per_span_counts counts each span once,
    under its first listed code.
    """

    record_count: int
    span_count: int
    per_code_counts: dict[TypologyCode, int]
    per_span_counts: dict[TypologyCode, int]
    avg_per_code: float
    avg_per_span: float
    histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "record_count": self.record_count,
            "span_count": self.span_count,
            "per_code_counts": {int(k): v for k, v in self.per_code_counts.items()},
            "per_span_counts": {int(k): v for k, v in self.per_span_counts.items()},
            "avg_per_code": self.avg_per_code,
            "avg_per_span": self.avg_per_span,
            "histogram": {int(k): v for k, v in self.histogram.items()},
        }


def collapse_spaces(text: str) -> str:
    """Collapse runs of spaces to one and trim the ends."""
    return re.sub(" {2,}", " ", text).strip(" ")


def substitute_spans(src: str, spans: tuple[Span, ...], keep: frozenset[int] | set[int]) -> str:
    """Rewrite ``src`` replacing every span not in ``keep`` by its norm.

    Kept spans stay verbatim. The result is space-collapsed, so deletions
    (norm == "") do not leave double or dangling spaces.
    """
    parts = []
    pos = 0
    for i, sp in enumerate(spans):
        parts.append(src[pos:sp.start])
        parts.append(sp.surface if i in keep else sp.norm)
        pos = sp.end
    parts.append(src[pos:])
    return collapse_spaces("".join(parts))


def src_normalized(record: AnnotatedRecord) -> str:
    """The source with every span replaced by its normalized form."""
    return substitute_spans(record.src, record.spans, frozenset())


def _span_sort_key(sp: Span):
    return (sp.start, sp.end)


def record_diagnostics(record: AnnotatedRecord) -> list[Diagnostic]:
    """All schema problems in an already-constructed record, possibly none.

    Spans are expected sorted by start; offsets, surface text, code values
    and target non-emptiness are checked span by span.
    """
    diags: list[Diagnostic] = []
    n = len(record.src)
    if not record.tgt:
        diags.append(Diagnostic(EMPTY_TARGET, "tgt must be non-empty"))
    if not record.tgt_norm:
        diags.append(Diagnostic(EMPTY_TARGET, "tgt_norm must be non-empty"))
    for i, sp in enumerate(record.spans):
        if not sp.codes or len(set(sp.codes)) != len(sp.codes):
            diags.append(Diagnostic(MALFORMED_LINE, f"span {i}: codes must be a non-empty duplicate-free list", (i,)))
        for c in sp.codes:
            if not isinstance(c, TypologyCode):
                diags.append(Diagnostic(UNKNOWN_CODE, f"span {i}: code {c!r} is not in 1..13", (i,)))
        if not (0 <= sp.start < sp.end <= n):
            diags.append(Diagnostic(
                OFFSETS_OUT_OF_RANGE,
                f"span {i}: [{sp.start}, {sp.end}) out of range for source of length {n}", (i,)))
        elif sp.surface != record.src[sp.start:sp.end]:
            diags.append(Diagnostic(
                SURFACE_MISMATCH,
                f"span {i}: surface {sp.surface!r} != source slice {record.src[sp.start:sp.end]!r}", (i,)))
    for i in range(1, len(record.spans)):
        prev, cur = record.spans[i - 1], record.spans[i]
        if cur.start < prev.start or (cur.start == prev.start and cur.end < prev.end):
            diags.append(Diagnostic(MALFORMED_LINE, f"spans {i - 1} and {i} are not sorted by start", (i - 1, i)))
        elif cur.start < prev.end:
            diags.append(Diagnostic(
                OVERLAPPING_SPANS,
                f"spans {i - 1} and {i} overlap: [{prev.start}, {prev.end}) and [{cur.start}, {cur.end})",
                (i - 1, i)))
    return diags


def validate_record(record: AnnotatedRecord, *, line: int | None = None) -> None:
    """Raise CorpusValidationError if the record violates the schema."""
    diags = record_diagnostics(record)
    if diags:
        d = diags[0]
        raise CorpusValidationError(d.kind, d.message, line=line, record_id=record.id,
                                    spans=d.spans, diagnostics=diags)


def _require(cond: bool, message: str, line: int | None):
    if not cond:
        raise CorpusValidationError(MALFORMED_LINE, message, line=line)


def span_from_dict(obj: dict, src: str, index: int, *, line: int | None = None) -> Span:
    _require(isinstance(obj, dict), f"span {index} must be an object", line)
    for key in ("start", "end", "codes", "norm"):
        _require(key in obj, f"span {index} is missing key {key!r}", line)
    start, end, codes, norm = obj["start"], obj["end"], obj["codes"], obj["norm"]
    _require(isinstance(start, int) and not isinstance(start, bool), f"span {index}: start must be an int", line)
    _require(isinstance(end, int) and not isinstance(end, bool), f"span {index}: end must be an int", line)
    _require(isinstance(norm, str), f"span {index}: norm must be a string", line)
    _require(isinstance(codes, list) and codes, f"span {index}: codes must be a non-empty list", line)
    _require(len(set(codes)) == len(codes), f"span {index}: codes must be duplicate-free", line)
    parsed_codes = []
    for c in codes:
        if not isinstance(c, int) or isinstance(c, bool) or not 1 <= c <= 13:
            raise CorpusValidationError(UNKNOWN_CODE, f"span {index}: code {c!r} is not in 1..13", line=line, spans=(index,))
        parsed_codes.append(TypologyCode(c))
    if not (0 <= start < end <= len(src)):
        raise CorpusValidationError(
            OFFSETS_OUT_OF_RANGE,
            f"span {index}: [{start}, {end}) out of range for source of length {len(src)}",
            line=line, spans=(index,))
    surface = src[start:end]
    if "surface" in obj:
        _require(isinstance(obj["surface"], str), f"span {index}: surface must be a string", line)
        if obj["surface"] != surface:
            raise CorpusValidationError(
                SURFACE_MISMATCH,
                f"span {index}: surface {obj['surface']!r} != source slice {surface!r}",
                line=line, spans=(index,))
    return Span(start=start, end=end, codes=tuple(parsed_codes), norm=norm, surface=surface)


def record_from_dict(obj: dict, *, line: int | None = None) -> AnnotatedRecord:
    """Build and validate a record from its wire dict."""
    _require(isinstance(obj, dict), "record must be a JSON object", line)
    for key in ("id", "src", "tgt", "tgt_norm", "spans"):
        _require(key in obj, f"record is missing key {key!r}", line)
    _require(isinstance(obj["id"], str) and obj["id"], "id must be a non-empty string", line)
    for key in ("src", "tgt", "tgt_norm"):
        _require(isinstance(obj[key], str), f"{key} must be a string", line)
    revision = obj.get("revision", 0)
    _require(isinstance(revision, int) and not isinstance(revision, bool) and revision >= 0,
             "revision must be a non-negative int", line)
    _require(isinstance(obj["spans"], list), "spans must be a list", line)
    src = obj["src"]
    spans = [span_from_dict(s, src, i, line=line) for i, s in enumerate(obj["spans"])]
    spans.sort(key=_span_sort_key)
    record = AnnotatedRecord(id=obj["id"], src=src, tgt=obj["tgt"], tgt_norm=obj["tgt_norm"],
                             spans=tuple(spans), revision=revision)
    validate_record(record, line=line)
    return record


def parse_corpus(data: Union[bytes, str, IO], format: str = "jsonl", *,
                 name: str = "corpus", src_lang: str = "fr", tgt_lang: str = "en") -> Corpus:
    """Parse a JSONL document into an immutable Corpus.

    Raises CorpusValidationError with the 1-based line number on the first
    malformed or invalid record, and on duplicate record ids.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format: {format!r}")
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    records = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(data.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise CorpusValidationError(MALFORMED_LINE, f"invalid JSON: {e.msg}", line=lineno) from e
        record = record_from_dict(obj, line=lineno)
        if record.id in seen:
            raise CorpusValidationError(
                DUPLICATE_ID, f"duplicate record id {record.id!r} (first seen on line {seen[record.id]})",
                line=lineno, record_id=record.id)
        seen[record.id] = lineno
        records.append(record)
    return Corpus(name=name, src_lang=src_lang, tgt_lang=tgt_lang, records=tuple(records))


def serialize_corpus(corpus: Corpus, format: str = "jsonl") -> bytes:
    """Canonical JSONL bytes: sorted keys, no ASCII escaping, one trailing newline per record."""
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format: {format!r}")
    lines = [json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) for r in corpus.records]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Annotation counts under the per-code and per-span modes plus the span histogram."""
    per_code = {c: 0 for c in TypologyCode}
    per_span = {c: 0 for c in TypologyCode}
    histogram: Counter[int] = Counter()
    span_count = 0
    for rec in corpus.records:
        histogram[len(rec.spans)] += 1
        span_count += len(rec.spans)
        for sp in rec.spans:
            per_span[sp.codes[0]] += 1
            for c in sp.codes:
                per_code[c] += 1
    n = len(corpus.records)
    return CorpusStats(
        record_count=n,
        span_count=span_count,
        per_code_counts=per_code,
        per_span_counts=per_span,
        avg_per_code=(sum(per_code.values()) / n) if n else 0.0,
        avg_per_span=(span_count / n) if n else 0.0,
        histogram=dict(sorted(histogram.items())),
    )
