"""Controlled test set generation from annotated records.

A variant of a record keeps a chosen subset of its spans in their noisy
surface form and replaces every other span by its normalized form. Keeping
all spans reproduces the noisy source (modulo space collapsing), keeping
none reproduces the fully normalized source. Evaluation sets pair each
variant with the normalized sentence and a reference, so a noisy/normalized
score ratio isolates the effect of exactly the kept phenomena.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .corpus import AnnotatedRecord, Corpus, TypologyCode, src_normalized, substitute_spans

ReferencePolicy = Literal["normalized", "original"]


@dataclass(frozen=True)
class Variant:
    """One generated source sentence: ``kept`` spans stay noisy, the rest are normalized."""

    record_id: str
    kept: tuple[int, ...]
    text: str
    kept_codes: tuple[int, ...]
    pure: bool

    @property
    def n(self) -> int:
        return len(self.kept)


@dataclass(frozen=True)
class EvalEntry:
    variant: Variant
    normalized: str
    reference: str


@dataclass(frozen=True)
class EvalSet:
    """Aligned (noisy variant, normalized, reference) triples plus generation metadata."""

    label: str
    entries: tuple[EvalEntry, ...]
    reference_policy: ReferencePolicy
    pure: bool
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def noisy_texts(self) -> list[str]:
        return [e.variant.text for e in self.entries]

    def normalized_texts(self) -> list[str]:
        return [e.normalized for e in self.entries]

    def references(self) -> list[str]:
        return [e.reference for e in self.entries]


def make_variant(record: AnnotatedRecord, keep: Iterable[int]) -> Variant:
    """Build the variant of ``record`` that keeps exactly the spans in ``keep``."""
    kept = tuple(sorted(set(keep)))
    for i in kept:
        if not 0 <= i < len(record.spans):
            raise IndexError(f"span index {i} out of range for record {record.id!r}")
    codes: list[int] = []
    pure = True
    for i in kept:
        sp = record.spans[i]
        codes.extend(int(c) for c in sp.codes)
        if len(sp.codes) > 1:
            pure = False
    return Variant(
        record_id=record.id,
        kept=kept,
        text=substitute_spans(record.src, record.spans, frozenset(kept)),
        kept_codes=tuple(sorted(codes)),
        pure=pure,
    )


def reference_for(record: AnnotatedRecord, policy: ReferencePolicy = "normalized") -> str:
    """Reference side under the given policy; both ratio sides share it by default."""
    if policy == "normalized":
        return record.tgt_norm
    if policy == "original":
        return record.tgt
    raise ValueError(f"unknown reference policy: {policy!r}")


def _entry(record: AnnotatedRecord, variant: Variant, policy: ReferencePolicy) -> EvalEntry:
    return EvalEntry(variant=variant, normalized=src_normalized(record),
                     reference=reference_for(record, policy))


def single_type_sets(corpus: Corpus, code: TypologyCode | int, strict: bool = False,
                     reference_policy: ReferencePolicy = "normalized") -> EvalSet:
    """One variant per span carrying ``code``, each keeping only that span.

    With ``strict`` only spans annotated with exactly that one code are
    admitted; otherwise any span listing the code qualifies and the set's
    ``pure`` flag records whether every admitted span was single-code.
    """
    code = TypologyCode(code)
    entries = []
    for record in corpus.records:
        for i, sp in enumerate(record.spans):
            if code not in sp.codes:
                continue
            if strict and len(sp.codes) != 1:
                continue
            entries.append(_entry(record, make_variant(record, (i,)), reference_policy))
    return EvalSet(
        label=f"code={int(code)}" + ("/strict" if strict else ""),
        entries=tuple(entries),
        reference_policy=reference_policy,
        pure=all(e.variant.pure for e in entries),
    )


def exactly_n_sets(corpus: Corpus, n_lo: int, n_hi: int | None = None,
                   cap: int | None = None,
                   reference_policy: ReferencePolicy = "normalized") -> EvalSet:
    """Every way of keeping exactly N spans, for N in [n_lo, n_hi].

    For a record with k spans and each admitted N <= k, all C(k, N) keep
    subsets are enumerated in lexicographic index order. ``cap`` bounds the
    number of subsets per (record, N); hitting it truncates the enumeration
    and sets the ``truncated`` flag.
    """
    if n_hi is None:
        n_hi = n_lo
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError(f"bad keep range [{n_lo}, {n_hi}]")
    if cap is not None and cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    entries = []
    truncated = False
    for record in corpus.records:
        k = len(record.spans)
        for n in range(n_lo, min(n_hi, k) + 1):
            combos = itertools.combinations(range(k), n)
            if cap is not None:
                if math.comb(k, n) > cap:
                    truncated = True
                combos = itertools.islice(combos, cap)
            for keep in combos:
                entries.append(_entry(record, make_variant(record, keep), reference_policy))
    label = f"n={n_lo}" if n_hi == n_lo else f"n={n_lo}..{n_hi}"
    return EvalSet(
        label=label,
        entries=tuple(entries),
        reference_policy=reference_policy,
        pure=all(e.variant.pure for e in entries),
        truncated=truncated,
    )


def export_eval_set(eval_set: EvalSet, out_dir: str) -> dict:
    """Write noisy.txt, normalized.txt and refs.txt line-aligned, plus manifest.json.

    Returns the manifest dict. Raises ValueError on embedded newlines, which
    would silently break the line alignment.
    """
    os.makedirs(out_dir, exist_ok=True)
    names = {"noisy.txt": eval_set.noisy_texts(),
             "normalized.txt": eval_set.normalized_texts(),
             "refs.txt": eval_set.references()}
    for name, lines in names.items():
        for text in lines:
            if "\n" in text or "\r" in text:
                raise ValueError(f"{name}: sentence contains a newline, cannot line-align")
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            for text in lines:
                fh.write(text + "\n")
    manifest = {
        "label": eval_set.label,
        "size": len(eval_set),
        "reference_policy": eval_set.reference_policy,
        "pure": eval_set.pure,
        "truncated": eval_set.truncated,
        "entries": [
            {"record_id": e.variant.record_id,
             "kept": list(e.variant.kept),
             "kept_codes": list(e.variant.kept_codes),
             "pure": e.variant.pure}
            for e in eval_set.entries
        ],
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
