"""Tokenizers and character n-gram extraction.

Two word-level tokenizers are provided. ``intl_tokenize`` reproduces the
language-agnostic "international" scheme used by the reference BLEU scorer:
punctuation is split from words unless it touches a digit, and symbols are
always split. ``word_tokenize`` is a lighter scheme that only peels leading
and trailing punctuation clusters off whitespace-separated chunks, keeping
word-internal punctuation (apostrophes, hyphens) attached.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class TokenSeq:
    """A token sequence tagged with the tokenizer that produced it."""

    tokens: tuple[str, ...]
    tokenizer: str = "none"

    def __post_init__(self):
        for t in self.tokens:
            if not t or any(ch.isspace() for ch in t):
                raise ValueError(f"invalid token {t!r}: tokens must be non-empty and whitespace-free")

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def text(self) -> str:
        return " ".join(self.tokens)


def _chars_in_categories(prefix: str) -> str:
    return "".join(chr(cp) for cp in range(sys.maxunicode + 1)
                   if unicodedata.category(chr(cp)).startswith(prefix))


@functools.lru_cache(maxsize=1)
def _intl_rules() -> tuple:
    # Built once; scanning the full code point range takes a moment.
    punct = re.escape(_chars_in_categories("P"))
    symbol = re.escape(_chars_in_categories("S"))
    return (
        (re.compile(r"([^\d])([" + punct + r"])"), r"\1 \2 "),
        (re.compile(r"([" + punct + r"])([^\d])"), r" \1 \2"),
        (re.compile(r"([" + symbol + r"])"), r" \1 "),
    )


def intl_tokenize(text: str, nfc: bool = False) -> TokenSeq:
    """Split punctuation not attached to digits, and all symbols.

    >>> intl_tokenize("Hello, world!").tokens
    ('Hello', ',', 'world', '!')
    """
    if nfc:
        text = unicodedata.normalize("NFC", text)
    for pattern, repl in _intl_rules():
        text = pattern.sub(repl, text)
    return TokenSeq(tuple(text.strip().split()), tokenizer="intl")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def word_tokenize(text: str, nfc: bool = False) -> TokenSeq:
    """Split on whitespace, then peel leading/trailing punctuation clusters.

    Case is preserved and word-internal punctuation stays attached, so
    "c'est bien." tokenizes to ["c'est", "bien", "."].
    """
    if nfc:
        text = unicodedata.normalize("NFC", text)
    out: list[str] = []
    for chunk in text.split():
        left = 0
        right = len(chunk)
        while left < right and _is_punct(chunk[left]):
            left += 1
        while right > left and _is_punct(chunk[right - 1]):
            right -= 1
        if left == right:
            out.append(chunk)
            continue
        if left:
            out.append(chunk[:left])
        out.append(chunk[left:right])
        if right < len(chunk):
            out.append(chunk[right:])
    return TokenSeq(tuple(out), tokenizer="word")


def char_ngrams(text: str, n: int, strip_whitespace: bool = True) -> Counter:
    """Multiset of code point n-grams, as a Counter keyed by n-length strings."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if strip_whitespace:
        text = re.sub(r"\s+", "", text)
    return Counter(text[i:i + n] for i in range(len(text) - n + 1))
