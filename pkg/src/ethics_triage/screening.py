"""Keyword screening for ethics mentions and gray-area set arithmetic.

The default rules flag a document when any word starts with "ethic" or
"moral" (case-insensitive) or exactly equals "IRB" or "REB" (case-sensitive
whole word). Prefix matching is deliberately naive and documented as such:
"morale" and "morality" both match "moral".
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Document
from .errors import ValidationError

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_PREFIXES = ("ethic", "moral")
DEFAULT_EXACT_TOKENS = ("IRB", "REB")


@dataclass(frozen=True)
class KeywordRules:
    prefix_patterns: tuple[str, ...] = DEFAULT_PREFIXES
    exact_tokens: tuple[str, ...] = DEFAULT_EXACT_TOKENS

    def __post_init__(self) -> None:
        for prefix in self.prefix_patterns:
            if not prefix or prefix != prefix.lower():
                raise ValidationError(f"prefix patterns must be lowercase, non-empty: {prefix!r}")
        for token in self.exact_tokens:
            if not token:
                raise ValidationError("exact tokens must be non-empty")


@dataclass(frozen=True)
class ScreenFlags:
    doc_id: str
    gray: bool
    ethics_mention: bool
    matched_terms: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        if self.ethics_mention != bool(self.matched_terms):
            raise ValidationError(
                f"document {self.doc_id!r}: ethics_mention must be true iff terms matched"
            )


def keyword_screen(text: str, rules: KeywordRules | None = None) -> tuple[bool, tuple[tuple[str, int], ...]]:
    """Scan text for ethics keywords.

    Returns (ethics_mention, matched_terms): whether any word matched, and
    each distinct matching surface form with its count, in first-occurrence
    order. Prefixes match case-insensitively at word start; exact tokens
    match case-sensitively as whole words.
    """
    rules = rules or KeywordRules()
    counts: Counter[str] = Counter()
    order: list[str] = []
    for word in _WORD_RE.findall(text):
        lowered = word.lower()
        if any(lowered.startswith(p) for p in rules.prefix_patterns) or word in rules.exact_tokens:
            if word not in counts:
                order.append(word)
            counts[word] += 1
    matched = tuple((surface, counts[surface]) for surface in order)
    return bool(matched), matched


def screen_document(doc: Document, rules: KeywordRules | None = None) -> ScreenFlags:
    """Screen one document's full text; gray flag passes through from the manifest."""
    mention, matched = keyword_screen(doc.text(), rules)
    return ScreenFlags(
        doc_id=doc.id, gray=doc.gray_flag, ethics_mention=mention, matched_terms=matched
    )


@dataclass(frozen=True)
class ScreenSummary:
    gray_count: int
    ethics_count: int
    intersection_count: int
    union_count: int
    table: tuple[tuple[str, bool, bool], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.union_count != self.gray_count + self.ethics_count - self.intersection_count:
            raise ValidationError("union count violates inclusion-exclusion")
        if self.intersection_count > min(self.gray_count, self.ethics_count):
            raise ValidationError("intersection larger than a component set")

    def to_dict(self) -> dict:
        return {
            "version": "1",
            "gray_count": self.gray_count,
            "ethics_count": self.ethics_count,
            "intersection_count": self.intersection_count,
            "union_count": self.union_count,
        }


def combine_flags(
    gray_ids: set[str], ethics_ids: set[str], corpus: list[Document]
) -> ScreenSummary:
    """Set arithmetic over the gray and ethics-mention document sets.

    The union set is what downstream classification consumes. Every id must
    belong to the corpus.
    """
    known = {doc.id for doc in corpus}
    unknown = sorted((gray_ids | ethics_ids) - known)
    if unknown:
        raise ValidationError(f"ids not in corpus: {unknown}")
    table = tuple((doc.id, doc.id in gray_ids, doc.id in ethics_ids) for doc in corpus)
    return ScreenSummary(
        gray_count=len(gray_ids),
        ethics_count=len(ethics_ids),
        intersection_count=len(gray_ids & ethics_ids),
        union_count=len(gray_ids | ethics_ids),
        table=table,
    )
