"""Corpus ingestion, tokenization, n-gram expansion and bag-of-words building.

A corpus is described by a JSON manifest: an array of objects with keys
``id, title, abstract, body_path, venue, year, gray_flag`` where ``body_path``
points at a UTF-8 plain-text file (pre-extracted paper text), resolved
relative to the manifest's directory.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import IngestionError, ManifestParseError, ValidationError

# Maximal runs of (unicode) alphanumerics; underscores and everything else
# act as boundaries.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
# "Readable" tokens: printable ASCII letters/digits only, after lowercasing.
_READABLE_RE = re.compile(r"[a-z0-9]+\Z")

_MANIFEST_KEYS = {"id", "title", "abstract", "body_path", "venue", "year", "gray_flag"}


def load_stopwords(path: str | Path | None = None) -> set[str]:
    """Read a stopword list (one word per line); default is the shipped list."""
    if path is None:
        text = resources.files("ethics_triage.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return {line.strip() for line in text.splitlines() if line.strip()}


@dataclass(frozen=True)
class Document:
    """One paper: manifest metadata plus its pre-extracted text."""

    id: str
    title: str
    abstract: str
    body_text: str
    venue: str = ""
    year: int | None = None
    gray_flag: bool = False

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("document id must be non-empty")
        if self.year is not None and self.year < 0:
            raise ValidationError(f"document {self.id!r}: year must be >= 0, got {self.year}")

    def text(self, include_title_abstract: bool = True) -> str:
        """Text used for modeling and screening.

        Title and abstract are prepended to the body by default; pass
        ``include_title_abstract=False`` to model the body alone.
        """
        if include_title_abstract:
            return "\n".join(part for part in (self.title, self.abstract, self.body_text) if part)
        return self.body_text


@dataclass(frozen=True)
class TokenizerConfig:
    stopword_list: frozenset[str] = frozenset()
    max_ngram: int = 5
    min_token_length: int = 1

    def __post_init__(self) -> None:
        if not 1 <= self.max_ngram <= 10:
            raise ValidationError(f"max_ngram must be in 1..10, got {self.max_ngram}")
        for word in self.stopword_list:
            if not word or word != word.lower():
                raise ValidationError(f"stopword entries must be lowercase and non-empty: {word!r}")
        if self.min_token_length < 1:
            raise ValidationError("min_token_length must be >= 1")


def load_corpus(manifest_path: str | Path) -> list[Document]:
    """Load all documents referenced by a manifest, in manifest order."""
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise IngestionError(f"manifest not found: {manifest_path}")
    try:
        entries = json.loads(manifest_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestParseError(
            f"{manifest_path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(entries, list):
        raise ManifestParseError(f"{manifest_path}: manifest must be a JSON array")

    docs: list[Document] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or not _MANIFEST_KEYS.issuperset(entry):
            unknown = sorted(set(entry) - _MANIFEST_KEYS) if isinstance(entry, dict) else entry
            raise ManifestParseError(f"{manifest_path}: entry {i}: unexpected shape: {unknown!r}")
        doc_id = entry.get("id")
        if not doc_id or not isinstance(doc_id, str):
            raise ValidationError(f"{manifest_path}: entry {i}: missing or empty id")
        if doc_id in seen:
            raise ValidationError(f"{manifest_path}: duplicate document id {doc_id!r}")
        seen.add(doc_id)

        body_path = manifest_path.parent / entry.get("body_path", "")
        if not body_path.is_file():
            raise IngestionError(f"document {doc_id!r}: body file not found: {body_path}")
        docs.append(
            Document(
                id=doc_id,
                title=entry.get("title", ""),
                abstract=entry.get("abstract", ""),
                body_text=body_path.read_text("utf-8"),
                venue=entry.get("venue", ""),
                year=entry.get("year"),
                gray_flag=bool(entry.get("gray_flag", False)),
            )
        )
    return docs


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    """Lowercased word tokens with unreadable tokens and stopwords removed.

    The text is split on non-alphanumeric boundaries. A token surviving the
    split is dropped when it contains any character outside printable ASCII
    letters/digits (PDF-extraction noise), when it is a stopword, or when it
    is shorter than ``min_token_length``. Order is preserved.
    """
    tokens = []
    for raw in _TOKEN_RE.findall(text):
        token = raw.lower()
        if not _READABLE_RE.match(token):
            continue
        if token in config.stopword_list:
            continue
        if len(token) < config.min_token_length:
            continue
        tokens.append(token)
    return tokens


def extract_ngrams(tokens: list[str], max_n: int) -> list[str]:
    """All contiguous n-grams for n = 1..min(max_n, len(tokens)), space-joined.

    Output is ordered by increasing n, left to right within each n; its length
    equals sum(L - n + 1 for n in 1..min(max_n, L)).
    """
    if max_n < 1:
        raise ValidationError(f"max_n must be >= 1, got {max_n}")
    length = len(tokens)
    terms: list[str] = []
    for n in range(1, min(max_n, length) + 1):
        for i in range(length - n + 1):
            terms.append(" ".join(tokens[i : i + n]))
    return terms


@dataclass(frozen=True)
class Vocabulary:
    """Bijection between term strings and dense integer ids."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(compare=False)

    @classmethod
    def from_terms(cls, terms: list[str] | tuple[str, ...]) -> "Vocabulary":
        terms = tuple(terms)
        index = {term: i for i, term in enumerate(terms)}
        if len(index) != len(terms):
            raise ValidationError("vocabulary terms must be unique")
        return cls(terms=terms, index=index)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def fingerprint(self) -> str:
        digest = hashlib.sha256("\x00".join(self.terms).encode("utf-8"))
        return digest.hexdigest()


def build_vocabulary(term_lists: list[list[str]], min_doc_freq: int = 2) -> Vocabulary:
    """Vocabulary of terms appearing in at least ``min_doc_freq`` documents.

    Terms are ordered by descending document frequency, lexicographic on ties,
    so ids are deterministic for a given corpus.
    """
    if min_doc_freq < 1:
        raise ValidationError(f"min_doc_freq must be >= 1, got {min_doc_freq}")
    doc_freq: Counter[str] = Counter()
    for terms in term_lists:
        doc_freq.update(set(terms))
    kept = [term for term, df in doc_freq.items() if df >= min_doc_freq]
    if not kept:
        raise ValidationError(
            f"no term appears in at least {min_doc_freq} documents; vocabulary would be empty"
        )
    kept.sort(key=lambda term: (-doc_freq[term], term))
    return Vocabulary.from_terms(kept)


@dataclass(frozen=True)
class BowDoc:
    """Sparse bag-of-terms projection of one document over a Vocabulary."""

    doc_id: str
    counts: dict[int, int]
    vocab_fingerprint: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for term_id, count in self.counts.items():
            if count < 1:
                raise ValidationError(f"document {self.doc_id!r}: count for term {term_id} is < 1")
            if term_id < 0:
                raise ValidationError(f"document {self.doc_id!r}: negative term id {term_id}")

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def to_bow(terms: list[str], vocab: Vocabulary, doc_id: str = "") -> BowDoc:
    """Count in-vocabulary terms; out-of-vocabulary terms are silently dropped."""
    counts: dict[int, int] = {}
    index = vocab.index
    for term in terms:
        term_id = index.get(term)
        if term_id is not None:
            counts[term_id] = counts.get(term_id, 0) + 1
    return BowDoc(doc_id=doc_id, counts=counts, vocab_fingerprint=vocab.fingerprint)
