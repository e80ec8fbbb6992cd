"""CSV and JSON artifact formats shared by the pipeline subcommands.

Flag tables: doc_id, gray, ethics_mention, matched_terms ("surface:count"
pairs, semicolon-joined). Assignment tables: doc_id, primary_topic,
secondary_topic (empty when absent), categories (semicolon-joined, sorted).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import Assignment
from .corpus import BowDoc, Vocabulary
from .errors import ValidationError
from .screening import ScreenFlags

FLAGS_FIELDS = ["doc_id", "gray", "ethics_mention", "matched_terms"]
ASSIGNMENT_FIELDS = ["doc_id", "primary_topic", "secondary_topic", "categories"]


def _bool(value: str) -> bool:
    if value not in ("true", "false"):
        raise ValidationError(f"expected 'true' or 'false', got {value!r}")
    return value == "true"


def write_flags_csv(path: str | Path, flags: list[ScreenFlags]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(FLAGS_FIELDS)
        for f in flags:
            matched = ";".join(f"{surface}:{count}" for surface, count in f.matched_terms)
            writer.writerow(
                [f.doc_id, str(f.gray).lower(), str(f.ethics_mention).lower(), matched]
            )


def read_flags_csv(path: str | Path) -> list[ScreenFlags]:
    flags = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != FLAGS_FIELDS:
            raise ValidationError(f"{path}: expected columns {FLAGS_FIELDS}")
        for row in reader:
            matched = tuple(
                (part.rsplit(":", 1)[0], int(part.rsplit(":", 1)[1]))
                for part in row["matched_terms"].split(";")
                if part
            )
            flags.append(
                ScreenFlags(
                    doc_id=row["doc_id"],
                    gray=_bool(row["gray"]),
                    ethics_mention=_bool(row["ethics_mention"]),
                    matched_terms=matched,
                )
            )
    return flags


def write_assignments_csv(path: str | Path, assignments: list[Assignment]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(ASSIGNMENT_FIELDS)
        for a in assignments:
            writer.writerow(
                [
                    a.doc_id,
                    a.primary_topic,
                    "" if a.secondary_topic is None else a.secondary_topic,
                    ";".join(sorted(a.categories)),
                ]
            )


def read_assignments_csv(path: str | Path) -> list[Assignment]:
    assignments = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != ASSIGNMENT_FIELDS:
            raise ValidationError(f"{path}: expected columns {ASSIGNMENT_FIELDS}")
        for row in reader:
            secondary = row["secondary_topic"]
            assignments.append(
                Assignment(
                    doc_id=row["doc_id"],
                    primary_topic=int(row["primary_topic"]),
                    secondary_topic=int(secondary) if secondary else None,
                    categories=frozenset(c for c in row["categories"].split(";") if c),
                )
            )
    return assignments


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps({"version": "1", **payload}, indent=2), encoding="utf-8")


@dataclass
class PreparedCorpus:
    """Tokenized, vectorized corpus: the ingest output consumed by train/classify."""

    vocab: Vocabulary
    bows: list[BowDoc]
    gray_flags: dict[str, bool]
    meta: dict = field(default_factory=dict)

    @property
    def doc_ids(self) -> list[str]:
        return [bow.doc_id for bow in self.bows]


def write_prepared_corpus(path: str | Path, prepared: PreparedCorpus) -> None:
    payload = {
        "version": "1",
        **prepared.meta,
        "vocab": list(prepared.vocab.terms),
        "docs": [
            {
                "id": bow.doc_id,
                "gray_flag": prepared.gray_flags.get(bow.doc_id, False),
                "counts": sorted([tid, count] for tid, count in bow.counts.items()),
            }
            for bow in prepared.bows
        ],
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def read_prepared_corpus(path: str | Path) -> PreparedCorpus:
    data = json.loads(Path(path).read_text("utf-8"))
    if data.get("version") != "1":
        raise ValidationError(f"{path}: unsupported corpus format version {data.get('version')!r}")
    vocab = Vocabulary.from_terms(data["vocab"])
    bows = []
    gray_flags = {}
    for doc in data["docs"]:
        bows.append(
            BowDoc(
                doc_id=doc["id"],
                counts={int(tid): int(count) for tid, count in doc["counts"]},
                vocab_fingerprint=vocab.fingerprint,
            )
        )
        gray_flags[doc["id"]] = bool(doc["gray_flag"])
    meta = {k: v for k, v in data.items() if k not in ("version", "vocab", "docs")}
    return PreparedCorpus(vocab=vocab, bows=bows, gray_flags=gray_flags, meta=meta)
