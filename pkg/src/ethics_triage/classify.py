"""Assign documents to topics and categories from their topic distributions.

Two rules: the most probable topic always assigns; the second most probable
assigns too when its probability clears a threshold (default 0.1). Ties break
toward the lower topic index so results are deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .topics import CategoryMap

_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class AssignRules:
    second_topic_threshold: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 <= self.second_topic_threshold <= 1.0:
            raise ValidationError(
                f"second_topic_threshold must be in [0, 1], got {self.second_topic_threshold}"
            )


@dataclass(frozen=True)
class Assignment:
    doc_id: str
    primary_topic: int
    secondary_topic: int | None
    categories: frozenset[str]

    def __post_init__(self) -> None:
        if self.secondary_topic is not None and self.secondary_topic == self.primary_topic:
            raise ValidationError(f"document {self.doc_id!r}: secondary equals primary topic")


def assign_topics(
    theta_row: np.ndarray, rules: AssignRules | None = None
) -> tuple[int, int | None]:
    """Primary topic (argmax) and optional secondary topic (second max >= threshold)."""
    rules = rules or AssignRules()
    theta_row = np.asarray(theta_row, dtype=np.float64)
    if theta_row.size == 0:
        raise ValidationError("empty topic distribution")
    if abs(float(theta_row.sum()) - 1.0) > _SUM_TOLERANCE:
        raise ValidationError(f"topic distribution sums to {theta_row.sum()}, not 1")

    primary = int(np.argmax(theta_row))  # argmax takes the lowest index on ties
    if theta_row.size == 1:
        return primary, None
    rest = theta_row.copy()
    rest[primary] = -np.inf
    second = int(np.argmax(rest))
    if theta_row[second] >= rules.second_topic_threshold:
        return primary, second
    return primary, None


def assign_categories(
    topics: tuple[int, int | None], category_map: CategoryMap, num_topics: int
) -> frozenset[str]:
    """Union of the categories of the assigned topics ('uncategorized' when unmapped)."""
    primary, secondary = topics
    names = set()
    for topic in (primary, secondary):
        if topic is None:
            continue
        if not 0 <= topic < num_topics:
            raise ValidationError(f"topic {topic} out of range 0..{num_topics - 1}")
        names.add(category_map.category_of(topic))
    return frozenset(names)


def assign_document(
    doc_id: str,
    theta_row: np.ndarray,
    category_map: CategoryMap,
    rules: AssignRules | None = None,
) -> Assignment:
    topics = assign_topics(theta_row, rules)
    categories = assign_categories(topics, category_map, num_topics=len(theta_row))
    return Assignment(
        doc_id=doc_id,
        primary_topic=topics[0],
        secondary_topic=topics[1],
        categories=categories,
    )


def category_counts(assignments: list[Assignment]) -> dict[str, int]:
    """Documents per category; a document counts once in every category it has."""
    counts: Counter[str] = Counter()
    for assignment in assignments:
        counts.update(assignment.categories)
    return dict(counts)
