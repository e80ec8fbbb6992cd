"""Decision-tree guideline nodes and verdicts.

A tree walks from a root through single-choice nodes to a leaf verdict.
``Xor`` is mechanically a ``Question`` but documents mutually exclusive
alternatives and must offer at least two; ``Condition`` marks a branch whose
applicability cannot be decided yet and taints the walk as provisional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class VerdictKind(str, Enum):
    PROHIBITS = "PROHIBITS"  # the activity is unethical
    PERMITS = "PERMITS"  # the activity is not unethical (not a blanket endorsement)
    DEMANDS = "DEMANDS"  # omitting this mitigation would be unethical
    TBD = "TBD"  # cannot be decided yet

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# Aggregation order: unresolved questions outrank satisfiable obligations.
SEVERITY = {
    VerdictKind.PERMITS: 0,
    VerdictKind.DEMANDS: 1,
    VerdictKind.TBD: 2,
    VerdictKind.PROHIBITS: 3,
}

LEAF_KEYWORDS = {
    "prohibit": VerdictKind.PROHIBITS,
    "permit": VerdictKind.PERMITS,
    "demand": VerdictKind.DEMANDS,
    "tbd": VerdictKind.TBD,
}
KEYWORD_FOR_KIND = {kind: keyword for keyword, kind in LEAF_KEYWORDS.items()}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    rationale: str = ""
    citations: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "rationale": self.rationale,
            "citations": list(self.citations),
        }


@dataclass(frozen=True)
class Leaf:
    verdict: Verdict
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Question:
    prompt: str
    branches: tuple[tuple[str, "GuidelineNode"], ...]
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.branches)

    def child(self, label: str) -> "GuidelineNode":
        for branch_label, node in self.branches:
            if branch_label == label:
                return node
        raise KeyError(label)


@dataclass(frozen=True)
class Xor(Question):
    """Mutually exclusive alternatives; exactly one must be chosen."""


@dataclass(frozen=True)
class Condition:
    note: str
    child: "GuidelineNode"
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    # a traversed condition always marks the walk provisional
    provisional: bool = field(default=True, init=False, compare=False, repr=False)


GuidelineNode = Question | Condition | Leaf


@dataclass(frozen=True)
class GuidelineTree:
    name: str
    root: GuidelineNode
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def subclasses(self) -> tuple[str, ...]:
        """Top-level branch labels, read as the documented subclasses."""
        return self.root.labels if isinstance(self.root, Question) else ()


def iter_nodes(node: GuidelineNode):
    """Yield every node of a subtree, pre-order."""
    yield node
    if isinstance(node, Question):
        for _, child in node.branches:
            yield from iter_nodes(child)
    elif isinstance(node, Condition):
        yield from iter_nodes(node.child)


def iter_leaves(node: GuidelineNode):
    for child in iter_nodes(node):
        if isinstance(child, Leaf):
            yield child
