"""Interactive traversal of guideline trees and verdict aggregation.

Sessions are immutable values: ``answer`` and ``undo`` return new sessions,
and replaying a session's path from the root always reproduces it. Condition
nodes are traversed automatically and permanently mark the session
provisional, which floors its severity at TBD when reporting.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .model import (
    Condition,
    GuidelineNode,
    GuidelineTree,
    Leaf,
    Question,
    SEVERITY,
    Verdict,
    VerdictKind,
)


class InvalidAnswer(ValidationError):
    def __init__(self, label: str, valid_labels: tuple[str, ...]):
        super().__init__(f"unknown answer {label!r}; valid answers: {list(valid_labels)}")
        self.label = label
        self.valid_labels = valid_labels


def _auto_traverse(node: GuidelineNode, provisional: bool) -> tuple[GuidelineNode, bool]:
    while isinstance(node, Condition):
        provisional = True
        node = node.child
    return node, provisional


@dataclass(frozen=True)
class Session:
    tree: GuidelineTree
    path: tuple[tuple[str, str], ...]  # (prompt, chosen answer label)
    current: GuidelineNode
    provisional: bool

    @property
    def tree_name(self) -> str:
        return self.tree.name

    @property
    def is_terminal(self) -> bool:
        return isinstance(self.current, Leaf)

    @property
    def verdict(self) -> Verdict | None:
        return self.current.verdict if isinstance(self.current, Leaf) else None

    def to_dict(self) -> dict:
        payload: dict = {
            "tree": self.tree_name,
            "path": [{"prompt": prompt, "answer": label} for prompt, label in self.path],
            "provisional": self.provisional,
        }
        if self.verdict is not None:
            payload["verdict"] = self.verdict.to_dict()
        return payload


def start_session(tree: GuidelineTree) -> Session:
    """A fresh session at the root; root conditions are traversed immediately."""
    current, provisional = _auto_traverse(tree.root, False)
    return Session(tree=tree, path=(), current=current, provisional=provisional)


def answer(session: Session, label: str) -> Session:
    """Advance past the current question by choosing one of its answers."""
    if session.is_terminal:
        raise ValidationError(
            f"session for {session.tree_name!r} is already terminal; undo to explore further"
        )
    node = session.current
    assert isinstance(node, Question)
    if label not in node.labels:
        raise InvalidAnswer(label, node.labels)
    child, provisional = _auto_traverse(node.child(label), session.provisional)
    return Session(
        tree=session.tree,
        path=session.path + ((node.prompt, label),),
        current=child,
        provisional=provisional,
    )


def undo(session: Session) -> Session:
    """Step back one answer by replaying the shortened path from the root."""
    if not session.path:
        raise ValidationError("nothing to undo: no answers given yet")
    replayed = start_session(session.tree)
    for _, label in session.path[:-1]:
        replayed = answer(replayed, label)
    return replayed


def effective_kind(kind: VerdictKind, provisional: bool) -> VerdictKind:
    """A provisional outcome is at least as severe as TBD."""
    if provisional and SEVERITY[kind] < SEVERITY[VerdictKind.TBD]:
        return VerdictKind.TBD
    return kind


@dataclass(frozen=True)
class TreeOutcome:
    tree_name: str
    verdict: Verdict
    provisional: bool
    transcript: tuple[tuple[str, str], ...]
    obligations: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "tree": self.tree_name,
            "verdict": self.verdict.to_dict(),
            "provisional": self.provisional,
            "transcript": [{"prompt": p, "answer": a} for p, a in self.transcript],
            "obligations": list(self.obligations),
        }


@dataclass(frozen=True)
class Report:
    outcomes: tuple[TreeOutcome, ...]
    overall: VerdictKind

    @property
    def obligations(self) -> tuple[str, ...]:
        return tuple(o for outcome in self.outcomes for o in outcome.obligations)

    def to_dict(self) -> dict:
        return {
            "outcomes": [outcome.to_dict() for outcome in self.outcomes],
            "overall": self.overall.value,
            "obligations": list(self.obligations),
        }


def report(sessions: list[Session]) -> Report:
    """Aggregate terminal sessions: severity-max overall, DEMANDS rationales collected."""
    outcomes = []
    for session in sessions:
        if not session.is_terminal:
            raise ValidationError(f"session for {session.tree_name!r} is not terminal")
        verdict = session.verdict
        outcomes.append(
            TreeOutcome(
                tree_name=session.tree_name,
                verdict=verdict,
                provisional=session.provisional,
                transcript=session.path,
                obligations=(verdict.rationale,) if verdict.kind is VerdictKind.DEMANDS else (),
            )
        )
    overall = VerdictKind.PERMITS
    for outcome in outcomes:
        kind = effective_kind(outcome.verdict.kind, outcome.provisional)
        if SEVERITY[kind] > SEVERITY[overall]:
            overall = kind
    return Report(outcomes=tuple(outcomes), overall=overall)
