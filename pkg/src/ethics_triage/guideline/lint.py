"""Structural lint for guideline trees.

Findings, not exceptions: errors for arity and labeling problems the parser
cannot see on programmatically built trees, a warning for suspicious depth.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .model import Condition, GuidelineNode, GuidelineTree, Leaf, Xor

DEFAULT_MAX_DEPTH = 50


@dataclass(frozen=True)
class LintFinding:
    severity: str  # "error" | "warning"
    location: str
    message: str


def _location(tree: GuidelineTree, node: GuidelineNode | None, path: str) -> str:
    if node is not None and node.pos is not None:
        return f"{tree.name}:{node.pos[0]}:{node.pos[1]}"
    return f"{tree.name}: {path}"


def _check_node(
    tree: GuidelineTree,
    node: GuidelineNode,
    path: str,
    depth: int,
    findings: list[LintFinding],
) -> int:
    """Append findings for this subtree; return its maximum depth."""
    if isinstance(node, Leaf):
        return depth
    if isinstance(node, Condition):
        return _check_node(tree, node.child, f"{path} -> condition", depth + 1, findings)

    if not node.prompt.strip():
        findings.append(LintFinding("error", _location(tree, node, path), "empty prompt"))
    if isinstance(node, Xor):
        if len(node.branches) < 2:
            findings.append(
                LintFinding(
                    "error",
                    _location(tree, node, path),
                    f"xor offers {len(node.branches)} branch(es); at least 2 required",
                )
            )
    elif not node.branches:
        findings.append(
            LintFinding("error", _location(tree, node, path), "question has no branches")
        )
    duplicated = [label for label, count in Counter(node.labels).items() if count > 1]
    for label in duplicated:
        findings.append(
            LintFinding(
                "error", _location(tree, node, path), f"duplicate answer label {label!r}"
            )
        )
    deepest = depth
    for label, child in node.branches:
        deepest = max(
            deepest, _check_node(tree, child, f"{path} -> {label!r}", depth + 1, findings)
        )
    return deepest


def validate(
    trees: list[GuidelineTree], max_depth: int = DEFAULT_MAX_DEPTH
) -> list[LintFinding]:
    """Lint trees; an empty result means valid."""
    findings: list[LintFinding] = []
    for tree in trees:
        if not tree.name.strip():
            findings.append(LintFinding("error", _location(tree, None, "root"), "empty tree name"))
        depth = _check_node(tree, tree.root, "root", 1, findings)
        if depth > max_depth:
            findings.append(
                LintFinding(
                    "warning",
                    _location(tree, None, "root"),
                    f"tree depth {depth} exceeds {max_depth}",
                )
            )
    return findings
