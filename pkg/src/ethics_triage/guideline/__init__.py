"""Decision-tree ethics guidelines: parse, lint, walk, report."""

from importlib import resources
from pathlib import Path

from .lint import DEFAULT_MAX_DEPTH, LintFinding, validate
from .model import (
    Condition,
    GuidelineNode,
    GuidelineTree,
    Leaf,
    Question,
    SEVERITY,
    Verdict,
    VerdictKind,
    Xor,
    iter_leaves,
    iter_nodes,
)
from .parser import GuidelineSyntaxError, parse_guideline, render_guideline
from .session import (
    InvalidAnswer,
    Report,
    Session,
    TreeOutcome,
    answer,
    effective_kind,
    report,
    start_session,
    undo,
)

__all__ = [
    "Condition",
    "DEFAULT_MAX_DEPTH",
    "GuidelineNode",
    "GuidelineSyntaxError",
    "GuidelineTree",
    "InvalidAnswer",
    "Leaf",
    "LintFinding",
    "Question",
    "Report",
    "SEVERITY",
    "Session",
    "TreeOutcome",
    "Verdict",
    "VerdictKind",
    "Xor",
    "answer",
    "default_guideline_path",
    "effective_kind",
    "iter_leaves",
    "iter_nodes",
    "load_guideline_file",
    "parse_guideline",
    "render_guideline",
    "report",
    "start_session",
    "undo",
    "validate",
]


def default_guideline_path() -> Path:
    """Filesystem path of the shipped sample guideline."""
    return Path(str(resources.files("ethics_triage.data").joinpath("default.gdl")))


def load_guideline_file(path: str | Path | None = None) -> list[GuidelineTree]:
    """Parse a guideline file; with no path, the shipped default."""
    source = Path(path if path is not None else default_guideline_path()).read_text("utf-8")
    return parse_guideline(source)
