"""Pydantic request/response models for the guideline session API.

Every response carries a top-level ``version`` field.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel

API_VERSION = "1"


class CreateSessionRequest(BaseModel):
    tree: str


class AnswerRequest(BaseModel):
    label: str


class ReportRequest(BaseModel):
    ids: list[str]


class NodeView(BaseModel):
    kind: Literal["question", "xor"]
    prompt: str
    labels: list[str]


class VerdictView(BaseModel):
    kind: Literal["PROHIBITS", "PERMITS", "DEMANDS", "TBD"]
    rationale: str
    citations: list[str]


class PathStep(BaseModel):
    prompt: str
    answer: str


class SessionState(BaseModel):
    version: str = API_VERSION
    id: str
    tree: str
    path: list[PathStep]
    provisional: bool
    node: NodeView | None = None
    verdict: VerdictView | None = None


class GuidelineInfo(BaseModel):
    name: str
    subclasses: list[str]


class GuidelineList(BaseModel):
    version: str = API_VERSION
    guidelines: list[GuidelineInfo]


class OutcomeView(BaseModel):
    tree: str
    verdict: VerdictView
    provisional: bool
    transcript: list[PathStep]
    obligations: list[str]


class ReportView(BaseModel):
    version: str = API_VERSION
    outcomes: list[OutcomeView]
    overall: Literal["PROHIBITS", "PERMITS", "DEMANDS", "TBD"]
    obligations: list[str]
