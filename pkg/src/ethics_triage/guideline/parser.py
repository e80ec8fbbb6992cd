"""Parser and canonical renderer for the guideline tree language.

Grammar (UTF-8 text, '#' starts a line comment):

    file      := guideline+
    guideline := 'guideline' STRING '{' node '}'
    node      := question | xor | condition | leaf
    question  := 'question' STRING '{' branch+ '}'
    xor       := 'xor' STRING '{' branch branch+ '}'
    branch    := 'answer' STRING '->' node
    condition := 'condition' STRING '->' node
    leaf      := ('prohibit' | 'permit' | 'demand' | 'tbd') STRING? ('@' STRING)*

Strings are double-quoted with backslash escapes for '"' and '\\' only.
``render_guideline`` emits a deterministic canonical form that parses back to
a structurally equal tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EthicsTriageError
from .model import (
    Condition,
    GuidelineNode,
    GuidelineTree,
    KEYWORD_FOR_KIND,
    LEAF_KEYWORDS,
    Leaf,
    Question,
    Verdict,
    Xor,
)


class GuidelineSyntaxError(EthicsTriageError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, STRING, LBRACE, RBRACE, ARROW, AT, EOF
    value: str
    line: int
    col: int


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def advance(count: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
        elif ch == "#":
            while i < n and source[i] != "\n":
                advance()
        elif ch == "{":
            tokens.append(_Token("LBRACE", ch, line, col))
            advance()
        elif ch == "}":
            tokens.append(_Token("RBRACE", ch, line, col))
            advance()
        elif ch == "@":
            tokens.append(_Token("AT", ch, line, col))
            advance()
        elif ch == "-":
            if i + 1 < n and source[i + 1] == ">":
                tokens.append(_Token("ARROW", "->", line, col))
                advance(2)
            else:
                raise GuidelineSyntaxError("expected '->'", line, col)
        elif ch == '"':
            start_line, start_col = line, col
            advance()
            value: list[str] = []
            while True:
                if i >= n:
                    raise GuidelineSyntaxError("unterminated string", start_line, start_col)
                ch = source[i]
                if ch == '"':
                    advance()
                    break
                if ch == "\\":
                    if i + 1 >= n or source[i + 1] not in ('"', "\\"):
                        raise GuidelineSyntaxError(
                            "only \\\" and \\\\ escapes are allowed", line, col
                        )
                    value.append(source[i + 1])
                    advance(2)
                else:
                    value.append(ch)
                    advance()
            tokens.append(_Token("STRING", "".join(value), start_line, start_col))
        elif ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                advance()
            tokens.append(_Token("IDENT", source[start:i], start_line, start_col))
        else:
            raise GuidelineSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._index = 0

    @property
    def _current(self) -> _Token:
        return self._tokens[self._index]

    def _error(self, message: str) -> GuidelineSyntaxError:
        token = self._current
        return GuidelineSyntaxError(message, token.line, token.col)

    def _expect(self, kind: str, what: str) -> _Token:
        token = self._current
        if token.kind != kind:
            raise self._error(f"expected {what}, found {token.value or 'end of file'!r}")
        self._index += 1
        return token

    def _expect_keyword(self, keyword: str) -> _Token:
        token = self._current
        if token.kind != "IDENT" or token.value != keyword:
            raise self._error(f"expected '{keyword}', found {token.value or 'end of file'!r}")
        self._index += 1
        return token

    def parse_file(self) -> list[GuidelineTree]:
        trees = [self.parse_tree()]
        while self._current.kind != "EOF":
            trees.append(self.parse_tree())
        return trees

    def parse_tree(self) -> GuidelineTree:
        start = self._expect_keyword("guideline")
        name = self._expect("STRING", "a quoted guideline name").value
        self._expect("LBRACE", "'{'")
        root = self.parse_node()
        self._expect("RBRACE", "'}'")
        return GuidelineTree(name=name, root=root, pos=(start.line, start.col))

    def parse_node(self) -> GuidelineNode:
        token = self._current
        if token.kind != "IDENT":
            raise self._error(
                "expected one of 'question', 'xor', 'condition', "
                "'prohibit', 'permit', 'demand', 'tbd'"
            )
        if token.value in ("question", "xor"):
            return self._parse_choice(token.value)
        if token.value == "condition":
            return self._parse_condition()
        if token.value in LEAF_KEYWORDS:
            return self._parse_leaf()
        raise self._error(f"unknown node keyword {token.value!r}")

    def _parse_choice(self, keyword: str) -> Question:
        start = self._expect_keyword(keyword)
        prompt = self._expect("STRING", "a quoted prompt").value
        self._expect("LBRACE", "'{'")
        branches: list[tuple[str, GuidelineNode]] = []
        while self._current.kind != "RBRACE":
            self._expect_keyword("answer")
            label = self._expect("STRING", "a quoted answer label").value
            self._expect("ARROW", "'->'")
            branches.append((label, self.parse_node()))
        self._expect("RBRACE", "'}'")
        if not branches:
            raise GuidelineSyntaxError(
                f"{keyword} must have at least one branch", start.line, start.col
            )
        if keyword == "xor":
            if len(branches) < 2:
                raise GuidelineSyntaxError(
                    "xor must offer at least two mutually exclusive branches",
                    start.line,
                    start.col,
                )
            return Xor(prompt=prompt, branches=tuple(branches), pos=(start.line, start.col))
        return Question(prompt=prompt, branches=tuple(branches), pos=(start.line, start.col))

    def _parse_condition(self) -> Condition:
        start = self._expect_keyword("condition")
        note = self._expect("STRING", "a quoted condition note").value
        self._expect("ARROW", "'->'")
        return Condition(note=note, child=self.parse_node(), pos=(start.line, start.col))

    def _parse_leaf(self) -> Leaf:
        start = self._current
        kind = LEAF_KEYWORDS[start.value]
        self._index += 1
        rationale = ""
        if self._current.kind == "STRING":
            rationale = self._current.value
            self._index += 1
        citations: list[str] = []
        while self._current.kind == "AT":
            self._index += 1
            citations.append(self._expect("STRING", "a quoted citation").value)
        return Leaf(
            verdict=Verdict(kind=kind, rationale=rationale, citations=tuple(citations)),
            pos=(start.line, start.col),
        )


def parse_guideline(source: str) -> list[GuidelineTree]:
    """Parse guideline source text into trees, in file order."""
    tokens = _lex(source)
    if tokens[0].kind == "EOF":
        raise GuidelineSyntaxError("empty guideline source", 1, 1)
    return _Parser(tokens).parse_file()


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def _render_node(node: GuidelineNode, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(node, Leaf):
        parts = [KEYWORD_FOR_KIND[node.verdict.kind]]
        if node.verdict.rationale:
            parts.append(f'"{_escape(node.verdict.rationale)}"')
        for citation in node.verdict.citations:
            parts.append(f'@ "{_escape(citation)}"')
        out.append(" ".join(parts))
    elif isinstance(node, Condition):
        out.append(f'condition "{_escape(node.note)}" -> ')
        _render_node(node.child, indent, out)
    else:
        keyword = "xor" if isinstance(node, Xor) else "question"
        out.append(f'{keyword} "{_escape(node.prompt)}" {{\n')
        for label, child in node.branches:
            out.append(f'{pad}  answer "{_escape(label)}" -> ')
            _render_node(child, indent + 1, out)
            out.append("\n")
        out.append(pad + "}")


def render_guideline(trees: list[GuidelineTree]) -> str:
    """Deterministic canonical source; parse(render(trees)) equals trees."""
    out: list[str] = []
    for i, tree in enumerate(trees):
        if i:
            out.append("\n")
        out.append(f'guideline "{_escape(tree.name)}" {{\n  ')
        _render_node(tree.root, 1, out)
        out.append("\n}\n")
    return "".join(out)
