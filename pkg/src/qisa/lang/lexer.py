"""Tokenizer for ``.qvm`` source."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({
    "REG", "INI", "QFT", "REA", "ENT", "DIF", "PHA", "ANN", "REPEAT",
    "MODEXP", "TABLE", "DIM", "ISQRT", "GROVER_ITERS", "PI",
})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>;[^\n]*)
  | (?P<float>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<integer>\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punctuation>[,(){}+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | integer | float | string | punctuation | eof
    lexeme: str
    line: int
    column: int

    @property
    def pos(self) -> tuple[int, int]:
        return self.line, self.column


def tokenize(source: str) -> list[Token]:
    """Split source into tokens; the returned list ends with an ``eof`` token."""
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            if source[pos] == '"':
                raise LexError("unterminated string literal", line, col)
            raise LexError(f"illegal character {source[pos]!r}", line, col)
        kind, text = m.lastgroup, m.group()
        if kind == "word":
            kind = "keyword" if text in KEYWORDS else "identifier"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
