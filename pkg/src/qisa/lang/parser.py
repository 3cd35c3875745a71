"""Recursive-descent parser for ``.qvm`` programs.

The grammar has straight-line statements and fixed-count ``REPEAT`` blocks
only; there is no conditional, jump or call construct to parse.
"""

from __future__ import annotations

from ..errors import ParseError
from . import ast
from .lexer import Token, tokenize

_INSTRUCTIONS = ("INI", "QFT", "REA", "ENT", "DIF", "PHA", "ANN", "REPEAT")


class Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind != "eof":
            raise ValueError("token list must end with an eof token")
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, expected: str) -> ParseError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.lexeme)
        return ParseError(f"expected {expected}, found {found}", tok.line, tok.column)

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        return self.tok.kind == kind and (lexeme is None or self.tok.lexeme == lexeme)

    def expect(self, kind: str, lexeme: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, lexeme):
            raise self.error(what or (repr(lexeme) if lexeme else kind))
        return self.advance()

    def punct(self, ch: str) -> Token:
        return self.expect("punctuation", ch)

    # program structure ---------------------------------------------------

    def program(self) -> ast.ProgramAst:
        items = []
        while not self.at("eof"):
            if self.at("keyword", "REG"):
                items.append(self.regdecl())
            else:
                items.append(self.statement())
        return ast.ProgramAst(tuple(items))

    def regdecl(self) -> ast.RegDecl:
        pos = self.advance().pos
        name = self.expect("identifier", what="register name").lexeme
        width = int(self.expect("integer", what="register width").lexeme)
        return ast.RegDecl(name, width, pos)

    def statement(self):
        tok = self.tok
        if tok.kind != "keyword" or tok.lexeme not in _INSTRUCTIONS:
            raise self.error("an instruction (" + ", ".join(_INSTRUCTIONS) + ") or REG")
        self.advance()
        pos = tok.pos
        op = tok.lexeme
        if op in ("INI", "QFT", "REA"):
            reg = self.ident()
            return {"INI": ast.Ini, "QFT": ast.Qft, "REA": ast.Rea}[op](reg, pos)
        if op == "ENT":
            src = self.ident()
            self.punct(",")
            dst = self.ident()
            self.punct(",")
            return ast.Ent(src, dst, self.mapspec(), pos)
        if op == "DIF":
            reg = self.ident()
            self.punct(",")
            return ast.Dif(reg, self.intexpr(), pos)
        if op == "PHA":
            reg = self.ident()
            self.punct(",")
            phase = self.phase()
            self.punct(",")
            return ast.Pha(reg, phase, self.intexpr(), pos)
        if op == "ANN":
            return ast.Ann(self.string(), pos)
        count = self.intexpr()
        self.punct("{")
        body = []
        while not self.at("punctuation", "}"):
            if self.at("eof"):
                raise self.error("'}'")
            body.append(self.statement())
        self.advance()
        return ast.Repeat(count, tuple(body), pos)

    def ident(self) -> str:
        return self.expect("identifier", what="register name").lexeme

    def string(self) -> str:
        return self.expect("string", what="quoted path").lexeme[1:-1]

    def mapspec(self):
        tok = self.tok
        if self.at("keyword", "MODEXP"):
            self.advance()
            self.punct("(")
            base = self.intexpr()
            self.punct(",")
            modulus = self.intexpr()
            self.punct(")")
            return ast.ModExpSpec(base, modulus, tok.pos)
        if self.at("keyword", "TABLE"):
            self.advance()
            self.punct("(")
            path = self.string()
            self.punct(")")
            return ast.TableSpec(path, tok.pos)
        raise self.error("MODEXP(...) or TABLE(...)")

    def phase(self):
        tok = self.tok
        if self.at("keyword", "PI"):
            self.advance()
            if self.at("punctuation", "*"):
                self.advance()
                num = int(self.expect("integer").lexeme)
                self.punct("/")
                den = int(self.expect("integer").lexeme)
                return ast.PiFraction(num, den, tok.pos)
            return ast.PiPhase(tok.pos)
        if tok.kind in ("float", "integer"):
            self.advance()
            return ast.FloatPhase(float(tok.lexeme), tok.pos)
        raise self.error("phase (PI, PI*p/q or a number)")

    # integer expressions: sum of products of atoms, left associative

    def intexpr(self):
        left = self.term()
        while self.at("punctuation", "+") or self.at("punctuation", "-"):
            op = self.advance()
            left = ast.BinOp(op.lexeme, left, self.term(), op.pos)
        return left

    def term(self):
        left = self.atom()
        while self.at("punctuation", "*"):
            op = self.advance()
            left = ast.BinOp("*", left, self.atom(), op.pos)
        return left

    def atom(self):
        tok = self.tok
        if tok.kind == "integer":
            self.advance()
            return ast.IntLit(int(tok.lexeme), tok.pos)
        if self.at("keyword", "DIM"):
            self.advance()
            self.punct("(")
            reg = self.ident()
            self.punct(")")
            return ast.DimOf(reg, tok.pos)
        if self.at("keyword", "ISQRT") or self.at("keyword", "GROVER_ITERS"):
            self.advance()
            self.punct("(")
            arg = self.intexpr()
            self.punct(")")
            cls = ast.Isqrt if tok.lexeme == "ISQRT" else ast.GroverIters
            return cls(arg, tok.pos)
        if self.at("punctuation", "("):
            self.advance()
            inner = self.intexpr()
            self.punct(")")
            return inner
        raise self.error("integer expression")


def parse(tokens: list[Token] | str) -> ast.ProgramAst:
    """Parse a token list (or raw source text) into a :class:`ProgramAst`."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return Parser(tokens).program()
