"""The ``.qvm`` assembly language: tokenizer, parser, printer and elaborator."""

from .ast import ProgramAst
from .elaborate import ElaboratedProgram, elaborate, load_program
from .lexer import Token, tokenize
from .parser import parse
from .printer import pretty_print

__all__ = [
    "ElaboratedProgram",
    "ProgramAst",
    "Token",
    "elaborate",
    "load_program",
    "parse",
    "pretty_print",
    "tokenize",
]
