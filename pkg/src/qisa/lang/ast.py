"""Syntax tree for ``.qvm`` programs.

Every node records its source position in ``pos``; positions are excluded
from equality so that trees compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

Pos = tuple[int, int]


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# integer expressions


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class DimOf:
    reg: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Isqrt:
    arg: "IntExpr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class GroverIters:
    arg: "IntExpr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "IntExpr"
    right: "IntExpr"
    pos: Pos = _pos()


IntExpr = Union[IntLit, DimOf, Isqrt, GroverIters, BinOp]


# phases


@dataclass(frozen=True)
class PiPhase:
    pos: Pos = _pos()


@dataclass(frozen=True)
class PiFraction:
    num: int
    den: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class FloatPhase:
    value: float
    pos: Pos = _pos()


Phase = Union[PiPhase, PiFraction, FloatPhase]


# mapping specs


@dataclass(frozen=True)
class ModExpSpec:
    base: IntExpr
    modulus: IntExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class TableSpec:
    path: str
    pos: Pos = _pos()


MapSpec = Union[ModExpSpec, TableSpec]


# statements


@dataclass(frozen=True)
class RegDecl:
    name: str
    width: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Ini:
    reg: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Qft:
    reg: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Rea:
    reg: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Ent:
    src: str
    dst: str
    mapping: MapSpec
    pos: Pos = _pos()


@dataclass(frozen=True)
class Dif:
    reg: str
    size: IntExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pha:
    reg: str
    phase: Phase
    index: IntExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Ann:
    path: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Repeat:
    count: IntExpr
    body: tuple["Statement", ...]
    pos: Pos = _pos()


Statement = Union[Ini, Qft, Rea, Ent, Dif, Pha, Ann, Repeat]


@dataclass(frozen=True)
class ProgramAst:
    """Top-level items in source order (declarations may interleave with statements)."""

    items: tuple[Union[RegDecl, Statement], ...]

    @property
    def declarations(self) -> list[RegDecl]:
        return [i for i in self.items if isinstance(i, RegDecl)]

    @property
    def body(self) -> list[Statement]:
        return [i for i in self.items if not isinstance(i, RegDecl)]
