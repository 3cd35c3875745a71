"""Turn a parsed program into a flat, checked instruction list.

Loops are unrolled, count expressions evaluated, mapping tables resolved
into arrays and every static check performed here, so the VM never sees an
ill-formed instruction.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..anneal import IsingModel, read_model_file
from ..errors import ElaborationError
from ..isa import ModExp, modexp_table, read_table_file
from ..state import MAX_REGISTER_WIDTH, MAX_TOTAL_WIDTH, RegisterDecl
from . import ast

MAX_INSTRUCTIONS = 1_000_000


@dataclass(frozen=True)
class IniInstr:
    reg: int
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class QftInstr:
    reg: int
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ReaInstr:
    reg: int
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class EntInstr:
    src: int
    dst: int
    table: np.ndarray = field(compare=False, repr=False)
    label: str = ""
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class DifInstr:
    reg: int
    n: int
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class PhaInstr:
    reg: int
    phi: float
    n: int
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class AnnInstr:
    model: IsingModel = field(repr=False)
    path: str = ""
    pos: ast.Pos = field(default=(0, 0), compare=False, repr=False)


Instruction = Union[IniInstr, QftInstr, ReaInstr, EntInstr, DifInstr, PhaInstr, AnnInstr]


@dataclass(frozen=True)
class ElaboratedProgram:
    registers: tuple[RegisterDecl, ...]
    instructions: tuple[Instruction, ...]

    def __len__(self) -> int:
        return len(self.instructions)


class _Elaborator:
    def __init__(self, base_dir, max_instructions):
        self.base_dir = base_dir
        self.max_instructions = max_instructions
        self.registers: list[RegisterDecl] = []
        self.index: dict[str, int] = {}
        self.out: list[Instruction] = []
        self._tables: dict[str, object] = {}
        self._models: dict[str, IsingModel] = {}

    def fail(self, msg, pos):
        raise ElaborationError(msg, *pos)

    def declare(self, d: ast.RegDecl):
        if d.name in self.index:
            self.fail(f"register {d.name!r} declared twice", d.pos)
        if not 1 <= d.width <= MAX_REGISTER_WIDTH:
            self.fail(f"register {d.name!r} width {d.width} outside 1..{MAX_REGISTER_WIDTH}", d.pos)
        total = sum(r.width for r in self.registers) + d.width
        if total > MAX_TOTAL_WIDTH:
            self.fail(f"total register width {total} exceeds {MAX_TOTAL_WIDTH}", d.pos)
        self.index[d.name] = len(self.registers)
        self.registers.append(RegisterDecl(d.name, d.width))

    def reg(self, name, pos) -> int:
        if name not in self.index:
            self.fail(f"register {name!r} used before declaration", pos)
        return self.index[name]

    def dim(self, i: int) -> int:
        return self.registers[i].dim

    def eval(self, e) -> int:
        if isinstance(e, ast.IntLit):
            return e.value
        if isinstance(e, ast.DimOf):
            return self.dim(self.reg(e.reg, e.pos))
        if isinstance(e, ast.Isqrt):
            v = self.eval(e.arg)
            if v < 0:
                self.fail(f"ISQRT of negative value {v}", e.pos)
            return math.isqrt(v)
        if isinstance(e, ast.GroverIters):
            v = self.eval(e.arg)
            if v < 1:
                self.fail(f"GROVER_ITERS needs a positive search size, got {v}", e.pos)
            return math.floor(math.pi / 4 * math.sqrt(v))
        if isinstance(e, ast.BinOp):
            a, b = self.eval(e.left), self.eval(e.right)
            return a + b if e.op == "+" else a - b if e.op == "-" else a * b
        raise TypeError(f"not an integer expression: {e!r}")

    def phase(self, p) -> float:
        if isinstance(p, ast.PiPhase):
            return math.pi
        if isinstance(p, ast.PiFraction):
            if p.den == 0:
                self.fail("phase PI*p/q with q = 0", p.pos)
            return math.pi * p.num / p.den
        if not math.isfinite(p.value):
            self.fail("phase must be finite", p.pos)
        return float(p.value)

    def path(self, rel: str) -> str:
        if self.base_dir is None or os.path.isabs(rel):
            return rel
        return os.path.join(self.base_dir, rel)

    def emit(self, instr, pos):
        if len(self.out) >= self.max_instructions:
            self.fail(f"program unrolls to more than {self.max_instructions} instructions", pos)
        self.out.append(instr)

    def mapping(self, stmt: ast.Ent, src: int, dst: int) -> tuple[np.ndarray, str]:
        m = stmt.mapping
        src_dim, dst_dim = self.dim(src), self.dim(dst)
        if isinstance(m, ast.ModExpSpec):
            base, modulus = self.eval(m.base), self.eval(m.modulus)
            try:
                spec = ModExp(base, modulus)
            except ValueError as exc:
                self.fail(str(exc), m.pos)
            if modulus > dst_dim:
                self.fail(
                    f"MODEXP modulus {modulus} exceeds dimension {dst_dim} of register {stmt.dst!r}", m.pos
                )
            return modexp_table(spec.base, spec.modulus, src_dim), f"MODEXP({base}, {modulus})"
        full = self.path(m.path)
        if full not in self._tables:
            try:
                self._tables[full] = read_table_file(full)
            except (OSError, ValueError) as exc:
                self.fail(f"cannot load table {m.path!r}: {exc}", m.pos)
        entries = self._tables[full].entries
        missing = [j for j in range(src_dim) if j not in entries]
        if missing:
            self.fail(f"table {m.path!r} is undefined for input {missing[0]} (needs 0..{src_dim - 1})", m.pos)
        extra = [j for j in entries if j >= src_dim]
        if extra:
            self.fail(f"table {m.path!r} has input {extra[0]} outside 0..{src_dim - 1}", m.pos)
        table = np.array([entries[j] for j in range(src_dim)], dtype=np.int64)
        if table.max() >= dst_dim:
            self.fail(f"table {m.path!r} image {int(table.max())} does not fit register {stmt.dst!r}", m.pos)
        return table, f'TABLE("{m.path}")'

    def statement(self, s):
        if isinstance(s, ast.Repeat):
            count = self.eval(s.count)
            if count < 0:
                self.fail(f"REPEAT count {count} is negative", s.pos)
            outer, self.out = self.out, []
            for inner in s.body:
                self.statement(inner)
            body, self.out = self.out, outer
            if len(self.out) + count * len(body) > self.max_instructions:
                self.fail(f"program unrolls to more than {self.max_instructions} instructions", s.pos)
            self.out.extend(body * count)
        elif isinstance(s, ast.Ini):
            self.emit(IniInstr(self.reg(s.reg, s.pos), s.pos), s.pos)
        elif isinstance(s, ast.Qft):
            self.emit(QftInstr(self.reg(s.reg, s.pos), s.pos), s.pos)
        elif isinstance(s, ast.Rea):
            self.emit(ReaInstr(self.reg(s.reg, s.pos), s.pos), s.pos)
        elif isinstance(s, ast.Ent):
            src, dst = self.reg(s.src, s.pos), self.reg(s.dst, s.pos)
            if src == dst:
                self.fail("ENT needs two distinct registers", s.pos)
            table, label = self.mapping(s, src, dst)
            self.emit(EntInstr(src, dst, table, label, s.pos), s.pos)
        elif isinstance(s, ast.Dif):
            r = self.reg(s.reg, s.pos)
            n = self.eval(s.size)
            if n != self.dim(r):
                self.fail(f"DIF size {n} must equal the dimension {self.dim(r)} of register {s.reg!r}", s.pos)
            self.emit(DifInstr(r, n, s.pos), s.pos)
        elif isinstance(s, ast.Pha):
            r = self.reg(s.reg, s.pos)
            n = self.eval(s.index)
            if not 0 <= n < self.dim(r):
                self.fail(f"PHA index {n} outside 0..{self.dim(r) - 1} for register {s.reg!r}", s.pos)
            self.emit(PhaInstr(r, self.phase(s.phase), n, s.pos), s.pos)
        elif isinstance(s, ast.Ann):
            full = self.path(s.path)
            if full not in self._models:
                try:
                    self._models[full] = read_model_file(full)
                except (OSError, ValueError) as exc:
                    self.fail(f"cannot load Ising model {s.path!r}: {exc}", s.pos)
            self.emit(AnnInstr(self._models[full], s.path, s.pos), s.pos)
        else:
            raise TypeError(f"not a statement: {s!r}")


def elaborate(program: ast.ProgramAst, base_dir: str | None = None,
              max_instructions: int = MAX_INSTRUCTIONS) -> ElaboratedProgram:
    """Check and unroll ``program``.

    ``TABLE`` and ``ANN`` paths are resolved against ``base_dir`` (normally
    the directory holding the source file).
    """
    el = _Elaborator(base_dir, max_instructions)
    for item in program.items:
        if isinstance(item, ast.RegDecl):
            el.declare(item)
        else:
            el.statement(item)
    return ElaboratedProgram(tuple(el.registers), tuple(el.out))


def load_program(path: str, **kwargs) -> ElaboratedProgram:
    """Read, parse and elaborate a ``.qvm`` file."""
    from .parser import parse

    with open(path, encoding="utf-8") as fh:
        source = fh.read()
    return elaborate(parse(source), base_dir=os.path.dirname(os.path.abspath(path)), **kwargs)
