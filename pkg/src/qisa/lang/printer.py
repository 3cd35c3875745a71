"""Canonical source formatting; ``parse(pretty_print(tree)) == tree``."""

from __future__ import annotations

from . import ast

INDENT = "    "
_PRECEDENCE = {"+": 1, "-": 1, "*": 2}


def format_intexpr(e, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, ast.IntLit):
        return str(e.value)
    if isinstance(e, ast.DimOf):
        return f"DIM({e.reg})"
    if isinstance(e, ast.Isqrt):
        return f"ISQRT({format_intexpr(e.arg)})"
    if isinstance(e, ast.GroverIters):
        return f"GROVER_ITERS({format_intexpr(e.arg)})"
    if isinstance(e, ast.BinOp):
        prec = _PRECEDENCE[e.op]
        text = f"{format_intexpr(e.left, prec)} {e.op} {format_intexpr(e.right, prec, right=True)}"
        # operators are left associative, so an equal-precedence right child needs parens
        if prec < parent or (right and prec == parent):
            return f"({text})"
        return text
    raise TypeError(f"not an integer expression: {e!r}")


def format_phase(p) -> str:
    if isinstance(p, ast.PiPhase):
        return "PI"
    if isinstance(p, ast.PiFraction):
        return f"PI*{p.num}/{p.den}"
    if isinstance(p, ast.FloatPhase):
        text = repr(float(p.value))
        if text in ("inf", "nan", "-inf") or text.startswith("-"):
            raise ValueError(f"phase literal {text} has no source form")
        return text
    raise TypeError(f"not a phase: {p!r}")


def _quote(path: str) -> str:
    if '"' in path or "\n" in path:
        raise ValueError(f"path {path!r} cannot be written as a string literal")
    return f'"{path}"'


def format_mapspec(m) -> str:
    if isinstance(m, ast.ModExpSpec):
        return f"MODEXP({format_intexpr(m.base)}, {format_intexpr(m.modulus)})"
    if isinstance(m, ast.TableSpec):
        return f"TABLE({_quote(m.path)})"
    raise TypeError(f"not a mapping spec: {m!r}")


def _lines(item, depth: int):
    pad = INDENT * depth
    if isinstance(item, ast.RegDecl):
        yield f"{pad}REG {item.name} {item.width}"
    elif isinstance(item, ast.Ini):
        yield f"{pad}INI {item.reg}"
    elif isinstance(item, ast.Qft):
        yield f"{pad}QFT {item.reg}"
    elif isinstance(item, ast.Rea):
        yield f"{pad}REA {item.reg}"
    elif isinstance(item, ast.Ent):
        yield f"{pad}ENT {item.src}, {item.dst}, {format_mapspec(item.mapping)}"
    elif isinstance(item, ast.Dif):
        yield f"{pad}DIF {item.reg}, {format_intexpr(item.size)}"
    elif isinstance(item, ast.Pha):
        yield f"{pad}PHA {item.reg}, {format_phase(item.phase)}, {format_intexpr(item.index)}"
    elif isinstance(item, ast.Ann):
        yield f"{pad}ANN {_quote(item.path)}"
    elif isinstance(item, ast.Repeat):
        yield f"{pad}REPEAT {format_intexpr(item.count)} {{"
        for stmt in item.body:
            yield from _lines(stmt, depth + 1)
        yield f"{pad}}}"
    else:
        raise TypeError(f"not a program item: {item!r}")


def pretty_print(program: ast.ProgramAst) -> str:
    out = []
    for item in program.items:
        out.extend(_lines(item, 0))
    return "\n".join(out) + "\n"
