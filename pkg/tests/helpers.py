import numpy as np

from qisa.state import JointState, RegisterDecl


def random_state(rng, widths, density=1.0):
    """Random normalized state; ``density`` thins the support."""
    regs = [RegisterDecl(f"R{i}", w) for i, w in enumerate(widths)]
    size = 1 << sum(widths)
    vec = rng.normal(size=size) + 1j * rng.normal(size=size)
    if density < 1.0:
        vec[rng.random(size) > density] = 0
        if not vec.any():
            vec[0] = 1
    return JointState.from_dense(regs, vec / np.linalg.norm(vec))


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# Random syntax trees that have a source form. Positions are left at their
# defaults since equality ignores them.

from hypothesis import strategies as st  # noqa: E402

from qisa.lang import ast  # noqa: E402
from qisa.lang.lexer import KEYWORDS  # noqa: E402

names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True).filter(lambda s: s not in KEYWORDS)
paths = st.from_regex(r"[a-z0-9_./-]{1,12}", fullmatch=True)
small = st.integers(0, 10 ** 6)

int_exprs = st.recursive(
    st.one_of(st.builds(ast.IntLit, small), st.builds(ast.DimOf, names)),
    lambda inner: st.one_of(
        st.builds(ast.Isqrt, inner),
        st.builds(ast.GroverIters, inner),
        st.builds(ast.BinOp, st.sampled_from("+-*"), inner, inner),
    ),
    max_leaves=6,
)

phases = st.one_of(
    st.builds(ast.PiPhase),
    st.builds(ast.PiFraction, small, small),
    st.builds(ast.FloatPhase, st.floats(0, 1e300, allow_nan=False, allow_infinity=False)),
)

map_specs = st.one_of(st.builds(ast.ModExpSpec, int_exprs, int_exprs), st.builds(ast.TableSpec, paths))

simple_statements = st.one_of(
    st.builds(ast.Ini, names),
    st.builds(ast.Qft, names),
    st.builds(ast.Rea, names),
    st.builds(ast.Ent, names, names, map_specs),
    st.builds(ast.Dif, names, int_exprs),
    st.builds(ast.Pha, names, phases, int_exprs),
    st.builds(ast.Ann, paths),
)

statements = st.recursive(
    simple_statements,
    lambda inner: st.builds(ast.Repeat, int_exprs, st.lists(inner, max_size=4).map(tuple)),
    max_leaves=8,
)

programs = st.lists(
    st.one_of(st.builds(ast.RegDecl, names, st.integers(0, 99)), statements), max_size=12
).map(lambda items: ast.ProgramAst(tuple(items)))
