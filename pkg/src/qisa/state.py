"""Sparse joint state of several quantum registers.

A basis point is an ordered tuple of register values, one per declared
register. Internally each point is packed into a single integer with the
first register in the most significant bits, so integer order is the
lexicographic order of the tuples and the flattened dense vector is indexed
by the same integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, WidthExceeded, ZeroProbabilityBranch

PRUNE_THRESHOLD = 1e-24
NORM_TOLERANCE = 1e-9
MAX_REGISTER_WIDTH = 24
MAX_TOTAL_WIDTH = 26


@dataclass(frozen=True)
class RegisterDecl:
    name: str
    width: int

    @property
    def dim(self) -> int:
        return 1 << self.width


class RegisterOp:
    """A unitary acting on the coordinate of a single register.

    Subclasses override :meth:`apply` when a structured kernel beats a
    dense matrix product. ``apply`` receives a ``(groups, dim)`` block whose
    rows are the amplitude vectors over the register coordinate.
    """

    dim: int

    def matrix(self) -> np.ndarray:
        raise NotImplementedError

    def apply(self, block: np.ndarray) -> np.ndarray:
        return block @ self.matrix().T

    def inverse(self) -> "RegisterOp":
        return MatrixOp(self.matrix().conj().T, check=False)


class MatrixOp(RegisterOp):
    def __init__(self, matrix, check: bool = True, atol: float = 1e-9):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"transform must be square, got shape {m.shape}")
        if check:
            err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
            if err > atol:
                raise ValueError(f"transform is not unitary (max deviation {err:.3g})")
        m.flags.writeable = False
        self._matrix = m
        self.dim = m.shape[0]

    def matrix(self) -> np.ndarray:
        return self._matrix


def check_registers(
    registers: Sequence[RegisterDecl],
    max_width: int = MAX_REGISTER_WIDTH,
    max_total: int = MAX_TOTAL_WIDTH,
) -> tuple[RegisterDecl, ...]:
    registers = tuple(registers)
    if not registers:
        raise ValueError("at least one register is required")
    names = set()
    for r in registers:
        if r.width < 1 or r.width > max_width:
            raise WidthExceeded(f"register {r.name!r} width {r.width} outside 1..{max_width}")
        if r.name in names:
            raise ValueError(f"duplicate register name {r.name!r}")
        names.add(r.name)
    total = sum(r.width for r in registers)
    if total > max_total:
        raise WidthExceeded(f"total width {total} exceeds {max_total}")
    return registers


class JointState:
    """Immutable sparse amplitude map over basis points.

    Build states with :func:`init_zero`, :meth:`from_amplitudes` or
    :meth:`from_dense`; every operation returns a new instance.
    """

    __slots__ = ("registers", "_index", "_amps", "_shifts")

    def __init__(self, registers, index: np.ndarray, amps: np.ndarray, *, _trusted: bool = False):
        self.registers = tuple(registers)
        shifts, acc = [], 0
        for r in reversed(self.registers):
            shifts.append(acc)
            acc += r.width
        self._shifts = tuple(reversed(shifts))
        if not _trusted:
            index, amps = _finalize(np.asarray(index, dtype=np.int64), np.asarray(amps, dtype=np.complex128))
        index.flags.writeable = False
        amps.flags.writeable = False
        self._index = index
        self._amps = amps

    # construction -------------------------------------------------------

    @classmethod
    def from_amplitudes(cls, registers, amplitudes: Mapping[tuple, complex]) -> "JointState":
        """Build a state from ``{basis tuple: amplitude}``; the result is renormalized."""
        registers = check_registers(registers)
        probe = cls(registers, np.zeros(1, np.int64), np.ones(1, np.complex128), _trusted=True)
        keys = list(amplitudes)
        index = np.array([probe._pack(k) for k in keys], dtype=np.int64)
        amps = np.array([complex(amplitudes[k]) for k in keys], dtype=np.complex128)
        if len(np.unique(index)) != len(index):
            raise ValueError("duplicate basis points")
        return cls(registers, index, amps)

    @classmethod
    def from_dense(cls, registers, vector) -> "JointState":
        registers = check_registers(registers)
        vector = np.asarray(vector, dtype=np.complex128).ravel()
        total = 1 << sum(r.width for r in registers)
        if vector.shape[0] != total:
            raise DimensionMismatch(f"dense vector has {vector.shape[0]} entries, expected {total}")
        index = np.flatnonzero(vector)
        return cls(registers, index.astype(np.int64), vector[index])

    # views --------------------------------------------------------------

    @property
    def index(self) -> np.ndarray:
        """Packed basis indices, ascending."""
        return self._index

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def total_width(self) -> int:
        return sum(r.width for r in self.registers)

    def __len__(self) -> int:
        return len(self._index)

    def register_index(self, reg: int | str) -> int:
        if isinstance(reg, str):
            for i, r in enumerate(self.registers):
                if r.name == reg:
                    return i
            raise KeyError(reg)
        if not 0 <= reg < len(self.registers):
            raise IndexError(f"register index {reg} out of range")
        return reg

    def coordinates(self, reg: int | str) -> np.ndarray:
        reg = self.register_index(reg)
        return (self._index >> self._shifts[reg]) & (self.registers[reg].dim - 1)

    def points(self) -> list[tuple[int, ...]]:
        cols = [self.coordinates(i).tolist() for i in range(len(self.registers))]
        return list(zip(*cols))

    @property
    def amplitudes(self) -> dict[tuple[int, ...], complex]:
        return dict(zip(self.points(), self._amps.tolist()))

    def amplitude(self, point: Sequence[int]) -> complex:
        key = self._pack(point)
        pos = np.searchsorted(self._index, key)
        if pos < len(self._index) and self._index[pos] == key:
            return complex(self._amps[pos])
        return 0j

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self._amps) ** 2))

    def to_dense(self) -> np.ndarray:
        vec = np.zeros(1 << self.total_width, dtype=np.complex128)
        vec[self._index] = self._amps
        return vec

    def allclose(self, other: "JointState", atol: float = 1e-9) -> bool:
        if self.registers != other.registers:
            return False
        return bool(np.allclose(self.to_dense(), other.to_dense(), rtol=0.0, atol=atol))

    def _pack(self, point: Sequence[int]) -> int:
        if len(point) != len(self.registers):
            raise DimensionMismatch(f"basis point {tuple(point)} does not match {len(self.registers)} registers")
        key = 0
        for v, r, s in zip(point, self.registers, self._shifts):
            if not 0 <= int(v) < r.dim:
                raise ValueError(f"value {v} outside register {r.name!r} (dim {r.dim})")
            key |= int(v) << s
        return key

    def _derive(self, index: np.ndarray, amps: np.ndarray, renormalize: bool = True) -> "JointState":
        index, amps = _finalize(index, amps, renormalize)
        return JointState(self.registers, index, amps, _trusted=True)

    def __repr__(self) -> str:
        names = ",".join(r.name for r in self.registers)
        return f"JointState<{names}; {len(self)} points>"


def _finalize(index: np.ndarray, amps: np.ndarray, renormalize: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Prune negligible amplitudes, sort by basis index and renormalize."""
    if not np.all(np.isfinite(amps)):
        raise ValueError("non-finite amplitude")
    keep = (amps.real ** 2 + amps.imag ** 2) >= PRUNE_THRESHOLD
    index, amps = index[keep], amps[keep]
    if len(index) == 0:
        raise ZeroProbabilityBranch("state has no amplitude left")
    order = np.argsort(index, kind="stable")
    index, amps = index[order], amps[order]
    if not renormalize:
        return np.ascontiguousarray(index), np.ascontiguousarray(amps)
    norm = np.sqrt(np.sum(amps.real ** 2 + amps.imag ** 2))
    if norm != 1.0:
        amps = amps / norm
    return np.ascontiguousarray(index), np.ascontiguousarray(amps)


def init_zero(
    registers: Iterable[RegisterDecl],
    max_width: int = MAX_REGISTER_WIDTH,
    max_total: int = MAX_TOTAL_WIDTH,
) -> JointState:
    registers = check_registers(list(registers), max_width, max_total)
    return JointState(registers, np.zeros(1, np.int64), np.ones(1, np.complex128), _trusted=True)


def marginal(state: JointState, reg: int | str) -> np.ndarray:
    reg = state.register_index(reg)
    probs = state.amps.real ** 2 + state.amps.imag ** 2
    coords = state.coordinates(reg)
    # fixed summation order per bin: equal multisets of branch weights give identical sums
    order = np.lexsort((probs, coords))
    return np.bincount(coords[order], weights=probs[order], minlength=state.registers[reg].dim)


def collapse(state: JointState, reg: int | str, value: int) -> JointState:
    reg = state.register_index(reg)
    if not 0 <= value < state.registers[reg].dim:
        raise ZeroProbabilityBranch(f"value {value} outside register {state.registers[reg].name!r}")
    keep = state.coordinates(reg) == value
    if not keep.any():
        raise ZeroProbabilityBranch(
            f"register {state.registers[reg].name!r} has zero probability of value {value}"
        )
    if keep.all():
        return state
    return state._derive(state.index[keep], state.amps[keep])


def apply_on_register(state: JointState, reg: int | str, transform: RegisterOp | np.ndarray) -> JointState:
    """Apply a dim x dim unitary to one register coordinate of every branch.

    Points are grouped by their other coordinates; each group is densified
    over the register coordinate, transformed, then re-sparsified.
    """
    reg = state.register_index(reg)
    if not isinstance(transform, RegisterOp):
        transform = MatrixOp(transform)
    dim = state.registers[reg].dim
    if transform.dim != dim:
        raise DimensionMismatch(
            f"transform of dimension {transform.dim} on register {state.registers[reg].name!r} of dimension {dim}"
        )
    shift = state._shifts[reg]
    coords = (state.index >> shift) & (dim - 1)
    rest = state.index & ~np.int64((dim - 1) << shift)
    groups, inverse = np.unique(rest, return_inverse=True)
    block = np.zeros((len(groups), dim), dtype=np.complex128)
    block[inverse.ravel(), coords] = state.amps
    out = transform.apply(block)
    new_index = groups[:, None] | (np.arange(dim, dtype=np.int64) << shift)[None, :]
    return state._derive(new_index.ravel(), out.ravel())


def replace_coordinate(state: JointState, reg: int | str, values: np.ndarray) -> JointState:
    """Set register ``reg`` of point ``i`` to ``values[i]``.

    The replacement must stay injective on the support; this is how basis
    permutations are expressed.
    """
    reg = state.register_index(reg)
    dim = state.registers[reg].dim
    values = np.asarray(values, dtype=np.int64)
    if values.shape != state.index.shape:
        raise DimensionMismatch("one replacement value per stored point is required")
    if values.size and (values.min() < 0 or values.max() >= dim):
        raise ValueError(f"replacement values outside register {state.registers[reg].name!r}")
    shift = state._shifts[reg]
    new_index = (state.index & ~np.int64((dim - 1) << shift)) | (values << shift)
    if len(np.unique(new_index)) != len(new_index):
        raise ValueError("coordinate replacement is not a permutation of the support")
    # a permutation cannot drift the norm, so amplitudes are carried over bit-for-bit
    return state._derive(new_index, state.amps.copy(), renormalize=False)


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def dump_state(state: JointState) -> list[str]:
    """Text dump, one ``"<v1>,<v2>,...  <re> <im>"`` line per stored point."""
    return [
        ",".join(str(v) for v in point) + f"  {_fmt(a.real)} {_fmt(a.imag)}"
        for point, a in zip(state.points(), state.amps.tolist())
    ]
