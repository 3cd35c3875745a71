"""The six state-level instructions: INI, QFT, REA, ENT, DIF and PHA.

Every function here is pure. Measurement-like instructions take a uniform
draw in [0, 1) from the caller instead of owning a random stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, MapDomainError, MapRangeError
from .state import (
    JointState,
    RegisterOp,
    apply_on_register,
    collapse,
    marginal,
    replace_coordinate,
)

# Vectorized square-and-multiply stays inside int64 below this modulus.
_VECTOR_MODEXP_LIMIT = 1 << 31


@dataclass(frozen=True)
class ModExp:
    base: int
    modulus: int

    def __post_init__(self):
        if self.base < 1:
            raise ValueError(f"MODEXP base must be positive, got {self.base}")
        if self.modulus < 2:
            raise ValueError(f"MODEXP modulus must be at least 2, got {self.modulus}")

    def image_bound(self) -> int:
        return self.modulus

    def resolve(self, count: int) -> np.ndarray:
        return modexp_table(self.base, self.modulus, count)


@dataclass(frozen=True)
class Table:
    entries: Mapping[int, int] = field(hash=False)

    def image_bound(self) -> int:
        return max(self.entries.values(), default=-1) + 1

    def resolve(self, count: int) -> np.ndarray:
        """Images for ``0..count-1``; ``-1`` marks inputs the table leaves undefined."""
        out = np.full(count, -1, dtype=np.int64)
        for j, v in self.entries.items():
            if 0 <= j < count:
                out[j] = v
        return out


MappingSpec = Union[ModExp, Table]


def modexp_table(base: int, modulus: int, count: int) -> np.ndarray:
    """``base**j % modulus`` for ``j = 0..count-1``."""
    if modulus >= _VECTOR_MODEXP_LIMIT:
        return np.array([pow(base, j, modulus) for j in range(count)], dtype=object)
    exps = np.arange(count, dtype=np.int64)
    result = np.full(count, 1 % modulus, dtype=np.int64)
    b = base % modulus
    while exps.any():
        odd = (exps & 1).astype(bool)
        result[odd] = (result[odd] * b) % modulus
        b = (b * b) % modulus
        exps >>= 1
    return result


def read_table_file(path) -> Table:
    """Parse a ``j,M(j)`` mapping file; ``#`` starts a comment."""
    entries: dict[int, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'j,M(j)'")
            try:
                j, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: entries must be decimal integers") from None
            if j < 0 or v < 0:
                raise ValueError(f"{path}:{lineno}: entries must be non-negative")
            if j in entries:
                raise ValueError(f"{path}:{lineno}: duplicate entry for {j}")
            entries[j] = v
    return Table(entries)


# -- register transforms ----------------------------------------------------


class QftOp(RegisterOp):
    """Forward transform with kernel ``exp(+2 pi i jk/N) / sqrt(N)``, computed by FFT."""

    def __init__(self, dim: int, inverse: bool = False):
        if dim < 1:
            raise ValueError("QFT dimension must be positive")
        self.dim = dim
        self.inverted = inverse

    def apply(self, block):
        scale = math.sqrt(self.dim)
        if self.inverted:
            return np.fft.fft(block, axis=1) / scale
        return np.fft.ifft(block, axis=1) * scale

    def matrix(self):
        return qft_matrix(self.dim, inverse=self.inverted)

    def inverse(self):
        return QftOp(self.dim, inverse=not self.inverted)


class DifOp(RegisterOp):
    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError("DIF needs N >= 2")
        self.dim = dim

    def apply(self, block):
        return (2.0 / self.dim) * block.sum(axis=1, keepdims=True) - block

    def matrix(self):
        return dif_matrix(self.dim)

    def inverse(self):
        return self


class PhaOp(RegisterOp):
    def __init__(self, dim: int, phi: float, n: int):
        if not 0 <= n < dim:
            raise IndexOutOfRange(f"phase index {n} outside 0..{dim - 1}")
        if not math.isfinite(phi):
            raise ValueError("phase angle must be finite")
        self.dim, self.phi, self.n = dim, phi, n

    def apply(self, block):
        out = block.copy()
        out[:, self.n] *= np.exp(1j * self.phi)
        return out

    def matrix(self):
        return pha_matrix(self.dim, self.phi, self.n)

    def inverse(self):
        return PhaOp(self.dim, -self.phi, self.n)


def qft_matrix(n: int, inverse: bool = False) -> np.ndarray:
    sign = -1.0 if inverse else 1.0
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(sign * 2j * np.pi * jk / n) / math.sqrt(n)


def qft_coefficients(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("QFT input must be a non-empty vector")
    return QftOp(a.size).apply(a[None, :])[0]


def dif_matrix(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("DIF needs N >= 2")
    return np.full((n, n), 2.0 / n) - np.eye(n)


def pha_matrix(n: int, phi: float, index: int) -> np.ndarray:
    if not 0 <= index < n:
        raise IndexOutOfRange(f"phase index {index} outside 0..{n - 1}")
    diag = np.ones(n, dtype=np.complex128)
    diag[index] = np.exp(1j * phi)
    return np.diag(diag)


# -- instructions -----------------------------------------------------------


def sample_value(probs: np.ndarray, draw: float) -> int:
    """Inverse-CDF sample over ascending values; zero-probability values are never returned."""
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw}")
    cdf = np.cumsum(probs)
    v = int(np.searchsorted(cdf, draw * cdf[-1], side="right"))
    if v >= len(probs) or probs[v] <= 0.0:
        v = int(np.flatnonzero(probs > 0)[-1])
    return v


def op_rea(state: JointState, reg, draw: float) -> tuple[int, JointState]:
    value = sample_value(marginal(state, reg), draw)
    return value, collapse(state, reg, value)


def measure_and_reset(state: JointState, reg, draw: float) -> tuple[int, JointState]:
    """Measure ``reg`` then permute the observed value onto 0; returns the observed value too."""
    value, state = op_rea(state, reg, draw)
    if value:
        state = replace_coordinate(state, reg, np.zeros(len(state), dtype=np.int64))
    return value, state


def op_ini(state: JointState, reg, draw: float = 0.0) -> JointState:
    return measure_and_reset(state, reg, draw)[1]


def op_qft(state: JointState, reg) -> JointState:
    reg = state.register_index(reg)
    return apply_on_register(state, reg, QftOp(state.registers[reg].dim))


def op_dif(state: JointState, reg, n: int) -> JointState:
    reg = state.register_index(reg)
    dim = state.registers[reg].dim
    if n != dim:
        raise DimensionMismatch(f"DIF size {n} differs from register dimension {dim}")
    return apply_on_register(state, reg, DifOp(n))


def op_pha(state: JointState, reg, phi: float, n: int) -> JointState:
    reg = state.register_index(reg)
    return apply_on_register(state, reg, PhaOp(state.registers[reg].dim, phi, n))


def op_ent(state: JointState, src, dst, mapping: MappingSpec | np.ndarray) -> JointState:
    """Basis permutation ``|j, v> -> |j, (v + M(j)) mod dim(dst)>``."""
    src, dst = state.register_index(src), state.register_index(dst)
    if src == dst:
        raise ValueError("ENT needs two distinct registers")
    src_dim, dst_dim = state.registers[src].dim, state.registers[dst].dim
    if isinstance(mapping, np.ndarray):
        table = mapping.astype(np.int64)
    else:
        if mapping.image_bound() > dst_dim:
            raise MapRangeError(
                f"map images reach {mapping.image_bound() - 1}, register "
                f"{state.registers[dst].name!r} holds values below {dst_dim}"
            )
        table = np.asarray(mapping.resolve(src_dim), dtype=np.int64)
    j = state.coordinates(src)
    if j.size and j.max() >= len(table):
        raise MapDomainError(f"map undefined for reachable input {int(j.max())}")
    images = table[j]
    if (images < 0).any():
        raise MapDomainError(f"map undefined for reachable input {int(j[images < 0][0])}")
    if (images >= dst_dim).any():
        raise MapRangeError(f"map image {int(images.max())} does not fit register of dimension {dst_dim}")
    v = state.coordinates(dst)
    return replace_coordinate(state, dst, (v + images) % dst_dim)
