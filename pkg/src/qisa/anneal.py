"""ANN backend: classical simulated annealing on an Ising model.

This is a classical stand-in for the adiabatic machine's *outcome*: it
searches for the minimum of ``sum_i h_i s_i + sum_(i,j) J_ij s_i s_j`` with
single-flip Metropolis moves under a geometric cooling ladder. No quantum
dynamics are simulated.

All random numbers are drawn up front from a Philox stream keyed by
``(seed, restart)`` and handed to a compiled sweep kernel, so results are
bit-for-bit reproducible and restarts are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np

from .errors import DimensionMismatch, TooLarge
from .rng import philox

BRUTE_FORCE_LIMIT = 20
_SWEEP_CHUNK = 512


@dataclass(frozen=True)
class IsingModel:
    n: int
    h: tuple[float, ...]
    couplings: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an Ising model needs at least one vertex")
        if len(self.h) != self.n:
            raise DimensionMismatch(f"{len(self.h)} fields for {self.n} vertices")
        if not all(math.isfinite(x) for x in self.h):
            raise ValueError("fields must be finite")
        seen = set()
        for i, j, v in self.couplings:
            if not 0 <= i < j < self.n:
                raise ValueError(f"edge ({i}, {j}) must satisfy 0 <= i < j < {self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            if not math.isfinite(v):
                raise ValueError(f"coupling on ({i}, {j}) is not finite")
            seen.add((i, j))

    @classmethod
    def build(cls, h: Sequence[float], couplings: Iterable[tuple[int, int, float]] = ()) -> "IsingModel":
        """Convenience constructor; edges given as ``(j, i)`` are flipped to ``(i, j)``."""
        edges = []
        for i, j, v in couplings:
            i, j = (i, j) if i < j else (j, i)
            edges.append((int(i), int(j), float(v)))
        return cls(len(h), tuple(float(x) for x in h), tuple(sorted(edges)))

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric adjacency as (indptr, neighbours, weights)."""
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, v in self.couplings:
            nbrs[i].append((j, v))
            nbrs[j].append((i, v))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for i, lst in enumerate(nbrs):
            indptr[i + 1] = indptr[i] + len(lst)
        flat = [e for lst in nbrs for e in lst]
        idx = np.array([e[0] for e in flat], dtype=np.int64)
        w = np.array([e[1] for e in flat], dtype=np.float64)
        return indptr, idx, w


@dataclass(frozen=True)
class AnnealSchedule:
    t0: float = 2.0
    t1: float = 0.01
    sweeps: int | None = None  # None means 200 * n
    restarts: int = 8

    def __post_init__(self):
        if not (self.t0 > 0 and self.t1 > 0 and self.t1 < self.t0):
            raise ValueError("temperatures must satisfy 0 < t1 < t0")
        if self.sweeps is not None and self.sweeps < 1:
            raise ValueError("sweeps must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")

    def sweep_count(self, n: int) -> int:
        return self.sweeps if self.sweeps is not None else 200 * n

    def temperatures(self, n: int) -> np.ndarray:
        count = self.sweep_count(n)
        if count == 1:
            return np.array([self.t1])
        return self.t0 * (self.t1 / self.t0) ** (np.arange(count) / (count - 1))


def read_model_file(path) -> IsingModel:
    """Parse ``h <i> <value>`` / ``J <i> <j> <value>`` lines; ``#`` starts a comment."""
    fields: dict[int, float] = {}
    edges: dict[tuple[int, int], float] = {}
    top = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            try:
                if parts[0] == "h" and len(parts) == 3:
                    i = int(parts[1])
                    if i < 0 or i in fields:
                        raise ValueError
                    fields[i] = float(parts[2])
                    top = max(top, i)
                elif parts[0] == "J" and len(parts) == 4:
                    i, j = sorted((int(parts[1]), int(parts[2])))
                    if i < 0 or i == j or (i, j) in edges:
                        raise ValueError
                    edges[(i, j)] = float(parts[3])
                    top = max(top, j)
                else:
                    raise ValueError
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed line {raw.strip()!r}") from None
    if top < 0:
        raise ValueError(f"{path}: model has no vertices")
    h = [fields.get(i, 0.0) for i in range(top + 1)]
    return IsingModel.build(h, [(i, j, v) for (i, j), v in edges.items()])


def energy(model: IsingModel, s: Sequence[int]) -> float:
    """Exact (correctly rounded) energy of a spin configuration."""
    if len(s) != model.n:
        raise DimensionMismatch(f"{len(s)} spins for {model.n} vertices")
    s = [int(x) for x in s]
    if any(x not in (-1, 1) for x in s):
        raise ValueError("spins must be -1 or +1")
    terms = [h * si for h, si in zip(model.h, s)]
    terms += [v * s[i] * s[j] for i, j, v in model.couplings]
    return math.fsum(terms)


def brute_force_ground(model: IsingModel) -> tuple[tuple[int, ...], float]:
    """Exhaustive minimum; ties go to the lexicographically smallest configuration (-1 < +1)."""
    n = model.n
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_LIMIT} spins, got {n}")
    codes = np.arange(1 << n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n - 1, -1, -1, dtype=np.int64)) & 1
    spins = (2 * bits - 1).astype(np.float64)
    e = spins @ np.asarray(model.h, dtype=np.float64)
    for i, j, v in model.couplings:
        e += v * spins[:, i] * spins[:, j]
    # Float summation order may misrank near-ties; settle them with exact sums.
    best = e.min()
    slack = 1e-9 * max(1.0, abs(best))
    candidates = np.flatnonzero(e <= best + slack)
    winner, winner_e = None, math.inf
    for c in candidates:
        config = tuple(int(x) for x in spins[c])
        ce = energy(model, config)
        if ce < winner_e:
            winner, winner_e = config, ce
    return winner, winner_e


@numba.njit(cache=True)
def _delta(h, indptr, nbr, w, spins, i):
    local = h[i]
    for p in range(indptr[i], indptr[i + 1]):
        local += w[p] * spins[nbr[p]]
    return -2.0 * spins[i] * local


@numba.njit(cache=True)
def _sweeps(h, indptr, nbr, w, spins, temps, uniforms, cur_e, best_spins, best_e):
    n = spins.shape[0]
    for t in range(temps.shape[0]):
        beta = 1.0 / temps[t]
        for i in range(n):
            delta = _delta(h, indptr, nbr, w, spins, i)
            if delta <= 0.0 or uniforms[t, i] < math.exp(-delta * beta):
                spins[i] = -spins[i]
                cur_e += delta
                if cur_e < best_e:
                    best_e = cur_e
                    best_spins[:] = spins
    return cur_e, best_e


def flip_delta(model: IsingModel, s: Sequence[int], i: int) -> float:
    """Energy change from flipping spin ``i``, as computed inside the sweep kernel."""
    indptr, nbr, w = model.csr()
    spins = np.asarray(s, dtype=np.float64)
    return float(_delta(np.asarray(model.h, dtype=np.float64), indptr, nbr, w, spins, i))


def _restart(model: IsingModel, schedule: AnnealSchedule, seed: int, restart: int, arrays):
    h, indptr, nbr, w = arrays
    gen = philox(seed, restart)
    spins = gen.integers(0, 2, size=model.n).astype(np.float64) * 2.0 - 1.0
    temps = schedule.temperatures(model.n)
    cur_e = float(spins @ h) + float(sum(v * spins[i] * spins[j] for i, j, v in model.couplings))
    best_spins = spins.copy()
    best_e = cur_e
    for start in range(0, len(temps), _SWEEP_CHUNK):
        chunk = temps[start:start + _SWEEP_CHUNK]
        uniforms = gen.random((len(chunk), model.n))
        cur_e, best_e = _sweeps(h, indptr, nbr, w, spins, chunk, uniforms, cur_e, best_spins, best_e)
    config = tuple(int(x) for x in best_spins)
    return config, energy(model, config)


def anneal(model: IsingModel, schedule: AnnealSchedule | None = None, seed: int = 0) -> tuple[tuple[int, ...], float]:
    """Best configuration over all restarts; the first restart wins energy ties."""
    schedule = schedule or AnnealSchedule()
    indptr, nbr, w = model.csr()
    arrays = (np.asarray(model.h, dtype=np.float64), indptr, nbr, w)
    best: tuple[tuple[int, ...], float] | None = None
    for r in range(schedule.restarts):
        result = _restart(model, schedule, seed, r, arrays)
        if best is None or result[1] < best[1]:
            best = result
    return best


def random_model(n: int, mean_degree: float, rng: np.random.Generator) -> IsingModel:
    """Erdos-Renyi graph with fields and couplings uniform in [-1, 1]."""
    p = min(1.0, mean_degree / max(1, n - 1))
    h = rng.uniform(-1.0, 1.0, size=n)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, float(rng.uniform(-1.0, 1.0))))
    return IsingModel.build(h.tolist(), edges)
