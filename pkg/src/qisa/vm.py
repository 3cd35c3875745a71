"""Shot-by-shot execution of elaborated programs.

Each shot starts from the zero state and draws every random number (INI and
REA samples, ANN seeds) from its own Philox stream keyed by
``(seed, shot index)``. Because a shot's state is fully determined by the
measurement outcomes seen so far, states are memoized on that outcome path:
later shots that take an already-visited branch reuse the stored state
instead of recomputing it. The draws consumed are identical either way.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .anneal import AnnealSchedule, anneal
from .errors import ExecutionError, TooLarge
from .isa import measure_and_reset, op_dif, op_ent, op_pha, op_qft, sample_value
from .lang.elaborate import (
    AnnInstr,
    DifInstr,
    ElaboratedProgram,
    EntInstr,
    IniInstr,
    PhaInstr,
    QftInstr,
    ReaInstr,
)
from .rng import PRNG_ID, check_seed, philox
from .state import JointState, collapse, dump_state, init_zero, marginal

DEFAULT_CACHE_LIMIT = 4096


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    shots: int = 1
    trace: bool = False
    dump_state: bool = False
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)

    def __post_init__(self):
        check_seed(self.seed)
        if self.shots < 1:
            raise ValueError("shots must be at least 1")


@dataclass(frozen=True)
class Readout:
    instruction: int
    register: str
    value: int


@dataclass(frozen=True)
class AnnealOutcome:
    instruction: int
    spins: tuple[int, ...]
    energy: float


@dataclass(frozen=True)
class ShotRecord:
    events: tuple  # Readout | AnnealOutcome, in execution order
    final_state: Optional[JointState] = field(default=None, compare=False, repr=False)

    @property
    def readouts(self) -> list[Readout]:
        return [e for e in self.events if isinstance(e, Readout)]

    def to_json(self) -> list[dict]:
        out = []
        for e in self.events:
            if isinstance(e, Readout):
                out.append({"instruction": e.instruction, "register": e.register, "value": e.value})
            else:
                out.append({"instruction": e.instruction, "energy": e.energy, "spins": list(e.spins)})
        return out


@dataclass
class RunReport:
    seed: int
    shots: int
    histograms: dict[str, dict[int, int]]
    records: Optional[list[ShotRecord]] = None
    state_dump: Optional[list[str]] = None
    prng: str = PRNG_ID

    def to_dict(self) -> dict:
        doc = {
            "prng": self.prng,
            "seed": self.seed,
            "shots": self.shots,
            "histograms": {
                reg: {str(v): c for v, c in sorted(hist.items())} for reg, hist in self.histograms.items()
            },
        }
        if self.records is not None:
            doc["records"] = [r.to_json() for r in self.records]
        if self.state_dump is not None:
            doc["state_dump"] = list(self.state_dump)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _apply(state: JointState, instr) -> JointState:
    if isinstance(instr, QftInstr):
        return op_qft(state, instr.reg)
    if isinstance(instr, EntInstr):
        return op_ent(state, instr.src, instr.dst, instr.table)
    if isinstance(instr, DifInstr):
        return op_dif(state, instr.reg, instr.n)
    if isinstance(instr, PhaInstr):
        return op_pha(state, instr.reg, instr.phi, instr.n)
    raise TypeError(f"not a deterministic instruction: {instr!r}")


def _is_node(instr) -> bool:
    return isinstance(instr, (IniInstr, ReaInstr, AnnInstr))


class Machine:
    """Runs shots of one program, sharing memoized states between them."""

    def __init__(self, program: ElaboratedProgram, schedule: AnnealSchedule | None = None,
                 cache_limit: int = DEFAULT_CACHE_LIMIT):
        self.program = program
        self.schedule = schedule or AnnealSchedule()
        self.cache_limit = cache_limit
        instrs = program.instructions
        self._nodes = [i for i, ins in enumerate(instrs) if _is_node(ins)] + [len(instrs)]
        self._cache: dict[tuple, tuple[JointState, Optional[np.ndarray]]] = {}

    def _initial(self) -> Optional[JointState]:
        return init_zero(self.program.registers) if self.program.registers else None

    def _advance(self, state, start: int, stop: int):
        for i in range(start, stop):
            try:
                state = _apply(state, self.program.instructions[i])
            except Exception as exc:
                raise ExecutionError(i, exc) from exc
        return state

    def _node(self, key, compute):
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        state = compute()
        instr = self.program.instructions[key[0]] if key[0] < len(self.program.instructions) else None
        probs = marginal(state, instr.reg) if isinstance(instr, (IniInstr, ReaInstr)) else None
        entry = (state, probs)
        if len(self._cache) < self.cache_limit:
            self._cache[key] = entry
        return entry

    def run(self, seed: int, shot: int = 0) -> ShotRecord:
        gen = philox(seed, shot)
        instrs = self.program.instructions
        path: tuple[int, ...] = ()
        events = []
        pending = self._initial
        prev_end = 0
        state = None
        for node in self._nodes:
            start = prev_end
            key = (node, path)
            state, probs = self._node(key, lambda p=pending, s=start, n=node: self._advance(p(), s, n))
            if node == len(instrs):
                break
            instr = instrs[node]
            if isinstance(instr, AnnInstr):
                ann_seed = int(gen.integers(0, 2 ** 63))
                spins, e = anneal(instr.model, self.schedule, ann_seed)
                events.append(AnnealOutcome(node, spins, e))
                pending = (lambda s=state: s)
            else:
                draw = float(gen.random())
                value = sample_value(probs, draw)
                if isinstance(instr, ReaInstr):
                    events.append(Readout(node, self.program.registers[instr.reg].name, value))
                pending = (lambda s=state, ins=instr, v=value, d=draw: self._settle(s, ins, v, d))
                path = path + (value,)
            prev_end = node + 1
        return ShotRecord(tuple(events), state)

    def _settle(self, state, instr, value, draw):
        if isinstance(instr, IniInstr):
            v, out = measure_and_reset(state, instr.reg, draw)
            assert v == value
            return out
        return collapse(state, instr.reg, value)


def run_once(program: ElaboratedProgram, seed: int = 0, shot: int = 0,
             schedule: AnnealSchedule | None = None) -> ShotRecord:
    """Execute one shot; identical ``(seed, shot)`` give identical records."""
    return Machine(program, schedule, cache_limit=0).run(seed, shot)


def run_shots(program: ElaboratedProgram, config: RunConfig | None = None) -> RunReport:
    config = config or RunConfig()
    machine = Machine(program, config.schedule)
    records = [machine.run(config.seed, i) for i in range(config.shots)]
    read_regs = [r.name for r in program.registers]
    counts: dict[str, Counter] = {}
    for rec in records:
        last: dict[str, int] = {}
        for ev in rec.readouts:
            last[ev.register] = ev.value
        for reg, v in last.items():
            counts.setdefault(reg, Counter())[v] += 1
    histograms = {reg: dict(counts[reg]) for reg in read_regs if reg in counts}
    dump = None
    if config.shots == 1 and (config.dump_state or config.trace) and records[0].final_state is not None:
        dump = dump_state(records[0].final_state)
    return RunReport(
        seed=config.seed,
        shots=config.shots,
        histograms=histograms,
        records=records if config.trace else None,
        state_dump=dump,
    )


def exact_distributions(program: ElaboratedProgram, max_branches: int = 4096) -> dict[int, np.ndarray]:
    """Exact outcome distribution of every INI/REA instruction, without sampling.

    Walks the full measurement outcome tree with branch weights, so the
    distribution of a later readout is marginalized over earlier collapses.
    Keys are instruction indices; values are probability vectors over the
    register's values.
    """
    instrs = program.instructions
    out: dict[int, np.ndarray] = {}
    leaves = 0

    def walk(state, start, weight):
        nonlocal leaves
        for i in range(start, len(instrs)):
            instr = instrs[i]
            if isinstance(instr, AnnInstr):
                continue
            if isinstance(instr, (IniInstr, ReaInstr)):
                probs = marginal(state, instr.reg)
                acc = out.setdefault(i, np.zeros(len(probs)))
                acc += weight * probs
                support = np.flatnonzero(probs > 0)
                leaves += len(support) - 1
                if leaves > max_branches:
                    raise TooLarge(f"outcome tree exceeds {max_branches} branches")
                for v in support:
                    branch = collapse(state, instr.reg, int(v))
                    if isinstance(instr, IniInstr) and v:
                        _, branch = measure_and_reset(branch, instr.reg, 0.0)
                    walk(branch, i + 1, weight * probs[v])
                return
            try:
                state = _apply(state, instr)
            except Exception as exc:
                raise ExecutionError(i, exc) from exc

    if program.registers:
        walk(init_zero(program.registers), 0, 1.0)
    return out


def final_readout(program: ElaboratedProgram) -> int:
    """Index of the last REA instruction."""
    for i in range(len(program.instructions) - 1, -1, -1):
        if isinstance(program.instructions[i], ReaInstr):
            return i
    raise ValueError("program has no REA instruction")


def total_variation(histogram: dict[int, int], probs: np.ndarray) -> float:
    shots = sum(histogram.values())
    emp = np.zeros(len(probs))
    for v, c in histogram.items():
        emp[v] = c / shots
    return 0.5 * float(np.abs(emp - probs).sum())
