"""Virtual machine for a seven-instruction quantum instruction set.

The machine simulates registers exactly as sparse state vectors (INI, QFT,
REA, ENT, DIF, PHA) and runs ANN as classical simulated annealing.
"""

from .anneal import AnnealSchedule, IsingModel, anneal, brute_force_ground, energy
from .lang import elaborate, load_program, parse, pretty_print, tokenize
from .shor import FactorOutcome, extract_factor, infer_order
from .state import JointState, RegisterDecl, apply_on_register, collapse, init_zero, marginal
from .vm import RunConfig, RunReport, ShotRecord, exact_distributions, run_once, run_shots

__version__ = "0.1.0"
