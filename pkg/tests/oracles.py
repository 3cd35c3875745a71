"""Independent reference computations used as test oracles.

Nothing here calls the package's kernels: transforms are built as explicit
Kronecker products and sums are written out term by term.
"""

import cmath
import math

import numpy as np


def dft_by_sum(a):
    n = len(a)
    return np.array(
        [sum(a[j] * cmath.exp(2j * math.pi * j * k / n) for j in range(n)) / math.sqrt(n) for k in range(n)]
    )


def full_operator(widths, reg, u):
    """Kronecker embedding of ``u`` on register ``reg`` (first register most significant)."""
    op = np.eye(1)
    for i, w in enumerate(widths):
        op = np.kron(op, u if i == reg else np.eye(1 << w))
    return op


def dense_apply(vector, widths, reg, u):
    return full_operator(widths, reg, u) @ vector


def dense_marginal(vector, widths, reg):
    shape = [1 << w for w in widths]
    p = np.abs(vector.reshape(shape)) ** 2
    axes = tuple(i for i in range(len(widths)) if i != reg)
    return p.sum(axis=axes)


def shor_residue_distribution(c, count, n=7, period=3):
    """P(k) after QFT of the uniform superposition over {period*m + c}, by direct summation."""
    q = 1 << n
    return np.array([
        abs(sum(cmath.exp(2j * math.pi * k * (period * m + c) / q) for m in range(count))) ** 2 / (count * q)
        for k in range(q)
    ])


def shor_exact_distribution():
    """Distribution of the final R1 readout for N=9, x=4, 7 qubits, weighted over R2 outcomes."""
    counts = {c: len(range(c, 128, 3)) for c in range(3)}  # 43, 43, 42
    return sum(shor_residue_distribution(c, counts[c]) * counts[c] / 128 for c in range(3))


def grover_recursion(n_items, rounds):
    """Marked probability via the two-amplitude recursion (marked a, each unmarked b)."""
    a = b = 1 / math.sqrt(n_items)
    for _ in range(rounds):
        a = -a  # phase flip on the marked item
        mean = (a + (n_items - 1) * b) / n_items
        a, b = 2 * mean - a, 2 * mean - b
    return a * a


def trial_division_factors(n):
    return [d for d in range(2, n) if n % d == 0]
