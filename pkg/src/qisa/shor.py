"""Classical post-processing for order finding: order inference and factor extraction."""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterator

from .errors import ContractError


class FactorOutcome(enum.Enum):
    ODD_ORDER = "odd order"
    TRIVIAL_FACTOR = "trivial factor"


def convergents(x: Fraction) -> Iterator[Fraction]:
    """Continued-fraction convergents of a non-negative rational, in order."""
    h_prev, h = 1, 0
    k_prev, k = 0, 1
    num, den = x.numerator, x.denominator
    while den:
        a, rem = divmod(num, den)
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        yield Fraction(h_prev, k_prev)
        num, den = den, rem


def infer_order(k: int, n: int, modulus: int, base: int) -> int | None:
    """Recover the multiplicative order of ``base`` mod ``modulus`` from a readout ``k`` of an n-qubit register.

    Candidates are the convergent denominators of ``k / 2**n`` not exceeding
    the modulus, plus ``round(2**n / k)``. The smallest candidate ``r`` with
    ``base**r % modulus == 1`` is returned, or ``None`` when no candidate
    verifies. A readout of 0 carries no information and always gives ``None``.
    """
    q = 1 << n
    if not 0 <= k < q:
        raise ContractError(f"readout {k} outside 0..{q - 1}")
    if k == 0:
        return None
    candidates = {c.denominator for c in convergents(Fraction(k, q)) if c.denominator <= modulus}
    candidates.add(round(q / k))
    for r in sorted(candidates):
        if r >= 1 and pow(base, r, modulus) == 1:
            return r
    return None


def extract_factor(modulus: int, base: int, r: int) -> int | FactorOutcome:
    """A nontrivial factor from ``gcd(base**(r/2) -/+ 1, modulus)``."""
    if r < 1 or pow(base, r, modulus) != 1:
        raise ContractError(f"{base}^{r} is not congruent to 1 mod {modulus}")
    if r % 2:
        return FactorOutcome.ODD_ORDER
    half = pow(base, r // 2, modulus)
    for g in (math.gcd(half - 1, modulus), math.gcd(half + 1, modulus)):
        if 1 < g < modulus:
            return g
    return FactorOutcome.TRIVIAL_FACTOR
