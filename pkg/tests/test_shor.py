import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import trial_division_factors
from qisa.errors import ContractError
from qisa.shor import FactorOutcome, convergents, extract_factor, infer_order


def multiplicative_order(x, n):
    return next(r for r in range(1, n + 1) if pow(x, r, n) == 1)


def test_convergents_of_43_over_128():
    assert list(convergents(Fraction(43, 128))) == [
        Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(43, 128),
    ]


@pytest.mark.parametrize("k", [43, 85, 86, 42])
def test_infer_order_near_peaks(k):
    assert infer_order(k, 7, 9, 4) == 3


def test_infer_order_zero_readout():
    assert infer_order(0, 7, 9, 4) is None


def test_infer_order_not_found():
    # 1/128 has denominators 1 and 128, and 4^1 != 1 mod 9
    assert infer_order(64, 7, 9, 4) is None


def test_infer_order_precondition():
    with pytest.raises(ContractError):
        infer_order(128, 7, 9, 4)
    with pytest.raises(ContractError):
        infer_order(-1, 7, 9, 4)


@given(n=st.integers(1, 10), modulus=st.integers(2, 60), data=st.data())
def test_inferred_orders_verify(n, modulus, data):
    base = data.draw(st.integers(1, modulus - 1).filter(lambda b: math.gcd(b, modulus) == 1))
    k = data.draw(st.integers(0, (1 << n) - 1))
    r = infer_order(k, n, modulus, base)
    if r is not None:
        assert pow(base, r, modulus) == 1
        assert r % multiplicative_order(base, modulus) == 0


@pytest.mark.parametrize("modulus, base, r, expected", [
    (15, 7, 4, 3),
    (9, 4, 3, FactorOutcome.ODD_ORDER),
    (21, 2, 6, 7),
    (15, 14, 2, FactorOutcome.TRIVIAL_FACTOR),
])
def test_extract_factor_examples(modulus, base, r, expected):
    assert extract_factor(modulus, base, r) == expected


def test_extract_factor_examples_agree_with_trial_division():
    assert 3 in trial_division_factors(15) and 7 in trial_division_factors(21)


def test_extract_factor_precondition():
    with pytest.raises(ContractError):
        extract_factor(15, 7, 3)
    with pytest.raises(ContractError):
        extract_factor(15, 7, 0)


@given(modulus=st.integers(3, 200), data=st.data())
def test_nontrivial_factors_divide(modulus, data):
    base = data.draw(st.integers(2, modulus - 1).filter(lambda b: math.gcd(b, modulus) == 1))
    r = multiplicative_order(base, modulus)
    out = extract_factor(modulus, base, r)
    if isinstance(out, int):
        assert out in trial_division_factors(modulus)
    elif r % 2:
        assert out is FactorOutcome.ODD_ORDER
