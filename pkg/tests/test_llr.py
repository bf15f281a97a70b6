import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teq.core.errors import TeqError
from teq.core.llr import (
    LLR_MAX,
    as_llrs,
    hard_decide,
    sign,
    soft_xor,
    soft_xor_approx,
    soft_xor_exact,
    soft_xor_fold,
)

llrs = st.floats(min_value=-LLR_MAX, max_value=LLR_MAX, allow_nan=False)
nonzero_llrs = llrs.filter(lambda v: v != 0.0)


@pytest.mark.parametrize("x, expected", [(-3.2, -1), (0.0, 1), (7.0, 1)])
def test_sign_maps_zero_to_plus_one(x, expected):
    assert sign(x) == expected


@pytest.mark.parametrize("llr, bit", [(3.0, 0), (-1.0, 1), (0.0, 0)])
def test_hard_decide_convention(llr, bit):
    assert hard_decide(llr) == bit


def test_hard_decide_vectorised():
    out = hard_decide(np.array([1.0, -2.0, 0.0, -0.1]))
    assert out.dtype == np.uint8
    assert out.tolist() == [0, 1, 0, 1]


def test_as_llrs_clamps_and_rejects_nan():
    assert as_llrs([1e6, -np.inf, 2.5]).tolist() == [LLR_MAX, -LLR_MAX, 2.5]
    with pytest.raises(TeqError):
        as_llrs([0.0, np.nan])


def test_soft_xor_approx_examples():
    assert soft_xor_approx(-2.0, 5.0) == -2.0
    assert soft_xor_approx(0.0, -7.5) == 0.0


def test_fold_of_worked_example_is_exact():
    assert soft_xor_fold([-114.6471, -166.5584, -43.2565]) == -43.2565


def test_soft_xor_exact_examples():
    assert soft_xor_exact(0.0, 9.9) == 0.0
    # closed form 2 atanh(tanh(1)^2)
    assert soft_xor_exact(2.0, 2.0) == pytest.approx(2.0 * math.atanh(math.tanh(1.0) ** 2), abs=1e-12)
    assert soft_xor_exact(2.0, 2.0) == pytest.approx(1.3250, abs=1e-4)
    assert soft_xor_exact(-50.0, 3.0) == pytest.approx(-3.0, abs=1e-9)


def test_soft_xor_exact_forms_agree_at_switch_point():
    below = soft_xor_exact(np.nextafter(1.0, 0.0), 4.0)
    above = soft_xor_exact(1.0, 4.0)
    assert below == pytest.approx(above, abs=1e-9)


def test_soft_xor_mode_toggle():
    assert soft_xor(1.5, -0.7) == soft_xor_approx(1.5, -0.7)
    assert soft_xor(1.5, -0.7, mode="exact") == soft_xor_exact(1.5, -0.7)


def test_fold_needs_terms():
    with pytest.raises(TeqError):
        soft_xor_fold([])
    assert soft_xor_fold([4.0]) == 4.0


@given(llrs, llrs)
def test_soft_xor_is_commutative(v1, v2):
    assert soft_xor_approx(v1, v2) == soft_xor_approx(v2, v1)
    assert soft_xor_exact(v1, v2) == pytest.approx(soft_xor_exact(v2, v1), abs=1e-12)


@given(nonzero_llrs, nonzero_llrs)
def test_sign_law_and_hard_homomorphism(v1, v2):
    out = soft_xor_approx(v1, v2)
    assert sign(out) == sign(v1) * sign(v2)
    assert hard_decide(out) == hard_decide(v1) ^ hard_decide(v2)


@given(llrs)
def test_uncertain_bit_is_neutral(v):
    assert soft_xor_approx(v, 0.0) == 0.0
    assert soft_xor_exact(v, 0.0) == 0.0


@given(nonzero_llrs, nonzero_llrs)
def test_min_sum_overestimates_by_at_most_ln2(v1, v2):
    approx = soft_xor_approx(v1, v2)
    exact = soft_xor_exact(v1, v2)
    if exact != 0.0:
        assert sign(approx) == sign(exact)
    gap = abs(approx) - abs(exact)
    assert -1e-12 <= gap <= math.log(2.0) + 1e-12


@given(llrs, llrs)
def test_magnitude_never_exceeds_weaker_input(v1, v2):
    bound = min(abs(v1), abs(v2))
    assert abs(soft_xor_approx(v1, v2)) <= bound
    assert abs(soft_xor_exact(v1, v2)) <= bound
