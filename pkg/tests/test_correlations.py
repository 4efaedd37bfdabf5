import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.approximants import H_trunc, lambda_trunc
from shiftedprimes.arith import mobius, squarefree_divisors, totient
from shiftedprimes.characters import primitive_characters, principal_character
from shiftedprimes.correlations import (
    RamanujanSeries,
    char_correlation_gap,
    char_gap_bruteforce,
    character_trend,
    check_congruence_sums,
    class_check,
    class_scale,
    denominator_bound,
    denominator_count,
    fit_constant,
    non_increasing,
    ramanujan_trend,
    sweep_csv,
    triple_divisibility_sum,
    triple_gap_bruteforce,
    triple_truncation_gap,
)
from shiftedprimes.damping import DampingCombination, PhiAtom
from shiftedprimes.periodic import product


@pytest.mark.parametrize("Q", [1, 2, 6, 10, 30, 100])
def test_lambda_in_class(Q):
    c = class_check(lambda_trunc(Q), 2, Q)
    assert c.ok and c.ratio <= 1


@pytest.mark.parametrize("Q", [2, 6, 30])
def test_H_in_class(Q):
    assert class_check(H_trunc(Q), 2, Q)


def test_class_rejects_large_or_nonsquarefree():
    assert not class_check(lambda_trunc(6), 2, 5)
    from shiftedprimes.periodic import FourierSeries

    assert not class_check(FourierSeries({Fraction(1, 4): Fraction(1, 8)}), 2, 10)


def test_product_lands_in_scaled_class():
    f = product(lambda_trunc(6), H_trunc(6))
    assert class_check(f, 9, 36).worst is not None
    s = class_scale(f, 9)
    assert math.isfinite(s) and s > 0
    assert all(lam.denominator <= 36 for lam in f.terms)


def test_ramanujan_series_bound_enforced():
    with pytest.raises(ValueError):
        RamanujanSeries({3: Fraction(1)}, 0)
    with pytest.raises(ValueError):
        RamanujanSeries({4: Fraction(1, 8)}, 2)
    f = RamanujanSeries.von_mangoldt(squarefree_divisors(30))
    for n in range(1, 31):
        assert f.value(n) == sum(Fraction(mobius(q), totient(q)) * _c(q, n) for q in squarefree_divisors(30))


def _c(q, n):
    return sum(mobius(q // d) * d for d in range(1, q + 1) if q % d == 0 and n % d == 0)


def _v_series():
    s = squarefree_divisors(30)
    return [RamanujanSeries.von_mangoldt(s), RamanujanSeries.von_mangoldt(s), RamanujanSeries.divisor_square(s)]


def test_triple_gap_zero_without_truncation():
    assert triple_truncation_gap(_v_series(), (1, 0, -1), (30, 30, 30)).value == 0


@pytest.mark.parametrize("X", [(4, 4, 4), (2, 6, 10), (1, 30, 3)])
def test_triple_gap_against_convolution(X):
    fs = _v_series()
    g = triple_truncation_gap(fs, (1, 0, -1), X)
    assert g.value == pytest.approx(triple_gap_bruteforce(fs, (1, 0, -1), X), abs=1e-12)


def test_triple_gap_distinct_shifts():
    with pytest.raises(ValueError):
        triple_truncation_gap(_v_series(), (1, 1, 0), (4, 4, 4))


def test_ramanujan_trend_non_increasing():
    rows = ramanujan_trend((4, 8, 16))
    assert non_increasing([r["gap"] for r in rows])
    C = rows[0]["fitted_C"]
    assert all(r["gap"] <= C * r["scale"] * (1 + 1e-12) for r in rows)
    assert sweep_csv(rows).splitlines()[0] == "X,gap,scale,frequency,fitted_C"


@pytest.mark.parametrize("R", [1, 2])
def test_char_gap_principal_full_threshold(R):
    # every squarefree divisor of the primorial is <= R only for R <= 2
    assert char_correlation_gap(principal_character(1), R, R, R, R).value < 1e-12


def test_char_gap_principal_truncation_visible():
    g = char_correlation_gap(principal_character(1), 7, 7, 7, 7)
    assert g.value == pytest.approx(char_gap_bruteforce(principal_character(1), 7, 7, 7, 7), abs=1e-9)
    assert g.value > 0


def test_char_gap_rejects_large_threshold():
    with pytest.raises(ValueError):
        char_correlation_gap(principal_character(1), 8, 7, 7, 7)


def test_character_trend():
    rows = character_trend(5, 7, (2, 3, 5, 7))
    assert non_increasing([r["gap"] for r in rows])


@pytest.mark.parametrize("q", [3, 4, 5])
def test_char_gap_matches_bruteforce(q):
    chi = primitive_characters(q)[0]
    g = char_correlation_gap(chi, 2, 2, 2, 3)
    assert g.value == pytest.approx(char_gap_bruteforce(chi, 2, 2, 2, 3), abs=1e-9)


def test_char_gap_with_damping_and_divisor():
    chi = primitive_characters(5)[0]
    D = DampingCombination({PhiAtom(2, 1): 1.0})
    g = char_correlation_gap(chi, 2, 2, 2, 3, damping=D, Q4=2)
    assert g.value == pytest.approx(char_gap_bruteforce(chi, 2, 2, 2, 3, damping=D, Q4=2), abs=1e-9)
    g = char_correlation_gap(chi, 2, 3, 2, 3, damping=D, Q4=1, q_prime=2)
    assert g.value == pytest.approx(char_gap_bruteforce(chi, 2, 3, 2, 3, damping=D, Q4=1, q_prime=2), abs=1e-9)


def test_denominator_examples():
    assert denominator_count(6, 1, 0, 6) == 2 == totient(6)
    assert denominator_bound(6, 1, 6) == 6
    for r in range(1, 8):
        for b in range(r):
            if math.gcd(b, r) == 1 or r == 1:
                for d in range(1, 10):
                    assert denominator_count(1, r, b, d) == (1 if d == r else 0)


def test_denominator_bound_grid():
    sqf = [q for q in range(1, 31) if mobius(q)]
    for q in sqf:
        for r in range(1, 16):
            for b in (x for x in range(r) if math.gcd(x, r) == 1 or r == 1):
                for d in set(range(1, 2)) | {q * r // math.gcd(q, r)} | set(squarefree_divisors(q)):
                    assert denominator_count(q, r, b, d) <= denominator_bound(q, r, d)


@given(st.integers(1, 50).filter(lambda q: mobius(q) != 0), st.integers(1, 50), st.data())
def test_denominator_bound_random(q, r, data):
    b = data.draw(st.sampled_from([x for x in range(r) if math.gcd(x, r) == 1] or [0]))
    counts = {}
    for a in range(q):
        if math.gcd(a, q) == 1:
            d = (Fraction(a, q) + Fraction(b, r)).denominator
            counts[d] = counts.get(d, 0) + 1
    for d, c in counts.items():
        assert denominator_count(q, r, b, d) == c <= denominator_bound(q, r, d)


def test_congruence_sums_bounded():
    cases, worst = check_congruence_sums(q_max=10, r_max=4)
    assert cases > 0 and worst <= 1 + 1e-9


@pytest.mark.parametrize("r,B", [(1, 0), (2, 1), (6, 0)])
def test_triple_divisibility_decreasing(r, B):
    vals = [float(triple_divisibility_sum(X, r, B, cap=60)) for X in (4, 8, 16)]
    assert vals[0] > vals[1] > vals[2] > 0
    C = fit_constant(vals, [r**0.5 * X**-0.5 for X in (4, 8, 16)])
    assert all(v <= C * r**0.5 * X**-0.5 * (1 + 1e-12) for v, X in zip(vals, (4, 8, 16)))


def test_non_increasing_tie_rule():
    assert non_increasing([3, 2, 2, 1])
    assert not non_increasing([3, 2, 2, 2])
    assert not non_increasing([1, 2])
    assert np.isclose(fit_constant([1, 2], [2, 2]), 1)
