from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.approximants import v_local, w_local
from shiftedprimes.arith import primes_upto
from shiftedprimes.characters import primitive_characters
from shiftedprimes.damping import PhiAtom, atom_series
from shiftedprimes.periodic import (
    FourierSeries,
    dominates,
    equal_on_period,
    from_samples,
    norms,
    product,
    product_all,
    shift,
)


def dft_oracle(values):
    """Coefficients c_k with f(n) = sum_k c_k e(kn/M)."""
    v = np.asarray(values, dtype=complex)
    return np.fft.fft(v) / len(v)


def coeff_vector(f: FourierSeries, M: int) -> np.ndarray:
    return np.array([complex(f.coeff(Fraction(k, M))) for k in range(M)])


def test_indicator_of_3():
    f = from_samples([1, 0, 0])
    assert f.frequencies() == [Fraction(0), Fraction(1, 3), Fraction(2, 3)]
    assert all(f.coeff(lam) == Fraction(1, 3) for lam in f.frequencies())


def test_constant_and_v2():
    c = from_samples([1])
    assert c.frequencies() == [Fraction(0)] and c.coeff(0) == 1
    v2 = from_samples([0, 2])
    assert v2.coeff(0) == 1 and v2.coeff(Fraction(1, 2)) == -1


ints = st.lists(st.integers(-5, 5), min_size=1, max_size=12)


@given(ints)
def test_from_samples_matches_dft(values):
    f = from_samples(values)
    M = len(values)
    assert np.allclose(coeff_vector(f, M), dft_oracle(values), atol=1e-12)
    assert [f.evaluate(n) for n in range(M)] == values


def test_product_of_indicators():
    six = product(FourierSeries.divisibility(2), FourierSeries.divisibility(3))
    assert six.to_dict() == FourierSeries.divisibility(6).to_dict()


@given(ints, ints)
def test_product_pointwise_and_l1(a, b):
    f, g = from_samples(a), from_samples(b)
    fg = product(f, g)
    M = len(a) * len(b)
    for n in range(M):
        assert fg.evaluate(n) == f.evaluate(n) * g.evaluate(n)
    assert fg.wedge_one() <= f.wedge_one() * g.wedge_one() + 1e-12


def test_coprime_sup_multiplicative():
    v2, v3 = v_local(2), v_local(3)
    assert product(v2, v3).wedge_inf() == v2.wedge_inf() * v3.wedge_inf()


@given(ints, st.integers(-20, 20))
def test_shift(values, h):
    f = from_samples(values)
    g = shift(f, h)
    M = len(values)
    assert all(g.evaluate(n) == f.evaluate(n + h) for n in range(M))
    assert abs(float(g.wedge_inf()) - float(f.wedge_inf())) < 1e-12
    assert shift(f, 0).to_dict() == f.to_dict()


def test_shift_example():
    assert shift(FourierSeries.divisibility(2), 1).evaluate(1) == 1


def test_dominates_examples():
    for chi in primitive_characters(5):
        chi_series = FourierSeries.from_function(chi, 5)
        assert dominates(chi_series, FourierSeries.divisibility(5).scale(5**0.5).to_float())
    v = v_local(5)
    f = product_all([shift(v, 1), shift(v, -1), w_local(5)])
    assert dominates(f, f, tol=0)


def test_dominates_reports_witness():
    d = dominates(FourierSeries.constant(2), FourierSeries.constant(1), tol=0)
    assert not d and d.witness == 0 and d.reason == "|g| exceeds f"


@pytest.mark.parametrize("p", primes_upto(100))
def test_vvw_fourier_positive(p):
    v = v_local(p)
    f = product_all([shift(v, 1), shift(v, -1), w_local(p)])
    assert dominates(FourierSeries.zero(), f, tol=0)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 97])
def test_local_norms(p):
    assert norms(v_local(p)) == (1, 2, p, 1)
    wi, wo, supp, avg = norms(w_local(p))
    assert wi == 1 and wo <= 4 and supp == p and avg == 1


@pytest.mark.parametrize("r", range(1, 11))
def test_phi_atom_norms(r):
    f = atom_series(PhiAtom(r, 1))
    assert abs(float(f.wedge_one()) - r ** (5 / 6)) < 1e-9
    assert f.support <= r**3


def test_equal_on_period_and_json():
    f = from_samples([3, 1, 4, 1, 5])
    assert equal_on_period(f, lambda n: [3, 1, 4, 1, 5][n % 5])
    assert FourierSeries.from_json(f.to_json()).to_dict() == f.to_dict()
