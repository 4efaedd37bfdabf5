import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.arith import divisors, mobius, totient
from shiftedprimes.characters import (
    additive_expansion_residual,
    c_chi,
    enumerate_characters,
    gauss_sum,
    gauss_sum_exact,
    gauss_sum_induced,
    postnikov,
    primitive_characters,
    principal_character,
    verify_postnikov,
)


def e(x):
    return cmath.exp(2j * math.pi * x)


def brute_conductor(chi):
    q = chi.modulus
    for d in divisors(q):
        if all(abs(chi(n) - 1) < 1e-12 for n in range(1, q) if math.gcd(n, q) == 1 and n % d == 1 % d):
            return d


def test_enumeration_examples():
    assert len(enumerate_characters(5)) == 4
    assert len(primitive_characters(5)) == 3
    assert len(enumerate_characters(1)) == 1
    assert sorted(c.conductor for c in enumerate_characters(8)) == [1, 4, 8, 8]


@pytest.mark.parametrize("q", range(1, 41))
def test_group_structure(q):
    chars = enumerate_characters(q)
    assert len(chars) == totient(q)
    units = [n for n in range(q) if math.gcd(n, q) == 1]
    table = np.array([[chi(n) for n in units] for chi in chars])
    # orthogonality of rows
    assert np.allclose(table @ table.conj().T, len(units) * np.eye(len(chars)), atol=1e-9)
    # multiplicativity and periodicity
    for chi in chars[:4]:
        for a in units[:6]:
            for b in units[:6]:
                assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12
                assert abs(chi(a + q) - chi(a)) < 1e-12
        assert all(chi(n) == 0 for n in range(q) if math.gcd(n, q) > 1)
    # conductors from the definition, and the count of primitive characters
    assert all(chi.conductor == brute_conductor(chi) for chi in chars)
    expected = sum(mobius(q // d) * totient(d) for d in divisors(q))
    assert len(primitive_characters(q)) == expected


def test_gauss_sum_examples():
    quad5 = next(c for c in primitive_characters(5) if c.is_real())
    assert abs(gauss_sum(quad5) - math.sqrt(5)) < 1e-12
    quad3 = primitive_characters(3)[0]
    assert abs(gauss_sum(quad3) - 1j * math.sqrt(3)) < 1e-12
    assert abs(complex(gauss_sum_exact(quad3)) - 1j * math.sqrt(3)) < 1e-12


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 12, 16, 25, 27, 49])
def test_gauss_sum_dual_route(q):
    for chi in primitive_characters(q):
        direct = sum(chi(n) * e(Fraction(n, q)) for n in range(q))
        assert abs(gauss_sum(chi) - direct) < 1e-9
        assert abs(abs(direct) ** 2 - q) < 1e-9
        assert abs(complex(gauss_sum_exact(chi)) - direct) < 1e-9


@pytest.mark.parametrize("q,r", [(1, 6), (3, 12), (4, 24), (5, 30), (5, 50), (7, 14), (8, 40), (9, 36)])
def test_induced_gauss_sum(q, r):
    for chi in primitive_characters(q):
        psi = chi.induce(r)
        direct = sum(psi(n) * e(Fraction(n, r)) for n in range(r))
        assert abs(gauss_sum_induced(chi, r) - direct) < 1e-9


def test_c_chi_principal_and_vanishing():
    one = principal_character(1)
    for r in range(1, 40):
        assert abs(c_chi(one, 1, r) - mobius(r) / totient(r)) < 1e-12
    chi5 = primitive_characters(5)[0]
    for r in (1, 2, 3, 4, 6, 7, 12):
        assert c_chi(chi5, 1, r) == 0


@pytest.mark.parametrize("r", [1, 2, 6, 8, 12, 30])
def test_additive_expansion_direct(r):
    chars = [chi for q in divisors(r) for chi in primitive_characters(q)]
    for b in range(r):
        if math.gcd(b, r) != 1:
            continue
        for n in range(1, 2 * r + 1):
            rhs = sum(c_chi(chi, b, r) * chi(n) for chi in chars) if math.gcd(n, r) == 1 else 0
            lhs = e(Fraction(-b * n, r)) if math.gcd(n, r) == 1 else 0
            assert abs(lhs - rhs) < 1e-9
    assert additive_expansion_residual(r) < 1e-9


def test_postnikov_examples():
    chi = next(c for c in primitive_characters(9) if c.phase(2) == Fraction(1, 6))
    f = postnikov(chi, 1)
    assert f.coeffs == (1,) and f.modulus == 3
    assert postnikov(principal_character(9), 1).coeffs == (0,)
    for chi in primitive_characters(16):
        f = postnikov(chi, 2)
        assert f.degree <= 2
        for x in range(4):
            assert chi.phase(1 + 4 * x) == Fraction(f(x), 4) % 1


def test_postnikov_rejects_two():
    with pytest.raises(ValueError):
        postnikov(primitive_characters(8)[0], 1)


@given(st.sampled_from([(3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (2, 5), (2, 6), (11, 2)]), st.data())
def test_postnikov_property(pn, data):
    p, n = pn
    chi = data.draw(st.sampled_from(primitive_characters(p**n)))
    m = data.draw(st.integers(2 if p == 2 else 1, n))
    f = postnikov(chi, m)
    assert verify_postnikov(chi, f)
    # independent check through complex values
    for x in range(0, p ** (n - m)):
        assert abs(chi(1 + p**m * x) - e(Fraction(f(x), p ** (n - m)))) < 1e-9
