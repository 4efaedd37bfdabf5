import cmath
from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.cyclotomic import Cyclo, cyclotomic_poly, degree


def e(x):
    return cmath.exp(2j * cmath.pi * x)


def test_cyclotomic_poly_against_sympy():
    x = sympy.symbols("x")
    for K in range(1, 60):
        ours = cyclotomic_poly(K)
        theirs = sympy.Poly(sympy.cyclotomic_poly(K, x), x).all_coeffs()[::-1]
        assert list(ours) == [int(c) for c in theirs]
        assert degree(K) == sympy.totient(K)


def test_roots_of_unity_sum_to_zero():
    for K in range(2, 40):
        total = Cyclo.rational(0)
        for k in range(K):
            total = total + Cyclo.root(k, K)
        assert total.is_zero()


def test_gauss_sum_mod_5_squared_is_5():
    # quadratic Gauss sum mod 5: (e(1/5) - e(2/5) - e(3/5) + e(4/5))^2 = 5
    g = Cyclo.root(1, 5) - Cyclo.root(2, 5) - Cyclo.root(3, 5) + Cyclo.root(4, 5)
    assert (g * g).as_fraction() == 5
    assert g.is_real() and g.sign() == 1


roots = st.tuples(st.integers(-30, 30), st.sampled_from([1, 2, 3, 4, 5, 6, 8, 10, 12]), st.builds(Fraction, st.integers(-40, 40), st.integers(1, 7)))


@given(st.lists(roots, min_size=1, max_size=5), st.lists(roots, min_size=1, max_size=5))
def test_field_operations_match_complex(a, b):
    def build(rows):
        x = Cyclo.rational(0)
        z = 0j
        for k, K, c in rows:
            x = x + Cyclo.root(k, K, c)
            z += float(c) * e(Fraction(k, K))
        return x, z

    x, zx = build(a)
    y, zy = build(b)
    assert abs(complex(x + y) - (zx + zy)) < 1e-9
    assert abs(complex(x * y) - zx * zy) < 1e-8
    assert abs(complex(x.conj()) - zx.conjugate()) < 1e-9
    assert (x - x).is_zero()
    r = Fraction(a[0][0] % 7 + 1, 3)
    assert (x / r) * r == x


def test_sign_and_rational():
    assert Cyclo.rational(Fraction(-3, 4)).sign() == -1
    assert Cyclo.rational(Fraction(-3, 4)).as_fraction() == Fraction(-3, 4)
    # 2 cos(2 pi / 7) > 0
    c = Cyclo.root(1, 7) + Cyclo.root(6, 7)
    assert c.is_real() and c.sign() == 1 and c.as_fraction() is None
