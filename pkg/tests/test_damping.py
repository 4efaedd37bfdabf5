import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.arith import primes_upto
from shiftedprimes.characters import primitive_characters
from shiftedprimes.damping import (
    GUARD_MODULUS,
    DampingCombination,
    OmegaTable,
    PhiAtom,
    alpha_ladder,
    alpha_tail_bound,
    atom_series,
    build_damping,
    check_character_domination,
    crt_combine,
    crt_split,
    damping_check,
    dominate_character,
    dominate_prime_power,
    omega,
    prime_power_suite,
    quadratic_ladder,
    quadratic_sum,
)
from shiftedprimes.zeros import synthetic_zero_set


def test_atom_unit_is_constant():
    s = atom_series(PhiAtom(1, 0))
    assert list(s.terms) == [Fraction(0)]
    assert all(s.evaluate(n) == 1 for n in range(5))


def test_atom_two_one():
    s = atom_series(PhiAtom(2, 1))
    assert set(s.terms) == {Fraction(1, 8), Fraction(5, 8)}
    assert all(abs(complex(c) - 2 ** (-1 / 6)) < 1e-15 for c in s.terms.values())


@pytest.mark.parametrize("r", range(1, 11))
def test_atom_l1_norm(r):
    for b in (0, 1, r**3 - 1):
        s = atom_series(PhiAtom(r, b))
        assert sum(abs(complex(c)) for c in s.terms.values()) == pytest.approx(r ** (5 / 6), rel=1e-12)


@pytest.mark.parametrize("r,b", [(1, 0), (2, 1), (3, 5), (4, 7), (6, 100)])
def test_atom_samples_match_series(r, b):
    a = PhiAtom(r, b)
    s = atom_series(a)
    vals = a.samples(a.period)
    assert np.allclose(vals, [s.evaluate(n) for n in range(a.period)], atol=1e-12)
    assert np.allclose(vals, [a.value(n) for n in range(a.period)], atol=1e-12)


@given(st.sampled_from([(2, 3), (3, 4), (4, 5), (5, 2), (3, 7)]), st.integers(0, 10**4), st.integers(0, 10**4))
def test_crt_product(moduli, b1, b2):
    q1, q2 = moduli
    a1, a2 = PhiAtom(q1, b1), PhiAtom(q2, b2)
    c = crt_combine(a1, a2)
    L = c.period
    assert np.allclose(a1.samples(L) * a2.samples(L), c.samples(L), atol=1e-9)
    rest, parts = crt_split(c, [q1] if q1 in (2, 3, 5, 7) else [])
    if parts:
        assert crt_combine(rest, parts[q1]) == c


def test_omega_table():
    assert [omega(p) for p in (2, 3, 17, 19, 2**18 - 5)] == [7, 3, 3, 2, 2]
    assert omega(2**18 + 3) == 1
    t = OmegaTable()
    assert t.M == 7 * 3**6 * 2**22993
    assert t.log2_M == pytest.approx(math.log2(7 * 729) + 22993)
    assert t.M_P(20) == 21 and t.M_P(1) == 1


@pytest.mark.parametrize("p", [2, 3, 5, 17, 19, 262139])
def test_alpha_sum_within_omega(p):
    assert alpha_tail_bound(p) <= omega(p)
    assert sum(alpha_ladder(p, 40)) <= omega(p)


def test_combination_invariants():
    with pytest.raises(ValueError):
        DampingCombination({PhiAtom(1, 0): 0.7, PhiAtom(2, 0): 0.6})
    with pytest.raises(ValueError):
        DampingCombination({PhiAtom(1, 0): -0.1})
    with pytest.raises(ValueError):
        DampingCombination({PhiAtom(1, 0): 0.5}, P=[2])
    with pytest.raises(ValueError):
        DampingCombination({PhiAtom(61, 0): 0.5})
    D = DampingCombination({PhiAtom(2, 1): 0.25, PhiAtom(3, 2): 0.5, PhiAtom(1, 0): 0.25})
    assert D.series().is_fourier_positive()
    assert DampingCombination.from_json(D.to_json()).atoms == D.atoms
    assert GUARD_MODULUS % (2**6 * 47) == 0


def test_real_part_closure():
    D = DampingCombination({PhiAtom(5, 3): 0.5, PhiAtom(2, 1): 0.5}).real_part()
    assert D.is_real()
    vals = D.dense_samples()
    assert np.max(np.abs(vals.imag)) <= 1e-12


def test_dense_coefficients_match_fft():
    D = DampingCombination({PhiAtom(6, 11): 0.4, PhiAtom(2, 3): 0.6})
    L = D.period
    assert np.allclose(np.fft.fft(D.dense_samples(L)) / L, D.dense_coefficients(L), atol=1e-12)


def test_gauss_case_mod5():
    for chi in primitive_characters(5):
        res = dominate_prime_power(chi, 0)
        assert res.case == "gauss" and res.atoms == [(1.0, PhiAtom(5, 0))]
        Ft, cert = dominate_character(chi, DampingCombination.unit())
        assert cert.ok and cert.M_P == 3
        assert Ft.atoms == {PhiAtom(5, 0): 1.0}


def test_trivial_case_mod9():
    for chi in primitive_characters(9):
        for a in (0, 1, 4):
            F = DampingCombination({PhiAtom(9, a): 1.0})
            Ft, cert = dominate_character(chi, F)
            assert Ft.atoms == F.atoms
            assert cert.cases[0][3] == "trivial" and cert.ok


def test_quadratic_ladder_mod27():
    for chi in primitive_characters(27):
        res = dominate_prime_power(chi, 2)
        assert res.case in ("quadratic", "linear")
        lad = quadratic_ladder(chi, 2)
        assert lad.ladder_ok
        # the bound holds for every lambda by direct summation too
        from shiftedprimes.damping import u_index

        for lam in range(27):
            S = quadratic_sum(3, 3, 2, chi, lam)
            assert abs(S) <= 3 ** (1 - u_index(3, 3, 2, lad.a1, lam) / 2) + 1e-9
        F = DampingCombination({PhiAtom(9, 0): 1.0})
        Ft, cert = dominate_character(chi, F)
        assert cert.ok


def test_prime_power_engine_all_cases():
    rows = prime_power_suite((5, 9, 27, 8, 16))
    assert all(ok for *_, ok in rows)
    cases = {c for _, _, c, _ in rows}
    assert {"gauss", "trivial"} <= cases


@pytest.mark.parametrize("q", [15, 20, 21])
def test_composite_domination(q):
    for chi in primitive_characters(q)[:3]:
        F = DampingCombination({PhiAtom(1, 0): 0.5, PhiAtom(3, 1): 0.5})
        Ft, cert = dominate_character(chi, F)
        assert cert.ok
        assert cert.M_P == math.prod(omega(p) for p in primes_upto(q) if q % p == 0)
        assert all(a.r % p == 0 for a in Ft.atoms for p in Ft.P)


def test_domination_detects_failure():
    chi = primitive_characters(5)[0]
    F = DampingCombination.unit()
    assert not check_character_domination(chi, F, F, 1.0)


def test_empty_damping_is_one():
    b = build_damping(None)
    assert b.D.atoms == {PhiAtom(1, 0): 1.0}
    assert b.alpha_10 == 1.0


def test_unexceptional_build():
    zs = synthetic_zero_set([(0.5, 2.0, 5, False)])
    b = build_damping(zs, N=1e60, m_max=3, M_eff=10)
    assert not b.exceptional
    assert b.alpha_10 >= 0.75
    assert b.alpha_10 == pytest.approx(1 / (1 + b.mu), rel=1e-12)
    assert b.D.is_real() and b.D.mass <= 1 + 1e-12
    checks = damping_check(b)
    assert checks and all(checks.values())


def test_exceptional_build():
    zs = synthetic_zero_set([(0.98, 0.0, 5, True)])
    b = build_damping(zs, N=1e4, m_max=3, M_eff=10)
    assert b.exceptional and b.alpha_10 >= 0.75
    checks = damping_check(b, js=[0], E_modulus=5)
    assert all(checks.values())


def test_precondition_enforced():
    zs = synthetic_zero_set([(0.98, 2.0, 5, False)])
    with pytest.raises(ValueError):
        build_damping(zs, N=1e4)
    b = build_damping(zs, N=1e4, enforce_precondition=False)
    assert any("precondition" in n for n in b.notes)
