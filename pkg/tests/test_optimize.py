import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftedprimes.arith import primes_upto
from shiftedprimes.optimize import (
    EXACT_LIMIT,
    ComparisonError,
    DifferenceGraph,
    compare_delta_gamma,
    comparison_csv,
    delta_exact,
    delta_heuristic,
    gamma_lp,
    psi_from_polynomial,
    shifted_primes,
)


def _delta_brute(N):
    S = {p - 1 for p in primes_upto(N)}
    for k in range(N, 0, -1):
        for A in itertools.combinations(range(1, N + 1), k):
            if all(b - a not in S for a, b in itertools.combinations(A, 2)):
                return k
    return 0


def test_graph():
    g = DifferenceGraph.build(10)
    assert g.forbidden == frozenset({1, 2, 4, 6})
    for i in range(10):
        for j in range(10):
            assert (g.adjacency[i] >> j & 1) == (g.adjacency[j] >> i & 1) == (abs(i - j) in g.forbidden)
    assert g.is_independent([1, 4, 9]) and not g.is_independent([1, 2])
    assert shifted_primes(7) == [1, 2, 4, 6]


def test_delta_examples():
    assert delta_exact(2) == (1, [1])
    size, w = delta_exact(10)
    assert size == 3 and DifferenceGraph.build(10).is_independent(w)
    assert delta_exact(5)[0] == 2


@pytest.mark.parametrize("N", range(1, 17))
def test_delta_against_enumeration(N):
    assert delta_exact(N)[0] == _delta_brute(N)


def test_delta_limits():
    with pytest.raises(ValueError):
        delta_exact(EXACT_LIMIT + 1)
    with pytest.raises(ValueError):
        delta_exact(0)


@pytest.mark.parametrize("N", [10, 30, 64])
def test_heuristic_undershoots(N):
    h, w = delta_heuristic(N)
    assert h <= delta_exact(N)[0]
    assert DifferenceGraph.build(N).is_independent(w)


def test_heuristic_large():
    h, w = delta_heuristic(100)
    assert h == len(w) and DifferenceGraph.build(100).is_independent(w)


def test_gamma_two():
    g, T, cert = gamma_lp(2)
    assert g == 0.5 and T.a0 == pytest.approx(0.5)
    assert list(T.shifts) == [1] and T.coeffs[0] == pytest.approx(0.5)
    assert cert.status == "converged"


@pytest.mark.parametrize("N", [3, 4])
def test_gamma_degree_two(N):
    # shifts {1, 2}: the Fejer kernel is optimal and a0 = 1/3
    g, T, cert = gamma_lp(N)
    assert cert.lower - 1e-12 <= 1 / 3 <= cert.upper + 1e-12
    assert g == pytest.approx(1 / 3, abs=1e-7)
    xs = np.arange(10_000) / 10_000
    assert T(xs).min() >= -1e-9
    assert cert.upper - cert.lower <= 1e-6


def test_gamma_monotone():
    # the true value lies in [lower, upper], so compare brackets
    certs = [gamma_lp(N)[2] for N in (2, 4, 6, 10, 20)]
    assert all(b.lower <= a.upper for a, b in zip(certs, certs[1:]))
    assert certs[-1].upper < certs[0].lower


@pytest.mark.parametrize("N", [10, 25, 40])
def test_gamma_certificate(N):
    g, T, cert = gamma_lp(N)
    assert cert.lower <= cert.upper + 1e-12
    assert cert.certified_min >= -1e-9
    assert T.at_zero == pytest.approx(1, abs=1e-12)
    assert cert.duality_gap <= 1e-7
    assert T(np.arange(20_000) / 20_000).min() >= -1e-9
    assert all(b >= a - 1e-9 for a, b in zip(cert.history, cert.history[1:]))


def test_gamma_limits():
    with pytest.raises(ValueError):
        gamma_lp(1)
    with pytest.raises(ValueError):
        gamma_lp(10_001)


def test_psi_from_polynomial():
    _, T, _ = gamma_lp(10)
    psi = psi_from_polynomial(T, 10)
    assert set(np.nonzero(psi)[0] + 1) <= set(shifted_primes(10))


def test_compare():
    c = compare_delta_gamma(10)
    assert c.delta == 3 and 0.3 <= 2 * c.gamma + 1e-9
    c2 = compare_delta_gamma(2)
    assert c2.delta / 2 <= 2 * 0.5 and c2.ok
    rows = [compare_delta_gamma(N) for N in range(2, 21)]
    assert all(r.ok for r in rows)
    text = comparison_csv(rows)
    assert text.splitlines()[0] == "N,delta_exact,gamma_lp,2gamma,margin"
    assert len(text.splitlines()) == 20
    assert issubclass(ComparisonError, AssertionError)


@settings(max_examples=10)
@given(st.integers(2, 30))
def test_delta_witness_property(N):
    size, w = delta_exact(N)
    assert len(w) == size
    S = set(shifted_primes(N))
    assert all(b - a not in S for a, b in itertools.combinations(w, 2))
