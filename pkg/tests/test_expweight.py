import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.expweight import (
    W,
    WeightConfig,
    W_hat,
    ZetaExponent,
    compare_suite,
    dist_to_int,
    exp_sum,
    exp_sum_bounds,
    exp_sum_ratio,
    gamma,
    gamma_bound_check,
    gamma_cosh_residual,
    log_gamma,
    minor_arc_sup,
    quadratic_gauss_sum,
    quadratic_level,
    quadratic_suite,
    real_case_constant,
    sum_integral_residual,
    w1_hat_constant,
    w1_hat_l1,
    weight,
    weight_split,
    what_fourier,
)


def test_exponent_fields():
    z = ZetaExponent.from_sigma(0.1, 3.0)
    assert z.beta == pytest.approx(0.9) and z.gamma == 3.0 and z.sigma == pytest.approx(0.1)


def test_exp_sum_trivial():
    assert exp_sum(1.0, 0.0, 1000) == pytest.approx(1000, abs=1e-9)


def test_exp_sum_geometric():
    N, th = 3000, 1 / 3
    s = exp_sum(1.0, th, N)
    z = cmath.exp(2j * math.pi * th)
    assert s == pytest.approx(z * (1 - z**N) / (1 - z), abs=1e-8)
    assert abs(s) <= 1 / (2 * dist_to_int(th)) + 1


@given(st.floats(0.5, 1.0), st.floats(-30, 30), st.floats(0, 1))
def test_exp_sum_direct_loop(beta, g, th):
    N = 200
    rho = complex(beta, g)
    direct = sum(n ** (rho - 1) * cmath.exp(2j * math.pi * th * n) for n in range(1, N + 1))
    assert exp_sum(rho, th, N) == pytest.approx(direct, abs=1e-9 * N)


def test_exp_sum_bounds_grid():
    thetas = np.linspace(0.001, 0.999, 50)
    assert exp_sum_ratio([1.0, complex(0.9, 5), complex(0.8, 20)], thetas, 10_000) <= 20


def test_bounds_shape():
    b = exp_sum_bounds(1.0, 0.0, 100)
    assert b[0] == 100 and math.isinf(b[1]) and math.isinf(b[2])


def test_quadratic_examples():
    s, b = quadratic_gauss_sum(3, 2, 0, 3)
    assert s == pytest.approx(3 * math.sqrt(3)) and b == pytest.approx(3 * math.sqrt(3))
    s, b = quadratic_gauss_sum(2, 3, 4, 0)
    direct = abs(sum(cmath.exp(2j * math.pi * 4 * x / 8) for x in range(8)))
    assert s == pytest.approx(direct, abs=1e-12)
    assert b == pytest.approx(2 ** (3 - 1 / 2) * math.sqrt(2))
    assert quadratic_gauss_sum(5, 2, 0, 0) == (25.0, 25.0)
    assert quadratic_level(3, 2, 0, 3) == 1


@pytest.mark.parametrize("p,n", [(3, 3), (5, 2), (2, 5), (7, 2)])
def test_quadratic_unit_linear_term(p, n):
    M = p**n
    for a1 in range(1, M):
        if a1 % p == 0:
            continue
        for a2 in range(0, M, max(1, M // 7)):
            s, b = quadratic_gauss_sum(p, n, a1, a2)
            assert s <= b + 1e-9
            assert b <= p ** (n / 2) * (math.sqrt(2) if p == 2 else 1) + 1e-12


@pytest.mark.parametrize("p,n", [(3, 4), (2, 6), (5, 3)])
def test_quadratic_suite_small(p, n):
    checked, bad, worst = quadratic_suite(p, n)
    assert checked == (p**n) ** 2 and bad == 0 and worst <= 1 + 1e-9


def test_log_gamma_against_mpmath():
    for z in [complex(0.25, 3), complex(0.5, -40), complex(0.375, 0.1), complex(2.5, 7), complex(-1.3, 2)]:
        ref = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
        assert abs(cmath.exp(log_gamma(z) - ref) - 1) < 1e-12
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_gamma_bound_and_cosh():
    viol, worst = gamma_bound_check(points=2001)
    assert viol == 0 and worst <= 1
    assert gamma_cosh_residual(points=2001) <= 1e-10


def test_W_and_weight():
    assert W(0.0) == 0 and W(-1.0) == 0
    assert W(1.0) == pytest.approx(math.exp(-1))
    cfg = WeightConfig(1000)
    assert cfg.Y == pytest.approx(1000 / (2 * math.log(1000)))
    assert weight(cfg.Y, cfg) == pytest.approx(math.exp(-1))
    with pytest.raises(ValueError):
        WeightConfig(10)


def test_W_hat_origin():
    assert W_hat(0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


@pytest.mark.parametrize("rho,theta", [(1.0, 0.3), (complex(0.9, 2), -0.7), (complex(0.95, 1), 0.2)])
def test_what_fourier_by_quadrature(rho, theta):
    s = mpmath.mpc(rho.real - 0.5 if isinstance(rho, complex) else rho - 0.5, complex(rho).imag)
    f = lambda x: x ** (s - 1) * mpmath.exp(-x) * mpmath.exp(-2j * mpmath.pi * theta * x)
    # fine subdivision: the integrand oscillates and the result can be 1e-7 of its L1 mass
    pts = [0] + [mpmath.mpf(k) / 4 for k in range(1, 240)] + [mpmath.inf]
    with mpmath.workdps(30):
        ref = complex(mpmath.quad(f, pts))
    assert what_fourier(rho, theta) == pytest.approx(ref, rel=1e-8, abs=1e-15)


@given(st.floats(0.75, 1.0), st.floats(-40, 40), st.floats(-20, 20))
def test_what_fourier_against_mpmath_gamma(beta, g, theta):
    # the x^(s-1) singularity defeats quadrature once |gamma| is large
    s = mpmath.mpc(beta - 0.5, g)
    ref = complex(mpmath.gamma(s) / (1 + 2j * mpmath.pi * theta) ** s)
    assert what_fourier(complex(beta, g), theta) == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_compare_suite():
    pts, viol, worst = compare_suite(np.linspace(0, 0.25, 4), np.linspace(-20, 20, 9), np.linspace(-20, 20, 21))
    assert pts == 4 * 9 * 21 and viol == 0
    assert math.isfinite(real_case_constant(np.linspace(0.01, 0.25, 5), np.linspace(-5, 5, 41)))


def test_weight_split_partition():
    sp = weight_split(0.1)
    xs = np.linspace(1e-4, 5, 1000)
    assert np.max(np.abs(sp.W0(xs) + sp.W1(xs) - W(xs))) <= 1e-12
    assert np.all(sp.W0(xs) >= 0) and np.all(sp.W1(xs) >= 0)
    assert np.all(sp.W0(xs) <= W(xs) + 1e-15)
    assert np.all(sp.W0(xs[xs >= 0.2]) == 0) and np.all(sp.W1(xs[xs <= 0.1]) == 0)
    with pytest.raises(ValueError):
        weight_split(1.5)


def test_weight_split_transform():
    sp = weight_split(0.1)
    pts = [0.1, 0.15, 0.2] + list(np.linspace(0.25, 45, 400))
    ref = complex(mpmath.quad(lambda x: float(sp.W1(float(x))) * mpmath.exp(-2j * mpmath.pi * 2.0 * x), pts))
    assert sp.W1_hat(2.0) == pytest.approx(ref, abs=1e-10)
    assert math.isfinite(w1_hat_constant(sp, np.geomspace(0.1, 500, 15)))


def test_w1_l1_constant():
    total, C = w1_hat_l1(weight_split(0.01), points=120)
    assert total > 0 and math.isfinite(C)


def test_sum_integral_and_minor_arc():
    cfg = WeightConfig(5000)
    r = sum_integral_residual(complex(0.9, 2.0), cfg, points=33)
    assert r <= 5000 ** (7 / 8)
    assert minor_arc_sup(complex(0.9, 2.0), cfg, points=33) <= 5000 ** (11 / 12) * 5
