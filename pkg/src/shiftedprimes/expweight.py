"""Exponential sums twisted by n^(rho-1), quadratic Gauss sums modulo prime
powers, the complex Gamma function and the archimedean weight
w(n) = W(n/Y), W(x) = x^(-1/2) e^(-x)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import fft as sfft
from scipy import integrate

from .arith import factorize, primes_upto, vp

GRID_POINTS = 257
_CHUNK = 1 << 22


# exponents


@dataclass(frozen=True)
class ZetaExponent:
    """rho = beta + i gamma with sigma = 1 - beta."""

    rho: complex

    @classmethod
    def from_sigma(cls, sigma: float, gamma: float = 0.0) -> "ZetaExponent":
        return cls(complex(1 - sigma, gamma))

    @property
    def beta(self) -> float:
        return self.rho.real

    @property
    def gamma(self) -> float:
        return self.rho.imag

    @property
    def sigma(self) -> float:
        return 1 - self.rho.real


def _rho(r) -> complex:
    return r.rho if isinstance(r, ZetaExponent) else complex(r)


def dist_to_int(x: float) -> float:
    return abs(x - round(x))


# twisted exponential sums


def twisted_coefficients(rho, N: int, weights: np.ndarray | None = None) -> np.ndarray:
    """n^(rho-1) (times optional weights) for n = 1..N."""
    rho = _rho(rho)
    n = np.arange(1, N + 1, dtype=float)
    a = np.exp((rho - 1) * np.log(n))
    return a if weights is None else a * weights


def exp_sums(coeffs: np.ndarray, thetas: Sequence[float]) -> np.ndarray:
    """sum_{n=1}^N coeffs[n-1] e(theta n) for each theta, chunked."""
    thetas = np.asarray(thetas, dtype=float)
    N = len(coeffs)
    out = np.zeros(len(thetas), dtype=complex)
    n = np.arange(1, N + 1, dtype=float)
    step = max(1, _CHUNK // max(N, 1))
    for i in range(0, len(thetas), step):
        th = thetas[i : i + step]
        ph = np.outer(th, n) % 1.0
        out[i : i + step] = np.exp(2j * np.pi * ph) @ coeffs
    return out


def exp_sum(rho, theta: float, N: int) -> complex:
    """sum_{n <= N} n^(rho-1) e(theta n)."""
    return complex(exp_sums(twisted_coefficients(rho, N), [theta])[0])


def exp_sum_bounds(rho, theta: float, N: int) -> tuple[float, float, float]:
    """N^beta times 1, (1+|gamma|) N^-1 ||theta||^-1 and |gamma|^-1/2."""
    rho = _rho(rho)
    beta, gamma = rho.real, abs(rho.imag)
    Nb = N**beta
    d = dist_to_int(theta)
    second = Nb * (1 + gamma) / (N * d) if d > 0 else math.inf
    third = Nb / math.sqrt(gamma) if gamma > 0 else math.inf
    return Nb, second, third


def exp_sum_ratio(rhos: Sequence, thetas: Sequence[float], N: int) -> float:
    """max |direct| / min(bounds) over the grid."""
    worst = 0.0
    for rho in rhos:
        vals = exp_sums(twisted_coefficients(rho, N), thetas)
        for th, v in zip(thetas, vals):
            worst = max(worst, abs(v) / min(exp_sum_bounds(rho, th, N)))
    return worst


# quadratic Gauss sums modulo prime powers


def quadratic_sum_exact(p: int, n: int, a1: int, a2: int) -> complex:
    M = p**n
    x = np.arange(M, dtype=np.int64)
    ph = (a1 * x + a2 * ((x * x) % M)) % M
    return complex(np.exp(2j * np.pi * ph / M).sum())


def quadratic_level(p: int, n: int, a1: int, a2: int) -> int:
    """r with min(v_p(a1), v_p(a2)) = n - r, capped to [0, n]."""
    M = p**n
    vs = [n if a % M == 0 else min(vp(a % M, p), n) for a in (a1, a2)]
    return n - min(vs)


def quadratic_bound(p: int, n: int, r: int) -> float:
    b = p ** (n - r / 2)
    return b * math.sqrt(2) if p == 2 and r >= 1 else b


def quadratic_gauss_sum(p: int, n: int, a1: int, a2: int) -> tuple[float, float]:
    """(|sum over x mod p^n of e((a1 x + a2 x^2)/p^n)|, bound)."""
    r = quadratic_level(p, n, a1, a2)
    if r == 0:
        return float(p**n), float(p**n)
    return abs(quadratic_sum_exact(p, n, a1, a2)), quadratic_bound(p, n, r)


def _vp_array(a: np.ndarray, p: int, n: int) -> np.ndarray:
    """v_p of each entry mod p^n, with 0 mapped to n."""
    v = np.zeros(len(a), dtype=np.int64)
    for k in range(1, n + 1):
        v += (a % p**k == 0)
    return v


def quadratic_suite(p: int, n: int, tol: float = 1e-9, block: int = 1 << 21) -> tuple[int, int, float]:
    """All (a1, a2) mod p^n: (pairs checked, violations, worst |sum|/bound).

    For fixed a2 the sums over every a1 come from one FFT of e(a2 x^2/p^n).
    FFT bin k holds a1 = -k; the bound only sees v_p(a1) = v_p(-a1), so the
    bins are compared in place.
    """
    M = p**n
    x = np.arange(M, dtype=np.int32)
    sq = (x.astype(np.int64) ** 2 % M).astype(np.int32)
    v = _vp_array(x.astype(np.int64), p, n)
    violations, worst = 0, 0.0
    roots = np.exp(2j * np.pi * np.arange(M) / M)
    # bound[k][j]: the bound for v_p(a2) = k and a1 in FFT bin j
    levels = n - np.minimum(v[None, :], np.arange(n + 1)[:, None])
    bound = np.array([quadratic_bound(p, n, int(r)) for r in range(n + 1)])[levels]
    inv = 1.0 / bound
    rows = max(1, block // M)
    for lo in range(0, M, rows):
        a2 = x[lo : lo + rows]
        S = np.abs(sfft.fft(roots[np.outer(a2, sq) % M], axis=1, overwrite_x=True))
        rv = v[lo : lo + rows]
        violations += int(np.count_nonzero(S > bound[rv] + tol))
        worst = max(worst, float(np.max(S * inv[rv])))
    return M * M, violations, worst


def quadratic_suite_all(odd_max: int = 2187, two_max: int = 1024) -> tuple[int, int, float]:
    checked = viol = 0
    worst = 0.0
    for p in primes_upto(odd_max):
        cap = two_max if p == 2 else odd_max
        n = 1
        while p**n <= cap:
            c, v, w = quadratic_suite(p, n)
            checked, viol, worst = checked + c, viol + v, max(worst, w)
            n += 1
    return checked, viol, worst


# complex Gamma

_LANCZOS_G = 607 / 128
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def log_gamma(z: complex) -> complex:
    """log Gamma(z) by a 15-term Lanczos sum, reflected for Re z < 1/2."""
    z = complex(z)
    if z.real < 0.5:
        return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - log_gamma(1 - z)
    z -= 1
    s = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        s += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(s)


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def gamma_abs(x: float, y: float) -> float:
    """|Gamma(x + iy)| through the real part of log Gamma."""
    return math.exp(log_gamma(complex(x, y)).real)


def gamma_bound_check(xs: Sequence[float] = (0.25, 0.375, 0.5), y_max: float = 50.0, points: int = 10_000) -> tuple[int, float]:
    """(violations, worst ratio) of |Gamma(x+iy)| <= 7 e^(-pi|y|/2)."""
    ys = np.linspace(-y_max, y_max, points)
    viol, worst = 0, 0.0
    for x in xs:
        for y in ys:
            ratio = gamma_abs(x, y) / (7 * math.exp(-math.pi * abs(y) / 2))
            worst = max(worst, ratio)
            viol += ratio > 1
    return viol, worst


def gamma_cosh_residual(y_max: float = 50.0, points: int = 10_000) -> float:
    """Largest relative error of |Gamma(1/2+iy)|^2 against pi/cosh(pi y)."""
    worst = 0.0
    for y in np.linspace(-y_max, y_max, points):
        lhs = 2 * log_gamma(complex(0.5, y)).real
        rhs = math.log(math.pi) - (math.pi * abs(y) + math.log1p(math.exp(-2 * math.pi * abs(y))) - math.log(2))
        worst = max(worst, abs(math.expm1(lhs - rhs)))
    return worst


# the weight W and its transforms


def W(x):
    """x^(-1/2) e^(-x) for x > 0, else 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-x[pos]) / np.sqrt(x[pos])
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WeightConfig:
    N: int

    def __post_init__(self):
        if self.N < 16:
            raise ValueError("N must be at least 16")

    @property
    def Y(self) -> float:
        return self.N / (2 * math.log(self.N))

    def values(self) -> np.ndarray:
        """w(n) for n = 1..N."""
        return W(np.arange(1, self.N + 1) / self.Y)


def weight(n, cfg: WeightConfig):
    return W(np.asarray(n, dtype=float) / cfg.Y)


def what_fourier(rho, theta: float) -> complex:
    """Fourier transform of x^(rho-1) W(x): Gamma(s) / (1 + 2 pi i theta)^s, s = 1/2 - sigma + i gamma."""
    rho = _rho(rho)
    s = rho - 0.5
    a = complex(1, 2 * math.pi * theta)
    return cmath.exp(log_gamma(s) - s * cmath.log(a))


def W_hat(theta: float) -> complex:
    return what_fourier(1.0, theta)


def compare_suite(
    sigmas: Sequence[float] | None = None,
    gammas: Sequence[float] | None = None,
    thetas: Sequence[float] | None = None,
    constant: float = 10.0,
) -> tuple[int, int, float]:
    """(points, violations, worst ratio) of |T_rho W^(theta)| <= C (1+theta^2)^(sigma/2) Re W^(theta)."""
    sigmas = np.linspace(0, 0.25, 10) if sigmas is None else sigmas
    gammas = np.linspace(-40, 40, 25) if gammas is None else gammas
    thetas = np.linspace(-50, 50, 40) if thetas is None else thetas
    pts = viol = 0
    worst = 0.0
    for th in thetas:
        rw = W_hat(th).real
        for sg in sigmas:
            scale = (1 + th * th) ** (sg / 2) * rw
            for g in gammas:
                ratio = abs(what_fourier(complex(1 - sg, g), th)) / scale
                worst = max(worst, ratio)
                viol += ratio > constant
                pts += 1
    return pts, viol, worst


def real_case_constant(sigmas: Sequence[float] | None = None, thetas: Sequence[float] | None = None) -> float:
    """Least C with Re T_{1-sigma}W^(theta) <= (1 + C sigma)(1+4 pi^2 theta^2)^(sigma/2) Re W^(theta)."""
    sigmas = np.linspace(0.0025, 0.25, 100) if sigmas is None else sigmas
    thetas = np.linspace(-50, 50, 1001) if thetas is None else thetas
    C = 0.0
    for sg in sigmas:
        for th in thetas:
            lhs = what_fourier(1 - sg, th).real
            rhs = (1 + 4 * math.pi**2 * th * th) ** (sg / 2) * W_hat(th).real
            C = max(C, (lhs / rhs - 1) / sg)
    return C


# the smooth split W = W0 + W1


def smooth_step(x):
    """0 for x <= 1, 1 for x >= 2, smooth and monotone in between."""
    x = np.asarray(x, dtype=float)
    t = np.clip(x - 1, 0, 1)

    def f(u):
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = np.exp(-1 / u[pos])
        return out

    a, b = f(t), f(1 - t)
    return a / (a + b)


@dataclass(frozen=True)
class WeightSplit:
    eps: float
    W0: Callable
    W1: Callable
    W1_hat: Callable


def weight_split(eps: float) -> WeightSplit:
    """W0 = W (1 - Psi(x/eps)), W1 = W Psi(x/eps) with Psi the smooth step."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")

    def W1(x):
        return W(x) * smooth_step(np.asarray(x, dtype=float) / eps)

    def W0(x):
        return W(x) * (1 - smooth_step(np.asarray(x, dtype=float) / eps))

    upper = 45.0

    def W1_hat(xi: float) -> complex:
        w = 2 * math.pi * xi
        f = lambda x: float(W1(x))
        pts = [eps, 2 * eps, min(1.0, upper)]
        if w == 0:
            val = sum(integrate.quad(f, a, b, limit=400)[0] for a, b in zip(pts, pts[1:] + [upper]))
            return complex(val, 0)
        re = im = 0.0
        for a, b in zip(pts, pts[1:] + [upper]):
            re += integrate.quad(f, a, b, weight="cos", wvar=w, limit=400)[0]
            im -= integrate.quad(f, a, b, weight="sin", wvar=w, limit=400)[0]
        return complex(re, im)

    return WeightSplit(eps, W0, W1, W1_hat)


def w1_hat_constant(split: WeightSplit, xis: Sequence[float] | None = None) -> float:
    """Least C with |W1^(xi)| <= C min(1, eps^-1/2 |xi|^-1, eps^-3/2 |xi|^-2) on the sample."""
    e = split.eps
    xis = np.geomspace(1e-2, 1e3 / e, 60) if xis is None else xis
    C = 0.0
    for xi in xis:
        env = min(1.0, e**-0.5 / abs(xi), e**-1.5 / xi**2) if xi else 1.0
        C = max(C, abs(split.W1_hat(xi)) / env)
    return C


def w1_hat_l1(split: WeightSplit, points: int = 400) -> tuple[float, float]:
    """(integral of |W1^|, C with integral <= C eps^-1/2 log(1/eps)).

    The tail beyond xi_max uses the integrated |xi|^-2 envelope fitted at xi_max.
    """
    e = split.eps
    xi_max = 50 / e
    xs = np.concatenate([np.linspace(0, 1, 41)[:-1], np.geomspace(1, xi_max, points)])
    vals = np.array([abs(split.W1_hat(x)) for x in xs])
    body = 2 * float(np.trapezoid(vals, xs))
    tail = 2 * vals[-1] * xi_max
    total = body + tail
    return total, total / (e**-0.5 * math.log(1 / e))


# sums against the weight


def weighted_sums(rho, cfg: WeightConfig, etas: Sequence[float]) -> np.ndarray:
    """sum_{n <= N} n^(rho-1) w(n) e(eta n) for each eta."""
    return exp_sums(twisted_coefficients(rho, cfg.N, cfg.values()), etas)


def _grid(lo: float, hi: float, points: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(lo, hi, points)


def sum_integral_residual(rho, cfg: WeightConfig, points: int = GRID_POINTS) -> float:
    """sup over |eta| <= N^(-1/8) of |sum n^(rho-1) w(n) e(eta n) - Y^(rho-1) T_rho W^(-eta Y)|."""
    rho = _rho(rho)
    h = cfg.N ** (-1 / 8)
    etas = _grid(-h, h, points)
    S = weighted_sums(rho, cfg, etas)
    Y = cfg.Y
    I = np.array([cmath.exp((rho - 1) * math.log(Y)) * what_fourier(rho, -eta * Y) for eta in etas])
    return float(np.max(np.abs(S - I)))


def minor_arc_sup(rho, cfg: WeightConfig, points: int = GRID_POINTS) -> float:
    """sup over N^(-1/2) < ||eta|| <= 1/2 of |sum n^(rho-1) w(n) e(eta n)|."""
    lo = cfg.N ** (-0.5)
    etas = np.concatenate([_grid(lo * (1 + 1e-9), 0.5, points), -_grid(lo * (1 + 1e-9), 0.5, points)])
    return float(np.max(np.abs(weighted_sums(rho, cfg, etas))))


def weight_suite(N: int = 100_000, rhos: Sequence = (1.0, complex(0.99, 3.0), complex(0.985, -5.0)), points: int = GRID_POINTS) -> dict:
    """Measured constants for the six listed properties of w at scale N."""
    cfg = WeightConfig(N)
    w = cfg.values()
    n = np.arange(1, N + 1, dtype=float)
    total = float(w.sum())
    out: dict[str, float] = {"N": N, "Y": cfg.Y, "sum_w": total}
    c1 = 0.0
    for rho in rhos:
        s = 1 - _rho(rho).real
        c1 = max(c1, float((n**-s * w).sum()) / N ** (1 - s))
    out["C1_sum_n_sigma_w"] = c1
    out["ratio2_sum_w_over_N_logN"] = total / (N / math.log(N))
    out["C3_minor_arc"] = max(minor_arc_sup(rho, cfg, points) for rho in rhos) / N ** (11 / 12)
    etas = _grid(-0.5, 0.5, 2 * points)
    cos_sums = exp_sums(w, etas).real
    worst4 = worst5 = -math.inf
    for rho in rhos:
        r = _rho(rho)
        s = 1 - r.real
        S = weighted_sums(r, cfg, etas)
        worst4 = max(worst4, float(np.max(np.abs(S) - 11 * N ** (-s / 4) * cos_sums)))
        if r.imag == 0:
            worst5 = max(worst5, float(np.max(S.real - N ** (-s / 4) * cos_sums)))
    out["C4_excess_over_N^(11/12)"] = max(worst4, 0.0) / N ** (11 / 12)
    out["C5_excess_over_N^(11/12)"] = max(worst5, 0.0) / N ** (11 / 12)
    X = 10.0
    split = weight_split(X**-2)
    w0 = split.W0(n / cfg.Y)
    out["C6_w0_mass"] = float(w0.sum()) / (N / X)
    out["split_residual"] = float(np.max(np.abs(split.W0(n / cfg.Y) + split.W1(n / cfg.Y) - w)))
    return out


def weight_trend(Ns: Sequence[int] = (2_000, 8_000, 32_000, 100_000), rho=complex(0.9, 2.0), points: int = GRID_POINTS) -> list[dict]:
    """Relative sum-vs-integral residual and relative minor-arc sup across N."""
    rows = []
    for N in Ns:
        cfg = WeightConfig(N)
        mass = float(cfg.values().sum())
        res = sum_integral_residual(rho, cfg, points)
        sup = minor_arc_sup(rho, cfg, points)
        rows.append(
            {
                "N": N,
                "residual": res,
                "residual_over_N": res / N,
                "C_7_8": res / N ** (7 / 8),
                "minor_sup": sup,
                "minor_over_mass": sup / mass,
                "C_11_12": sup / N ** (11 / 12),
            }
        )
    return rows
