"""Triple correlations of Ramanujan series, their truncation gaps, the
character-correlation gap, and the counting bounds behind them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import (
    divisors,
    lcm,
    mobius,
    num_divisors,
    primorial,
    ramanujan_sum,
    squarefree_divisors,
    totient,
)
from .approximants import (
    H_complete_value,
    eta,
    lambda_complete_value,
    lambda_weight,
    _c_chi_row,
)
from .characters import DirichletCharacter, gauss_sum
from .periodic import FourierSeries, product

PERIOD_GUARD = 2**24


# the class C_B(X)


@dataclass(frozen=True)
class ClassCheck:
    ok: bool
    worst: Fraction | None
    ratio: float

    def __bool__(self) -> bool:
        return self.ok


def class_check(f: FourierSeries, B: float, X: int) -> ClassCheck:
    """Frequencies with squarefree denominators q <= X and |f^| <= tau(q)^B / q.

    ratio is the largest |f^(a/q)| q / tau(q)^B seen (<= 1 inside the class).
    """
    worst, ratio, ok = None, 0.0, True
    for lam, c in f.terms.items():
        q = lam.denominator
        if q > X or mobius(q) == 0:
            return ClassCheck(False, lam, math.inf)
        r = abs(complex(c)) * q / num_divisors(q) ** B
        if r > ratio:
            ratio, worst = r, lam
        if r > 1 + 1e-12:
            ok = False
    return ClassCheck(ok, worst, ratio)


def class_scale(f: FourierSeries, B: float) -> float:
    """Least s with f in s * C_B(support): max |f^(a/q)| q / tau(q)^B over squarefree q."""
    s = 0.0
    for lam, c in f.terms.items():
        q = lam.denominator
        if mobius(q) == 0:
            return math.inf
        s = max(s, abs(complex(c)) * q / num_divisors(q) ** B)
    return s


# Ramanujan series


class RamanujanSeries:
    """f(n) = sum_q alpha(q) c_q(n) with alpha on squarefree q, |alpha(q)| <= tau(q)^B / q."""

    def __init__(self, alpha: dict[int, Fraction], B: float):
        clean = {}
        for q, a in alpha.items():
            a = Fraction(a)
            if not a:
                continue
            if q < 1 or mobius(q) == 0:
                raise ValueError(f"coefficient at non-squarefree q={q}")
            if abs(a) > Fraction(num_divisors(q)) ** int(B) / q if float(B).is_integer() else abs(float(a)) > num_divisors(q) ** B / q:
                raise ValueError(f"|alpha({q})| = {a} exceeds tau(q)^B/q with B={B}")
            clean[q] = a
        self.alpha = dict(sorted(clean.items()))
        self.B = B

    @classmethod
    def von_mangoldt(cls, support: Sequence[int]) -> "RamanujanSeries":
        return cls({q: lambda_weight(q) for q in support if mobius(q)}, 2)

    @classmethod
    def divisor_square(cls, support: Sequence[int]) -> "RamanujanSeries":
        return cls({q: eta(q) for q in support if mobius(q)}, 2)

    def truncate(self, X: float) -> "RamanujanSeries":
        return RamanujanSeries({q: a for q, a in self.alpha.items() if q <= X}, self.B)

    @property
    def period(self) -> int:
        return lcm(*self.alpha) if self.alpha else 1

    @property
    def denominator(self) -> int:
        return lcm(*(a.denominator for a in self.alpha.values())) if self.alpha else 1

    def numerators(self, ns: np.ndarray, den: int) -> np.ndarray:
        """den * f(n) as exact integers (object array)."""
        ns = np.asarray(ns, dtype=np.int64)
        out = np.zeros(len(ns), dtype=object)
        for q, a in self.alpha.items():
            scale = a * den
            assert scale.denominator == 1
            out = out + int(scale) * _ramanujan_int_array(q, ns)
        return out

    def series(self) -> FourierSeries:
        terms = {}
        for q, a in self.alpha.items():
            for b in range(q):
                if math.gcd(b, q) == 1:
                    terms[Fraction(b, q)] = a
        return FourierSeries(terms, exact=True)

    def value(self, n: int) -> Fraction:
        return sum((a * ramanujan_sum(q, n) for q, a in self.alpha.items()), Fraction(0))


def _ramanujan_int_array(q: int, ns: np.ndarray) -> np.ndarray:
    out = np.zeros(len(ns), dtype=np.int64)
    for d in divisors(q):
        mu = mobius(q // d)
        if mu:
            out += np.where(ns % d == 0, d * mu, 0)
    return out.astype(object)


@dataclass(frozen=True)
class Gap:
    value: float
    frequency: Fraction
    period: int


def _sup_fourier(values: np.ndarray, L: int) -> Gap:
    coeffs = np.fft.fft(values.astype(complex)) / L
    j = int(np.argmax(np.abs(coeffs)))
    return Gap(float(np.abs(coeffs[j])), Fraction(j, L), L)


def triple_truncation_gap(
    fs: Sequence[RamanujanSeries], h: Sequence[int], X: Sequence[float]
) -> Gap:
    """Sup norm of the Fourier transform of F - F_X where
    F(n) = prod_i f_i(n + h_i) and F_X uses the truncations f_{i, X_i}.

    Sample values are exact rationals on the common period; the transform of
    that exact difference is taken by FFT.
    """
    if len(set(h)) != len(h):
        raise ValueError("shifts must be distinct")
    L = lcm(*(f.period for f in fs))
    if L > PERIOD_GUARD:
        raise MemoryError(f"common period {L} exceeds guard")
    ns = np.arange(L, dtype=np.int64)
    full = np.ones(L, dtype=object)
    trunc = np.ones(L, dtype=object)
    den = 1
    for f, hi, Xi in zip(fs, h, X):
        d = f.denominator
        den *= d
        full = full * f.numerators((ns + hi) % L, d)
        trunc = trunc * f.truncate(Xi).numerators((ns + hi) % L, d)
    diff = full - trunc
    return _sup_fourier(np.array([x / den for x in diff], dtype=float), L)


def triple_gap_bruteforce(fs: Sequence[RamanujanSeries], h: Sequence[int], X: Sequence[float]) -> float:
    """Oracle: exact series convolution of shifted factors."""
    full = FourierSeries.constant(1)
    trunc = FourierSeries.constant(1)
    for f, hi, Xi in zip(fs, h, X):
        full = product(full, f.series().shift(hi))
        trunc = product(trunc, f.truncate(Xi).series().shift(hi))
    return float((full - trunc).wedge_inf())


# character correlation gap


def _dense_from_rows(rows: dict[Fraction, complex], L: int) -> np.ndarray:
    arr = np.zeros(L, dtype=complex)
    for lam, c in rows.items():
        arr[lam.numerator * (L // lam.denominator)] += c
    return arr


def _samples(coeffs: np.ndarray) -> np.ndarray:
    return np.fft.ifft(coeffs) * len(coeffs)


def _F_coeff_rows(chi: DirichletCharacter, moduli: Sequence[int]) -> dict[Fraction, complex]:
    tau_conj = gauss_sum(chi).conjugate()
    rows: dict[Fraction, complex] = {}
    for s in moduli:
        rows.update(_c_chi_row(chi, chi.modulus * s, tau_conj))
    return rows


def _ramanujan_rows(weights: dict[int, Fraction]) -> dict[Fraction, complex]:
    rows = {}
    for q, w in weights.items():
        if w:
            for a in range(q):
                if math.gcd(a, q) == 1:
                    rows[Fraction(a, q)] = complex(float(w))
    return rows


def char_correlation_gap(
    chi: DirichletCharacter,
    Q1: float,
    Q2: float,
    Q3: float,
    R: float,
    damping=None,
    Q4: float | None = None,
    q_prime: int = 1,
) -> Gap:
    """Sup norm of the Fourier transform of
    F+_{chi,Q1} Lambda-_{Q2} H_{Q3} [D_{Q4}] [1_{q'|n}] - F~+_{chi,R} Lambda~-_R H~_R [D] [1_{q'|n}].
    """
    if not chi.is_primitive():
        raise ValueError("character must be primitive")
    if max(Q1, Q2, Q3) > R:
        raise ValueError("thresholds must not exceed R")
    q = chi.modulus
    P = primorial(R)
    L = lcm(q * P, q_prime)
    D_full = D_trunc = None
    if damping is not None:
        L = lcm(L, damping.period)
        D_full = damping
        D_trunc = damping.truncate(Q4 if Q4 is not None else R)
    if L > PERIOD_GUARD:
        raise MemoryError(f"common period {L} exceeds guard")
    coprime_sq = [s for s in squarefree_divisors(P) if math.gcd(s, q) == 1]
    F_t = _samples(_dense_from_rows(_F_coeff_rows(chi, [s for s in coprime_sq if s <= Q1]), L))
    F_c = _samples(_dense_from_rows(_F_coeff_rows(chi, coprime_sq), L))
    if q == 1:
        F_t = _samples(_dense_from_rows(_ramanujan_rows({s: lambda_weight(s) for s in squarefree_divisors(P) if s <= Q1}), L))
        F_c = _samples(_dense_from_rows(_ramanujan_rows({s: lambda_weight(s) for s in squarefree_divisors(P)}), L))
    sqf = squarefree_divisors(P)
    Lam_t = _samples(_dense_from_rows(_ramanujan_rows({s: lambda_weight(s) for s in sqf if s <= Q2}), L))
    Lam_c = _samples(_dense_from_rows(_ramanujan_rows({s: lambda_weight(s) for s in sqf}), L))
    H_t = _samples(_dense_from_rows(_ramanujan_rows({s: eta(s) for s in sqf if s <= Q3}), L))
    H_c = _samples(_dense_from_rows(_ramanujan_rows({s: eta(s) for s in sqf}), L))
    trunc = np.roll(F_t, -1) * np.roll(Lam_t, 1) * H_t
    comp = np.roll(F_c, -1) * np.roll(Lam_c, 1) * H_c
    if damping is not None:
        trunc = trunc * D_trunc.dense_samples(L)
        comp = comp * D_full.dense_samples(L)
    if q_prime > 1:
        ind = (np.arange(L) % q_prime == 0).astype(float)
        trunc, comp = trunc * ind, comp * ind
    return _sup_fourier(trunc - comp, L)


def char_gap_bruteforce(chi, Q1, Q2, Q3, R, damping=None, Q4=None, q_prime=1) -> float:
    """Oracle through pointwise product formulas and a direct DFT."""
    from .approximants import F_trunc_values, lambda_trunc_values, H_trunc_values, F_complete_product_values

    q = chi.modulus
    L = lcm(q * primorial(R), q_prime)
    if damping is not None:
        L = lcm(L, damping.period)
    ns = np.arange(L)
    trunc = F_trunc_values(chi, Q1, ns + 1) * lambda_trunc_values(Q2, ns - 1) * H_trunc_values(Q3, ns)
    comp = (
        F_complete_product_values(chi, R, ns + 1)
        * np.array([float(lambda_complete_value(R, int(n) - 1)) for n in ns])
        * np.array([float(H_complete_value(R, int(n))) for n in ns])
    )
    if damping is not None:
        Dt = damping.truncate(Q4 if Q4 is not None else R)
        trunc = trunc * np.array([Dt.value(int(n)) for n in ns])
        comp = comp * np.array([damping.value(int(n)) for n in ns])
    ind = (ns % q_prime == 0).astype(float)
    diff = (trunc - comp) * ind
    k = np.arange(L)
    best = 0.0
    for j in range(L):
        c = np.sum(diff * np.exp(-2j * np.pi * j * k / L)) / L
        best = max(best, abs(c))
    return best


# counting bounds


def denominator_count(q: int, r: int, b: int, d: int) -> int:
    """#{a in (Z/q)^* : denom(a/q + b/r) = d}."""
    if mobius(q) == 0:
        raise ValueError("q must be squarefree")
    if math.gcd(b, r) != 1 and r > 1:
        raise ValueError("b must be a unit mod r")
    return sum(
        1 for a in range(q) if math.gcd(a, q) == 1 and (Fraction(a, q) + Fraction(b, r)).denominator == d
    )


def denominator_bound(q: int, r: int, d: int) -> Fraction:
    return Fraction(d * math.gcd(q, r), r)


def congruence_sum(m1: int, m2: int, q1: int, q2: int, r: int, b: int, P: int) -> complex:
    """Sum of e(m1 a1/q1 + m2 a2/q2) over units a_i mod q_i with
    a1 q2 r + a2 q1 r = b q1 q2 mod P (q1, q2)."""
    a1 = np.array([a for a in range(q1) if math.gcd(a, q1) == 1])
    a2 = np.array([a for a in range(q2) if math.gcd(a, q2) == 1])
    mod = P * math.gcd(q1, q2)
    A1, A2 = np.meshgrid(a1, a2, indexing="ij")
    mask = (A1 * q2 * r + A2 * q1 * r - b * q1 * q2) % mod == 0
    phase = np.exp(2j * np.pi * (m1 * A1 / q1 + m2 * A2 / q2))
    return complex(np.sum(phase[mask]))


def congruence_sum_bound(m1: int, m2: int, P: int) -> int:
    return abs(m1 * m2 * (m1 - m2)) * num_divisors(P) ** 2


def check_congruence_sums(
    q_max: int = 20, r_max: int = 10, ms: Sequence[tuple[int, int]] = ((1, 2), (1, -1), (2, -3))
) -> tuple[int, float]:
    """(number of cases, worst |S| / bound) over all squarefree q1, q2 <= q_max,
    r <= r_max, units b mod r and P | [q1,q2] r."""
    sqf = [q for q in range(1, q_max + 1) if mobius(q)]
    cases, worst = 0, 0.0
    for q1 in sqf:
        for q2 in sqf:
            l = q1 * q2 // math.gcd(q1, q2)
            for r in range(1, r_max + 1):
                for b in range(r):
                    if math.gcd(b, r) != 1:
                        continue
                    for P in divisors(l * r):
                        for m1, m2 in ms:
                            S = congruence_sum(m1, m2, q1, q2, r, b, P)
                            worst = max(worst, abs(S) / congruence_sum_bound(m1, m2, P))
                            cases += 1
    return cases, worst


def triple_divisibility_sum(X: int, r: int, B: int, cap: int = 240) -> Fraction:
    """Sum over squarefree q1, q2, q3 <= cap with max q_i >= X and each q_i
    dividing r times the other two of prod tau(q_i)^B / q_i (exact, truncated at cap)."""
    sqf = [q for q in range(1, cap + 1) if mobius(q)]
    tot = Fraction(0)
    w = {q: Fraction(num_divisors(q) ** B, q) for q in sqf}
    for q1 in sqf:
        for q2 in sqf:
            base = r * q1 * q2
            for q3 in squarefree_divisors(base):
                if q3 > cap or max(q1, q2, q3) < X:
                    continue
                if (r * q2 * q3) % q1 or (r * q1 * q3) % q2:
                    continue
                tot += w[q1] * w[q2] * w[q3]
    return tot


# trend helpers


def non_increasing(values: Sequence[float], ties: int = 1, rel: float = 1e-12) -> bool:
    """Non-increasing sequence with at most `ties` equal neighbours."""
    seen = 0
    for a, b in zip(values, values[1:]):
        if b > a * (1 + rel) + 1e-15:
            return False
        if abs(a - b) <= rel * max(abs(a), 1e-300) + 1e-15:
            seen += 1
    return seen <= ties


def fit_constant(values: Sequence[float], scales: Sequence[float]) -> float:
    """Least C with value <= C * scale across the sweep."""
    return max(v / s for v, s in zip(values, scales))


def sweep_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def ramanujan_trend(Xs: Sequence[int] = (4, 8, 16, 32), h: tuple[int, int, int] = (1, 0, -1)) -> list[dict]:
    """Triple-correlation truncation gap on completed series supported on divisors of 30030."""
    support = squarefree_divisors(30030)
    fs = [
        RamanujanSeries.von_mangoldt(support),
        RamanujanSeries.von_mangoldt(support),
        RamanujanSeries.divisor_square(support),
    ]
    H = max(abs(x) for x in h)
    rows = []
    for X in Xs:
        g = triple_truncation_gap(fs, h, (X, X, X))
        rows.append({"X": X, "gap": g.value, "scale": H**3 * X**-0.5, "frequency": str(g.frequency)})
    C = fit_constant([r["gap"] for r in rows], [r["scale"] for r in rows])
    for r in rows:
        r["fitted_C"] = C
    return rows


def character_trend(q: int = 5, R: float = 7, Qs: Sequence[float] = (2, 3, 5, 7), index: int = 0) -> list[dict]:
    """Character correlation gap with Q1 = Q2 = Q3 = Q for a primitive character mod q."""
    from .characters import primitive_characters

    chi = primitive_characters(q)[index]
    rows = []
    for Q in Qs:
        g = char_correlation_gap(chi, Q, Q, Q, R)
        rows.append({"Q": Q, "gap": g.value, "scale": Q**-0.25, "frequency": str(g.frequency)})
    C = fit_constant([r["gap"] for r in rows], [r["scale"] for r in rows])
    for r in rows:
        r["fitted_C"] = C
    return rows
