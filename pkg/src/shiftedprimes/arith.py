"""Integer arithmetic: factorization, classical multiplicative functions,
Ramanujan sums and Moebius-type gcd expansions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian

import numpy as np

_SIEVE_LIMIT = 10**7
_sieve_cache: dict[str, np.ndarray] = {}


def _spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (grown on demand, never shrunk)."""
    table = _sieve_cache.get("spf")
    if table is not None and len(table) > limit:
        return table
    size = max(limit + 1, 1 << 16)
    size = min(max(size, 2 * (len(table) if table is not None else 0)), _SIEVE_LIMIT + 1)
    spf = np.zeros(size, dtype=np.int64)
    spf[1] = 1
    for p in range(2, int(math.isqrt(size - 1)) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[0] = 0
    _sieve_cache["spf"] = spf
    return spf


def primes_upto(n: int) -> list[int]:
    """All primes p <= n."""
    if n < 2:
        return []
    spf = _spf_table(min(n, _SIEVE_LIMIT))
    idx = np.arange(len(spf))
    ps = idx[(spf == idx) & (idx >= 2)]
    ps = ps[ps <= n].tolist()
    if n > _SIEVE_LIMIT:
        ps += [m for m in range(_SIEVE_LIMIT + 1, n + 1) if is_prime(m)]
    return ps


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= _SIEVE_LIMIT:
        return int(_spf_table(n)[n]) == n
    return factorize(n) == ((n, 1),)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization as increasing ((p, e), ...). factorize(1) == ()."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    m = n
    if m <= _SIEVE_LIMIT:
        spf = _spf_table(m)
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return tuple(out)
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@dataclass(frozen=True)
class FactoredInt:
    n: int
    factors: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int) -> "FactoredInt":
        return cls(n, factorize(n))

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must have increasing primes and positive exponents")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError("factors do not multiply to n")


def reduced(num: int, den: int) -> Fraction:
    """Canonical representative of num/den in Q/Z, i.e. in [0, 1)."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(num % den, den)


def denom(x: Fraction) -> int:
    return Fraction(x).denominator


def vp(n: int, p: int) -> int:
    """Exponent of p in n (n != 0)."""
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors needs n >= 1")
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def squarefree_divisors(n: int) -> list[int]:
    ps = [p for p, _ in factorize(n)]
    out = []
    for bits in _cartesian((0, 1), repeat=len(ps)):
        d = 1
        for b, p in zip(bits, ps):
            if b:
                d *= p
        out.append(d)
    return sorted(out)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def num_divisors(n: int) -> int:
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def num_prime_factors(n: int) -> int:
    return len(factorize(n))


def omega_upto(n: int, R: float) -> int:
    """Number of distinct primes p <= R dividing n."""
    return sum(1 for p, _ in factorize(n) if p <= R)


@dataclass(frozen=True)
class LogPrime:
    """Exact value k*log p (k = 0 encodes zero)."""

    p: int
    k: int

    def __float__(self) -> float:
        return self.k * math.log(self.p) if self.k else 0.0

    def value(self) -> float:
        return float(self)


_ZERO_LOG = LogPrime(1, 0)


def von_mangoldt(n: int) -> LogPrime:
    f = factorize(n)
    if len(f) == 1:
        return LogPrime(f[0][0], 1)
    return _ZERO_LOG


def von_mangoldt_primes(n: int) -> LogPrime:
    """log p on primes, zero elsewhere (proper prime powers removed)."""
    f = factorize(n)
    if len(f) == 1 and f[0][1] == 1:
        return LogPrime(f[0][0], 1)
    return _ZERO_LOG


_FUNCTIONS = {
    "mu": mobius,
    "phi": totient,
    "tau": num_divisors,
    "omega": num_prime_factors,
    "lambda": von_mangoldt,
    "lambda_prime": von_mangoldt_primes,
}


def arithmetic_function(name: str, n: int):
    if name not in _FUNCTIONS:
        raise ValueError(f"unknown arithmetic function {name!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"{name} needs a positive integer, got {n!r}")
    return _FUNCTIONS[name](int(n))


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = sum over d | (q, n) of d * mu(q/d)."""
    if q < 1:
        raise ValueError("ramanujan_sum needs q >= 1")
    g = math.gcd(q, n)
    return sum(d * mobius(q // d) for d in divisors(g))


def ramanujan_sum_direct(q: int, n: int) -> complex:
    """Reference route: sum of e(an/q) over units a mod q."""
    return sum(cmath.exp(2j * math.pi * a * n / q) for a in range(q) if math.gcd(a, q) == 1)


def gcd_indicator_expand(n: int, delta: int) -> list[tuple[int, int]]:
    """Signed divisors (d, mu(d/delta)) with delta | d | n such that
    sum sign * 1_{d | m} equals 1_{gcd(m, n) = delta}."""
    if n < 1 or delta < 1:
        raise ValueError("n and delta must be positive")
    if n % delta:
        raise ValueError(f"{delta} does not divide {n}")
    out = []
    for e in divisors(n // delta):
        s = mobius(e)
        if s:
            out.append((delta * e, s))
    return out


def primorial(R: float) -> int:
    out = 1
    for p in primes_upto(int(R)):
        out *= p
    return out


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def _tau_and_squarefree(X: int) -> tuple[np.ndarray, np.ndarray]:
    tau = np.zeros(X + 1, dtype=np.int64)
    for d in range(1, X + 1):
        tau[d::d] += 1
    sqf = np.ones(X + 1, dtype=bool)
    sqf[0] = False
    for p in primes_upto(math.isqrt(X)):
        sqf[p * p :: p * p] = False
    return tau, sqf


def rankin_constant(B: int, h: int, X: int, checkpoints: int = 12) -> float:
    """Largest ratio of sum_{n<=x sqf} tau(n)^B (n,h)/n to tau(h)^(B+1) log^(2^B) x
    over geometric checkpoints x <= X."""
    tau, sqf = _tau_and_squarefree(X)
    n = np.arange(X + 1)
    g = np.gcd(n, h)
    terms = np.where(sqf, tau.astype(float) ** B * g / np.maximum(n, 1), 0.0)
    partial = np.cumsum(terms)
    xs = np.unique(np.geomspace(3, X, checkpoints).astype(int))
    scale = num_divisors(h) ** (B + 1)
    return float(max(partial[x] / (scale * math.log(x) ** (2**B)) for x in xs))


def power_res_div_constant(R: int, X: int) -> float:
    """X^-1 sum_{n<=X} 4^{omega_R(n)} divided by log^3 R."""
    counts = np.zeros(X + 1, dtype=np.int64)
    for p in primes_upto(R):
        counts[p::p] += 1
    mean = float(np.sum(4.0 ** counts[1:])) / X
    return mean / math.log(R) ** 3
