"""Dirichlet characters in generator form, Gauss sums, the additive-to-
multiplicative expansion coefficients, and the Postnikov formula."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian

import numpy as np

from .arith import divisors, factorize, mobius, totient
from .cyclotomic import Cyclo

MAX_MODULUS = 10**5


def _e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


@lru_cache(maxsize=None)
def _primitive_root(p: int, k: int) -> int:
    """A generator of (Z/p^k)^* for odd p."""
    pk = p**k
    phi = pk - pk // p
    ps = [r for r, _ in factorize(phi)]
    for g in range(2, pk):
        if g % p and all(pow(g, phi // r, pk) != 1 for r in ps):
            return g
    raise ArithmeticError(f"no primitive root mod {pk}")


@dataclass(frozen=True)
class LocalGroup:
    """Unit group mod p^k with fixed generators and a discrete-log table."""

    p: int
    k: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def log(self, n: int) -> tuple[int, ...] | None:
        return _log_table(self.p, self.k).get(n % self.modulus)


@lru_cache(maxsize=None)
def local_group(p: int, k: int) -> LocalGroup:
    if p == 2:
        if k == 1:
            return LocalGroup(2, 1, (), ())
        if k == 2:
            return LocalGroup(2, 2, (3,), (2,))
        return LocalGroup(2, k, (2**k - 1, 5), (2, 2 ** (k - 2)))
    return LocalGroup(p, k, (_primitive_root(p, k),), (p**k - p ** (k - 1),))


@lru_cache(maxsize=None)
def _log_table(p: int, k: int) -> dict[int, tuple[int, ...]]:
    g = local_group(p, k)
    m = g.modulus
    table: dict[int, tuple[int, ...]] = {}
    ranges = [range(o) for o in g.orders]
    for exps in _cartesian(*ranges):
        x = 1
        for gen, ex in zip(g.generators, exps):
            x = x * pow(gen, ex, m) % m
        table[x] = exps
    if m == 2:
        table[1] = ()
    return table


@dataclass(frozen=True)
class LocalCharacter:
    """Character mod p^k: the generator gen_i maps to e(exps[i] / orders[i])."""

    p: int
    k: int
    exps: tuple[int, ...]

    @property
    def group(self) -> LocalGroup:
        return local_group(self.p, self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def phase(self, n: int) -> Fraction | None:
        """chi(n) = e(phase); None off the units."""
        if n % self.p == 0:
            return None
        logs = self.group.log(n)
        return sum((Fraction(x * l, o) for x, l, o in zip(self.exps, logs, self.group.orders)), Fraction(0)) % 1

    @property
    def conductor(self) -> int:
        return _local_conductor(self.p, self.k, self.exps)

    def is_principal(self) -> bool:
        return not any(self.exps)


@lru_cache(maxsize=None)
def _local_conductor(p: int, k: int, exps: tuple[int, ...]) -> int:
    chi = LocalCharacter(p, k, exps)
    m = p**k
    for c in range(k + 1):
        d = p**c
        if all(chi.phase(n) == 0 for n in range(1, m, d) if n % p):
            return d
    return m


class DirichletCharacter:
    """Character mod q as a product of prime-power local factors."""

    __slots__ = ("modulus", "locals", "_phase_cache")

    def __init__(self, modulus: int, local_chars: tuple[LocalCharacter, ...]):
        self.modulus = modulus
        self.locals = tuple(local_chars)
        self._phase_cache: dict[int, Fraction | None] = {}

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, exps={self.label()}, conductor={self.conductor})"

    def label(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.exps for c in self.locals)

    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletCharacter) and self.modulus == other.modulus and self.label() == other.label()

    def __hash__(self) -> int:
        return hash((self.modulus, self.label()))

    def phase(self, n: int) -> Fraction | None:
        n %= self.modulus
        if n in self._phase_cache:
            return self._phase_cache[n]
        if math.gcd(n, self.modulus) != 1:
            out = None
        else:
            out = sum((c.phase(n) for c in self.locals), Fraction(0)) % 1
        self._phase_cache[n] = out
        return out

    def __call__(self, n: int) -> complex:
        ph = self.phase(n)
        return 0j if ph is None else _e(float(ph))

    def exact(self, n: int) -> Cyclo:
        ph = self.phase(n)
        if ph is None:
            return Cyclo.rational(0)
        return Cyclo.root(ph.numerator, ph.denominator)

    def table(self) -> np.ndarray:
        """Values on 0..q-1."""
        return np.array([self(n) for n in range(self.modulus)], dtype=complex)

    @property
    def order(self) -> int:
        o = 1
        for n in range(self.modulus):
            ph = self.phase(n)
            if ph is not None:
                o = o * ph.denominator // math.gcd(o, ph.denominator)
        return o

    @property
    def conductor(self) -> int:
        out = 1
        for c in self.locals:
            out *= c.conductor
        return out

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def is_principal(self) -> bool:
        return all(c.is_principal() for c in self.locals)

    def is_real(self) -> bool:
        return all(self.phase(n) in (None, 0, Fraction(1, 2)) for n in range(self.modulus))

    def conj(self) -> "DirichletCharacter":
        out = []
        for c in self.locals:
            g = c.group
            out.append(LocalCharacter(c.p, c.k, tuple((-x) % o for x, o in zip(c.exps, g.orders))))
        return DirichletCharacter(self.modulus, tuple(out))

    def primitive(self) -> "DirichletCharacter":
        """The primitive character inducing this one."""
        q = self.conductor
        if q == self.modulus:
            return self
        for chi in enumerate_characters(q):
            if chi.is_primitive() and all(
                chi.phase(n) == self.phase(n) for n in range(1, self.modulus) if math.gcd(n, self.modulus) == 1
            ):
                return chi
        raise ArithmeticError("inducing character not found")

    def induce(self, r: int) -> "DirichletCharacter":
        """The character mod r (q | r) induced by this one."""
        q = self.modulus
        if r % q:
            raise ValueError(f"{q} does not divide {r}")
        for psi in enumerate_characters(r):
            if all(psi.phase(n) == self.phase(n) for n in range(1, r) if math.gcd(n, r) == 1):
                return psi
        raise ArithmeticError("induced character not found")

    def local_factor(self, p: int) -> "DirichletCharacter":
        for c in self.locals:
            if c.p == p:
                return DirichletCharacter(c.modulus, (c,))
        return principal_character(1)

    def gauss_sum(self) -> complex:
        return gauss_sum(self)


def _locals_for(q: int) -> list[list[LocalCharacter]]:
    out = []
    for p, k in factorize(q):
        g = local_group(p, k)
        out.append([LocalCharacter(p, k, exps) for exps in _cartesian(*[range(o) for o in g.orders])])
    return out


@lru_cache(maxsize=256)
def _enumerate(q: int) -> tuple[DirichletCharacter, ...]:
    return tuple(DirichletCharacter(q, combo) for combo in _cartesian(*_locals_for(q)))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, ordered lexicographically by generator exponents."""
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"modulus must be a positive integer, got {q!r}")
    if q > MAX_MODULUS:
        raise ValueError(f"modulus {q} above {MAX_MODULUS}")
    return list(_enumerate(q))


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(q) if c.is_primitive()]


def principal_character(q: int = 1) -> DirichletCharacter:
    return enumerate_characters(q)[0]


def gauss_sum(psi: DirichletCharacter) -> complex:
    """tau(psi) = sum over units b mod r of psi(b) e(b/r)."""
    r = psi.modulus
    return sum((psi(b) * _e(b / r) for b in range(r) if math.gcd(b, r) == 1), 0j)


def gauss_sum_exact(psi: DirichletCharacter) -> Cyclo:
    r = psi.modulus
    out = Cyclo.rational(0)
    for b in range(r):
        if math.gcd(b, r) == 1:
            out = out + psi.exact(b) * Cyclo.root(b, r)
    return out


def gauss_sum_induced(chi: DirichletCharacter, r: int) -> complex:
    """mu(r/q) chi(r/q) tau(chi) for chi primitive mod q dividing r."""
    q = chi.modulus
    if r % q:
        raise ValueError(f"{q} does not divide {r}")
    return mobius(r // q) * chi(r // q) * gauss_sum(chi)


def c_chi(chi: DirichletCharacter, b: int, r: int) -> complex:
    """Coefficient of chi in the expansion of e(-bn/r) over characters (b a unit mod r)."""
    if not chi.is_primitive():
        raise ValueError("c_chi needs a primitive character")
    if math.gcd(b, r) != 1:
        raise ValueError(f"b={b} is not a unit mod r={r}")
    q = chi.modulus
    if r % q:
        return 0j
    s = r // q
    mu = mobius(s)
    if mu == 0:
        return 0j
    return chi(b) * mu * chi(s).conjugate() * gauss_sum(chi).conjugate() / totient(r)


def primitive_characters_dividing(r: int) -> list[DirichletCharacter]:
    """Primitive characters of every conductor dividing r."""
    out = []
    for q in divisors(r):
        out.extend(primitive_characters(q))
    return out


def additive_expansion_residual(r: int) -> float:
    """max over units b and all n mod r of
    |e(-bn/r) 1_{(n,r)=1} - sum_chi c_chi(b,r) 1_{(n,r)=1} chi(n)|."""
    chars = primitive_characters_dividing(r)
    units = [b for b in range(r) if math.gcd(b, r) == 1]
    ns = np.arange(r)
    coprime = np.array([math.gcd(n, r) == 1 for n in range(r)])
    tables = np.array([[chi(int(n)) for n in ns] for chi in chars])
    worst = 0.0
    for b in units:
        coeffs = np.array([c_chi(chi, b, r) for chi in chars])
        rhs = (coeffs @ tables) * coprime
        # the right side vanishes off the units, so the identity holds for
        # e(-bn/r) 1_{(n,r)=1}; at n sharing a factor with r the bare
        # exponential is not reproduced
        lhs = np.exp(-2j * np.pi * b * ns / r) * coprime
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# Postnikov formula


def postnikov_degree(p: int, m: int, n: int) -> int:
    """Least N >= 1 with m(N+1) - floor(log_p N) >= n."""
    N = 1
    while m * (N + 1) - _floor_log(N, p) < n:
        N += 1
    return N


def _floor_log(N: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= N:
        k += 1
    return k


@dataclass(frozen=True)
class PostnikovPolynomial:
    """chi(1 + p^m x) = e(f(x) / p^(n-m)) with f(x) = sum_i coeffs[i-1] x^i."""

    p: int
    m: int
    n: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def modulus(self) -> int:
        return self.p ** (self.n - self.m)

    def __call__(self, x: int) -> int:
        M = self.modulus
        return sum(c * pow(x, i + 1, M) for i, c in enumerate(self.coeffs)) % M


def _zp_reduce(x: Fraction, p: int, M: int) -> int:
    """Image in Z/M of a p-integral rational (M a power of p)."""
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return num * pow(den, -1, M) % M


def truncated_log(N: int) -> dict[int, Fraction]:
    """L_N(x) = -sum_{i<=N} (-x)^i / i as {power: coefficient}."""
    return {i: Fraction(-((-1) ** i), i) for i in range(1, N + 1)}


def log_family(a: int, p: int, m: int, n: int, N: int) -> PostnikovPolynomial:
    """f_a(x) = a L_N(p^m x) / p^m reduced mod p^(n-m)."""
    M = p ** (n - m)
    coeffs = []
    for i, c in truncated_log(N).items():
        val = Fraction(a) * c * Fraction(p ** (m * i), p**m)
        coeffs.append(_zp_reduce(val, p, M) if M > 1 else 0)
    return PostnikovPolynomial(p, m, n, tuple(coeffs))


def postnikov(chi: DirichletCharacter, m: int, degree: int | None = None) -> PostnikovPolynomial:
    """Polynomial f with chi(1 + p^m x) = e(f(x)/p^(n-m)), p^n the conductor of chi.

    The candidates a L_N(p^m x)/p^m (a mod p^(n-m)) are fitted against the
    values of chi on 1 + p^m Z and the match is verified for every x.
    """
    fac = factorize(chi.modulus)
    if len(fac) != 1:
        raise ValueError(f"modulus {chi.modulus} is not a prime power")
    (p, n), = fac
    if not chi.is_primitive() and not chi.is_principal():
        chi = chi.primitive()
        fac = factorize(chi.modulus)
        if len(fac) != 1:
            raise ValueError("conductor is not a prime power")
        (p, n), = fac
    if chi.is_principal():
        N = degree or 1
        return PostnikovPolynomial(p, m, max(n, m), (0,) * N)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if p**m == 2:
        raise ValueError("p^m = 2 is excluded")
    N = degree if degree is not None else postnikov_degree(p, m, n)
    M = p ** (n - m)
    targets = []
    for x in range(M):
        ph = chi.phase(1 + p**m * x)
        val = ph * M
        if val.denominator != 1:
            raise ArithmeticError("chi(1 + p^m x) is not a p^(n-m)-th root of unity")
        targets.append(int(val) % M)
    for a in range(M):
        f = log_family(a, p, m, n, N)
        if all(f(x) == targets[x] for x in range(M)):
            return f
    raise ArithmeticError(f"no polynomial of degree {N} reproduces chi on 1 + p^{m} Z")


def verify_postnikov(chi: DirichletCharacter, f: PostnikovPolynomial) -> bool:
    M = f.modulus
    return all(chi.phase(1 + f.p**f.m * x) == Fraction(f(x), M) % 1 for x in range(M))


def log_identity_defect(N: int) -> dict[tuple[int, int], Fraction]:
    """Monomials of L_N(x+y+xy) - L_N(x) - L_N(y) as {(i, j): coefficient}."""
    L = truncated_log(N)
    base = {(1, 0): Fraction(1), (0, 1): Fraction(1), (1, 1): Fraction(1)}
    out: dict[tuple[int, int], Fraction] = {}
    power = {(0, 0): Fraction(1)}
    for i in range(1, N + 1):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in power.items():
            for (u, v), d in base.items():
                key = (a + u, b + v)
                nxt[key] = nxt.get(key, 0) + c * d
        power = nxt
        for key, c in power.items():
            out[key] = out.get(key, 0) + L[i] * c
    for i, c in L.items():
        out[(i, 0)] = out.get((i, 0), 0) - c
        out[(0, i)] = out.get((0, i), 0) - c
    return {k: v for k, v in out.items() if v}


def psi_n(x: Fraction, p: int, n: int) -> Fraction:
    """Phase of psi_n(x) = e(x / p^n) for p-integral rational x."""
    M = p**n
    return Fraction(_zp_reduce(Fraction(x), p, M), M)


def phi_a_phase(a: int, t: int, p: int, m: int, n: int, N: int) -> Fraction:
    """Phase of phi_a(1 + p^m t) = psi_n(a L_N(p^m t))."""
    y = Fraction(0)
    z = Fraction(p**m * t)
    for i, c in truncated_log(N).items():
        y += c * z**i
    return psi_n(a * y, p, n)


def check_phi_family(p: int, n: int, m: int) -> dict[str, bool]:
    """Homomorphism, well-definedness mod p^(n-m), and distinctness of the phi_a."""
    N = postnikov_degree(p, m, n)
    M = p ** (n - m)
    pm = p**m
    hom = True
    well = True
    tables = []
    for a in range(M):
        vals = [phi_a_phase(a, t, p, m, n, N) for t in range(M)]
        tables.append(tuple(vals))
        for t in range(M):
            if phi_a_phase(a, t + M, p, m, n, N) != vals[t]:
                well = False
            for s in range(M):
                prod_t = (t + s + pm * t * s) % M
                if (vals[t] + vals[s]) % 1 != vals[prod_t]:
                    hom = False
    distinct = len(set(tables)) == M
    return {"homomorphism": hom, "well_defined": well, "distinct": distinct}
