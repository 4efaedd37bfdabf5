"""Ramanujan-series approximants to the von Mangoldt function, their
character twists, completed (divisor-closed) versions and local factors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arith import (
    divisors,
    factorize,
    mobius,
    num_divisors,
    primes_upto,
    primorial,
    ramanujan_sum,
    squarefree_divisors,
    totient,
)
from .characters import DirichletCharacter, gauss_sum, principal_character
from .periodic import DENSE_CAP, FourierSeries, _freq, from_samples, product

MAX_COMPLETED_PERIOD = 20 * 30030 * 32


def eta(q: int) -> Fraction:
    """mu^2(q) prod_{p | q} 3/(p+3)."""
    if mobius(q) == 0:
        return Fraction(0)
    out = Fraction(1)
    for p, _ in factorize(q):
        out *= Fraction(3, p + 3)
    return out


def lambda_weight(q: int) -> Fraction:
    return Fraction(mobius(q), totient(q))


def ramanujan_series(q: int, coeff=1) -> FourierSeries:
    """coeff * c_q as a series: coeff at every a/q with (a, q) = 1."""
    exact = isinstance(coeff, (int, Fraction))
    return FourierSeries({_freq(a, q): coeff for a in range(q) if math.gcd(a, q) == 1}, exact=exact)


def _ramanujan_combination(weights: dict[int, Fraction]) -> FourierSeries:
    terms = {}
    for q, w in weights.items():
        if w:
            for a in range(q):
                if math.gcd(a, q) == 1:
                    terms[_freq(a, q)] = w
    return FourierSeries(terms, exact=True)


# truncated approximants


def lambda_trunc(Q: float) -> FourierSeries:
    """Sum over q <= Q of mu(q)/phi(q) c_q."""
    return _ramanujan_combination({q: lambda_weight(q) for q in range(1, int(Q) + 1)})


def H_trunc(Q: float) -> FourierSeries:
    """Sum over q <= Q of eta(q) c_q."""
    return _ramanujan_combination({q: eta(q) for q in range(1, int(Q) + 1)})


def _require_primitive(chi: DirichletCharacter) -> None:
    if not chi.is_primitive():
        raise ValueError(f"character mod {chi.modulus} is not primitive")


def _c_chi_row(chi: DirichletCharacter, r: int, tau_conj: complex) -> dict[Fraction, complex]:
    q = chi.modulus
    s = r // q
    mu = mobius(s)
    if mu == 0 or math.gcd(s, q) != 1:
        return {}
    scale = mu * chi(s).conjugate() * tau_conj / totient(r)
    return {_freq(b, r): chi(b) * scale for b in range(r) if math.gcd(b, r) == 1}


def F_trunc(chi: DirichletCharacter, Q: float) -> FourierSeries:
    """Sum over r with q | r, r/q <= Q, and units b mod r of c_chi(b, r) e(bn/r)."""
    _require_primitive(chi)
    if chi.modulus == 1:
        return lambda_trunc(Q)
    q = chi.modulus
    tau_conj = gauss_sum(chi).conjugate()
    terms: dict[Fraction, complex] = {}
    for s in range(1, int(Q) + 1):
        terms.update(_c_chi_row(chi, q * s, tau_conj))
    return FourierSeries(terms, exact=False)


def F_trunc_values(chi: DirichletCharacter, Q: float, ns: Sequence[int] | np.ndarray) -> np.ndarray:
    """Pointwise route: (q/phi(q)) conj(chi(n)) sum_{r<=Q, (r,q)=1} mu(r)/phi(r) c_r(n)."""
    _require_primitive(chi)
    q = chi.modulus
    ns = np.asarray(ns, dtype=np.int64)
    chi_tab = np.array([chi(b).conjugate() for b in range(q)])
    total = np.zeros(len(ns), dtype=float)
    for r in range(1, int(Q) + 1):
        mu = mobius(r)
        if mu == 0 or math.gcd(r, q) != 1:
            continue
        total += mu / totient(r) * ramanujan_sum_array(r, ns)
    return q / totient(q) * chi_tab[ns % q] * total


def ramanujan_sum_array(q: int, ns: np.ndarray) -> np.ndarray:
    """c_q(n) for an integer array via the divisor formula."""
    ns = np.asarray(ns, dtype=np.int64)
    out = np.zeros(len(ns), dtype=float)
    for d in divisors(q):
        mu = mobius(q // d)
        if mu:
            out += np.where(ns % d == 0, d * mu, 0)
    return out


def lambda_trunc_values(Q: float, ns) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    out = np.zeros(len(ns))
    for q in range(1, int(Q) + 1):
        mu = mobius(q)
        if mu:
            out += mu / totient(q) * ramanujan_sum_array(q, ns)
    return out


def H_trunc_values(Q: float, ns) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    out = np.zeros(len(ns))
    for q in range(1, int(Q) + 1):
        w = eta(q)
        if w:
            out += float(w) * ramanujan_sum_array(q, ns)
    return out


# local factors and completed approximants


def v_local(p: int) -> FourierSeries:
    """v_p(n) = p/(p-1) 1_{p !| n}: series 1 - c_p/(p-1)."""
    return from_samples([Fraction(0)] + [Fraction(p, p - 1)] * (p - 1))


def w_local(p: int) -> FourierSeries:
    """w_p(n) = 4p/(p+3) if p | n, p/(p+3) otherwise: series 1 + 3c_p/(p+3)."""
    return from_samples([Fraction(4 * p, p + 3)] + [Fraction(p, p + 3)] * (p - 1))


def lambda_complete(R: float) -> FourierSeries:
    """Sum over q | R! of mu(q)/phi(q) c_q."""
    return _ramanujan_combination({q: lambda_weight(q) for q in squarefree_divisors(primorial(R))})


def H_complete(R: float) -> FourierSeries:
    return _ramanujan_combination({q: eta(q) for q in squarefree_divisors(primorial(R))})


def lambda_complete_product(R: float) -> FourierSeries:
    out = FourierSeries.constant(1)
    for p in primes_upto(int(R)):
        out = product(out, v_local(p))
    return out


def H_complete_product(R: float) -> FourierSeries:
    out = FourierSeries.constant(1)
    for p in primes_upto(int(R)):
        out = product(out, w_local(p))
    return out


def lambda_complete_value(R: float, n: int) -> Fraction:
    out = Fraction(1)
    for p in primes_upto(int(R)):
        out *= 0 if n % p == 0 else Fraction(p, p - 1)
    return out


def H_complete_value(R: float, n: int) -> Fraction:
    out = Fraction(1)
    for p in primes_upto(int(R)):
        out *= Fraction(4 * p, p + 3) if n % p == 0 else Fraction(p, p + 3)
    return out


def _coprime_primorial(R: float, q: int) -> int:
    out = 1
    for p in primes_upto(int(R)):
        if q % p:
            out *= p
    return out


def F_complete(chi: DirichletCharacter, R: float) -> FourierSeries:
    """Sum over r = q r' with r' | R! and units b mod r of c_chi(b, r) e(bn/r).

    Terms with r' sharing a prime with q vanish, so r' runs over squarefree
    divisors of the primes up to R that do not divide q.
    """
    _require_primitive(chi)
    if chi.modulus == 1:
        return lambda_complete(R)
    q = chi.modulus
    tau_conj = gauss_sum(chi).conjugate()
    terms: dict[Fraction, complex] = {}
    for s in squarefree_divisors(_coprime_primorial(R, q)):
        terms.update(_c_chi_row(chi, q * s, tau_conj))
    return FourierSeries(terms, exact=False)


def F_complete_dense(chi: DirichletCharacter, R: float) -> tuple[int, np.ndarray]:
    """(L, coefficients on j/L) of the completed series, built with numpy."""
    _require_primitive(chi)
    q = chi.modulus
    P = _coprime_primorial(R, q)
    L = q * P
    if L > MAX_COMPLETED_PERIOD or L > DENSE_CAP:
        raise MemoryError(f"completed period {L} exceeds the support guard")
    chi_tab = np.array([chi(b) for b in range(q)])
    tau_conj = gauss_sum(chi).conjugate()
    coeffs = np.zeros(L, dtype=complex)
    for s in squarefree_divisors(P):
        r = q * s
        b = np.arange(r)
        units = np.gcd(b, r) == 1
        b = b[units]
        scale = mobius(s) * chi(s).conjugate() * tau_conj / totient(r)
        coeffs[b * (L // r)] += chi_tab[b % q] * scale
    return L, coeffs


def F_complete_product_values(chi: DirichletCharacter, R: float, ns: np.ndarray) -> np.ndarray:
    """(q/phi(q)) conj(chi(n)) prod_{p <= R, p !| q} v_p(n)."""
    q = chi.modulus
    ns = np.asarray(ns, dtype=np.int64)
    chi_tab = np.array([chi(b).conjugate() for b in range(q)])
    out = q / totient(q) * chi_tab[ns % q]
    for p in primes_upto(int(R)):
        if q % p:
            out = out * np.where(ns % p == 0, 0.0, p / (p - 1))
    return out


def completed_product_residual(chi: DirichletCharacter, R: float) -> float:
    """Max over one full period of |F~ - product formula|."""
    L, coeffs = F_complete_dense(chi, R)
    vals = np.fft.ifft(coeffs) * L
    ns = np.arange(L)
    return float(np.max(np.abs(vals - F_complete_product_values(chi, R, ns))))


# the sharp approximant


@dataclass(frozen=True)
class SharpComponent:
    sign: int
    rho: complex
    character: DirichletCharacter


@dataclass
class SharpApproximant:
    """Sum over components of sign * n^(rho-1) F_{chi_rho, Q}(n)."""

    Q: float
    sigma_max: float
    components: list[SharpComponent] = field(default_factory=list)

    @classmethod
    def grh(cls, Q: float, sigma_max: float = 0.0) -> "SharpApproximant":
        return cls(Q, sigma_max, [SharpComponent(1, 1.0 + 0j, principal_character(1))])

    @classmethod
    def from_zeros(cls, zero_set, Q: float | None = None, sigma_max: float | None = None) -> "SharpApproximant":
        from .zeros import characters_for_zero

        Q = zero_set.Q if Q is None else Q
        sigma_max = zero_set.sigma_max if sigma_max is None else sigma_max
        comps = [SharpComponent(1, 1.0 + 0j, principal_character(1))]
        for z in zero_set.selected(Q, sigma_max):
            chi = characters_for_zero(z)
            for _ in range(z.multiplicity):
                comps.append(SharpComponent(-1, complex(z.beta, z.gamma), chi))
        return cls(Q, sigma_max, comps)

    def values(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        out = np.zeros(len(ns), dtype=complex)
        cache: dict = {}
        logn = np.log(np.maximum(ns, 1).astype(float))
        for c in self.components:
            key = c.character
            if key not in cache:
                cache[key] = F_trunc_values(c.character, self.Q, ns)
            out += c.sign * np.exp((c.rho - 1) * logn) * cache[key]
        return out


def sharp_eval(s: SharpApproximant, n: int) -> complex:
    if n < 1:
        raise ValueError("sharp approximant needs n >= 1")
    return complex(s.values([n])[0])


# sieve weights


def sieve_weight_transform(v: dict[int, Fraction], Q: float) -> dict[int, Fraction]:
    """lambda_d with lambda_d / d = sum over d | r <= Q of mu(r/d) v(r)."""
    Q = int(Q)
    if any(r < 1 or r > Q for r in v):
        raise ValueError("v must be supported on [1, Q]")
    out = {}
    for d in range(1, Q + 1):
        s = Fraction(0)
        for r in range(d, Q + 1, d):
            if r in v:
                s += mobius(r // d) * Fraction(v[r])
        if s:
            out[d] = d * s
    return out


def ramanujan_combination_value(v: dict[int, Fraction], n: int) -> Fraction:
    return sum((Fraction(w) * ramanujan_sum(q, n) for q, w in v.items()), Fraction(0))


def sieve_side_value(lam: dict[int, Fraction], n: int) -> Fraction:
    return sum((w for d, w in lam.items() if n % d == 0), Fraction(0))


# measured constants and class membership


def in_class_C(f: FourierSeries, B: float, X: int) -> bool:
    """Frequencies have squarefree denominators <= X and |f^(a/q)| <= tau(q)^B / q."""
    for lam, c in f.terms.items():
        q = lam.denominator
        if q > X or mobius(q) == 0:
            return False
        if abs(complex(c)) > num_divisors(q) ** B / q + 1e-12:
            return False
    return True


def pointwise_F_constant(chi: DirichletCharacter, Q: float, n_max: int) -> float:
    """max over n <= n_max of |F_{chi,Q}(n)| / (tau(n) log^3 Q)."""
    ns = np.arange(1, n_max + 1)
    vals = np.abs(F_trunc_values(chi, Q, ns))
    tau = np.array([num_divisors(int(n)) for n in ns])
    return float(np.max(vals / (tau * max(math.log(Q), 1.0) ** 3)))


def sharp_pointwise_constant(s: SharpApproximant, n_max: int) -> float:
    """max over n of |Lambda_sharp(n)| / (tau(n) log^3 Q sum_rho n^(Re rho - 1))."""
    ns = np.arange(1, n_max + 1)
    vals = np.abs(s.values(ns))
    tau = np.array([num_divisors(int(n)) for n in ns])
    weight = sum(np.exp((c.rho.real - 1) * np.log(ns)) for c in s.components)
    return float(np.max(vals / (tau * max(math.log(s.Q), 1.0) ** 3 * weight)))


# Fourier positivity of the local triple product


def u_local(p: int) -> FourierSeries:
    """(1-1/p)^2 (1+3/p) v_p(n+1) v_p(n-1) w_p(n)."""
    vw = product(product(v_local(p).shift(1), v_local(p).shift(-1)), w_local(p))
    return vw * ((1 - Fraction(1, p)) ** 2 * (1 + Fraction(3, p)))


def u_expected(p: int, k: int):
    """(3 - zeta^k - zeta^-k)/p for k != 0 and 1 + 1/p at k = 0, exactly.
    For p = 2 both coefficients equal 2."""
    from .cyclotomic import Cyclo

    if p == 2:
        return Cyclo.rational(2)
    if k % p == 0:
        return Cyclo.rational(1 + Fraction(1, p))
    return (Cyclo.rational(3) - Cyclo.root(k, p) - Cyclo.root(-k, p)) * Fraction(1, p)


@dataclass(frozen=True)
class UCheck:
    p: int
    formula_ok: bool
    lower_bound_ok: bool
    values: tuple[float, ...]


def check_u_local(p: int) -> UCheck:
    """Exact comparison of the series of u_p with the closed form, and for odd p
    u_p^(k) - 1/p = |1 - zeta^k|^2 / p as an exact identity."""
    from .cyclotomic import Cyclo

    u = u_local(p)
    formula_ok = True
    lower_ok = True
    vals = []
    for k in range(p):
        c = u.coeff(Fraction(k, p))
        if not (c - u_expected(p, k)).is_zero():
            formula_ok = False
        one_minus = Cyclo.rational(1) - Cyclo.root(k, p)
        gap = c - Fraction(1, p)
        if k % p and p != 2:
            square = one_minus * one_minus.conj() * Fraction(1, p)
            if not (gap - square).is_zero() or gap.sign() < 0:
                lower_ok = False
        elif gap.sign() < 0:
            lower_ok = False
        vals.append(complex(c).real)
    if set(u.terms) - {Fraction(k, p) for k in range(p)}:
        formula_ok = False
    return UCheck(p, formula_ok, lower_ok, tuple(vals))


def vvw_sup_constant(p: int) -> tuple[Fraction, Fraction]:
    """(sup norm of v^+ v^- w, closed-form bound (1-1/p)^-2 (1+3/p)^-1 max(1+1/p, 5/p))."""
    vw = product(product(v_local(p).shift(1), v_local(p).shift(-1)), w_local(p))
    sup = max(abs(complex(c)) for c in vw.terms.values())
    exact_sup = None
    for c in vw.terms.values():
        r = c.as_fraction()
        if r is not None and abs(abs(float(r)) - sup) < 1e-12:
            exact_sup = abs(r)
    bound = (1 - Fraction(1, p)) ** -2 * (1 + Fraction(3, p)) ** -1 * max(1 + Fraction(1, p), Fraction(5, p))
    return (exact_sup if exact_sup is not None else Fraction(sup).limit_denominator(10**12)), bound
