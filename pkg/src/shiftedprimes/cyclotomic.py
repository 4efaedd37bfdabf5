"""Exact arithmetic in cyclotomic fields Q(zeta_K).

An element is stored as a rational combination of powers of zeta_K with
exponents mod K. Arithmetic happens in Q[x]/(x^K - 1); comparisons reduce
modulo the cyclotomic polynomial, which gives a canonical form.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .arith import divisors, mobius, totient


COMPACT_LIMIT = 1 << 12


@lru_cache(maxsize=None)
def cyclotomic_poly(K: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_K, lowest degree first.

    Phi_K(x) = Phi_rad(x^(K/rad)) with rad the radical of K, and Phi_rad is
    prod (x^d - 1)^mu(rad/d), built with sparse multiplications and exact
    divisions by x^d - 1.
    """
    rad = 1
    for p in _prime_divisors(K):
        rad *= p
    if rad != K:
        base = cyclotomic_poly(rad)
        step = K // rad
        out = [0] * ((len(base) - 1) * step + 1)
        for i, c in enumerate(base):
            out[i * step] = c
        return tuple(out)
    poly = [1]
    divide = []
    for d in divisors(K):
        mu = mobius(K // d)
        if mu == 1:
            poly = _mul_binomial(poly, d)
        elif mu == -1:
            divide.append(d)
    for d in divide:
        poly = _div_binomial(poly, d)
    return tuple(poly)


def _prime_divisors(K: int) -> list[int]:
    out, p = [], 2
    while p * p <= K:
        if K % p == 0:
            out.append(p)
            while K % p == 0:
                K //= p
        p += 1
    if K > 1:
        out.append(K)
    return out


def _mul_binomial(a: list[int], d: int) -> list[int]:
    """a(x) (x^d - 1)."""
    out = [0] * (len(a) + d)
    for i, x in enumerate(a):
        out[i] -= x
        out[i + d] += x
    return out


def _div_binomial(a: list[int], d: int) -> list[int]:
    """a(x) / (x^d - 1), which must be exact."""
    n = len(a) - 1 - d
    if n < 0:
        raise ArithmeticError("division by x^d - 1 is not exact")
    q = [0] * (n + 1)
    # a = q (x^d - 1): a_i = q_{i-d} - q_i, solved from the top
    for i in range(len(a) - 1, d - 1, -1):
        q[i - d] = a[i] + (q[i] if i <= n else 0)
    if any(a[i] != -(q[i] if i <= n else 0) for i in range(d)):
        raise ArithmeticError("division by x^d - 1 is not exact")
    return q


class Cyclo:
    """Element of Q(zeta_K): sum of nums[k] zeta_K^k, all over den."""

    __slots__ = ("K", "nums", "den", "_canon")

    def __init__(self, K: int, terms: dict[int, Fraction] | None = None):
        if K < 1:
            raise ValueError("cyclotomic order must be positive")
        terms = terms or {}
        den = 1
        for v in terms.values():
            d = Fraction(v).denominator
            if den % d:
                den = den * d // math.gcd(den, d)
        nums: dict[int, int] = {}
        for k, v in terms.items():
            v = Fraction(v)
            if v:
                idx = k % K
                nums[idx] = nums.get(idx, 0) + v.numerator * (den // v.denominator)
        self._set(K, nums, den)

    def _set(self, K: int, nums: dict[int, int], den: int) -> None:
        nums = {k: v for k, v in nums.items() if v}
        g = den
        for v in nums.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            nums = {k: v // g for k, v in nums.items()}
            den //= g
        if den < 0:
            nums = {k: -v for k, v in nums.items()}
            den = -den
        self.K = K
        self.nums = nums
        self.den = den
        self._canon = None

    # constructors
    @classmethod
    def from_integers(cls, K: int, nums: dict[int, int], den: int) -> "Cyclo":
        """sum nums[k] zeta_K^k / den."""
        out = cls.__new__(cls)
        out._set(K, {k % K: v for k, v in nums.items()} if any(k >= K or k < 0 for k in nums) else dict(nums), den)
        return out

    @classmethod
    def rational(cls, x) -> "Cyclo":
        x = Fraction(x)
        return cls.from_integers(1, {0: x.numerator}, x.denominator)

    @classmethod
    def root(cls, k: int, K: int, coeff=1) -> "Cyclo":
        """coeff * zeta_K^k, stored at the smallest order that contains it."""
        g = math.gcd(k % K, K)
        c = Fraction(coeff)
        return cls.from_integers(K // g, {(k % K) // g: c.numerator}, c.denominator)

    @property
    def terms(self) -> dict[int, Fraction]:
        return {k: Fraction(v, self.den) for k, v in self.nums.items()}

    # structure
    def lift(self, K: int) -> "Cyclo":
        if K == self.K:
            return self
        if K % self.K:
            raise ValueError(f"cannot lift order {self.K} to {K}")
        s = K // self.K
        out = Cyclo.__new__(Cyclo)
        out.K, out.nums, out.den, out._canon = K, {k * s: v for k, v in self.nums.items()}, self.den, None
        return out

    def _pair(self, other: "Cyclo") -> tuple["Cyclo", "Cyclo", int]:
        K = self.K * other.K // math.gcd(self.K, other.K)
        return self.lift(K), other.lift(K), K

    @staticmethod
    def coerce(x) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo.rational(x)
        raise TypeError(f"cannot use {type(x).__name__} as an exact cyclotomic number")

    # arithmetic
    def __add__(self, other) -> "Cyclo":
        a, b, K = self._pair(Cyclo.coerce(other))
        den = a.den * b.den // math.gcd(a.den, b.den)
        sa, sb = den // a.den, den // b.den
        out = {k: v * sa for k, v in a.nums.items()}
        for k, v in b.nums.items():
            out[k] = out.get(k, 0) + v * sb
        return Cyclo.from_integers(K, out, den)

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo.from_integers(self.K, {k: -v for k, v in self.nums.items()}, self.den)

    def __sub__(self, other) -> "Cyclo":
        return self + (-Cyclo.coerce(other))

    def __rsub__(self, other) -> "Cyclo":
        return Cyclo.coerce(other) + (-self)

    def __mul__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclo.from_integers(
                self.K, {k: v * other.numerator for k, v in self.nums.items()}, self.den * other.denominator
            )
        a, b, K = self._pair(Cyclo.coerce(other))
        a = a.compact()
        b = b.compact()
        out: dict[int, int] = {}
        for i, x in a.nums.items():
            for j, y in b.nums.items():
                k = (i + j) % K
                out[k] = out.get(k, 0) + x * y
        return Cyclo.from_integers(K, out, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        raise TypeError("exact division only by rationals")

    def conj(self) -> "Cyclo":
        return Cyclo.from_integers(self.K, {(-k) % self.K: v for k, v in self.nums.items()}, self.den)

    # canonical form
    def _canonical_ints(self) -> dict[int, int]:
        K = self.K
        phi = cyclotomic_poly(K)
        deg = len(phi) - 1
        if all(k < deg for k in self.nums):
            return dict(self.nums)
        poly = [0] * K
        for k, v in self.nums.items():
            poly[k] += v
        nz = [(j, c) for j, c in enumerate(phi) if c]
        for i in range(K - 1, deg - 1, -1):
            c = poly[i]
            if c:
                base = i - deg
                for j, pj in nz:
                    poly[base + j] -= c * pj
        return {k: poly[k] for k in range(deg) if poly[k]}

    def canonical(self) -> tuple[tuple[int, Fraction], ...]:
        """Coefficients of the remainder modulo Phi_K, as sorted (exponent, value)."""
        if self._canon is None:
            ints = self._canonical_ints()
            self._canon = tuple((k, Fraction(v, self.den)) for k, v in sorted(ints.items()))
        return self._canon

    def compact(self) -> "Cyclo":
        """Canonical representative with the same value (never more terms).

        Skipped above COMPACT_LIMIT, where the reduction costs more than it saves.
        """
        if len(self.nums) <= 1 or self.K > COMPACT_LIMIT:
            return self
        ints = self._canonical_ints()
        if len(ints) >= len(self.nums):
            return self
        return Cyclo.from_integers(self.K, ints, self.den)

    def is_zero(self) -> bool:
        return not self.nums or not self._canonical_ints()

    def __eq__(self, other) -> bool:
        try:
            return (self - Cyclo.coerce(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        r = self.as_fraction()
        if r is not None:
            return hash(r)
        raise TypeError("only rational cyclotomic numbers are hashable")

    def is_real(self) -> bool:
        return (self - self.conj()).is_zero()

    def as_fraction(self) -> Fraction | None:
        """The rational value, or None if not rational."""
        if not self.nums:
            return Fraction(0)
        if len(self.nums) == 1 and 0 in self.nums:
            return Fraction(self.nums[0], self.den)
        c = self._canonical_ints()
        if not c:
            return Fraction(0)
        if len(c) == 1 and 0 in c:
            return Fraction(c[0], self.den)
        return None

    def __complex__(self) -> complex:
        K = self.K
        return sum((v * cmath.exp(2j * math.pi * k / K) for k, v in self.nums.items()), 0j) / self.den

    def high_precision(self, dps: int = 60) -> mpmath.mpc:
        with mpmath.workdps(dps):
            z = mpmath.mpc(0)
            for k, v in self.nums.items():
                z += mpmath.mpf(v) * mpmath.expjpi(mpmath.mpf(2 * k) / self.K)
            return z / self.den

    def sign(self) -> int:
        """Sign of a real element: exact zero test, then floating evaluation with
        a rounding bound, escalating to high precision when that is inconclusive."""
        if not self.is_real():
            raise ValueError("sign of a non-real cyclotomic number")
        r = self.as_fraction()
        if r is not None:
            return (r > 0) - (r < 0)
        x = complex(self).real
        err = 1e-13 * (1 + sum(abs(v) for v in self.nums.values()) / self.den)
        if abs(x) > err:
            return 1 if x > 0 else -1
        dps = 60
        while True:
            y = self.high_precision(dps).real
            if abs(y) > mpmath.mpf(10) ** (-(dps // 2)):
                return 1 if y > 0 else -1
            dps *= 2
            if dps > 2000:
                raise ArithmeticError("could not resolve sign of a nonzero algebraic number")

    def __repr__(self) -> str:
        r = self.as_fraction()
        if r is not None:
            return f"Cyclo({r})"
        body = " + ".join(f"{v}*z{self.K}^{k}" for k, v in self.canonical())
        return f"Cyclo({body})"


def degree(K: int) -> int:
    return totient(K)
