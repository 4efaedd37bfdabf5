"""Rational Fourier series of periodic functions on the integers.

A series is a finite map from frequencies in Q/Z (stored as Fractions in
[0, 1)) to coefficients, so that f(n) = sum over lambda of c(lambda) e(lambda n).
Coefficients are exact cyclotomic numbers or complex floats.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import lcm
from .cyclotomic import Cyclo

MAX_PERIOD = 2**31
DENSE_CAP = 2**25
EXACT_SAMPLE_CAP = 4096
FLOAT_TOL = 1e-9
_DROP = 1e-13


def e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


def _freq(a: int, q: int) -> Fraction:
    if q < 1:
        raise ValueError("frequency denominator must be positive")
    if q > MAX_PERIOD:
        raise OverflowError(f"period {q} exceeds 2^31")
    return Fraction(a % q, q)


def _check_period(M: int) -> int:
    if M > MAX_PERIOD:
        raise OverflowError(f"period {M} exceeds 2^31")
    return M


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, Cyclo, np.integer)) and not isinstance(x, bool)


def _exact(x) -> Cyclo:
    if isinstance(x, np.integer):
        x = int(x)
    return Cyclo.coerce(x)


class FourierSeries:
    """Finite rational Fourier series with exact or float coefficients."""

    __slots__ = ("terms", "exact", "_period", "_order_k")

    def __init__(self, terms: dict[Fraction, object] | None = None, exact: bool = True, drop: float = _DROP):
        self.exact = exact
        out: dict[Fraction, object] = {}
        for lam, c in (terms or {}).items():
            lam = Fraction(lam) % 1
            _check_period(lam.denominator)
            if exact:
                c = _exact(c).compact()
                if c.is_zero():
                    continue
            else:
                c = complex(c)
                if abs(c) <= drop:
                    continue
            out[lam] = c
        self.terms = dict(sorted(out.items()))
        self._period: int | None = None
        self._order_k: int | None = None

    # constructors
    @classmethod
    def constant(cls, c=1, exact: bool | None = None) -> "FourierSeries":
        if exact is None:
            exact = _is_exact_scalar(c)
        return cls({Fraction(0): c}, exact=exact)

    @classmethod
    def zero(cls, exact: bool = True) -> "FourierSeries":
        return cls({}, exact=exact)

    @classmethod
    def divisibility(cls, r: int, exact: bool = True) -> "FourierSeries":
        """1_{r | n}: coefficient 1/r at every a/r."""
        c = Fraction(1, r)
        return cls({_freq(a, r): c for a in range(r)}, exact=exact)

    @classmethod
    def exponential(cls, lam: Fraction, coeff=1, exact: bool = True) -> "FourierSeries":
        """coeff * e(lam n)."""
        lam = Fraction(lam)
        return cls({lam: coeff}, exact=exact)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], M: int, exact: bool | None = None) -> "FourierSeries":
        return from_samples([fn(n) for n in range(M)], exact=exact)

    # inspection
    def coeff(self, lam) -> object:
        lam = Fraction(lam) % 1
        if lam in self.terms:
            return self.terms[lam]
        return Cyclo.rational(0) if self.exact else 0j

    def frequencies(self) -> list[Fraction]:
        return list(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def period(self) -> int:
        if self._period is None:
            self._period = lcm(*{lam.denominator for lam in self.terms}) if self.terms else 1
        return self._period

    @property
    def support(self) -> int:
        return max((lam.denominator for lam in self.terms), default=1)

    @property
    def average(self):
        c = self.coeff(0)
        if self.exact:
            r = c.as_fraction()
            return r if r is not None else complex(c)
        return c

    def evaluate(self, n: int):
        if self.exact:
            K = self._order()
            den = _common_den(self.terms.values())
            acc: dict[int, int] = {}
            for lam, c in self.terms.items():
                shift = (lam.numerator * (K // lam.denominator) * n) % K
                step = K // c.K
                sc = den // c.den
                for k, v in c.nums.items():
                    idx = (k * step + shift) % K
                    acc[idx] = acc.get(idx, 0) + v * sc
            return Cyclo.from_integers(K, acc, den).compact()
        return sum((c * e(float(lam * n % 1)) for lam, c in self.terms.items()), 0j)

    def _order(self) -> int:
        if self._order_k is None:
            self._order_k = lcm(self.period, *{c.K for c in self.terms.values()})
        return self._order_k

    def samples(self, M: int | None = None) -> list:
        M = self.period if M is None else M
        if M % self.period:
            raise ValueError(f"{M} is not a multiple of the period {self.period}")
        if self.exact:
            return [self.evaluate(n) for n in range(M)]
        return list(self.dense_samples(M))

    def dense_coefficients(self, M: int) -> np.ndarray:
        if M > DENSE_CAP:
            raise MemoryError(f"dense period {M} exceeds the cap {DENSE_CAP}")
        if M % self.period:
            raise ValueError(f"{M} is not a multiple of the period {self.period}")
        arr = np.zeros(M, dtype=complex)
        for lam, c in self.terms.items():
            arr[lam.numerator * (M // lam.denominator)] += complex(c)
        return arr

    def dense_samples(self, M: int | None = None) -> np.ndarray:
        M = self.period if M is None else M
        return np.fft.ifft(self.dense_coefficients(M)) * M

    # algebra
    def _coerce_pair(self, other: "FourierSeries") -> tuple["FourierSeries", "FourierSeries", bool]:
        if self.exact and other.exact:
            return self, other, True
        return self.to_float(), other.to_float(), False

    def __add__(self, other) -> "FourierSeries":
        if not isinstance(other, FourierSeries):
            other = FourierSeries.constant(other)
        a, b, exact = self._coerce_pair(other)
        out = dict(a.terms)
        for lam, c in b.terms.items():
            out[lam] = out[lam] + c if lam in out else c
        return FourierSeries(out, exact=exact)

    __radd__ = __add__

    def __neg__(self) -> "FourierSeries":
        return FourierSeries({lam: -c for lam, c in self.terms.items()}, exact=self.exact)

    def __sub__(self, other) -> "FourierSeries":
        if not isinstance(other, FourierSeries):
            other = FourierSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "FourierSeries":
        return (-self) + other

    def scale(self, s) -> "FourierSeries":
        if self.exact and _is_exact_scalar(s):
            s = _exact(s)
            return FourierSeries({lam: c * s for lam, c in self.terms.items()}, exact=True)
        base = self.to_float()
        s = complex(s)
        return FourierSeries({lam: c * s for lam, c in base.terms.items()}, exact=False)

    def __mul__(self, other) -> "FourierSeries":
        if isinstance(other, FourierSeries):
            return product(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "FourierSeries":
        if self.exact and isinstance(s, (int, Fraction)):
            return self.scale(1 / Fraction(s))
        return self.scale(1 / complex(s))

    def conj(self) -> "FourierSeries":
        """Series of the complex conjugate function."""
        if self.exact:
            return FourierSeries({-lam: c.conj() for lam, c in self.terms.items()}, exact=True)
        return FourierSeries({-lam: c.conjugate() for lam, c in self.terms.items()}, exact=False)

    def real_part(self) -> "FourierSeries":
        return (self + self.conj()) * Fraction(1, 2)

    def shift(self, h: int) -> "FourierSeries":
        """n -> f(n + h): coefficients pick up e(h lambda)."""
        if self.exact:
            return FourierSeries(
                {lam: c * Cyclo.root(lam.numerator * h, lam.denominator) for lam, c in self.terms.items()},
                exact=True,
            )
        return FourierSeries({lam: c * e(float(lam * h % 1)) for lam, c in self.terms.items()}, exact=False)

    def twist(self, theta) -> "FourierSeries":
        """n -> e(theta n) f(n): frequencies move by theta."""
        theta = Fraction(theta)
        return FourierSeries({lam + theta: c for lam, c in self.terms.items()}, exact=self.exact)

    def to_float(self) -> "FourierSeries":
        if not self.exact:
            return self
        return FourierSeries({lam: complex(c) for lam, c in self.terms.items()}, exact=False)

    # norms
    def abs_coefficients(self) -> list:
        out = []
        for c in self.terms.values():
            if self.exact:
                r = c.as_fraction()
                out.append(abs(r) if r is not None else abs(complex(c)))
            else:
                out.append(abs(c))
        return out

    def wedge_inf(self):
        return max(self.abs_coefficients(), default=0)

    def wedge_one(self):
        return sum(self.abs_coefficients(), Fraction(0) if self.exact else 0.0)

    def is_real_valued(self, tol: float = FLOAT_TOL) -> bool:
        diff = self - self.conj()
        if self.exact:
            return not diff.terms
        return diff.wedge_inf() <= tol

    def is_fourier_positive(self, tol: float = 0.0) -> bool:
        return bool(dominates(FourierSeries.zero(self.exact), self, tol))

    def allclose(self, other: "FourierSeries", tol: float = FLOAT_TOL) -> bool:
        if self.exact and other.exact and tol == 0:
            return not (self - other).terms
        return (self.to_float() - other.to_float()).wedge_inf() <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return self.allclose(other, 0.0 if (self.exact and other.exact) else FLOAT_TOL)

    __hash__ = None

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"FourierSeries<{kind}, {len(self.terms)} terms, period {self.period}>"

    # serialization
    def to_dict(self) -> dict:
        rows = []
        for lam, c in self.terms.items():
            row = {"a": lam.numerator, "q": lam.denominator}
            if self.exact:
                r = c.as_fraction()
                if r is not None:
                    row["re"], row["im"] = str(r), "0"
                else:
                    z = complex(c)
                    row["re"], row["im"] = z.real, z.imag
                    row["cyclo"] = {"K": c.K, "terms": [[k, str(v)] for k, v in c.canonical()]}
            else:
                row["re"], row["im"] = c.real, c.imag
            rows.append(row)
        return {"terms": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "FourierSeries":
        terms = {}
        exact = all(isinstance(r["re"], str) and isinstance(r["im"], str) or "cyclo" in r for r in d["terms"])
        for r in d["terms"]:
            lam = _freq(int(r["a"]), int(r["q"]))
            if "cyclo" in r:
                c = Cyclo(r["cyclo"]["K"], {int(k): Fraction(v) for k, v in r["cyclo"]["terms"]})
            elif exact:
                c = Cyclo.rational(Fraction(r["re"])) + Cyclo.root(1, 4, Fraction(r["im"]))
            else:
                c = complex(float(r["re"]), float(r["im"]))
            terms[lam] = c if exact else complex(c)
        return cls(terms, exact=exact)

    @classmethod
    def from_json(cls, s: str) -> "FourierSeries":
        return cls.from_dict(json.loads(s))


def _common_den(cyclos) -> int:
    den = 1
    for c in cyclos:
        d = c.den
        if den % d:
            den = den * d // math.gcd(den, d)
    return den


def from_samples(values: Sequence, exact: bool | None = None) -> FourierSeries:
    """Series of the M-periodic function with the given values on 0..M-1."""
    M = len(values)
    if M == 0:
        raise ValueError("empty sample list")
    _check_period(M)
    if exact is None:
        exact = all(_is_exact_scalar(v) for v in values)
    if not exact:
        arr = np.asarray([complex(v) for v in values], dtype=complex)
        coeffs = np.fft.fft(arr) / M
        scale = max(1.0, float(np.max(np.abs(arr))))
        return FourierSeries(
            {_freq(j, M): coeffs[j] for j in np.nonzero(np.abs(coeffs) > _DROP * scale)[0]},
            exact=False,
        )
    if M > EXACT_SAMPLE_CAP:
        raise MemoryError(f"exact transform of period {M} exceeds {EXACT_SAMPLE_CAP}; use float mode")
    vals = [_exact(v) for v in values]
    K = M
    for v in vals:
        K = lcm(K, v.K)
    step_n = K // M
    den = _common_den(vals)
    lifted = [[(k * (K // v.K), x * (den // v.den)) for k, x in v.nums.items()] for v in vals]
    terms = {}
    for j in range(M):
        acc: dict[int, int] = {}
        for n, vt in enumerate(lifted):
            if not vt:
                continue
            shift = (-j * n * step_n) % K
            for k, x in vt:
                idx = (k + shift) % K
                acc[idx] = acc.get(idx, 0) + x
        if acc:
            terms[_freq(j, M)] = Cyclo.from_integers(K, acc, den * M)
    return FourierSeries(terms, exact=True)


def product(f: FourierSeries, g: FourierSeries) -> FourierSeries:
    """Series of the pointwise product (convolution over Q/Z)."""
    if not f.terms or not g.terms:
        return FourierSeries.zero(f.exact and g.exact)
    a, b, exact = f._coerce_pair(g)
    L = _check_period(lcm(a.period, b.period))
    if exact:
        if L <= 512 and len(a) * len(b) > 2 * L * L // 3:
            sa, sb = a.samples(L), b.samples(L)
            return from_samples([x * y for x, y in zip(sa, sb)], exact=True)
        acc: dict[Fraction, Cyclo] = {}
        for l1, c1 in a.terms.items():
            for l2, c2 in b.terms.items():
                lam = (l1 + l2) % 1
                cc = c1 * c2
                acc[lam] = acc[lam] + cc if lam in acc else cc
        return FourierSeries(acc, exact=True)
    if L <= DENSE_CAP and len(a) * len(b) > 4 * L:
        s = a.dense_samples(L) * b.dense_samples(L)
        coeffs = np.fft.fft(s) / L
        scale = max(1.0, float(a.wedge_one() * b.wedge_one()))
        keep = np.nonzero(np.abs(coeffs) > _DROP * scale)[0]
        return FourierSeries({_freq(int(j), L): coeffs[j] for j in keep}, exact=False)
    acc2: dict[Fraction, complex] = {}
    for l1, c1 in a.terms.items():
        for l2, c2 in b.terms.items():
            lam = (l1 + l2) % 1
            acc2[lam] = acc2.get(lam, 0j) + c1 * c2
    return FourierSeries(acc2, exact=False)


def product_all(series: Iterable[FourierSeries]) -> FourierSeries:
    out = None
    for s in series:
        out = s if out is None else product(out, s)
    return FourierSeries.constant(1) if out is None else out


def shift(f: FourierSeries, h: int) -> FourierSeries:
    return f.shift(h)


def norms(f: FourierSeries) -> tuple:
    """(wedge_inf, wedge_one, support, average)."""
    return f.wedge_inf(), f.wedge_one(), f.support, f.average


@dataclass(frozen=True)
class Domination:
    ok: bool
    period: int
    witness: Fraction | None = None
    reason: str = ""
    margin: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def _real_value(c, exact: bool) -> tuple[bool, float]:
    if exact:
        return c.is_real(), complex(c).real
    return True, c.real


def dominates(g: FourierSeries, f: FourierSeries, tol: float = FLOAT_TOL) -> Domination:
    """g < f: f has real coefficients >= -tol and |g^(lam)| <= f^(lam) + tol.

    All frequencies of both series are checked on their common period. Exact
    inputs with tol == 0 are decided exactly.
    """
    exact = f.exact and g.exact and tol == 0
    if not exact:
        f, g = f.to_float(), g.to_float()
    M = lcm(f.period, g.period)
    worst = math.inf
    for lam in sorted(set(f.terms) | set(g.terms)):
        fc = f.coeff(lam)
        gc = g.coeff(lam)
        if exact:
            if not fc.is_real():
                return Domination(False, M, lam, "dominating coefficient is not real")
            if fc.sign() < 0:
                return Domination(False, M, lam, "dominating coefficient is negative", complex(fc).real)
            gap = fc * fc - gc * gc.conj()
            if not gap.is_zero() and gap.sign() < 0:
                return Domination(False, M, lam, "|g| exceeds f", complex(fc).real - abs(complex(gc)))
            worst = min(worst, complex(fc).real - abs(complex(gc)))
        else:
            if abs(fc.imag) > tol:
                return Domination(False, M, lam, "dominating coefficient is not real", -abs(fc.imag))
            if fc.real < -tol:
                return Domination(False, M, lam, "dominating coefficient is negative", fc.real)
            margin = fc.real - abs(gc)
            if margin < -tol:
                return Domination(False, M, lam, "|g| exceeds f", margin)
            worst = min(worst, margin)
    return Domination(True, M, None, "", 0.0 if worst == math.inf else worst)


def equal_on_period(f: FourierSeries, fn: Callable[[int], complex], tol: float = FLOAT_TOL) -> bool:
    """Compare a series against a pointwise definition over one period."""
    M = f.period
    vals = f.dense_samples(M) if not f.exact else [complex(v) for v in f.samples(M)]
    return all(abs(complex(vals[n]) - complex(fn(n))) <= tol for n in range(M))
