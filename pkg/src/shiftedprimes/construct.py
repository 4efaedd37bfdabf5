"""Assembly of Psi and its sharp variant, spectral profiling and the cosine
polynomial certificate.

Psi(n) = Lambda'(n+1) Lambda_{T^c1}(n-1) H_{T^c1}(n) D_{T^c2}(n) E(n) w(n) on 1..N,
where Lambda' is log p on primes, E(n) = 1_{q1 | n} (q1 = 1 unless the damping
is exceptional) and w is the smooth weight. The sharp variant replaces
Lambda'(n+1) by the sharp approximant at n+1.

From Psi one gets a nonnegative cosine polynomial on the shifted primes:
T(x) = (delta1 N + sum Psi(n) cos 2 pi n x) / (delta1 N + sum Psi), whose
constant term is delta1 / (delta1 + delta2).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .approximants import H_trunc_values, SharpApproximant, lambda_trunc_values
from .arith import primes_upto
from .damping import DampingBuild, DampingCombination, build_damping
from .expweight import WeightConfig
from .zeros import ZeroSet

NOMINAL_EXPONENTS = (1e-2, 1e-4, 1e-6)
DEMO_EXPONENTS = (0.5, 0.25, 0.02)
FACTORS = ("lambda_prime", "lambda_Q", "H", "D", "E", "w")
SHARP_SIGMA_MAX = 1 / 48
MAX_GRID = 1 << 22


@dataclass
class PsiConfig:
    N: int
    T: float
    exponents: tuple[float, float, float] = NOMINAL_EXPONENTS
    zeros: ZeroSet = field(default_factory=ZeroSet)
    M_eff: float = 10.0
    exceptional: bool | None = None
    q1: int | None = None
    gridsize: int | None = None
    damping_depth: int = 3
    tau_max: float = 1 / 120
    factors: tuple[str, ...] = FACTORS

    def __post_init__(self):
        c1, c2, c3 = self.exponents
        if not 0 < c3 < c2 / 12:
            raise ValueError("exponents need 0 < c3 < c2 / 12")
        if min(c1, c2, c3) <= 0:
            raise ValueError("exponents must be positive")
        if self.N < 16:
            raise ValueError("N must be at least 16")
        if not 1 < self.T <= self.N**self.tau_max:
            raise ValueError(f"T must lie in (1, N^{self.tau_max:g}]")
        unknown = set(self.factors) - set(FACTORS)
        if unknown:
            raise ValueError(f"unknown factors {sorted(unknown)}")
        if self.gridsize is not None and (self.gridsize & (self.gridsize - 1) or self.gridsize < 2 * self.N):
            raise ValueError("gridsize must be a power of two >= 2N")

    @classmethod
    def demo(cls, N: int, Q1: float = 30.0, **kw) -> "PsiConfig":
        """Override exponents so that T^c1 = Q1 and the truncations are nontrivial."""
        c1 = DEMO_EXPONENTS[0]
        T = Q1 ** (1 / c1)
        tau = math.log(T) / math.log(N)
        return cls(N, T, DEMO_EXPONENTS, tau_max=max(tau * (1 + 1e-12), 1 / 120), **kw)

    @property
    def Q1(self) -> float:
        return self.T ** self.exponents[0]

    @property
    def Q2(self) -> float:
        return self.T ** self.exponents[1]

    def deviations(self) -> list[str]:
        out = []
        if tuple(self.exponents) != NOMINAL_EXPONENTS:
            out.append(f"exponents overridden to {tuple(self.exponents)}")
        if self.tau_max != 1 / 120:
            out.append(f"T guard relaxed to N^{self.tau_max:.6g}")
        out.append(f"M_eff = {self.M_eff:g} replaces M")
        out.append(f"damping depth {self.damping_depth}")
        if set(self.factors) != set(FACTORS):
            out.append(f"factors restricted to {sorted(self.factors)}")
        return out

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "T": self.T,
            "exponents": list(self.exponents),
            "Q1": self.Q1,
            "Q2": self.Q2,
            "M_eff": self.M_eff,
            "exceptional": self.exceptional,
            "q1": self.q1,
            "gridsize": self.gridsize,
            "damping_depth": self.damping_depth,
            "factors": list(self.factors),
            "zeros": len(self.zeros),
            "zero_source": self.zeros.source,
        }


@dataclass
class PsiBuild:
    config: PsiConfig
    variant: str
    values: np.ndarray
    components: dict[str, np.ndarray]
    damping: DampingBuild | None
    q1: int
    notes: list[str] = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.config.N

    @property
    def total(self) -> float:
        return float(np.sum(self.values))

    def support(self) -> np.ndarray:
        """n in 1..N with Psi(n) != 0."""
        return np.nonzero(self.values)[0] + 1

    def support_ok(self) -> bool:
        """Every n in the support has n + 1 prime."""
        s = self.support()
        primes = np.zeros(self.N + 2, dtype=bool)
        primes[primes_upto(self.N + 1)] = True
        return bool(np.all(primes[s + 1]))


def _lambda_prime(ns: np.ndarray) -> np.ndarray:
    out = np.zeros(len(ns))
    hi = int(ns.max()) if len(ns) else 0
    is_p = np.zeros(hi + 1, dtype=bool)
    is_p[primes_upto(hi)] = True
    mask = is_p[ns]
    out[mask] = np.log(ns[mask].astype(float))
    return out


def damping_values(D: DampingCombination, ns: np.ndarray) -> np.ndarray:
    out = np.zeros(len(ns), dtype=complex)
    for atom, w in D.atoms.items():
        r, b = atom.r, atom.b
        mask = ns % r == 0
        if b == 0:
            out[mask] += w * r ** (5 / 6)
        else:
            ph = (b * (ns[mask] % r**3)) % r**3 / r**3
            out[mask] += w * r ** (5 / 6) * np.exp(2j * np.pi * ph)
    return out


def build_psi(cfg: PsiConfig, variant: str = "lambda_prime") -> PsiBuild:
    if variant not in ("lambda_prime", "lambda_sharp"):
        raise ValueError("variant must be lambda_prime or lambda_sharp")
    N = cfg.N
    ns = np.arange(1, N + 1, dtype=np.int64)
    comps: dict[str, np.ndarray] = {}
    notes = cfg.deviations()
    on = set(cfg.factors)
    if "lambda_prime" in on:
        if variant == "lambda_prime":
            comps["lambda_prime"] = _lambda_prime(ns + 1)
        else:
            sharp = SharpApproximant.from_zeros(cfg.zeros, Q=cfg.T, sigma_max=SHARP_SIGMA_MAX)
            vals = sharp.values(ns + 1)
            if np.max(np.abs(vals.imag), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(vals.real))):
                raise ValueError("sharp approximant is not real")
            comps["lambda_sharp"] = vals.real
    if "lambda_Q" in on:
        comps["lambda_Q"] = lambda_trunc_values(cfg.Q1, ns - 1)
    if "H" in on:
        comps["H"] = H_trunc_values(cfg.Q1, ns)
    damping = None
    q1 = 1
    if "D" in on or "E" in on:
        zs = cfg.zeros.selected(cfg.T, SHARP_SIGMA_MAX)
        damping = build_damping(zs, N=N, m_max=cfg.damping_depth, M_eff=cfg.M_eff, exceptional=cfg.exceptional)
        notes.extend(damping.notes)
        if damping.exceptional:
            q1 = cfg.q1 if cfg.q1 is not None else damping.terms[0].character.modulus
    if "D" in on:
        Dt = damping.D.truncate(cfg.Q2)
        vals = damping_values(Dt, ns)
        if np.max(np.abs(vals.imag), initial=0.0) > 1e-9:
            raise ValueError("damping term is not real")
        comps["D"] = vals.real
    if "E" in on:
        comps["E"] = (ns % q1 == 0).astype(float)
    if "w" in on:
        comps["w"] = WeightConfig(N).values()
    values = np.ones(N)
    for v in comps.values():
        values = values * v
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite factor")
    return PsiBuild(cfg, variant, values, comps, damping, q1, notes)


def build_from_values(values: Sequence[float], label: str = "custom") -> PsiBuild:
    """Wrap explicit values Psi(1..N) so they can be profiled and certified."""
    values = np.asarray(values, dtype=float)
    N = len(values)
    cfg = PsiConfig.__new__(PsiConfig)
    cfg.N, cfg.T, cfg.exponents, cfg.zeros = N, 1.0, NOMINAL_EXPONENTS, ZeroSet(source=label)
    cfg.M_eff, cfg.exceptional, cfg.q1, cfg.gridsize = 0.0, None, None, None
    cfg.damping_depth, cfg.tau_max, cfg.factors = 0, 0.0, ()
    return PsiBuild(cfg, label, values, {}, None, 1, [f"explicit values ({label})"])


# spectral profile


def cosine_sums(values: np.ndarray, gridsize: int) -> np.ndarray:
    """sum_{n=1}^N values[n-1] cos(2 pi k n / G) for k = 0..G-1."""
    buf = np.zeros(gridsize)
    buf[1 : len(values) + 1] = values
    half = np.fft.rfft(buf).real
    return np.concatenate([half, half[1 : gridsize - len(half) + 1][::-1]])


def cosine_sum_direct(values: np.ndarray, thetas) -> np.ndarray:
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n = np.arange(1, len(values) + 1)
    out = np.empty(len(thetas))
    for i, t in enumerate(thetas):
        out[i] = float(np.dot(values, np.cos(2 * np.pi * ((n * t) % 1.0))))
    return out


@dataclass
class SpectralProfile:
    minimum: float
    argmin: float
    delta1: float
    delta2: float
    gridsize: int
    crosscheck: float


def default_gridsize(N: int) -> int:
    return 1 << max(1, math.ceil(math.log2(2 * N)))


def spectral_profile(b: PsiBuild, gridsize: int | None = None, seed: int = 0) -> SpectralProfile:
    N = b.N
    G = gridsize or b.config.gridsize or default_gridsize(N)
    if G & (G - 1) or G < 2 * N:
        raise ValueError("gridsize must be a power of two >= 2N")
    S = cosine_sums(b.values, G)
    k = int(np.argmin(S))
    lo = float(S[k])
    rng = np.random.default_rng(seed)
    ks = rng.integers(0, G, 16)
    direct = cosine_sum_direct(b.values, ks / G)
    scale = max(1.0, float(np.sum(np.abs(b.values))))
    cross = float(np.max(np.abs(direct - S[ks]))) / scale
    return SpectralProfile(lo, k / G, max(0.0, -lo / N), b.total / N, G, cross)


# cosine certificate


@dataclass
class CosinePolynomial:
    a0: float
    shifts: np.ndarray
    coeffs: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.full(len(x), self.a0)
        for lo in range(0, len(x), 256):
            xs = x[lo : lo + 256]
            ph = np.outer(xs, self.shifts) % 1.0
            out[lo : lo + 256] += np.cos(2 * np.pi * ph) @ self.coeffs
        return out

    def derivatives(self, x: float) -> tuple[float, float, float]:
        ph = 2 * np.pi * ((self.shifts * x) % 1.0)
        w = 2 * np.pi * self.shifts
        c, s = np.cos(ph), np.sin(ph)
        return (
            self.a0 + float(c @ self.coeffs),
            -float((w * s) @ self.coeffs),
            -float((w * w * c) @ self.coeffs),
        )

    @property
    def at_zero(self) -> float:
        return self.a0 + math.fsum(self.coeffs)

    @property
    def lipschitz(self) -> float:
        return 2 * math.pi * math.fsum(np.abs(self.shifts * self.coeffs))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["shift", "coefficient"])
        w.writerow([0, repr(self.a0)])
        for s, c in zip(self.shifts, self.coeffs):
            w.writerow([int(s), repr(float(c))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CosinePolynomial":
        rows = list(csv.reader(io.StringIO(text)))[1:]
        a0 = float(rows[0][1])
        shifts = np.array([int(r[0]) for r in rows[1:]], dtype=np.int64)
        coeffs = np.array([float(r[1]) for r in rows[1:]])
        return cls(a0, shifts, coeffs)


@dataclass
class CosineCertificate:
    polynomial: CosinePolynomial
    delta1: float
    delta2: float
    minimum: float
    argmin: float
    certified_min: float
    gridsize: int
    depth: int
    cells: int
    ok: bool
    notes: list[str] = field(default_factory=list)

    @property
    def a0(self) -> float:
        return self.polynomial.a0

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("polynomial")
        d["a0"] = self.a0
        d["T0"] = self.polynomial.at_zero
        d["lipschitz"] = self.polynomial.lipschitz
        return d


def _golden_min(f, a: float, b: float, iters: int = 60) -> float:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def _local_min(S: CosinePolynomial, x: float, h: float) -> tuple[float, float]:
    """Golden-section on [x - h, x + h], then Newton steps on the derivative."""
    x = _golden_min(lambda t: float(S(t)[0]), x - h, x + h)
    for _ in range(30):
        _, d1, d2 = S.derivatives(x)
        if d2 <= 0:
            break
        step = d1 / d2
        if abs(step) > h:
            break
        x -= step
        if abs(step) < 1e-18:
            break
    return float(S(x)[0]), x % 1.0


def cosine_certificate(
    b: PsiBuild,
    gridsize: int | None = None,
    max_grid: int = MAX_GRID,
    tol: float = 1e-9,
    max_depth: int = 64,
    max_cells: int = 1 << 15,
) -> CosineCertificate:
    """Normalized cosine polynomial and a certified lower bound for it.

    The sum S(x) = sum Psi(n) cos 2 pi n x is minimized on a grid, the minimum
    refined locally, and delta1 = max(0, -min S / N). On a cell of width h, T is
    at least the endpoint average minus (h/2) 2 pi sum n |a_n|, and at least the
    smaller endpoint minus (h^2/8) 4 pi^2 sum n^2 |a_n|. Cells whose better
    bound is below -tol are bisected; the grid doubles (up to max_grid) while
    too many cells need bisection.
    """
    N = b.N
    shifts = b.support().astype(np.int64)
    psi = b.values[shifts - 1]
    total = b.total
    G = gridsize or b.config.gridsize or default_gridsize(N)
    notes: list[str] = []
    raw = CosinePolynomial(0.0, shifts, psi)
    vals = cosine_sums(b.values, G)
    k = int(np.argmin(vals))
    m, xm = _local_min(raw, k / G, 1 / G)
    if float(vals[k]) < m:
        m, xm = float(vals[k]), k / G
    Gc = G
    for _ in range(16):
        delta1 = max(0.0, -m / N)
        Z = delta1 * N + total
        if Z <= 0:
            raise ValueError("delta1 N + sum Psi must be positive")
        T = CosinePolynomial(delta1 * N / Z, shifts, psi / Z)
        while True:
            grid_vals = (delta1 * N + cosine_sums(b.values, Gc)) / Z
            res = _certify(T, grid_vals, Gc, tol, max_depth, max_cells)
            if res.status != "cells" or Gc >= max_grid:
                break
            Gc *= 2
        if res.status != "negative":
            break
        m2, x2 = _local_min(raw, res.witness, 1 / Gc)
        if m2 >= m:
            m2, x2 = float(raw(res.witness)[0]), res.witness
        if m2 >= m:
            break
        notes.append(f"grid missed a deeper minimum at x={x2:.12f}; delta1 updated")
        m, xm = m2, x2
    ok = res.status == "ok" and res.certified >= -tol and abs(T.at_zero - 1) <= 1e-12
    if not ok:
        notes.append(f"certification failed ({res.status}) at depth {res.depth}, grid {Gc}")
    return CosineCertificate(T, delta1, total / N, m, xm, res.certified, Gc, res.depth, res.cells, ok, notes)


@dataclass
class _Certification:
    status: str
    certified: float
    depth: int
    cells: int
    witness: float | None = None


def _certify(T: CosinePolynomial, grid_vals: np.ndarray, G: int, tol: float, max_depth: int, max_cells: int) -> _Certification:
    L = T.lipschitz
    M2 = 4 * math.pi**2 * math.fsum(np.abs(T.shifts.astype(float) ** 2 * T.coeffs))
    h = 1.0 / G

    def bounds(flo, fhi, h):
        first = (flo + fhi) / 2 - L * h / 2
        second = np.minimum(flo, fhi) - M2 * h * h / 8
        return np.maximum(first, second)

    flo = grid_vals
    fhi = np.roll(grid_vals, -1)
    if grid_vals.min() < -tol:
        i = int(np.argmin(grid_vals))
        return _Certification("negative", float(grid_vals[i]), 0, 0, i / G)
    bound = bounds(flo, fhi, h)
    bad = bound < -tol
    certified = float(bound[~bad].min()) if (~bad).any() else math.inf
    lo = np.nonzero(bad)[0] / G
    flo, fhi = flo[bad], fhi[bad]
    depth, visited = 0, len(lo)
    while len(lo):
        if len(lo) > max_cells:
            return _Certification("cells", float(bounds(flo, fhi, h).min()), depth, visited)
        depth += 1
        if depth > max_depth:
            return _Certification("depth", float(bounds(flo, fhi, h).min()), depth, visited)
        h /= 2
        mid = T(lo + h)
        if mid.min() < -tol:
            i = int(np.argmin(mid))
            return _Certification("negative", float(mid[i]), depth, visited, float(lo[i] + h))
        lo = np.concatenate([lo, lo + h])
        flo, fhi = np.concatenate([flo, mid]), np.concatenate([mid, fhi])
        bound = bounds(flo, fhi, h)
        bad = bound < -tol
        if (~bad).any():
            certified = min(certified, float(bound[~bad].min()))
        lo, flo, fhi = lo[bad], flo[bad], fhi[bad]
        visited += len(lo)
    return _Certification("ok", certified, depth, visited)


def lower_bound(
    T: CosinePolynomial, grid_vals: np.ndarray, G: int, tol: float, max_depth: int = 64, max_cells: int = 1 << 16
) -> tuple[float, float, float, bool]:
    """Rigorous lower bound for min T within tol of the smallest value seen.

    Returns (bound, smallest value, its argument, finished).
    """
    L = T.lipschitz
    M2 = 4 * math.pi**2 * math.fsum(np.abs(T.shifts.astype(float) ** 2 * T.coeffs))
    h = 1.0 / G
    i = int(np.argmin(grid_vals))
    best, best_x = float(grid_vals[i]), i / G
    flo, fhi = grid_vals, np.roll(grid_vals, -1)
    lo = np.arange(G) / G
    bound = np.maximum((flo + fhi) / 2 - L * h / 2, np.minimum(flo, fhi) - M2 * h * h / 8)
    done = math.inf
    for depth in range(max_depth + 1):
        open_ = bound < best - tol
        if (~open_).any():
            done = min(done, float(bound[~open_].min()))
        lo, flo, fhi = lo[open_], flo[open_], fhi[open_]
        if not len(lo):
            return min(done, best), best, best_x, True
        if len(lo) > max_cells or depth == max_depth:
            return min(done, float(bound[open_].min())), best, best_x, False
        h /= 2
        mid = T(lo + h)
        j = int(np.argmin(mid))
        if mid[j] < best:
            best, best_x = float(mid[j]), float(lo[j] + h)
        lo = np.concatenate([lo, lo + h])
        flo, fhi = np.concatenate([flo, mid]), np.concatenate([mid, fhi])
        bound = np.maximum((flo + fhi) / 2 - L * h / 2, np.minimum(flo, fhi) - M2 * h * h / 8)
    return done, best, best_x, False


# reports


@dataclass
class PsiReport:
    config: dict
    variant: str
    deviations: list[str]
    support_ok: bool | None
    delta1: float
    delta2: float
    minimum: float
    argmin: float
    a0: float
    T0: float
    certified_min: float
    certificate_ok: bool
    gridsize: int
    crosscheck: float
    exceptional: bool
    q1: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


def psi_report(b: PsiBuild, prof: SpectralProfile, cert: CosineCertificate) -> PsiReport:
    support = b.support_ok() if "lambda_prime" in b.components else None
    exc = bool(b.damping.exceptional) if b.damping else False
    return PsiReport(
        b.config.to_dict(),
        b.variant,
        b.notes + cert.notes,
        support,
        cert.delta1,
        cert.delta2,
        cert.minimum,
        cert.argmin,
        cert.a0,
        cert.polynomial.at_zero,
        cert.certified_min,
        cert.ok,
        cert.gridsize,
        prof.crosscheck,
        exc,
        b.q1,
    )


def spectral_gap(b1: PsiBuild, b2: PsiBuild, gridsize: int = 1 << 12) -> tuple[float, float]:
    """sup over a theta grid of |sum (Psi1 - Psi2) cos|, and the N T^(-1/20) scale."""
    N = b1.N
    G = max(gridsize, default_gridsize(N))
    diff = cosine_sums(b1.values - b2.values, G)
    step = G // gridsize if G >= gridsize else 1
    return float(np.max(np.abs(diff[::step]))), N * b1.config.T ** (-1 / 20)


def forward_check(cert: CosineCertificate, set_size: int, N: int) -> bool:
    """A difference-avoiding set of the given size satisfies |A| <= 2 a0 N."""
    return set_size <= 2 * cert.a0 * N + 1e-9 * N
