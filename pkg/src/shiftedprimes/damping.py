"""Damping atoms Phi_{r,b}, their convex combinations, the character
domination engine and the damping combination D.

Phi_{r,b}(n) = r^(5/6) 1_{r | n} e(b n / r^3) has r Fourier coefficients, each
r^(-1/6), at the frequencies t/r + b/r^3. Convex combinations of atoms are
therefore Fourier-positive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import factorize, lcm, primes_upto, primorial
from .characters import DirichletCharacter, postnikov
from .periodic import MAX_PERIOD, Domination, FourierSeries

GUARD_MODULUS = 2**6 * 3**4 * 5**3 * 7**2 * math.prod(p for p in primes_upto(50) if p > 7)
DENSE_GUARD = 2**24
OMEGA_BIG = 2**18


# omega(p) and M


def omega(p: int) -> int:
    if p == 2:
        return 7
    if p <= 17:
        return 3
    if p <= OMEGA_BIG:
        return 2
    return 1


@dataclass(frozen=True)
class OmegaTable:
    """p -> omega(p) and the product M over all primes."""

    def __call__(self, p: int) -> int:
        return omega(p)

    @property
    def M(self) -> int:
        n19 = len(primes_upto(OMEGA_BIG)) - 7
        return 7 * 3**6 * 2**n19

    @property
    def log2_M(self) -> float:
        return math.log2(7 * 3**6) + (len(primes_upto(OMEGA_BIG)) - 7)

    def M_P(self, q: int) -> int:
        """Product of omega(p) over primes p | q."""
        return math.prod(omega(p) for p, _ in factorize(q)) if q > 1 else 1


def alpha_ladder(p: int, length: int) -> list[float]:
    """alpha_0 = p^(-1/3), alpha_u = p^(-u/3) for u >= 1; times sqrt 2 at p = 2."""
    out = [p ** (-1 / 3)] + [p ** (-u / 3) for u in range(1, length)]
    if p == 2:
        out = [math.sqrt(2) * a for a in out]
    return out


def alpha_tail_bound(p: int) -> float:
    """alpha_0 + the full geometric tail: the worst case of sum_u alpha_u(p)."""
    s = p ** (-1 / 3) + p ** (-1 / 3) / (1 - p ** (-1 / 3))
    return math.sqrt(2) * s if p == 2 else s


# atoms


@dataclass(frozen=True, order=True)
class PhiAtom:
    r: int
    b: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("atom modulus must be positive")
        object.__setattr__(self, "b", self.b % self.r**3)

    @property
    def period(self) -> int:
        return lcm(self.r, Fraction(self.b, self.r**3).denominator)

    def frequencies(self) -> list[Fraction]:
        r = self.r
        base = Fraction(self.b, r**3)
        return [(base + Fraction(t, r)) % 1 for t in range(r)]

    def value(self, n: int) -> complex:
        if n % self.r:
            return 0j
        return self.r ** (5 / 6) * complex(np.exp(2j * np.pi * ((self.b * n) % self.r**3) / self.r**3))

    def samples(self, L: int) -> np.ndarray:
        if L % self.period:
            raise ValueError(f"{L} is not a multiple of the atom period {self.period}")
        r, r3 = self.r, self.r**3
        n = np.arange(L, dtype=np.int64)
        out = np.zeros(L, dtype=complex)
        on = n % r == 0
        ph = (self.b * (n[on] % r3)) % r3
        out[on] = r ** (5 / 6) * np.exp(2j * np.pi * ph / r3)
        return out

    def conj(self) -> "PhiAtom":
        return PhiAtom(self.r, -self.b)

    def twist(self, a: int, s: int) -> "PhiAtom":
        """Phi_{r,b} e(a n / s^3) for s | r."""
        if self.r % s:
            raise ValueError("twist modulus must divide the atom modulus")
        return PhiAtom(self.r, self.b + a * (self.r // s) ** 3)


def atom_series(a: PhiAtom) -> FourierSeries:
    if a.r**3 > MAX_PERIOD and a.period > MAX_PERIOD:
        raise OverflowError(f"atom modulus {a.r} overflows the period guard")
    c = a.r ** (-1 / 6)
    return FourierSeries({lam: c for lam in a.frequencies()}, exact=False)


def crt_combine(a1: PhiAtom, a2: PhiAtom) -> PhiAtom:
    """Phi_{q1,a1} Phi_{q2,a2} = Phi_{q1 q2, a1 q2^3 + a2 q1^3} for coprime q1, q2."""
    if math.gcd(a1.r, a2.r) != 1:
        raise ValueError("CRT product needs coprime moduli")
    return PhiAtom(a1.r * a2.r, a1.b * a2.r**3 + a2.b * a1.r**3)


def crt_split(atom: PhiAtom, primes: Iterable[int]) -> tuple[PhiAtom, dict[int, PhiAtom]]:
    """Phi_{r,b} = Phi_{r',b'} prod_p Phi_{p^beta_p, a_p} with r' free of the given primes."""
    r, b = atom.r, atom.b
    parts: dict[int, int] = {}
    rest = r
    for p in primes:
        pe = 1
        while rest % p == 0:
            rest //= p
            pe *= p
        parts[p] = pe
    mods = dict(parts)
    out: dict[int, PhiAtom] = {}
    for p, pe in mods.items():
        co = r // pe
        out[p] = PhiAtom(pe, b * pow(co**3, -1, pe**3) if pe > 1 else 0)
    co = r // rest
    rest_atom = PhiAtom(rest, b * pow(co**3, -1, rest**3) if rest > 1 else 0)
    return rest_atom, out


# convex combinations


class DampingCombination:
    """sum of alpha * Phi_{r,b}, with alpha >= 0 summing to at most 1."""

    def __init__(
        self,
        atoms: dict[PhiAtom, float] | Iterable[tuple[float, PhiAtom]] | None = None,
        P: Iterable[int] = (),
        M_eff: float = 10.0,
        guard: int | None = GUARD_MODULUS,
    ):
        acc: dict[PhiAtom, float] = {}
        items = atoms.items() if isinstance(atoms, dict) else ((a, w) for w, a in (atoms or []))
        for a, w in items:
            w = float(w)
            if w < 0:
                raise ValueError("weights must be nonnegative")
            if w == 0:
                continue
            if guard is not None and guard % a.r:
                raise ValueError(f"atom modulus {a.r} does not divide the guard modulus")
            acc[a] = acc.get(a, 0.0) + w
        self.atoms = dict(sorted(acc.items()))
        self.P = frozenset(P)
        self.M_eff = M_eff
        self.guard = guard
        total = sum(self.atoms.values())
        if total > 1 + 1e-12:
            raise ValueError(f"weights sum to {total} > 1")
        for a in self.atoms:
            if any(a.r % p for p in self.P):
                raise ValueError(f"atom {a} is not divisible by every prime in P")
        self._period: int | None = None

    @classmethod
    def unit(cls, **kw) -> "DampingCombination":
        return cls({PhiAtom(1, 0): 1.0}, **kw)

    def __repr__(self) -> str:
        return f"DampingCombination({len(self.atoms)} atoms, mass={self.mass:.6g}, P={sorted(self.P)})"

    @property
    def mass(self) -> float:
        return sum(self.atoms.values())

    def weight(self, r: int, b: int = 0) -> float:
        return self.atoms.get(PhiAtom(r, b), 0.0)

    @property
    def period(self) -> int:
        if self._period is None:
            self._period = lcm(*(a.period for a in self.atoms)) if self.atoms else 1
        return self._period

    def value(self, n: int) -> complex:
        return sum((w * a.value(n) for a, w in self.atoms.items()), 0j)

    def dense_samples(self, L: int | None = None) -> np.ndarray:
        L = self.period if L is None else L
        if L > DENSE_GUARD:
            raise MemoryError(f"period {L} exceeds the dense guard")
        out = np.zeros(L, dtype=complex)
        for a, w in self.atoms.items():
            out += w * a.samples(L)
        return out

    def dense_coefficients(self, L: int) -> np.ndarray:
        """Fourier coefficients at j/L, built atom by atom."""
        if L % self.period:
            raise ValueError("L must be a multiple of the period")
        out = np.zeros(L, dtype=float)
        for a, w in self.atoms.items():
            r = a.r
            start = Fraction(a.b, r**3) * L
            idx = (int(start) + np.arange(r, dtype=np.int64) * (L // r)) % L
            np.add.at(out, idx, w * r ** (-1 / 6))
        return out

    def series(self) -> FourierSeries:
        acc: dict[Fraction, float] = {}
        for a, w in self.atoms.items():
            c = w * a.r ** (-1 / 6)
            for lam in a.frequencies():
                acc[lam] = acc.get(lam, 0.0) + c
        return FourierSeries(acc, exact=False)

    def truncate(self, X: float) -> "DampingCombination":
        """Keep the atoms with r <= X."""
        return DampingCombination({a: w for a, w in self.atoms.items() if a.r <= X}, (), self.M_eff, self.guard)

    def conj(self) -> "DampingCombination":
        return DampingCombination({a.conj(): w for a, w in self.atoms.items()}, self.P, self.M_eff, self.guard)

    def real_part(self) -> "DampingCombination":
        half = [(w / 2, a) for a, w in self.atoms.items()] + [(w / 2, a.conj()) for a, w in self.atoms.items()]
        return DampingCombination(half, self.P, self.M_eff, self.guard)

    def scaled(self, s: float) -> "DampingCombination":
        return DampingCombination({a: s * w for a, w in self.atoms.items()}, self.P, self.M_eff, self.guard)

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(abs(w - self.atoms.get(a.conj(), 0.0)) <= tol for a, w in self.atoms.items())

    def to_dict(self) -> dict:
        return {
            "atoms": [{"r": a.r, "b": a.b, "alpha": str(Fraction(w))} for a, w in self.atoms.items()],
            "P": sorted(self.P),
            "M_eff": self.M_eff,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DampingCombination":
        atoms = [(float(Fraction(t["alpha"])), PhiAtom(int(t["r"]), int(t["b"]))) for t in d["atoms"]]
        return cls(atoms, d.get("P", ()), float(d.get("M_eff", 10.0)))

    @classmethod
    def from_json(cls, s: str) -> "DampingCombination":
        return cls.from_dict(json.loads(s))


def combine(
    parts: Sequence[tuple[float, DampingCombination]], P: Iterable[int] = (), M_eff: float = 10.0
) -> DampingCombination:
    """sum of weight * part."""
    acc: dict[PhiAtom, float] = {}
    for s, part in parts:
        for a, w in part.atoms.items():
            acc[a] = acc.get(a, 0.0) + s * w
    return DampingCombination(acc, P, M_eff)


# the prime-power engine


@dataclass
class LocalDomination:
    """chi^+ 1_{(n-1,p)=1} Phi_{p^beta, a} < omega(p) * sum w_i Phi_i."""

    p: int
    t: int
    beta: int
    a: int
    case: str
    atoms: list[tuple[float, PhiAtom]]
    alpha_sum: float = 1.0
    a1: int | None = None
    a2: int | None = None
    ladder_ok: bool | None = None


def _local_phase_row(chi: DirichletCharacter, p: int, t: int, beta: int) -> list[Fraction]:
    M = p ** (t - beta)
    return [chi.phase(1 + p**beta * k) for k in range(M)]


def u_index(p: int, t: int, beta: int, a1: int, lam: int) -> int:
    """0 if p^(t-beta) | a1 - lam, else t - beta - v_p(a1 - lam)."""
    d = a1 - lam
    M = p ** (t - beta)
    if d % M == 0:
        return 0
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return t - beta - v


def quadratic_sum(p: int, t: int, beta: int, chi: DirichletCharacter, lam: int) -> complex:
    """S(lam) = sum over k mod p^(t-beta) of chi(1 + p^beta k) e(-lam k / p^(t-beta))."""
    M = p ** (t - beta)
    k = np.arange(M)
    vals = np.array([chi(1 + p**beta * int(x)) for x in k])
    return complex(np.sum(vals * np.exp(-2j * np.pi * ((lam * k) % M) / M)))


def check_ladder(chi: DirichletCharacter, p: int, t: int, beta: int, a1: int) -> bool:
    """|S(lam)| <= p^(t-beta-u(lam)/2), times sqrt 2 at p = 2, for every lam mod p^t."""
    M = p ** (t - beta)
    vals = np.array([chi(1 + p**beta * k) for k in range(M)])
    S = np.fft.fft(vals)
    slack = math.sqrt(2) if p == 2 else 1.0
    for lam in range(p**t):
        u = u_index(p, t, beta, a1, lam)
        if abs(S[lam % M]) > slack * p ** (t - beta - u / 2) + 1e-9:
            return False
    return True


def dominate_prime_power(chi: DirichletCharacter, beta: int, a: int = 0) -> LocalDomination:
    """Dominate chi^+ 1_{(n-1,p)=1} Phi_{p^beta, a} for chi primitive mod p^t."""
    fac = factorize(chi.modulus)
    if len(fac) != 1 or not chi.is_primitive():
        raise ValueError("need a primitive character of prime-power conductor")
    (p, t), = fac
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    w = omega(p)
    pb = p**beta
    if beta == 0:
        a = 0
    if beta >= t:
        return LocalDomination(p, t, beta, a, "trivial", [(1.0, PhiAtom(pb, a))], 1.0)
    if 3 * beta <= t or (p == 2 and t <= 2):
        atom = PhiAtom(p**t, 0).twist(a, pb) if beta else PhiAtom(p**t, 0)
        return LocalDomination(p, t, beta, a, "gauss", [(1.0, atom)], 1.0)
    M = p ** (t - beta)
    row = _local_phase_row(chi, p, t, beta)
    c = row[1]
    if all(row[k] == (k * c) % 1 for k in range(M)):
        a1 = int(c * M)
        atom = PhiAtom(pb, a1 * p ** (3 * beta - t)).twist(a, pb)
        return LocalDomination(p, t, beta, a, "linear", [(1.0, atom)], 1.0, a1, 0)
    return quadratic_ladder(chi, beta, a)


def quadratic_ladder(chi: DirichletCharacter, beta: int, a: int = 0) -> LocalDomination:
    """The F_v ladder sum_v alpha_v F_v built from the degree-2 polynomial of chi on 1 + p^beta Z.

    The engine uses it for t/3 < beta < t outside the purely linear case; it is
    also valid whenever the degree-2 polynomial exists, which the tests use.
    """
    (p, t), = factorize(chi.modulus)
    if not 1 <= beta < t:
        raise ValueError("ladder needs 1 <= beta < t")
    w = omega(p)
    pb = p**beta
    f = postnikov(chi, beta, degree=2)
    a1, a2 = f.coeffs
    alphas = alpha_ladder(p, t - beta + 1)
    total = sum(alphas)
    if total > w:
        raise ArithmeticError(f"alpha ladder {total} exceeds omega({p}) = {w}")
    atoms = []
    for v, al in enumerate(alphas):
        rv = p ** (beta + v)
        b = Fraction(a1 * rv**3, p**t)
        if b.denominator != 1:
            raise ArithmeticError(f"a1/p^t = {a1}/{p**t} is not of the form b/{rv}^3")
        atoms.append((al / w, PhiAtom(rv, int(b)).twist(a, pb)))
    ok = check_ladder(chi, p, t, beta, a1)
    return LocalDomination(p, t, beta, a, "quadratic", atoms, total, a1, a2, ok)


# general moduli


@dataclass
class CharacterCertificate:
    modulus: int
    M_P: int
    cases: list[tuple[int, int, int, str]] = field(default_factory=list)
    ok: Domination | None = None


def dominate_character(
    chi: DirichletCharacter, F: DampingCombination, omega_table: OmegaTable | None = None, verify: bool = True
) -> tuple[DampingCombination, CharacterCertificate]:
    """F~ in F_P with chi^+ 1_{(n-1,q)=1} F < M_P F~, P the primes of q."""
    omega_table = omega_table or OmegaTable()
    if not chi.is_primitive():
        raise ValueError("character must be primitive")
    q = chi.modulus
    if F.guard is not None and F.guard % q:
        raise ValueError(f"modulus {q} does not divide the guard modulus")
    fac = factorize(q) if q > 1 else ()
    primes = [p for p, _ in fac]
    local = {p: chi.local_factor(p) for p in primes}
    cert = CharacterCertificate(q, omega_table.M_P(q))
    acc: dict[PhiAtom, float] = {}
    for atom, w in F.atoms.items():
        rest, parts = crt_split(atom, primes)
        options = []
        for p in primes:
            pa = parts[p]
            beta = round(math.log(pa.r, p)) if pa.r > 1 else 0
            res = dominate_prime_power(local[p], beta, pa.b)
            cert.cases.append((p, res.t, beta, res.case))
            options.append(res.atoms)
        for combo in cartesian(*options):
            out, weight = rest, w
            for wi, ai in combo:
                out = crt_combine(out, ai)
                weight *= wi
            acc[out] = acc.get(out, 0.0) + weight
    Ft = DampingCombination(acc, primes, F.M_eff, F.guard)
    if verify:
        cert.ok = check_character_domination(chi, F, Ft, cert.M_P)
    return Ft, cert


def check_character_domination(
    chi: DirichletCharacter, F: DampingCombination, Ft: DampingCombination, scale: float, tol: float = 1e-9
) -> Domination:
    """|(chi^+ 1_{(n-1,q)=1} F)^(lam)| <= scale * F~^(lam) + tol on the common period."""
    q = chi.modulus
    L = lcm(q, F.period, Ft.period)
    if L > DENSE_GUARD:
        raise MemoryError(f"common period {L} exceeds the dense guard")
    n = np.arange(L, dtype=np.int64)
    chi_tab = np.array([chi(b) for b in range(q)])
    coprime = np.gcd(n - 1, q) == 1
    g = chi_tab[(n + 1) % q] * coprime * F.dense_samples(L)
    return dense_domination(np.fft.fft(g) / L, scale * Ft.dense_coefficients(L), L, tol)


def dense_domination(gc: np.ndarray, fc: np.ndarray, L: int, tol: float = 1e-9) -> Domination:
    """Coefficientwise |g^| <= f^ + tol with f^ real and nonnegative."""
    fc = np.asarray(fc)
    if np.iscomplexobj(fc):
        bad = np.abs(fc.imag) > tol
        if bad.any():
            j = int(np.argmax(bad))
            return Domination(False, L, Fraction(j, L), "dominating coefficient is not real", -float(abs(fc[j].imag)))
        fc = fc.real
    if (fc < -tol).any():
        j = int(np.argmin(fc))
        return Domination(False, L, Fraction(j, L), "dominating coefficient is negative", float(fc[j]))
    margin = fc - np.abs(gc)
    j = int(np.argmin(margin))
    if margin[j] < -tol:
        return Domination(False, L, Fraction(j, L), "|g| exceeds f", float(margin[j]))
    return Domination(True, L, None, "", float(margin[j]))


def prime_power_suite(
    conductors: Sequence[int] = (5, 7, 9, 27, 25, 8, 16), twist: int = 0
) -> list[tuple[DirichletCharacter, int, str, bool]]:
    """For each primitive chi of the given conductors and beta in 0..t+1, the
    engine's case and whether the coefficientwise domination holds."""
    from .characters import primitive_characters

    out = []
    for Q in conductors:
        (p, t), = factorize(Q)
        for chi in primitive_characters(Q):
            for beta in range(t + 2):
                a = twist if beta else 0
                F = DampingCombination({PhiAtom(p**beta, a): 1.0}, guard=None)
                res = dominate_prime_power(chi, beta, a)
                Ft = DampingCombination(res.atoms, guard=None)
                ok = check_character_domination(chi, F, Ft, omega(p))
                if res.ladder_ok is False:
                    ok = Domination(False, ok.period, None, "ladder bound failed")
                out.append((chi, beta, res.case, bool(ok)))
    return out


# the damping combination D


@dataclass
class ZeroTerm:
    """One zero in the damping construction: sigma = 1 - beta and its character."""

    sigma: float
    character: DirichletCharacter
    gamma: float = 0.0


@dataclass
class DampingBuild:
    D: DampingCombination
    alpha_10: float
    mu: float
    residual_mass: float
    exceptional: bool
    precondition: float
    M_eff: float
    terms: list[ZeroTerm]
    N: float
    m_max: int
    notes: list[str] = field(default_factory=list)


def _as_terms(zeros, characters: Callable | None) -> list[ZeroTerm]:
    if zeros is None:
        return []
    if hasattr(zeros, "zeros"):
        zeros = zeros.zeros
    out = []
    for z in zeros:
        if isinstance(z, ZeroTerm):
            out.append(z)
            continue
        if characters is None:
            from .zeros import characters_for_zero

            characters = characters_for_zero
        chi = characters(z)
        for _ in range(getattr(z, "multiplicity", 1)):
            out.append(ZeroTerm(1.0 - z.beta, chi, z.gamma))
    return out


def _real_term(z: ZeroTerm) -> bool:
    return z.gamma == 0 and z.character.is_real()


def build_damping(
    zeros=None,
    N: float = 1e4,
    m_max: int = 3,
    M_eff: float = 10.0,
    exceptional: bool | None = None,
    characters: Callable | None = None,
    enforce_precondition: bool = True,
) -> DampingBuild:
    """Depth-truncated D = (1+mu)^(-1) sum over tuples of N^(-sum sigma/16) Psi_tuple.

    Zero terms are ordered by sigma, so in the exceptional branch index 1 is the
    zero nearest to 1. With exceptional=None the branch is chosen from the data:
    unexceptional when its precondition holds, exceptional when the nearest zero
    is real with a real character and the remaining zeros satisfy the bound.
    """
    terms = sorted(_as_terms(zeros, characters), key=lambda z: z.sigma)
    weights = [N ** (-z.sigma / 16) for z in terms]
    bound = 1 / (2 * M_eff)
    notes = []
    if exceptional is None:
        if not enforce_precondition:
            exceptional = False
        elif sum(weights) < bound or not terms:
            exceptional = False
        elif _real_term(terms[0]) and sum(weights[1:]) < bound:
            exceptional = True
            notes.append("nearest zero is real with a real character: exceptional branch")
        else:
            raise ValueError(f"precondition fails: sum N^(-sigma/16) = {sum(weights):.6g} >= {bound:.6g}")
    active = list(range(1, len(terms))) if exceptional else list(range(len(terms)))
    pre = sum(weights[j] for j in active)
    if pre >= bound and active:
        if not enforce_precondition:
            notes.append(f"precondition fails: sum N^(-sigma/16) = {pre:.6g} >= {bound:.6g}")
        else:
            raise ValueError(f"precondition fails: sum N^(-sigma/16) = {pre:.6g} >= {bound:.6g}")
    omega_table = OmegaTable()
    for j in active:
        if omega_table.M_P(terms[j].character.modulus) > M_eff:
            notes.append(f"M_P for q={terms[j].character.modulus} exceeds M_eff")
    s = pre
    mu = sum(s**m for m in range(1, m_max + 1))
    tail = s ** (m_max + 1) / (1 - s) if s < 1 else math.inf
    level: dict[tuple[int, ...], DampingCombination] = {(): DampingCombination.unit(M_eff=M_eff)}
    norm = 1 / (1 + mu)
    parts = [(norm, level[()])]
    for m in range(1, m_max + 1):
        nxt: dict[tuple[int, ...], DampingCombination] = {}
        for tup, psi in level.items():
            for j in active:
                chi = terms[j].character.conj()
                Ft, _ = dominate_character(chi, psi, omega_table, verify=False)
                nxt[tup + (j,)] = Ft
                parts.append((norm * math.prod(weights[i] for i in tup + (j,)), Ft))
        level = nxt
    D = combine(parts, (), M_eff).real_part()
    return DampingBuild(D, D.weight(1, 0), mu, tail / (1 + mu), exceptional, pre, M_eff, terms, N, m_max, notes)


def _phi_values(chi: DirichletCharacter, T: float, ns: np.ndarray) -> np.ndarray:
    from .approximants import F_complete_product_values

    return F_complete_product_values(chi, T, ns)


def _lambda_values(T: float, ns: np.ndarray) -> np.ndarray:
    out = np.ones(len(ns))
    for p in primes_upto(int(T)):
        out = out * np.where(ns % p == 0, 0.0, p / (p - 1))
    return out


def _H_values(T: float, ns: np.ndarray) -> np.ndarray:
    out = np.ones(len(ns))
    for p in primes_upto(int(T)):
        out = out * np.where(ns % p == 0, 4 * p / (p + 3), p / (p + 3))
    return out


def damping_check(
    build: DampingBuild, T: float = 7, js: Sequence[int] | None = None, E_modulus: int = 1, tol: float = 1e-9
) -> dict[int, Domination]:
    """N^(-sigma_j/8) phi_j^+ phi_0^- H~_T D E < phi_0^+ phi_0^- H~_T D E for each j.

    phi_j is the completed twisted approximant of chi_j, phi_0 the completed
    von Mangoldt approximant, both at level T; E = 1_{E_modulus | n}.
    """
    D = build.D
    if js is None:
        js = range(1, len(build.terms)) if build.exceptional else range(len(build.terms))
    out = {}
    base_L = lcm(primorial(T), D.period, E_modulus)
    for j in js:
        z = build.terms[j]
        L = lcm(base_L, z.character.modulus)
        if L > DENSE_GUARD:
            raise MemoryError(f"common period {L} exceeds the dense guard")
        n = np.arange(L, dtype=np.int64)
        common = _lambda_values(T, n - 1) * _H_values(T, n) * D.dense_samples(L) * (n % E_modulus == 0)
        g = build.N ** (-z.sigma / 8) * _phi_values(z.character, T, n + 1) * common
        f = _lambda_values(T, n + 1) * common
        out[j] = dense_domination(np.fft.fft(g) / L, np.fft.fft(f) / L, L, tol)
    return out
