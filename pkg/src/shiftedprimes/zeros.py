"""Zero data: loading, filtering, scale selection and explicit-formula checks.

Zeros are data. Nothing here computes a zero; files are read, closed under
conjugation, range checked and then consumed by the other modules.

File schema::

    {"sigma_max": real, "Q": real,
     "zeros": [{"beta": real, "gamma": real, "conductor": int,
                "real_character": bool, "multiplicity": int,
                "character": int (optional)}]}

``character`` indexes ``primitive_characters(conductor)``. Without it the first
real (or first non-real) primitive character of that conductor is used.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from json import scanner
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np

from .arith import primes_upto
from .characters import DirichletCharacter, primitive_characters

DATA_DIR = Path(__file__).parent / "data"
ZETA_ZEROS = DATA_DIR / "zeta_zeros.json"


class ZeroSchemaError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ZeroRecord:
    beta: float
    gamma: float
    conductor: int
    real_character: bool
    multiplicity: int = 1
    character: int | None = None
    from_closure: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if self.conductor < 1:
            raise ValueError("conductor must be a positive integer")

    @property
    def sigma(self) -> float:
        return 1.0 - self.beta

    @property
    def rho(self) -> complex:
        return complex(self.beta, self.gamma)

    def conjugate(self) -> "ZeroRecord":
        """rho-bar, a zero of L(s, chi-bar)."""
        idx = self.character
        if idx is not None or not self.real_character:
            chi = characters_for_zero(self)
            idx = primitive_characters(self.conductor).index(chi.conj())
        return replace(self, gamma=-self.gamma, character=idx, from_closure=True)

    def to_dict(self) -> dict:
        d = {
            "beta": self.beta,
            "gamma": self.gamma,
            "conductor": self.conductor,
            "real_character": self.real_character,
            "multiplicity": self.multiplicity,
        }
        if self.character is not None:
            d["character"] = self.character
        return d


@lru_cache(maxsize=None)
def _character_choice(q: int, real: bool) -> int:
    chars = primitive_characters(q)
    for i, chi in enumerate(chars):
        if chi.is_real() == real:
            return i
    kind = "real" if real else "non-real"
    raise ValueError(f"no {kind} primitive character of conductor {q}")


def characters_for_zero(z: ZeroRecord) -> DirichletCharacter:
    """The primitive character whose L-function has the zero z."""
    chars = primitive_characters(z.conductor)
    idx = z.character if z.character is not None else _character_choice(z.conductor, z.real_character)
    if not 0 <= idx < len(chars):
        raise ValueError(f"character index {idx} out of range for conductor {z.conductor}")
    chi = chars[idx]
    if chi.is_real() != z.real_character:
        raise ValueError(f"character {idx} of conductor {z.conductor} has the wrong reality")
    return chi


def _key(z: ZeroRecord) -> tuple:
    chi = characters_for_zero(z)
    return (z.beta, z.gamma, z.conductor, chi.label())


def conjugate_closure(records: Iterable[ZeroRecord]) -> list[ZeroRecord]:
    """Append rho-bar with chi-bar for every record whose conjugate is missing."""
    records = list(records)
    present = {_key(z) for z in records}
    out = list(records)
    for z in records:
        c = z.conjugate()
        if _key(c) not in present:
            present.add(_key(c))
            out.append(c)
    return out


@dataclass
class ZeroSet:
    zeros: list[ZeroRecord] = field(default_factory=list)
    Q: float = math.inf
    sigma_max: float = 0.5
    source: str = "grh"

    @property
    def records(self) -> list[ZeroRecord]:
        return self.zeros

    def __iter__(self) -> Iterator[ZeroRecord]:
        return iter(self.zeros)

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def count(self) -> int:
        """Number of zeros counted with multiplicity."""
        return sum(z.multiplicity for z in self.zeros)

    def selected(self, Q: float | None = None, sigma_max: float | None = None) -> "ZeroSet":
        """Zeros with sigma <= sigma_max, |gamma| <= Q and conductor <= Q."""
        Q = self.Q if Q is None else Q
        sigma_max = self.sigma_max if sigma_max is None else sigma_max
        keep = [z for z in self.zeros if z.sigma <= sigma_max and abs(z.gamma) <= Q and z.conductor <= Q]
        return ZeroSet(keep, min(Q, self.Q), min(sigma_max, self.sigma_max), self.source)

    def sorted_by_sigma(self) -> list[ZeroRecord]:
        return sorted(self.zeros, key=lambda z: (z.sigma, abs(z.gamma), z.gamma))

    def with_zeros(self, zeros: Iterable[ZeroRecord]) -> "ZeroSet":
        return ZeroSet(list(zeros), self.Q, self.sigma_max, self.source)

    def to_dict(self) -> dict:
        Q = None if math.isinf(self.Q) else self.Q
        return {"sigma_max": self.sigma_max, "Q": Q, "zeros": [z.to_dict() for z in self.zeros if not z.from_closure]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


class _Obj(dict):
    line = 0


def _decoder() -> json.JSONDecoder:
    dec = json.JSONDecoder()
    base = json.decoder.JSONObject

    def parse_object(s_and_end, *args, **kwargs):
        s, end = s_and_end
        pairs, new_end = base(s_and_end, *args, **kwargs)
        obj = _Obj(pairs)
        obj.line = s.count("\n", 0, end) + 1
        return obj, new_end

    dec.parse_object = parse_object
    dec.scan_once = scanner.py_make_scanner(dec)
    return dec


_FIELDS = {
    "beta": (int, float),
    "gamma": (int, float),
    "conductor": int,
    "real_character": bool,
    "multiplicity": int,
}


def _record(obj, fallback_line: int) -> ZeroRecord:
    line = getattr(obj, "line", fallback_line)
    if not isinstance(obj, dict):
        raise ZeroSchemaError(line, "zero entry must be an object")
    for name, typ in _FIELDS.items():
        if name not in obj:
            if name == "multiplicity":
                continue
            raise ZeroSchemaError(line, f"missing field {name!r}")
        v = obj[name]
        if typ is int and (isinstance(v, bool) or not isinstance(v, int)):
            raise ZeroSchemaError(line, f"field {name!r} must be an integer")
        if typ is bool and not isinstance(v, bool):
            raise ZeroSchemaError(line, f"field {name!r} must be a boolean")
        if typ == (int, float) and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise ZeroSchemaError(line, f"field {name!r} must be a number")
    extra = set(obj) - set(_FIELDS) - {"character", "sigma"}
    if extra:
        raise ZeroSchemaError(line, f"unknown fields {sorted(extra)}")
    if "character" in obj and (isinstance(obj["character"], bool) or not isinstance(obj["character"], int)):
        raise ZeroSchemaError(line, "field 'character' must be an integer")
    try:
        z = ZeroRecord(
            float(obj["beta"]),
            float(obj["gamma"]),
            obj["conductor"],
            obj["real_character"],
            obj.get("multiplicity", 1),
            obj.get("character"),
        )
        characters_for_zero(z)
    except ValueError as exc:
        raise ZeroSchemaError(line, str(exc)) from None
    if "sigma" in obj and abs(obj["sigma"] - z.sigma) > 1e-12:
        raise ZeroSchemaError(line, "sigma disagrees with 1 - beta")
    return z


def parse_zero_set(text: str, source: str = "<string>") -> ZeroSet:
    if not text.strip():
        return ZeroSet(source=source)
    try:
        data, end = _decoder().raw_decode(text, len(text) - len(text.lstrip()))
    except json.JSONDecodeError as exc:
        raise ZeroSchemaError(exc.lineno, exc.msg) from None
    if text[end:].strip():
        raise ZeroSchemaError(text.count("\n", 0, end) + 1, "trailing data")
    if not isinstance(data, dict):
        raise ZeroSchemaError(1, "top level must be an object")
    top = getattr(data, "line", 1)
    extra = set(data) - {"sigma_max", "Q", "zeros"}
    if extra:
        raise ZeroSchemaError(top, f"unknown fields {sorted(extra)}")
    sigma_max = data.get("sigma_max", 0.5)
    Q = data.get("Q")
    Q = math.inf if Q is None else Q
    for name, v in (("sigma_max", sigma_max), ("Q", Q)):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
            raise ZeroSchemaError(top, f"{name!r} must be a positive number")
    zs = data.get("zeros", [])
    if not isinstance(zs, list):
        raise ZeroSchemaError(top, "'zeros' must be an array")
    records = [_record(z, top) for z in zs]
    for z, obj in zip(records, zs):
        if z.sigma > sigma_max or abs(z.gamma) > Q or z.conductor > Q:
            raise ZeroSchemaError(obj.line, "zero outside the declared (Q, sigma_max) range")
    return ZeroSet(conjugate_closure(records), float(Q), float(sigma_max), source)


def load_zero_set(path: str | Path | None = None) -> ZeroSet:
    """Read a zero file. None gives the empty set (GRH mode)."""
    if path is None:
        return ZeroSet()
    path = Path(path)
    return parse_zero_set(path.read_text(), str(path))


def zeta_zero_set() -> ZeroSet:
    return load_zero_set(ZETA_ZEROS)


# scale selection


class ScaleSelectionError(ValueError):
    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = residuals


@dataclass
class BranchCertificate:
    """Everything needed to re-evaluate the branch inequality."""

    branch: str
    T: float
    log_N: float
    M_eff: float
    kappa: float
    lambda1: float
    B: float
    sigmas: list[float]
    q1: int
    exceptional_ok: bool
    unexceptional_sum: float
    exceptional_sum: float
    holds: bool
    reference_log2_M: float | None = None

    def reevaluate(self) -> bool:
        return _branch_holds(self.branch, self.sigmas, self.log_N, self.M_eff, self.exceptional_ok)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "BranchCertificate":
        return cls(**json.loads(text))


def _n_sums(sigmas: list[float], log_N: float, M_eff: float) -> tuple[mpmath.mpf, mpmath.mpf]:
    with mpmath.workdps(50):
        terms = [mpmath.exp(-mpmath.mpf(log_N) * mpmath.mpf(s) / 16) for s in sigmas]
        unexc = mpmath.fsum(terms)
        exc = (terms[0] + 2 * mpmath.mpf(M_eff) * mpmath.fsum(terms[1:])) if terms else mpmath.mpf(0)
        return unexc, exc


def _branch_holds(branch: str, sigmas: list[float], log_N: float, M_eff: float, exceptional_ok: bool) -> bool:
    unexc, exc = _n_sums(sigmas, log_N, M_eff)
    with mpmath.workdps(50):
        if branch == "unexceptional":
            return bool(unexc <= 1 / (2 * mpmath.mpf(M_eff)))
        return bool(exceptional_ok and exc <= 1)


def exceptional_zero(zs: ZeroSet, Q: float, lambda1: float = 0.1) -> ZeroRecord | None:
    """The unique zero at scale Q with sigma < lambda1 / log Q, if any."""
    close = [z for z in zs.selected(Q, 0.5) if z.sigma < lambda1 / math.log(Q)]
    if not close:
        return None
    z = close[0]
    if len(close) > 1 or z.multiplicity > 1 or z.gamma != 0 or not z.real_character:
        raise ScaleSelectionError(
            f"{sum(c.multiplicity for c in close)} zeros closer than lambda1/log Q at Q={Q:g}; "
            "data contradicts the single exceptional zero picture",
            {"Q": Q, "close": [c.to_dict() for c in close]},
        )
    return z


def _case_at(zs: ZeroSet, Q: float, kappa: float, lambda1: float) -> str | None:
    z = exceptional_zero(zs, Q, lambda1)
    floor = lambda1 * kappa / (2 * math.log(Q))
    if all(r.sigma >= floor for r in zs.selected(Q, 0.5)):
        return "first"
    if z is not None and math.log(z.conductor) < kappa * math.log(Q):
        return "second"
    return None


def scale_select(
    X: float,
    kappa: float,
    zs: ZeroSet,
    omega=None,
    M_eff: float = 10.0,
    N: float | None = None,
    lambda1: float = 0.1,
    B: float = 16.0,
    check_range: bool = True,
) -> tuple[float, str, BranchCertificate]:
    """Choose T in {X, X^kappa} and the branch whose N-sum inequality holds.

    N defaults to X^(16 B), the size at which N^(-sigma/16) = T^(-B sigma) for T = X.
    M_eff replaces the astronomically large M in both inequalities; omega, when
    given, only supplies log2 M for the certificate.
    """
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    if check_range and math.log10(X) < 1 / kappa:
        raise ValueError(f"X must be at least 10^(1/kappa) = 10^{1 / kappa:g}")
    log_N = 16 * B * math.log(X) if N is None else math.log(N)
    T = None
    for Q in (X, X**kappa):
        if _case_at(zs, Q, kappa, lambda1) is not None:
            T = Q
            break
    if T is None:
        raise ScaleSelectionError(
            "no scale in {X, X^kappa} is in the first or second case",
            {"X": X, "kappa": kappa},
        )
    ordered = zs.selected(T, zs.sigma_max).sorted_by_sigma()
    sigmas = [z.sigma for z in ordered for _ in range(z.multiplicity)]
    first = ordered[0] if ordered else None
    q1 = first.conductor if first else 1
    exc_ok = bool(
        first is not None
        and first.gamma == 0
        and first.real_character
        and first.multiplicity == 1
        and math.log(max(q1, 1)) <= kappa * math.log(T)
    )
    unexc, exc = _n_sums(sigmas, log_N, M_eff)
    log2_M = getattr(omega, "log2_M", None) if omega is not None else None

    def cert(branch: str) -> BranchCertificate:
        c = BranchCertificate(
            branch, T, log_N, M_eff, kappa, lambda1, B, sigmas, q1, exc_ok, float(unexc), float(exc), False, log2_M
        )
        c.holds = c.reevaluate()
        return c

    for branch in ("unexceptional", "exceptional"):
        c = cert(branch)
        if c.holds:
            return T, branch, c
    raise ScaleSelectionError(
        f"neither branch holds at T={T:g}: unexceptional sum {float(unexc):.6g} > {1 / (2 * M_eff):.6g}, "
        f"exceptional sum {float(exc):.6g} > 1" + ("" if exc_ok else " (nearest zero not admissible)"),
        {"unexceptional": float(unexc) - 1 / (2 * M_eff), "exceptional": float(exc) - 1, "exceptional_ok": exc_ok},
    )


# explicit formula


def _psi_chi(chi: DirichletCharacter, x: float) -> complex:
    """Sum over n <= x of Lambda(n) chi(n)."""
    total = 0j
    for p in primes_upto(int(math.floor(x))):
        lp = math.log(p)
        pk = p
        while pk <= x:
            total += lp * chi(pk)
            pk *= p
    return total


@dataclass
class ExplicitFormulaReport:
    x: float
    Q: float
    prime_side: complex
    zero_side: complex
    residual: float
    scale: float
    zeros_used: int
    missing: list[str]

    @property
    def ratio(self) -> float:
        return self.residual / self.scale


def explicit_formula_check(
    chi: DirichletCharacter, x: float, zs: ZeroSet, Q: float | None = None
) -> ExplicitFormulaReport:
    """|sum_{n<=x} Lambda(n) chi(n) - sum_rho eps_rho x^rho / rho| for zeros of the
    primitive character inducing chi, with rho = 1 (eps = +1) for principal chi and
    eps = -1 for every listed zero with |gamma| <= Q."""
    Q = zs.Q if Q is None else Q
    prim = chi.primitive()
    used = [z for z in zs if abs(z.gamma) <= Q and characters_for_zero(z) == prim]
    missing = []
    if not used:
        missing.append(f"no zeros listed for the character of conductor {prim.modulus} up to height {Q:g}")
    zero_side = complex(x) if prim.modulus == 1 else 0j
    for z in used:
        rho = z.rho
        zero_side -= z.multiplicity * x**rho / rho
    prime_side = _psi_chi(chi, x)
    residual = abs(prime_side - zero_side)
    sigma_max = max((z.sigma for z in used), default=0.5)
    scale = x ** (1 - sigma_max) + x / Q if Q > 0 and not math.isinf(Q) else x ** (1 - sigma_max)
    return ExplicitFormulaReport(x, Q, prime_side, zero_side, residual, scale, sum(z.multiplicity for z in used), missing)


def lowest_zeros(zs: ZeroSet, count: int) -> ZeroSet:
    """The records at the `count` smallest heights |gamma| (with their conjugates)."""
    heights = sorted({abs(z.gamma) for z in zs})
    if count <= 0:
        return zs.with_zeros([])
    cut = heights[min(count, len(heights)) - 1]
    return zs.with_zeros(z for z in zs if abs(z.gamma) <= cut)


def explicit_formula_sweep(
    chi: DirichletCharacter, xs: Iterable[float], zs: ZeroSet, counts: Sequence[int]
) -> list[tuple[int, float]]:
    """RMS residual over the x sweep using the lowest `count` zero heights, per count.

    A single x oscillates with the truncation; the sweep average is what falls
    as zeros are added.
    """
    xs = list(xs)
    out = []
    for k in counts:
        sub = lowest_zeros(zs, k)
        r = [explicit_formula_check(chi, float(x), sub).residual for x in xs]
        out.append((k, float(np.sqrt(np.mean(np.square(r))))))
    return out


# Page's bound


@dataclass
class PageReport:
    c: float
    rows: list[dict]

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows)


def page_bound_check(zs: ZeroSet, c: float = 0.1) -> PageReport:
    """sigma >= c / q for every real zero of a real character."""
    rows = []
    for z in zs:
        if z.gamma == 0 and z.real_character:
            bound = c / z.conductor
            rows.append({"sigma": z.sigma, "q": z.conductor, "bound": bound, "ok": z.sigma >= bound})
    return PageReport(c, rows)


def synthetic_zero_set(rows: Iterable[tuple], Q: float = math.inf, sigma_max: float = 0.5) -> ZeroSet:
    """Rows (beta, gamma, q, real_character[, multiplicity]) closed under conjugation."""
    recs = [ZeroRecord(float(r[0]), float(r[1]), int(r[2]), bool(r[3]), int(r[4]) if len(r) > 4 else 1) for r in rows]
    return ZeroSet(conjugate_closure(recs), Q, sigma_max, "synthetic")


def zero_heights(zs: ZeroSet) -> np.ndarray:
    return np.array(sorted(z.gamma for z in zs))
