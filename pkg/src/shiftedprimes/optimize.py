"""delta(N) and gamma(N).

delta(N) is the density of the largest A in {1..N} with no two elements
differing by p - 1 for a prime p <= N: a maximum independent set in the
difference graph. gamma(N) is the least constant term a0 of a cosine polynomial
a0 + sum_{p <= N} a_{p-1} cos(2 pi (p-1) x) that is nonnegative with T(0) = 1,
computed by a cutting-plane linear program.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .arith import primes_upto
from .construct import CosinePolynomial, _certify, _local_min, lower_bound

EXACT_LIMIT = 64
MAX_GRID = 1 << 22


# difference graph


def shifted_primes(N: int) -> list[int]:
    return [p - 1 for p in primes_upto(N)]


@dataclass
class DifferenceGraph:
    N: int
    forbidden: frozenset[int]
    adjacency: list[int]

    @classmethod
    def build(cls, N: int) -> "DifferenceGraph":
        S = frozenset(shifted_primes(N))
        adj = [0] * N
        for i in range(N):
            m = 0
            for s in S:
                if i + s < N:
                    m |= 1 << (i + s)
                if i - s >= 0:
                    m |= 1 << (i - s)
            adj[i] = m
        return cls(N, S, adj)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def is_independent(self, elements) -> bool:
        """Exact check on a set of integers in 1..N."""
        xs = sorted(elements)
        if any(x < 1 or x > self.N for x in xs):
            return False
        return all(b - a not in self.forbidden for i, a in enumerate(xs) for b in xs[i + 1 :])


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _max_clique(adj: list[int], order: list[int], cand: int | None = None) -> int:
    """Maximum clique as a bitmask; greedy coloring bound, fixed vertex order."""
    rank = {v: i for i, v in enumerate(order)}
    best = 0
    best_size = 0

    def color_sort(cand: int) -> list[tuple[int, int]]:
        verts = sorted(_bits(cand), key=rank.__getitem__)
        out = []
        color = 0
        remaining = verts
        while remaining:
            color += 1
            avail = 0
            for v in remaining:
                avail |= 1 << v
            rest = []
            for v in remaining:
                if avail >> v & 1:
                    out.append((v, color))
                    avail &= ~adj[v]
                    avail &= ~(1 << v)
                else:
                    rest.append(v)
            remaining = rest
        return out

    def expand(clique: int, size: int, cand: int) -> None:
        nonlocal best, best_size
        for v, c in reversed(color_sort(cand)):
            if size + c <= best_size:
                return
            new = cand & adj[v]
            if new:
                expand(clique | 1 << v, size + 1, new)
            elif size + 1 > best_size:
                best, best_size = clique | 1 << v, size + 1
            cand &= ~(1 << v)

    if cand is None:
        cand = 0
        for v in order:
            cand |= 1 << v
    if cand:
        expand(0, 0, cand)
    return best


def delta_exact(N: int) -> tuple[int, list[int]]:
    """Largest difference-avoiding subset of {1..N}, by branch and bound."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > EXACT_LIMIT:
        raise ValueError(f"delta_exact is limited to N <= {EXACT_LIMIT}; use delta_heuristic")
    g = DifferenceGraph.build(N)
    full = (1 << N) - 1
    comp = [full & ~g.adjacency[v] & ~(1 << v) for v in range(N)]
    order = sorted(range(N), key=lambda v: (g.degree(v), v))
    size = _max_clique(comp, order).bit_count()
    # lexicographically smallest maximum set
    chosen, cand = [], full
    for v in range(N):
        if not cand >> v & 1:
            continue
        rest = cand & comp[v] & ~((1 << (v + 1)) - 1)
        if len(chosen) + 1 + _max_clique(comp, order, rest).bit_count() == size:
            chosen.append(v)
            cand = rest
        else:
            cand &= ~(1 << v)
    witness = [v + 1 for v in chosen]
    if not g.is_independent(witness):
        raise AssertionError("witness is not difference-avoiding")
    return len(witness), witness


def delta_heuristic(N: int, rounds: int = 50) -> tuple[int, list[int]]:
    """Greedy by ascending degree, then (1, 2) swaps."""
    if N < 1:
        raise ValueError("N must be positive")
    S = shifted_primes(N)
    Sset = set(S)

    def conflicts(v: int, chosen: set[int]) -> list[int]:
        return [v + s for s in S if v + s in chosen] + [v - s for s in S if v - s in chosen]

    def degree(v: int) -> int:
        return sum(1 for s in S if v + s <= N) + sum(1 for s in S if v - s >= 1)

    order = sorted(range(1, N + 1), key=lambda v: (degree(v), v))
    chosen: set[int] = set()
    for v in order:
        if not conflicts(v, chosen):
            chosen.add(v)
    for _ in range(rounds):
        improved = False
        for v in order:
            if v in chosen:
                continue
            c = conflicts(v, chosen)
            if len(c) != 1:
                continue
            u = c[0]
            trial = chosen - {u} | {v}
            free = [w for w in order if w not in trial and not conflicts(w, trial)]
            if free:
                trial.add(free[0])
                chosen = trial
                improved = True
        if not improved:
            break
    xs = sorted(chosen)
    if any(b - a in Sset for i, a in enumerate(xs) for b in xs[i + 1 :]):
        raise AssertionError("heuristic witness is not difference-avoiding")
    return len(xs), xs


# gamma by cutting planes


@dataclass
class GammaCertificate:
    N: int
    lower: float
    upper: float
    certified_min: float
    duality_gap: float
    iterations: int
    cuts: int
    gridsize: int
    status: str
    history: list[float] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _solve(shifts: np.ndarray, xs: np.ndarray):
    k = len(shifts)
    c = np.zeros(k + 1)
    c[0] = 1.0
    A_ub = -np.hstack([np.ones((len(xs), 1)), np.cos(2 * np.pi * (np.outer(xs, shifts) % 1.0))])
    b_ub = np.zeros(len(xs))
    A_eq = np.ones((1, k + 1))
    b_eq = np.array([1.0])
    bounds = [(None, None)] * (k + 1)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    dual = float(b_eq @ res.eqlin.marginals + b_ub @ res.ineqlin.marginals)
    return res.x, float(res.fun), abs(float(res.fun) - dual)


def _scan(T: CosinePolynomial, G: int) -> np.ndarray:
    buf = np.zeros(G)
    np.add.at(buf, T.shifts % G, T.coeffs)
    return T.a0 + np.fft.rfft(buf).real


def gamma_lp(
    N: int, grid: int | None = None, tol: float = 1e-9, cut_tol: float = 1e-7, max_iter: int = 200
) -> tuple[float, CosinePolynomial, GammaCertificate]:
    """Cutting-plane LP for gamma(N).

    Cuts are added at local minima below -cut_tol until none remain. The LP
    value is a lower bound for gamma(N), since every grid LP is a relaxation.
    The returned polynomial is the LP optimum lifted by its certified negative
    part eps, (T + eps) / (1 + eps), which is nonnegative; its constant term is
    the upper bound in the certificate.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if N > 10_000:
        raise ValueError("gamma_lp supports N <= 10^4")
    shifts = np.array(shifted_primes(N), dtype=np.int64)
    G = grid or 4 * N
    base = np.arange(G // 2 + 1) / G
    cuts: list[float] = []
    history: list[float] = []
    scan = 1 << max(6, math.ceil(math.log2(64 * N)))
    gap = 0.0
    status = "iterations"
    for it in range(1, max_iter + 1):
        xs = np.concatenate([base, np.array(cuts)]) if cuts else base
        x, val, gap = _solve(shifts, xs)
        history.append(val)
        T = CosinePolynomial(float(x[0]), shifts, x[1:])
        vals = _scan(T, scan)
        grid_vals = np.concatenate([vals, vals[-2:0:-1]])
        lb, worst, wx, finished = lower_bound(T, grid_vals, scan, cut_tol / 10)
        if finished and lb >= -cut_tol:
            status = "converged"
            break
        left = np.roll(vals, 1)
        right = np.roll(vals, -1)
        right[-1] = vals[-2]
        left[0] = vals[1]
        cand = np.nonzero((vals <= left) & (vals <= right))[0]
        new = [min(wx, 1 - wx)] if worst < 0 else []
        for k in cand[np.argsort(vals[cand])][:64]:
            _, xm = _local_min(T, k / scan, 1 / scan)
            xm = min(xm, 1 - xm)
            if float(T(xm)[0]) < 0:
                new.append(xm)
        if not new:
            status = "stalled"
            break
        cuts.extend(new)
        if len(base) + len(cuts) > MAX_GRID:
            break
    eps = max(0.0, -lb) if finished else math.inf
    if math.isinf(eps):
        cert = GammaCertificate(N, val, math.inf, lb, gap, it, len(cuts), len(base) * 2 - 2, f"{status}/unfinished", history)
        return val, T, cert
    lifted = CosinePolynomial((T.a0 + eps) / (1 + eps), shifts, T.coeffs / (1 + eps))
    lifted_vals = (grid_vals + eps) / (1 + eps)
    check = _certify(lifted, lifted_vals, scan, tol, 64, 1 << 16)
    ok = check.status == "ok" and check.certified >= -tol and abs(lifted.at_zero - 1) <= 1e-12
    cert = GammaCertificate(
        N, val, lifted.a0, check.certified, gap, it, len(cuts), len(base) * 2 - 2, status if ok else f"{status}/{check.status}", history
    )
    return val, lifted, cert


def psi_from_polynomial(T: CosinePolynomial, N: int) -> np.ndarray:
    """Psi(p - 1) = N a_{p-1}, zero elsewhere on 1..N."""
    out = np.zeros(N)
    out[T.shifts - 1] = N * T.coeffs
    return out


@dataclass
class Comparison:
    N: int
    delta: int
    witness: list[int]
    gamma: float
    margin: float

    @property
    def ok(self) -> bool:
        return self.margin >= 0


class ComparisonError(AssertionError):
    pass


def compare_delta_gamma(N: int, tol: float = 1e-9) -> Comparison:
    size, witness = delta_exact(N)
    g, _, _ = gamma_lp(N, tol=tol)
    margin = 2 * g + 2 * tol - size / N
    c = Comparison(N, size, witness, g, margin)
    if not c.ok:
        raise ComparisonError(f"delta({N})/N = {size / N} exceeds 2 gamma = {2 * g}")
    return c


def comparison_csv(rows: list[Comparison]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "delta_exact", "gamma_lp", "2gamma", "margin"])
    for r in rows:
        w.writerow([r.N, r.delta, repr(r.gamma), repr(2 * r.gamma), repr(r.margin)])
    return buf.getvalue()
