"""Batch verification suites.

Each criterion is a function returning a ``Criterion``: a name, a pass flag,
the measured numbers and the wall time against its budget. The command line
``verify`` subcommand and the acceptance tests share these functions.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import approximants, characters, correlations, damping, expweight, optimize
from .arith import factorize, primes_upto


@dataclass
class Criterion:
    name: str
    ok: bool
    detail: dict
    seconds: float = 0.0
    limit: float = math.inf
    artifacts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = "" if self.seconds < self.limit else f" (over budget {self.limit:g} s)"
        return f"{tag} {self.name} [{self.seconds:.2f} s]{extra}"


def timed(name: str, limit: float):
    def wrap(fn: Callable[..., tuple[bool, dict]]):
        def run(*args, **kwargs) -> Criterion:
            t = time.perf_counter()
            ok, detail = fn(*args, **kwargs)
            art = detail.pop("_artifacts", {})
            return Criterion(name, bool(ok), detail, time.perf_counter() - t, limit, art)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.criterion = name
        return run

    return wrap


@timed("u_p Fourier positivity, p <= 100", 5)
def u_fourier(p_max: int = 100):
    bad = [p for p in primes_upto(p_max) if not (c := approximants.check_u_local(p)).formula_ok or not c.lower_bound_ok]
    return not bad, {"primes": len(primes_upto(p_max)), "failures": bad}


@timed("Gauss sums q <= 50, induced r <= 60", 10)
def gauss_sums(q_max: int = 50, r_max: int = 60, tol: float = 1e-9):
    worst_abs = 0.0
    count = 0
    for q in range(1, q_max + 1):
        for chi in characters.primitive_characters(q):
            worst_abs = max(worst_abs, abs(abs(characters.gauss_sum(chi)) ** 2 - q))
            count += 1
    worst_ind = 0.0
    induced = 0
    for q in range(1, r_max + 1):
        for chi in characters.primitive_characters(q):
            for r in range(q, r_max + 1, q):
                direct = characters.gauss_sum(chi.induce(r))
                worst_ind = max(worst_ind, abs(direct - characters.gauss_sum_induced(chi, r)))
                induced += 1
    ok = worst_abs <= tol and worst_ind <= tol
    return ok, {"primitive": count, "induced": induced, "abs_err": worst_abs, "induced_err": worst_ind}


@timed("additive-character expansion r <= 30", 30)
def additive_expansion(r_max: int = 30, tol: float = 1e-9):
    worst = max(characters.additive_expansion_residual(r) for r in range(1, r_max + 1))
    return worst <= tol, {"worst": worst}


@timed("completed approximants q <= 20, R <= 13", 60)
def completed_approximants(q_max: int = 20, R_max: int = 13, tol: float = 1e-9):
    worst = 0.0
    cases = 0
    Rs = primes_upto(R_max)
    for q in range(1, q_max + 1):
        for chi in characters.primitive_characters(q):
            for R in Rs:
                worst = max(worst, approximants.completed_product_residual(chi, R))
                cases += 1
    return worst <= tol, {"cases": cases, "worst": worst}


@timed("sieve identity Q <= 30", 5)
def sieve_identity(Q: int = 30, trials: int = 20, n_max: int = 300, seed: int = 0):
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        v = {r: Fraction(rng.randint(-50, 50), rng.randint(1, 30)) for r in range(1, Q + 1) if rng.random() < 0.6}
        lam = approximants.sieve_weight_transform(v, Q)
        for n in range(1, n_max + 1):
            if approximants.ramanujan_combination_value(v, n) != approximants.sieve_side_value(lam, n):
                failures += 1
    return failures == 0, {"trials": trials, "failures": failures}


@timed("Postnikov conductors 9, 27, 81, 25, 8, 16, 32", 10)
def postnikov_suite(conductors=(9, 27, 81, 25, 8, 16, 32)):
    checked = 0
    bad = []
    for Q in conductors:
        (p, n), = factorize(Q)
        for chi in characters.primitive_characters(Q):
            for m in range(1, n + 1):
                if p**m == 2:
                    continue
                f = characters.postnikov(chi, m)
                checked += 1
                if not characters.verify_postnikov(chi, f):
                    bad.append((Q, chi.label(), m))
    return not bad, {"checked": checked, "failures": bad}


@timed("quadratic Gauss sums p^n <= 2187 (odd), <= 1024 (p = 2)", 60)
def quadratic_sums(odd_max: int = 2187, two_max: int = 1024):
    pairs, viol, worst = expweight.quadratic_suite_all(odd_max, two_max)
    return viol == 0, {"pairs": pairs, "violations": viol, "worst_ratio": worst}


@timed("Gamma bound and cosh cross-check", 5)
def gamma_bounds(tol: float = 1e-8):
    viol, worst = expweight.gamma_bound_check()
    cosh = expweight.gamma_cosh_residual()
    return viol == 0 and cosh <= tol, {"violations": viol, "worst_ratio": worst, "cosh_rel_err": cosh}


@timed("weight transform comparison at constant 10", 10)
def weight_comparison():
    pts, viol, worst = expweight.compare_suite()
    C = expweight.real_case_constant()
    return viol == 0 and pts >= 10_000, {"points": int(pts), "violations": int(viol), "worst_ratio": float(worst), "real_case_C": float(C)}


@timed("prime-power domination, conductors 5, 7, 9, 27, 25, 8, 16", 120)
def prime_power_domination(conductors=(5, 7, 9, 27, 25, 8, 16)):
    rows = damping.prime_power_suite(conductors)
    bad = [(chi.modulus, chi.label(), beta, case) for chi, beta, case, ok in rows if not ok]
    cases = {}
    for _, _, case, _ in rows:
        cases[case] = cases.get(case, 0) + 1
    return not bad, {"checked": len(rows), "cases": cases, "failures": bad}


@timed("damping build sigma = 0.02, q = 5, N = 10^4", 120)
def damping_build(sigma: float = 0.02, q: int = 5, N: float = 1e4, M_eff: float = 10, depth: int = 3):
    from .zeros import synthetic_zero_set

    zs = synthetic_zero_set([(1 - sigma, 0.0, q, True)])
    b = damping.build_damping(zs, N=N, m_max=depth, M_eff=M_eff)
    js = [0] if b.exceptional else None
    E = b.terms[0].character.modulus if b.exceptional else 1
    checks = damping.damping_check(b, js=js, E_modulus=E)
    ok = b.alpha_10 >= 0.75 and all(bool(d) for d in checks.values()) and len(checks) > 0
    return ok, {
        "alpha_10": b.alpha_10,
        "exceptional": b.exceptional,
        "precondition": b.precondition,
        "E_modulus": E,
        "margins": {j: d.margin for j, d in checks.items()},
        "notes": b.notes,
    }


@timed("optimization: gamma(2), delta(10), delta <= 2 gamma for N <= 40", 600)
def optimization(n_max: int = 40, tol: float = 1e-6):
    g2, _, _ = optimize.gamma_lp(2)
    d10, w10 = optimize.delta_exact(10)
    rows = [optimize.compare_delta_gamma(N) for N in range(2, n_max + 1)]
    excess = max(r.delta / r.N - 2 * r.gamma for r in rows)
    ok = g2 == 0.5 and Fraction(d10, 10) == Fraction(3, 10) and all(r.delta / r.N <= 2 * r.gamma + tol for r in rows)
    return ok, {
        "gamma_2": g2,
        "delta_10": d10,
        "witness_10": w10,
        "max_excess": excess,
        "_artifacts": {"comparison.csv": optimize.comparison_csv(rows)},
    }


@timed("GRH-mode pipeline at N = 10^5", 600)
def grh_pipeline(N: int = 100_000):
    from .construct import PsiConfig, build_psi, cosine_certificate, psi_report, spectral_profile

    cfg = PsiConfig.demo(N)
    b = build_psi(cfg)
    prof = spectral_profile(b)
    cert = cosine_certificate(b)
    rep = psi_report(b, prof, cert)
    a0_expected = cert.delta1 / (cert.delta1 + cert.delta2)
    ok = (
        b.support_ok()
        and cert.delta2 > 0
        and cert.certified_min >= -1e-9
        and abs(cert.polynomial.at_zero - 1) <= 1e-12
        and abs(cert.a0 - a0_expected) <= 1e-15
        and cert.ok
    )
    return ok, {
        "support_ok": b.support_ok(),
        "delta1": cert.delta1,
        "delta2": cert.delta2,
        "a0": cert.a0,
        "certified_min": cert.certified_min,
        "T0": cert.polynomial.at_zero,
        "gridsize": cert.gridsize,
        "_artifacts": {"psi_report.json": rep.to_json(), "cosine.csv": cert.polynomial.to_csv()},
    }


@timed("trend suites", 600)
def trends():
    ram = correlations.ramanujan_trend()
    char = correlations.character_trend()
    wt = expweight.weight_trend()
    series = {
        "triple_gap": [r["gap"] for r in ram],
        "character_gap": [r["gap"] for r in char],
        "sum_integral_over_N^(7/8)": [r["C_7_8"] for r in wt],
        "minor_arc_over_N^(11/12)": [r["C_11_12"] for r in wt],
    }
    verdict = {k: correlations.non_increasing(v, ties=1) for k, v in series.items()}
    rows = []
    for r in ram:
        rows.append({"suite": "triple_gap", "parameter": r["X"], "value": r["gap"], "scale": r["scale"], "fitted_C": r["fitted_C"]})
    for r in char:
        rows.append({"suite": "character_gap", "parameter": r["Q"], "value": r["gap"], "scale": r["scale"], "fitted_C": r["fitted_C"]})
    C78 = max(r["C_7_8"] for r in wt)
    C1112 = max(r["C_11_12"] for r in wt)
    for r in wt:
        rows.append({"suite": "sum_integral", "parameter": r["N"], "value": r["residual"], "scale": r["N"] ** 0.875, "fitted_C": C78})
        rows.append({"suite": "minor_arc", "parameter": r["N"], "value": r["minor_sup"], "scale": r["N"] ** (11 / 12), "fitted_C": C1112})
    return all(verdict.values()), {
        "non_increasing": verdict,
        "series": series,
        "_artifacts": {"trends.csv": correlations.sweep_csv(rows)},
    }


sieve_identity.seeded = True

ACCEPTANCE = [
    u_fourier,
    gauss_sums,
    additive_expansion,
    completed_approximants,
    sieve_identity,
    postnikov_suite,
    quadratic_sums,
    gamma_bounds,
    weight_comparison,
    prime_power_domination,
    damping_build,
    optimization,
    grh_pipeline,
    trends,
]


def _zeros_suite():
    from .characters import principal_character
    from .zeros import (
        BranchCertificate,
        ScaleSelectionError,
        ZeroSet,
        explicit_formula_check,
        explicit_formula_sweep,
        page_bound_check,
        scale_select,
        synthetic_zero_set,
        zeta_zero_set,
    )

    @timed("explicit formula with 30 zeta zeros", 30)
    def explicit():
        zs = zeta_zero_set()
        chi = principal_character(1)
        rep = explicit_formula_check(chi, 1000.0, zs)
        sweep = explicit_formula_sweep(chi, [x + 0.5 for x in range(500, 1500)], zs, (7, 15, 30))
        rms = [r for _, r in sweep]
        ratio = rep.residual / (1000.0 / zs.Q)
        ok = ratio <= 5 and not rep.missing and all(b < a for a, b in zip(rms, rms[1:]))
        return ok, {"residual": rep.residual, "ratio_x_over_Q": ratio, "sweep_rms": dict(sweep)}

    @timed("Page bound data check", 5)
    def page():
        good = page_bound_check(synthetic_zero_set([(0.9, 0.0, 5, True)]), 0.1).ok
        bad = page_bound_check(synthetic_zero_set([(1 - 1e-9, 0.0, 5, True)]), 0.1).ok
        return good and not bad, {"pass_case": good, "fail_case_flagged": not bad}

    @timed("scale selection branches and certificate round trip", 5)
    def scales():
        _, b0, c0 = scale_select(1e3, 0.5, ZeroSet())
        _, b1, c1 = scale_select(1e3, 0.5, synthetic_zero_set([(1 - 1e-6, 0.0, 5, True)]))
        again = BranchCertificate.from_json(c1.to_json()).reevaluate()
        try:
            scale_select(1e3, 0.5, synthetic_zero_set([(0.98, 3.0, 5, False), (0.98, 5.0, 7, False)]))
            residuals = None
        except ScaleSelectionError as e:
            residuals = e.residuals
        ok = (
            b0 == "unexceptional"
            and c0.unexceptional_sum == 0
            and b1 == "exceptional"
            and again == c1.holds
            and residuals is not None
            and {"unexceptional", "exceptional"} <= set(residuals)
        )
        return ok, {"empty": b0, "tiny_sigma": b1, "round_trip": again, "both_fail_residuals": residuals}

    return [explicit, page, scales]


SUITES: dict[str, Callable[[], list]] = {
    "periodic": lambda: [u_fourier],
    "characters": lambda: [gauss_sums, additive_expansion, postnikov_suite],
    "approximants": lambda: [completed_approximants, sieve_identity],
    "correlations": lambda: [trends],
    "damping": lambda: [prime_power_domination, damping_build],
    "expweight": lambda: [quadratic_sums, gamma_bounds, weight_comparison],
    "zeros": _zeros_suite,
}


def run_suite(name: str, out: Path | None = None, seed: int = 0) -> list[Criterion]:
    if name == "all":
        fns = [f for key in SUITES for f in SUITES[key]()]
    else:
        fns = SUITES[name]()
    results = []
    for fn in fns:
        c = fn(seed=seed) if getattr(fn, "seeded", False) else fn()
        results.append(c)
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            for fname, text in c.artifacts.items():
                (out / fname).write_text(text)
    return results


def run_acceptance() -> list[Criterion]:
    return [fn() for fn in ACCEPTANCE]
