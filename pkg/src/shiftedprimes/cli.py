"""Command line front door.

Every subcommand prints one PASS/FAIL summary line, writes JSON/CSV (and PNG
figures where there is something to draw) to its output directory, and exits
0 when all checks pass, 1 when one fails (naming it) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

SUITE_NAMES = ("periodic", "characters", "approximants", "correlations", "damping", "expweight", "zeros", "all")

CSV_HELP = {
    "compare": "comparison.csv columns: N, delta_exact, gamma_lp, 2gamma, margin (= 2 gamma + 2 tol - delta/N)",
    "gamma": "cosine.csv columns: shift, coefficient (row shift=0 holds a0)",
    "build-psi": "psi.csv columns: n, psi; cosine.csv columns: shift, coefficient (row shift=0 holds a0)",
    "verify": "per-criterion artifacts; trends.csv columns: suite, parameter, value, scale, fitted_C",
    "delta": "delta.csv columns: N, size, witness (space separated)",
    "postnikov": "postnikov.csv columns: character, degree, coefficients (space separated), ok",
    "explicit-formula": "explicit_formula.csv columns: zeros, rms_residual over the x sweep",
}


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    threads: int = 1
    out: str | None = None
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        o = self.options
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        for key in ("n", "n_max", "p", "m"):
            if key in o and o[key] is not None and o[key] < 1:
                raise UsageError(f"--{key.replace('_', '-')} must be positive")
        if self.command == "gamma" and not 2 <= o["n"] <= 10_000:
            raise UsageError("--n must lie in [2, 10^4]")
        if self.command == "delta" and o["exact"] and o["n"] > 64:
            raise UsageError("--exact supports --n <= 64")
        if self.command == "compare" and not 2 <= o["n_max"] <= 64:
            raise UsageError("--n-max must lie in [2, 64]")
        if self.command == "build-psi":
            if o["n"] < 16:
                raise UsageError("--n must be at least 16")
            if o["M_eff"] <= 0:
                raise UsageError("--M-eff must be positive")
            if o["q1_bound"] <= 1:
                raise UsageError("--q1-bound must exceed 1")
            g = o.get("gridsize")
            if g is not None and (g & (g - 1) or g < 2 * o["n"]):
                raise UsageError("--gridsize must be a power of two >= 2N")
        if self.command == "postnikov" and o["p"] < 2:
            raise UsageError("--p must be a prime")
        if self.command == "explicit-formula":
            if not o["x"] >= 2 or not math.isfinite(o["x"]):
                raise UsageError("--x must be a finite number >= 2")
            if o["q"] < 1:
                raise UsageError("--q must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


class UsageError(ValueError):
    pass


# output helpers


def _out_dir(cfg: RunConfig) -> Path | None:
    return Path(cfg.out) if cfg.out else None


def _write(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _write_json(out: Path | None, name: str, payload: dict) -> None:
    _write(out, name, json.dumps(payload, indent=1, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    return str(x)


def _summary(ok: bool, what: str, failed: str = "") -> None:
    print(f"PASS {what}" if ok else f"FAIL {what}: {failed}")


# subcommands


def cmd_verify(cfg: RunConfig) -> bool:
    from .suites import run_suite

    out = _out_dir(cfg)
    results = run_suite(cfg.options["suite"], out, seed=cfg.seed)
    for c in results:
        print(c.line())
    failed = [c.name for c in results if not c.passed]
    _write_json(
        out,
        "verify.json",
        {
            "config": cfg.to_dict(),
            "criteria": [{"name": c.name, "ok": c.ok, "within_budget": c.seconds < c.limit, "detail": c.detail} for c in results],
        },
    )
    if out is not None:
        for c in results:
            series = c.detail.get("series")
            if series:
                from .report import plot_trends

                plot_trends(series, out / "trends.png")
    _summary(not failed, f"verify {cfg.options['suite']} ({len(results)} checks)", "; ".join(failed))
    return not failed


def cmd_gamma(cfg: RunConfig) -> bool:
    from .optimize import gamma_lp

    N = cfg.options["n"]
    g, T, cert = gamma_lp(N)
    print(f"gamma({N}) = {g:.10g}")
    print(f"bracket [{cert.lower:.12g}, {cert.upper:.12g}] width {cert.width:.3g}, status {cert.status}")
    ok = cert.status == "converged" and cert.certified_min >= -1e-9
    out = _out_dir(cfg)
    _write_json(out, "gamma.json", {"config": cfg.to_dict(), "gamma": g, "certificate": asdict(cert), "deviations": ["LP solved by HiGHS"]})
    _write(out, "cosine.csv", T.to_csv())
    if out is not None:
        from .report import plot_cosine

        plot_cosine(T, out / "gamma_cosine.png", cert.certified_min)
    _summary(ok, f"gamma --n {N}", f"lifted polynomial not certified nonnegative (status {cert.status}, min {cert.certified_min:.3g})")
    return ok


def cmd_delta(cfg: RunConfig) -> bool:
    from .optimize import DifferenceGraph, delta_exact, delta_heuristic

    N = cfg.options["n"]
    exact = cfg.options["exact"]
    size, witness = delta_exact(N) if exact else delta_heuristic(N)
    print(size)
    print("{" + ",".join(map(str, witness)) + "}")
    ok = DifferenceGraph.build(N).is_independent(witness) and len(witness) == size
    out = _out_dir(cfg)
    _write_json(out, "delta.json", {"config": cfg.to_dict(), "size": size, "witness": witness, "exact": exact})
    _write(out, "delta.csv", f"N,size,witness\n{N},{size},{' '.join(map(str, witness))}\n")
    kind = "exact" if exact else "heuristic lower bound"
    _summary(ok, f"delta({N}) = {size} ({kind})", "witness contains a shifted-prime difference")
    return ok


def cmd_compare(cfg: RunConfig) -> bool:
    from .optimize import ComparisonError, compare_delta_gamma, comparison_csv

    K = cfg.options["n_max"]
    rows = []
    failure = ""
    for N in range(2, K + 1):
        try:
            rows.append(compare_delta_gamma(N))
        except ComparisonError as e:
            failure = str(e)
            break
    out = _out_dir(cfg)
    _write(out, "comparison.csv", comparison_csv(rows))
    _write_json(out, "compare.json", {"config": cfg.to_dict(), "rows": [asdict(r) for r in rows], "failure": failure})
    if out is not None and rows:
        from .report import plot_comparison

        plot_comparison(rows, out / "comparison.png")
    if rows:
        worst = min(rows, key=lambda r: r.margin)
        print(f"smallest margin 2 gamma - delta/N = {worst.margin:.6g} at N = {worst.N}")
    ok = not failure
    _summary(ok, f"delta(N)/N <= 2 gamma(N) for N = 2..{K}", failure)
    return ok


def cmd_build_psi(cfg: RunConfig) -> bool:
    from .construct import (
        NOMINAL_EXPONENTS,
        PsiConfig,
        build_psi,
        cosine_certificate,
        psi_report,
        spectral_profile,
    )
    from .zeros import load_zero_set

    o = cfg.options
    zs = load_zero_set(o["zeros"])
    N = o["n"]
    kw = dict(zeros=zs, M_eff=o["M_eff"], gridsize=o["gridsize"], damping_depth=o["depth"])
    if o["nominal_exponents"]:
        pc = PsiConfig(N, N ** (1 / 120), NOMINAL_EXPONENTS, **kw)
    else:
        pc = PsiConfig.demo(N, o["q1_bound"], **kw)
    variant = "lambda_sharp" if o["sharp"] else "lambda_prime"
    b = build_psi(pc, variant)
    prof = spectral_profile(b, pc.gridsize, seed=cfg.seed)
    cert = cosine_certificate(b, pc.gridsize)
    rep = psi_report(b, prof, cert)
    failures = []
    if rep.support_ok is False:
        failures.append("support not contained in shifted primes")
    if cert.delta2 <= 0:
        failures.append("delta2 <= 0")
    if not (cert.ok and cert.certified_min >= -1e-9):
        failures.append(f"cosine certificate (certified min {cert.certified_min:.3g})")
    if abs(cert.polynomial.at_zero - 1) > 1e-12:
        failures.append("T(0) != 1")
    out = Path(o["report"])
    payload = json.loads(rep.to_json())
    payload["run"] = cfg.to_dict()
    _write_json(out, "psi_report.json", payload)
    _write(out, "cosine.csv", cert.polynomial.to_csv())
    _write(out, "psi.csv", "n,psi\n" + "".join(f"{n},{b.values[n - 1]!r}\n" for n in b.support()))
    from .report import plot_cosine, plot_psi

    plot_psi(b.values, out / "psi.png")
    plot_cosine(cert.polynomial, out / "cosine.png", cert.certified_min)
    print(f"delta1 = {cert.delta1:.6g}, delta2 = {cert.delta2:.6g}, a0 = {cert.a0:.6g}, certified min = {cert.certified_min:.3g}")
    ok = not failures
    _summary(ok, f"build-psi --n {N} ({variant})", "; ".join(failures))
    return ok


def cmd_postnikov(cfg: RunConfig) -> bool:
    from .characters import postnikov, primitive_characters, verify_postnikov

    p, n, m = cfg.options["p"], cfg.options["n"], cfg.options["m"]
    from .arith import is_prime

    if not is_prime(p):
        raise UsageError("--p must be a prime")
    if not 1 <= m <= n:
        raise UsageError("need 1 <= m <= n")
    if p**m == 2:
        raise UsageError("p^m = 2 is excluded")
    rows = []
    for chi in primitive_characters(p**n):
        f = postnikov(chi, m)
        rows.append((chi.label(), f, verify_postnikov(chi, f)))
    bad = [r for r in rows if not r[2]]
    out = _out_dir(cfg)
    lines = ["character,degree,coefficients,ok"]
    for label, f, ok in rows:
        lines.append(f"\"{label}\",{f.degree},{' '.join(map(str, f.coeffs))},{ok}")
    _write(out, "postnikov.csv", "\n".join(lines) + "\n")
    _write_json(
        out,
        "postnikov.json",
        {"config": cfg.to_dict(), "polynomials": [{"character": str(l), "coefficients": list(f.coeffs), "modulus": f.modulus, "ok": k} for l, f, k in rows]},
    )
    for label, f, ok in rows[:3]:
        print(f"chi {label}: f(x) = " + " + ".join(f"{c} x^{i + 1}" for i, c in enumerate(f.coeffs)) + f"  (mod {f.modulus})")
    if len(rows) > 3:
        print(f"... {len(rows) - 3} more")
    ok = not bad
    _summary(ok, f"postnikov {len(rows)} primitive characters mod {p}^{n}, m = {m}", f"{len(bad)} polynomials do not reproduce chi(1 + p^m x)")
    return ok


def cmd_explicit_formula(cfg: RunConfig) -> bool:
    from .characters import primitive_characters, principal_character
    from .zeros import explicit_formula_check, explicit_formula_sweep, load_zero_set

    o = cfg.options
    zs = load_zero_set(o["zeros"])
    q = o["q"]
    if q == 1:
        chi = principal_character(1)
    else:
        chars = primitive_characters(q)
        if not chars:
            raise UsageError(f"no primitive characters mod {q}")
        if not 0 <= o["index"] < len(chars):
            raise UsageError(f"--index must lie in [0, {len(chars)})")
        chi = chars[o["index"]]
    rep = explicit_formula_check(chi, o["x"], zs, o["Q"])
    x = o["x"]
    lo = max(2.0, x / 2)
    sweep_x = [lo + (x - lo) * (k + 0.5) / 200 for k in range(200)]
    total = len({abs(z.gamma) for z in zs})
    counts = sorted({max(1, total // 4), max(1, total // 2), total}) if total else []
    sweep = explicit_formula_sweep(chi, sweep_x, zs, counts) if counts else []
    print(f"residual {rep.residual:.6g}, scale {rep.scale:.6g}, ratio {rep.ratio:.4g}, zeros used {rep.zeros_used}")
    for k, r in sweep:
        print(f"  lowest {k} heights: rms residual on [{lo:g}, {x:g}] = {r:.6g}")
    failures = list(rep.missing)
    if rep.ratio > o["bound"]:
        failures.append(f"residual exceeds {o['bound']:g} x scale")
    rms = [r for _, r in sweep]
    if any(b > a for a, b in zip(rms, rms[1:])):
        failures.append("rms residual grows when zeros are added")
    out = _out_dir(cfg)
    _write_json(
        out,
        "explicit_formula.json",
        {
            "config": cfg.to_dict(),
            "residual": rep.residual,
            "scale": rep.scale,
            "ratio": rep.ratio,
            "zeros_used": rep.zeros_used,
            "missing": rep.missing,
            "prime_side": [rep.prime_side.real, rep.prime_side.imag],
            "zero_side": [rep.zero_side.real, rep.zero_side.imag],
            "sweep": sweep,
        },
    )
    _write(out, "explicit_formula.csv", "zeros,rms_residual\n" + "".join(f"{k},{r!r}\n" for k, r in sweep))
    ok = not failures
    _summary(ok, f"explicit formula at x = {x:g}", "; ".join(failures))
    return ok


COMMANDS = {
    "verify": cmd_verify,
    "gamma": cmd_gamma,
    "delta": cmd_delta,
    "compare": cmd_compare,
    "build-psi": cmd_build_psi,
    "postnikov": cmd_postnikov,
    "explicit-formula": cmd_explicit_formula,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="FFT worker count (results do not depend on it)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--out", default=None, help="directory for JSON/CSV/PNG output")

    parser = argparse.ArgumentParser(prog="shiftedprimes", description="Shifted-prime difference sets: verification and construction tools.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, description=help_, epilog=CSV_HELP[name], parents=[common])

    p = add("verify", "run the module invariant suites")
    p.add_argument("--suite", choices=SUITE_NAMES, required=True)

    p = add("gamma", "gamma(N) by cutting-plane LP with a nonnegativity certificate")
    p.add_argument("--n", type=int, required=True)

    p = add("delta", "largest subset of 1..N free of shifted-prime differences")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="branch and bound (N <= 64); default is a heuristic lower bound")

    p = add("compare", "check delta(N)/N <= 2 gamma(N) for N = 2..K")
    p.add_argument("--n-max", type=int, required=True)

    p = add("build-psi", "build Psi, profile its cosine sums and certify the cosine polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zeros", default=None, help="zero file (JSON); omitted means the empty set")
    p.add_argument("--sharp", action="store_true", help="use the zero-corrected approximant")
    p.add_argument("--report", required=True, help="output directory")
    p.add_argument("--M-eff", dest="M_eff", type=float, default=10.0)
    p.add_argument("--q1-bound", type=float, default=30.0, help="first truncation level for the override exponents")
    p.add_argument("--nominal-exponents", action="store_true", help="exponents (1e-2, 1e-4, 1e-6) with T = N^(1/120)")
    p.add_argument("--gridsize", type=int, default=None)
    p.add_argument("--depth", type=int, default=3, help="damping depth")

    p = add("postnikov", "polynomials f with chi(1 + p^m x) = e(f(x)/p^(n-m))")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("explicit-formula", "compare the prime sum with its zero expansion")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--zeros", required=True)
    p.add_argument("--q", type=int, default=1, help="conductor of the primitive character")
    p.add_argument("--index", type=int, default=0, help="index among the primitive characters mod q")
    p.add_argument("--Q", type=float, default=None, help="height threshold (defaults to the file's Q)")
    p.add_argument("--bound", type=float, default=5.0, help="allowed residual / scale")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "seed", "threads", "out")}
    if args.command == "build-psi":
        args.out = args.report
    cfg = RunConfig(args.command, args.seed, args.threads, args.out, opts)
    from scipy import fft as sfft

    try:
        cfg.validate()
        with sfft.set_workers(cfg.threads):
            ok = COMMANDS[args.command](cfg)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"shiftedprimes: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as e:
        # bad data or a failed precondition: a check failure, not a usage error
        print(f"FAIL {args.command}: {e}")
        return 1
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
