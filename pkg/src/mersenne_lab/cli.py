"""Command-line entry point: ``mersenne-lab <subcommand> ...``.

Exit status: 0 success, 1 a verification suite found violations, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import kernels
from .arith import FactorBudget, factor_small
from .cache import FIELDS, FactorCache
from .density import Method, count_dense, density_profile, generate_dense, smooth_count
from .mersenne import (
    divisor_multiplier_set,
    factor_mersenne,
    largest_prime_factor_mersenne,
    primitive_divisor,
    verify_product,
)
from .series import (
    classify_n,
    partial_sum_sigma,
    phi_min_order,
    schinzel_check,
    stewart_A_exceptions,
    stewart_B_check,
    tau_sum_check,
)

SIGMA_COLUMNS = ("n", "alpha", "p_exact", "p_lower", "term_low", "term_high", "status")
CLASSIFY_COLUMNS = ("n", "alpha", "tau", "in_E", "in_F", "p_exact", "d_plus", "d_plus_bound_holds")
EXPORT_COLUMNS = ("n", "status", "factors", "cofactor", "trial_bound", "rho_cap", "timestamp")
SUITES = ("schinzel", "lemma3", "saias", "primitive", "product", "stewartA", "stewartB", "tausum", "phimin")

LEMMA3_Z = (2, 3, 4, 5, 8, 16, 100)
SAIAS_Z = (2, 10, 100)
SAIAS_BAND = (0.3, 3.5)
SAIAS_SPREAD = 3.0
TAU_SUM_TOLERANCE = 1e4
PHI_MIN_FLOOR = 0.3


def _ratio_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(getattr(v, "value", v))


def _json_value(v):
    if isinstance(v, float) or isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v) if abs(v) >= 2**53 else v
    return getattr(v, "value", v)


def _write_csv(out, columns, rows) -> None:
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row[c]) for c in columns])


def _emit_json(out, obj) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _budget(args) -> FactorBudget:
    return FactorBudget(args.trial_bound, args.rho_cap, args.budget_ms, args.seed)


def _cache(args) -> FactorCache | None:
    return None if args.no_cache else FactorCache(args.cache)


def cmd_factor(args, out) -> int:
    mf = factor_mersenne(args.n, _budget(args), _cache(args))
    obj = {
        "n": mf.n,
        "factors": [[str(p), e] for p, e in mf.merged.factors],
        "cofactor": str(mf.merged.cofactor),
        "status": mf.status.value,
    }
    if mf.n >= 2:
        lower, exact = largest_prime_factor_mersenne(mf)
        obj["largest_prime_factor"] = None if exact is None else str(exact)
        obj["largest_prime_factor_lower_bound"] = str(lower)
    if mf.complete and mf.n >= 2:
        obj["multipliers"] = list(divisor_multiplier_set(mf).multipliers)
        pd = primitive_divisor(mf)
        obj["primitive_divisor"] = None if pd is None else str(pd)
    _emit_json(out, obj)
    return 0


def cmd_density(args, out) -> int:
    prof = density_profile(factor_small(args.n))
    _emit_json(out, {
        "n": prof.n,
        "delta0": _ratio_str(prof.delta0),
        "delta": _ratio_str(prof.delta),
        "tau": prof.tau,
        "omega": prof.omega,
    })
    return 0


def cmd_gxz(args, out) -> int:
    method = Method.GENERATE if args.method == "generate" else Method.BRUTE_FORCE
    dc = count_dense(args.x, args.z, method)
    obj = {
        "x": dc.x,
        "z": _ratio_str(dc.z),
        "method": dc.method.value,
        "count": dc.count,
        "saias_ratio": dc.saias_ratio,
    }
    if args.emit_members:
        obj["members"] = sorted(generate_dense(args.x, args.z))
    _emit_json(out, obj)
    return 0


def cmd_smooth(args, out) -> int:
    _emit_json(out, {"x": args.x, "y": args.y, "psi": smooth_count(args.x, args.y)})
    return 0


def cmd_sigma(args, out) -> int:
    rep = partial_sum_sigma(args.alpha, args.max_n, _cache(args), _budget(args))
    rows = [{c: getattr(t, c) for c in SIGMA_COLUMNS} for t in rep.terms]
    if args.format == "csv":
        _write_csv(out, SIGMA_COLUMNS, rows)
        return 0
    _emit_json(out, {
        "alpha": rep.alpha,
        "n_max": rep.n_max,
        "sum_low": rep.sum_low,
        "sum_high": rep.sum_high,
        "all_exact": rep.all_exact,
        "theorem_regime": rep.theorem_regime,
        "excluded": [{"n": n, "reason": why} for n, why in rep.excluded],
        "terms": [{k: _json_value(v) for k, v in row.items()} for row in rows],
    })
    return 0


def cmd_classify(args, out) -> int:
    cache, budget = _cache(args), _budget(args)
    rows = []
    for n in range(2, args.max_n + 1):
        fl = classify_n(n, args.alpha, factor_mersenne(n, budget, cache))
        rows.append({c: getattr(fl, c) for c in CLASSIFY_COLUMNS})
    if args.format == "csv":
        _write_csv(out, CLASSIFY_COLUMNS, rows)
    else:
        _emit_json(out, [{k: _json_value(v) for k, v in row.items()} for row in rows])
    return 0


def _suite_schinzel(args, cache, budget):
    rep = schinzel_check(13, args.max_n, cache, budget)
    violations = [{"n": n, "P": str(p), "bound": 2 * n + 1} for n, p in rep.violations]
    violations += [{"n": n, "unverified": True} for n in rep.unverified]
    return violations, {"checked": rep.checked}


def _suite_lemma3(args, cache, budget):
    x = args.x or 10**5
    num, den = kernels.delta0_census(x)
    violations = []
    for z in LEMMA3_Z:
        chain = kernels.chain_test_census(x, z)
        gap_ok = num <= z * den
        bad = [int(n) for n in (chain != gap_ok).nonzero()[0] if n >= 1]
        violations += [{"n": n, "z": z} for n in bad]
    return violations, {"x": x, "z": list(LEMMA3_Z)}


def _suite_saias(args, cache, budget):
    top = args.x or 10**6
    grid = [10**k for k in range(3, 7) if 10**k <= top]
    lo, hi = SAIAS_BAND
    violations = []
    ratios = {}
    for z in SAIAS_Z:
        rs = [count_dense(x, z, Method.GENERATE).saias_ratio for x in grid]
        ratios[str(z)] = rs
        for x, r in zip(grid, rs):
            if not lo <= r <= hi:
                violations.append({"z": z, "x": x, "ratio": r})
        if rs and max(rs) / min(rs) >= SAIAS_SPREAD:
            violations.append({"z": z, "spread": max(rs) / min(rs)})
    return violations, {"x": grid, "ratios": ratios}


def _suite_primitive(args, cache, budget):
    violations = []
    for n in range(2, args.max_n + 1):
        mf = factor_mersenne(n, budget, cache)
        if not mf.complete:
            violations.append({"n": n, "partial": True})
            continue
        if n >= 7 and not divisor_multiplier_set(mf).multipliers:
            violations.append({"n": n, "empty_D": True})
        pd = primitive_divisor(mf)
        if (pd is None) != (n == 6):
            violations.append({"n": n, "primitive_divisor": None if pd is None else str(pd)})
    return violations, {"max_n": args.max_n}


def _suite_product(args, cache, budget):
    violations = []
    for n in range(1, args.max_n + 1):
        mf = factor_mersenne(n, budget, cache)
        if not (mf.complete and verify_product(mf)):
            violations.append({"n": n, "status": mf.status.value, "verified": verify_product(mf)})
    return violations, {"max_n": args.max_n}


def _suite_stewart_a(args, cache, budget):
    rep = stewart_A_exceptions(args.max_n, args.epsilon, cache, budget)
    return [], {"epsilon": rep.epsilon, "exceptions": list(rep.exceptions),
                "density": rep.density, "skipped": list(rep.skipped)}


def _suite_stewart_b(args, cache, budget):
    rep = stewart_B_check(args.max_n, args.kappa, args.big_c, cache, budget)
    violations = [{"n": n} for n in rep.below_c]
    return violations, {"kappa": rep.kappa, "C": rep.big_c, "qualifying": len(rep.qualifying),
                        "min_ratio": rep.min_ratio, "argmin": rep.argmin}


def _suite_tausum(args, cache, budget):
    x = args.x or 10**6
    total, ref = tau_sum_check(x)
    small, _ = tau_sum_check(100)
    violations = []
    if abs(total - ref) >= TAU_SUM_TOLERANCE:
        violations.append({"x": x, "sum": total, "reference": ref})
    if small != 482:
        violations.append({"x": 100, "sum": small, "expected": 482})
    return violations, {"x": x, "sum": total, "reference": ref}


def _suite_phimin(args, cache, budget):
    x = args.x or 10**6
    value, argmin = phi_min_order(100, x)
    violations = [] if value >= PHI_MIN_FLOOR else [{"min": value, "argmin": argmin}]
    return violations, {"range": [100, x], "min": value, "argmin": argmin}


_SUITE_FUNCS = {
    "schinzel": _suite_schinzel,
    "lemma3": _suite_lemma3,
    "saias": _suite_saias,
    "primitive": _suite_primitive,
    "product": _suite_product,
    "stewartA": _suite_stewart_a,
    "stewartB": _suite_stewart_b,
    "tausum": _suite_tausum,
    "phimin": _suite_phimin,
}


def cmd_verify(args, out) -> int:
    violations, details = _SUITE_FUNCS[args.suite](args, _cache(args), _budget(args))
    _emit_json(out, {"suite": args.suite, "violations": violations, "details": details})
    out.write(f"{len(violations)} violations\n")
    return 1 if violations else 0


def cmd_export(args, out) -> int:
    cache = FactorCache(args.cache)
    recs = cache.records()
    buf = io.StringIO(newline="")
    if args.format == "csv":
        rows = [{
            "n": r.n,
            "status": r.status,
            "factors": "*".join(f"{p}^{e}" for p, e in r.factors),
            "cofactor": r.cofactor,
            "trial_bound": r.trial_bound,
            "rho_cap": r.rho_cap,
            "timestamp": r.timestamp,
        } for r in recs]
        _write_csv(buf, EXPORT_COLUMNS, rows)
    else:
        _emit_json(buf, [{f: getattr(r, f) if f != "factors" else [list(x) for x in r.factors]
                          for f in FIELDS} for r in recs])
    Path(args.out).write_text(buf.getvalue(), encoding="utf-8", newline="")
    out.write(f"exported {len(recs)} records to {args.out}\n")
    return 0


def _fraction(s: str) -> Fraction:
    try:
        z = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc
    if z < 2:
        raise argparse.ArgumentTypeError("z must be >= 2")
    return z


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mersenne-lab",
        description="Factor Mersenne numbers and check divisor-gap statistics.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "CSV columns (fixed order):\n"
            f"  sigma --format csv:    {','.join(SIGMA_COLUMNS)}\n"
            f"  classify --format csv: {','.join(CLASSIFY_COLUMNS)}\n"
            f"  export --format csv:   {','.join(EXPORT_COLUMNS)}\n"
            "Cache path: --cache, else $MERSENNE_LAB_CACHE, else ~/.cache/mersenne_lab/factors.jsonl"
        ),
    )
    p.add_argument("--cache", help="factor cache file (JSON lines)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def budget_opts(sp):
        d = FactorBudget()
        sp.add_argument("--trial-bound", type=_positive, default=d.trial_division_bound)
        sp.add_argument("--rho-cap", type=_positive, default=d.rho_iteration_cap)
        sp.add_argument("--budget-ms", type=_positive, default=d.wall_clock_cap_ms)
        sp.add_argument("--seed", type=int, default=d.rng_seed)

    sp = sub.add_parser("factor", help="factor 2^n - 1 (JSON)")
    sp.add_argument("--n", type=_positive, required=True)
    budget_opts(sp)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("density", help="Delta, Delta_0, tau, omega of n (JSON)")
    sp.add_argument("--n", type=_positive, required=True)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("gxz", help="count G(x, z) = {n <= x : Delta_0(n) <= z} (JSON)")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--z", type=_fraction, required=True)
    sp.add_argument("--method", choices=("generate", "sieve"), default="generate")
    sp.add_argument("--emit-members", action="store_true")
    sp.set_defaults(func=cmd_gxz)

    sp = sub.add_parser("smooth", help="Psi(x, y) (JSON)")
    sp.add_argument("--x", type=_positive, required=True)
    sp.add_argument("--y", type=_positive, required=True)
    sp.set_defaults(func=cmd_smooth)

    sp = sub.add_parser("sigma", help="partial sum of (log n)^alpha / P(2^n - 1)")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    budget_opts(sp)
    sp.set_defaults(func=cmd_sigma)

    sp = sub.add_parser("classify", help="E/F membership and the D+(n) bound for 2 <= n <= max-n")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    budget_opts(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="run a verification suite; exit 1 on violations")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--max-n", type=int, default=120)
    sp.add_argument("--x", type=int, default=None, help="range top for lemma3/saias/tausum/phimin")
    sp.add_argument("--epsilon", type=float, default=0.1, help="stewartA: f(n) = (log n)^epsilon")
    sp.add_argument("--kappa", type=float, default=1.2, help="stewartB: omega(n) < kappa loglog n")
    sp.add_argument("--big-c", type=float, default=0.0, help="stewartB: flag n with ratio below C")
    budget_opts(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export", help="write the factor cache as CSV or JSON")
    sp.add_argument("--format", choices=("csv", "json"), required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "max_n", 2) < 2 or (getattr(args, "x", None) or 2) < 2:
        parser.print_usage(sys.stderr)
        sys.stderr.write("mersenne-lab: error: --max-n and --x must be >= 2\n")
        return 2
    try:
        return args.func(args, out)
    except ValueError as exc:
        sys.stderr.write(f"mersenne-lab: error: {exc}\n")
        return 2


run_command = main

if __name__ == "__main__":
    sys.exit(main())
