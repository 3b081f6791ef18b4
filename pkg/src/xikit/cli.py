"""Batch command-line front end.

Subcommands compute and persist the coefficient families and reports as
deterministic text files: ``xi`` (xi_r cache), ``li`` (a_n cache plus
bounds/oracle reports), ``lambda`` (lambda/1-phi/b_n/R_n sequences),
``scan`` (real-axis and circle scans, locus emission), ``fit`` (least
squares fits, asymptotic checks, summand peak rows) and ``verify``
(offline invariant re-check of any cache file).

Exit codes: 0 success; 2 when precision, truncation order or range make a
request unanswerable; 3 when a computation ran but violated an invariant
(the distinction lets CI separate "cannot compute" from "math disagrees").
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from mpmath import mp, mpf

from . import __version__
from .analysis import (asym_check, circle_scan, cnp_fit, fit_log_an, jm_scan,
                       pa_table, sandwich_scan_real, theta_for_height)
from .cache import format_value, read_cache, verify_cache, write_cache
from .context import PrecisionContext
from .errors import InvariantViolation, PrecisionRefusal, XikitError
from .lambdas import (inverse_phi_series, lambda_sequence, radius_estimates,
                      titchmarsh_bn)
from .li import (BIGFLOAT, EXACT_RATIONAL, LiCoefficients, an_bounds_check,
                 an_oracle, cnp_build, li_an, li_an_streaming, sigma_table,
                 sigma_required_R)
from .mobius import locus_emit
from .xi import xi_r_table, XiCoefficients

EXIT_OK = 0
EXIT_REFUSAL = 2
EXIT_VIOLATION = 3

DESK_LIMIT = 1200  # larger requests must opt in via --long-running


def _gate_scale(cfg: RunConfig, value: int, what: str):
    if value > DESK_LIMIT and not cfg.long_running:
        raise PrecisionRefusal(
            "%s=%d exceeds the desk-scale limit %d; pass --long-running"
            % (what, value, DESK_LIMIT)
        )


@dataclass(frozen=True)
class RunConfig:
    digits: int
    terms: int
    nmax: int
    range_lo: str
    range_hi: str
    out: str
    format: str
    long_running: bool

    def header_lines(self, extra=None):
        items = {
            "generator": "xikit %s" % __version__,
            "digits": self.digits, "terms": self.terms, "nmax": self.nmax,
            "range": "%s:%s" % (self.range_lo, self.range_hi),
            "format": self.format, "long-running": self.long_running,
        }
        items.update(extra or {})
        return ["# %s: %s" % (k, items[k]) for k in sorted(items)]

    def as_dict(self, extra=None):
        d = {"generator": "xikit %s" % __version__, "digits": self.digits,
             "terms": self.terms, "nmax": self.nmax,
             "range": "%s:%s" % (self.range_lo, self.range_hi),
             "long_running": self.long_running}
        d.update(extra or {})
        return d


def _config(args) -> RunConfig:
    lo, hi = (args.range.split(":", 1) if args.range else ("", ""))
    return RunConfig(digits=args.digits, terms=args.terms, nmax=args.nmax,
                     range_lo=lo, range_hi=hi, out=args.out,
                     format=args.format, long_running=args.long_running)


def _ctx(cfg: RunConfig) -> PrecisionContext:
    return PrecisionContext(digits=cfg.digits)


def _write_csv(path: Path, cfg: RunConfig, header_cols, rows, digits, extra=None):
    lines = cfg.header_lines(extra)
    lines.append(",".join(header_cols))
    with mp.workdps(digits + 10):
        for row in rows:
            lines.append(",".join(
                cell if isinstance(cell, str) else
                (str(cell) if isinstance(cell, int) else format_value(cell, digits))
                for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _write_json(path: Path, cfg: RunConfig, payload, extra=None):
    doc = {"config": cfg.as_dict(extra)}
    doc.update(payload)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="ascii")


def _mpstr(v, digits):
    return format_value(v, digits)


def _load_xi(args, cfg, ctx) -> XiCoefficients:
    if getattr(args, "xi_cache", None):
        cf = read_cache(args.xi_cache)
        if cf.family != "xi_r":
            raise XikitError("--xi-cache must point to an xi_r cache")
        if cf.digits < cfg.digits:
            raise PrecisionRefusal(
                "xi cache digits %d below requested %d" % (cf.digits, cfg.digits))
        vals = cf.values()
        return XiCoefficients(values=vals, R=len(vals) - 1, method="imported",
                              digits=cf.digits, ctx=ctx, quad_error=0.0)
    return xi_r_table(cfg.terms, ctx)


def cmd_xi(args) -> int:
    cfg = _config(args)
    ctx = _ctx(cfg)
    table = xi_r_table(cfg.terms, ctx)
    out = Path(cfg.out if cfg.out != "." else "xi_r.tsv")
    write_cache(out, "xi_r", cfg.digits, "quadrature", table.values,
                params={"terms": str(cfg.terms), "quad-error": "%.3e" % table.quad_error})
    with ctx.workdps():
        unity = 2 * sum(table.values[r] / mpf(4) ** r for r in range(table.R + 1))
        print("xi_0 = %s" % _mpstr(table.values[0], cfg.digits))
        print("2*sum xi_r/4^r = %s" % _mpstr(unity, cfg.digits))
    print("wrote %s (%d rows)" % (out, table.R + 1))
    return EXIT_OK


def cmd_li(args) -> int:
    cfg = _config(args)
    ctx = _ctx(cfg)
    _gate_scale(cfg, cfg.nmax, "nmax")
    if not getattr(args, "xi_cache", None) and cfg.terms < sigma_required_R(cfg.nmax):
        # auto-size the xi table when the caller did not pin it
        args_terms = sigma_required_R(cfg.nmax)
        cfg = RunConfig(**{**cfg.__dict__, "terms": args_terms})
    xi = _load_xi(args, cfg, ctx)
    sig = sigma_table(cfg.nmax, xi)
    if args.mode == EXACT_RATIONAL:
        cnp = cnp_build(cfg.nmax, EXACT_RATIONAL)
        li = li_an(cfg.nmax, cnp, sig)
    else:
        li, _ = li_an_streaming(cfg.nmax, sig, ctx)
    out = Path(cfg.out if cfg.out != "." else "a_n.tsv")
    write_cache(out, "a_n", cfg.digits, li.method, li.values,
                params={"nmax": str(cfg.nmax), "terms": str(xi.R), "mode": args.mode})
    report_dir = out.parent

    bounds = an_bounds_check(li, sig)
    _write_json(report_dir / "bounds_report.json", cfg, {
        "checks": [{"name": n, "count": c} for n, c in bounds.checks],
        "violations": [{"name": n, "n": i, "value": d} for n, i, d in bounds.violations],
        "ok": bounds.ok,
    }, extra={"mode": args.mode})

    limit = min(args.oracle_limit, cfg.nmax)
    oracle_ok = True
    if limit >= 1:
        oracle = an_oracle(limit, xi)
        with ctx.workdps():
            worst = max(abs(oracle.values[n] / li.values[n] - 1) for n in range(limit))
            tol = mpf(10) ** (-(cfg.digits - 10))
            oracle_ok = worst < tol
            _write_json(report_dir / "oracle_report.json", cfg, {
                "limit": limit,
                "max_relative_deviation": _mpstr(worst, 8),
                "tolerance": _mpstr(tol, 3),
                "ok": bool(oracle_ok),
            })
    print("wrote %s (%d rows); bounds ok: %s; oracle ok: %s"
          % (out, li.N, bounds.ok, oracle_ok))
    if not bounds.ok or not oracle_ok:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_lambda(args) -> int:
    cfg = _config(args)
    cf = read_cache(args.a_cache)
    if cf.family != "a_n":
        raise XikitError("--a-cache must point to an a_n cache")
    ctx = PrecisionContext(digits=cf.digits)
    li = LiCoefficients(values=cf.values(), N=len(cf.rows), method=cf.method,
                        digits=cf.digits, ctx=ctx)
    J = args.jmax or li.N - 1
    lam = lambda_sequence(li, J)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_cache(out_dir / "lambda_li.tsv", "lambda_n", cf.digits, "phi-ratio",
                lam.li_values, params={"normalization": "li", "jmax": str(J)})
    write_cache(out_dir / "lambda_keiper.tsv", "lambda_n", cf.digits, "phi-ratio",
                lam.keiper_values, params={"normalization": "keiper", "jmax": str(J)})
    recip = inverse_phi_series(li, J)
    bn = titchmarsh_bn(li, li.N)
    rn = radius_estimates(li)
    digits = cf.digits
    if cfg.format == "json":
        with ctx.workdps():
            _write_json(out_dir / "sequences.json", cfg, {
                "A_j": [_mpstr(v, digits) for v in recip.coeffs[1:]],
                "b_n": [_mpstr(v, digits) for v in bn.b],
                "b_root": [_mpstr(v, digits) for v in bn.root_estimates],
                "R_n": [_mpstr(v, digits) for v in rn.R_estimates],
            })
    else:
        _write_csv(out_dir / "inverse_phi.csv", cfg, ("j", "A_j"),
                   [(j, recip.coeffs[j]) for j in range(1, J + 1)], digits)
        _write_csv(out_dir / "titchmarsh.csv", cfg, ("n", "b_n", "b_root"),
                   [(n, bn.b[n], bn.root_estimates[n - 1]) for n in range(1, li.N + 1)],
                   digits)
        _write_csv(out_dir / "radius.csv", cfg, ("n", "R_n"),
                   [(n, rn.R_estimates[n - 1]) for n in range(1, li.N + 1)], digits)
    print("wrote lambda caches and sequences under %s (J=%d)" % (out_dir, J))
    return EXIT_OK


def _parse_range(cfg, default_lo, default_hi):
    lo = mpf(cfg.range_lo) if cfg.range_lo else mpf(default_lo)
    hi = mpf(cfg.range_hi) if cfg.range_hi else mpf(default_hi)
    return lo, hi


def cmd_scan(args) -> int:
    cfg = _config(args)
    ctx = _ctx(cfg)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    digits = cfg.digits
    violations = 0
    kinds = ("real", "circle", "locus") if args.kind == "all" else (args.kind,)
    if "real" in kinds or "circle" in kinds:
        xi = _load_xi(args, cfg, ctx)
    if "real" in kinds:
        lo, hi = _parse_range(cfg, 1, 30)
        rep = sandwich_scan_real((lo, hi, mpf(args.step)), xi)
        _write_csv(out_dir / "sandwich.csv", cfg, ("sigma",) + rep.columns,
                   rep.samples, digits)
        _write_csv(out_dir / "sandwich_events.csv", cfg,
                   ("kind", "function", "location", "refined_location"),
                   [(e.kind, e.function, e.location, e.refined_location)
                    for e in rep.events], digits)
        violations += len(rep.events_of("inequality-violation"))
        print("real-axis scan: %d samples, %d violations"
              % (len(rep.samples), len(rep.events)))
    if "circle" in kinds:
        with ctx.workdps():
            t_lo, t_hi = _parse_range(cfg, 10, 60)
            theta = (theta_for_height(t_hi), theta_for_height(t_lo))
            rep = circle_scan(theta, args.steps, xi)
        _write_csv(out_dir / "circle.csv", cfg, ("theta",) + rep.columns,
                   rep.samples, digits)
        _write_csv(out_dir / "circle_events.csv", cfg,
                   ("kind", "function", "location", "refined_location"),
                   [(e.kind, e.function, e.location, e.refined_location)
                    for e in rep.events], digits)
        print("circle scan: %d samples, %d dips"
              % (len(rep.samples), len(rep.events_of("dip"))))
    if "locus" in kinds:
        locus = locus_emit(args.map, mpf(args.modulus), args.samples, ctx)
        _write_csv(out_dir / ("locus_%s.csv" % args.map), cfg, ("x", "y"),
                   [(mp.re(p), mp.im(p)) for p in locus.points], digits,
                   extra={"locus-kind": locus.kind, "modulus": args.modulus})
        print("locus %s |.|=%s: %s" % (args.map, args.modulus, locus.kind))
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_fit(args) -> int:
    cfg = _config(args)
    ctx = _ctx(cfg)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    digits = cfg.digits

    li = None
    if args.a_cache:
        cf = read_cache(args.a_cache)
        if cf.family != "a_n":
            raise XikitError("--a-cache must point to an a_n cache")
        li = LiCoefficients(values=cf.values(), N=len(cf.rows), method=cf.method,
                            digits=cf.digits, ctx=PrecisionContext(digits=cf.digits))
    if li is not None:
        lo, hi = _parse_range(cfg, max(2, li.N // 2), li.N)
        fit = fit_log_an(li, (int(lo), int(hi)))
        with li.ctx.workdps():
            _write_json(out_dir / "fit_log_an.json", cfg, {
                "model": fit.model,
                "params": {k: _mpstr(v, digits) for k, v in fit.parameters.items()},
                "residual_rms": _mpstr(fit.residual_rms, digits),
                "range": list(fit.range), "sample_count": fit.sample_count,
            })
            asym = asym_check(li, (int(lo), int(hi)))
            _write_json(out_dir / "asym_check.json", cfg, {
                "range": [asym.lo, asym.hi],
                "min_ratio": _mpstr(asym.min_ratio, digits),
                "max_ratio": _mpstr(asym.max_ratio, digits),
            })
            if args.jm_max:
                jm = jm_scan(li, args.jm_max)
                _write_csv(out_dir / "jm_scan.csv", cfg, ("n", "j_m"), jm, digits)
        print("fit suite written for a_n table N=%d" % li.N)

    if args.table_n:
        n_list = sorted(int(x) for x in args.table_n.split(","))
        top = max(n_list)
        _gate_scale(cfg, top, "table-n")
        need_R = sigma_required_R(top)
        terms = max(cfg.terms, need_R)
        xi = xi_r_table(terms, ctx)
        sig = sigma_table(top, xi)
        _, cnp = li_an_streaming(1, sig, ctx, keep_rows=set(n_list))
        rows = pa_table(cnp, sig, n_list)
        with ctx.workdps():
            _write_csv(out_dir / "summand_peaks.csv", cfg,
                       ("n", "p_a", "log_summand", "log_sigma", "dlog_sigma"),
                       rows, digits)
        print("summand peak rows written for n in %s" % n_list)

    if args.cnp_fit_n:
        n = args.cnp_fit_n
        p_lo, p_hi = (int(x) for x in args.p_range.split(":"))
        cnp = cnp_build(n, BIGFLOAT, ctx, keep={n})
        fit = cnp_fit(cnp, n, (p_lo, p_hi))
        with ctx.workdps():
            _write_json(out_dir / ("cnp_fit_%d.json" % n), cfg, {
                "model": fit.model,
                "params": {k: _mpstr(v, digits) for k, v in fit.parameters.items()},
                "residual_rms": _mpstr(fit.residual_rms, digits),
                "range": list(fit.range), "sample_count": fit.sample_count,
            })
        print("C_{n,p} profile fit written for n=%d" % n)
    return EXIT_OK


def cmd_verify(args) -> int:
    worst = EXIT_OK
    for path in args.caches:
        try:
            cf = read_cache(path)
            problems = verify_cache(cf)
        except (XikitError, OSError, ValueError) as exc:
            print("%s: unreadable (%s)" % (path, exc), file=sys.stderr)
            worst = max(worst, EXIT_VIOLATION)
            continue
        if problems:
            for p in problems:
                print("%s: %s" % (path, p), file=sys.stderr)
            worst = max(worst, EXIT_VIOLATION)
        else:
            print("%s: ok (%s, %d rows)" % (path, cf.family, len(cf.rows)))
    return worst


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xikit", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version="xikit %s" % __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--digits", type=int, default=30)
        p.add_argument("--terms", type=int, default=64)
        p.add_argument("--nmax", type=int, default=100)
        p.add_argument("--range", default="")
        p.add_argument("--out", default=".")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--long-running", action="store_true")

    p = sub.add_parser("xi", help="compute and cache the xi_r table")
    common(p)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("li", help="compute and cache a_n; bounds and oracle reports")
    common(p)
    p.add_argument("--xi-cache")
    p.add_argument("--mode", choices=(BIGFLOAT, EXACT_RATIONAL), default=BIGFLOAT)
    p.add_argument("--oracle-limit", type=int, default=100)
    p.set_defaults(func=cmd_li)

    p = sub.add_parser("lambda", help="lambda/A_j/b_n/R_n from an a_n cache")
    common(p)
    p.add_argument("--a-cache", required=True)
    p.add_argument("--jmax", type=int, default=0)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("scan", help="sandwich scans, circle scan, locus emission")
    common(p)
    p.add_argument("--kind", choices=("real", "circle", "locus", "all"), default="all")
    p.add_argument("--xi-cache")
    p.add_argument("--step", default="0.05")
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--map", choices=("w", "w_h", "w_m"), default="w_m")
    p.add_argument("--modulus", default="1")
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", help="fits, asymptotic checks, summand peak rows")
    common(p)
    p.add_argument("--a-cache")
    p.add_argument("--jm-max", type=int, default=0)
    p.add_argument("--table-n", default="")
    p.add_argument("--cnp-fit-n", type=int, default=0)
    p.add_argument("--p-range", default="100:400")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="re-check invariants of cache files")
    p.add_argument("caches", nargs="+")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PrecisionRefusal as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return EXIT_REFUSAL
    except InvariantViolation as exc:
        print("invariant violation: %s" % exc, file=sys.stderr)
        return EXIT_VIOLATION
    except XikitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_REFUSAL


if __name__ == "__main__":
    sys.exit(main())
