"""Command-line front end emitting deterministic JSON/CSV reports.

One process runs one subcommand; batch mode executes a list of runs from a
config file, each written atomically to its own output path.  All big
integers are serialized as decimal strings and reports carry no timestamps,
so identical configs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .curves import (
    gap_vs_order,
    make_curve,
    make_point,
    node_order,
    parse_coord,
    parse_rat,
    point_order,
)
from .divis import (
    cavachi_check,
    closure_oracle,
    conjecture_check,
    gap_scan,
    poly_div_check,
    poly_window,
    robinson_report,
)
from .eds import (
    EdsSpec,
    companion4,
    companion5,
    eds_extend,
    is_proper,
    verify_companion,
    verify_family_for,
    verify_family_fora2,
)
from .exactring import ExactMathError
from .somos import (
    SomosSpec,
    extend,
    invariants4,
    invariants5,
    laurent_spec,
    period_mod,
    reflected_window,
    poly_unit_spec,
    symmetry_check,
    verify_transform,
)

DEFAULT_LO = -20
DEFAULT_HI = 200
DEFAULT_RMAX = 3
DEFAULT_BUDGET_N = 24


def _s(x):
    """Serialize exact values: ints/Fractions as decimal strings."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)


def _parse_init(text, k):
    vals = [parse_rat(t) for t in text.split(",")]
    if len(vals) != k:
        raise SystemExit(f"error: --init needs exactly {k} values, got {len(vals)}")
    return tuple(vals)


def _make_spec(args):
    k = args.k
    alpha = parse_rat(args.alpha)
    beta = parse_rat(args.beta)
    init = _parse_init(args.init, k)
    if all(v.denominator == 1 for v in (alpha, beta) + init):
        return SomosSpec(k=k, alpha=int(alpha), beta=int(beta),
                         initials=tuple(int(v) for v in init), ring="int")
    return SomosSpec(k=k, alpha=alpha, beta=beta, initials=init, ring="rat")


def _window(args, spec):
    return extend(spec, args.lo, args.hi)


def _gap_report_dict(r):
    return {
        "p": r.p,
        "r": r.r,
        "window": list(r.window),
        "occurrences": list(r.occurrences),
        "is_ap": r.is_ap,
        "first": r.first,
        "gap": r.gap,
        "valuation_profile": {
            str(k): ("inf" if v == float("inf") else v)
            for k, v in r.valuation_profile.items()},
        "classification": r.classification,
        "w": r.w,
        "obs2_gap_bound": r.obs2_gap_bound,
        "obs3_gap_ratio": r.obs3_gap_ratio,
        "obs4_geometric": r.obs4_geometric,
    }


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the results payload)


def _run_seq(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    return {"lo": win.lo, "hi": win.hi,
            "terms": [_s(win[n]) for n in win.indices()]}


def _run_invariants(args):
    spec = _make_spec(args)
    win = extend(spec, 1, max(args.k + 2, 8))
    if args.k == 4:
        inv = invariants4(spec, win, at=1)
        return {"T": _s(inv.T), "I": _s(inv.I)}
    inv = invariants5(spec, win, at=1)
    return {"S": _s(inv.S), "J": _s(inv.J)}


def _run_symmetry(args):
    spec = _make_spec(args)
    if args.fibonacci:
        # the window crosses tau_0 = 0, which the recurrence cannot pass;
        # build it by verified reflection instead
        win = reflected_window(spec, max(abs(args.lo), args.hi),
                               sign_rule=lambda n: (-1) ** (n + 1))
    else:
        win = _window(args, spec)
    rep = symmetry_check(spec, win, fibonacci=args.fibonacci)
    return {"ok": rep.ok, "checked": rep.checked,
            "violations": list(rep.violations)}


def _run_period(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    return {"modulus": args.mod, "period": period_mod(spec, args.mod, win)}


def _run_transform(args):
    rep = verify_transform(args.kind, args.nmax)
    return {"kind": rep.kind, "ok": rep.ok,
            "per_n": {str(n): ok for n, ok in sorted(rep.per_n.items())}}


def _run_eds(args):
    vals = [parse_rat(t) for t in args.init.split(",")]
    if len(vals) != 4:
        raise SystemExit("error: --init needs exactly 4 values a1,a2,a3,a4")
    ints = all(v.denominator == 1 for v in vals)
    a = [int(v) if ints else v for v in vals]
    spec = EdsSpec(a1=a[0], a2=a[1], a3=a[2], a4=a[3])
    win = eds_extend(spec, args.lo, args.hi)
    rfor = verify_family_for(win, win.indices(), win.indices())
    rfora2 = verify_family_fora2(win, win.indices(), win.indices())
    return {
        "lo": win.lo, "hi": win.hi,
        "terms": [_s(win[n]) for n in win.indices()],
        "proper": is_proper(spec) if ints else None,
        "for": {"ok": rfor.ok, "checked": rfor.checked},
        "fora2": {"ok": rfora2.ok, "checked": rfora2.checked},
    }


def _run_companion(args):
    alpha, beta = parse_rat(args.alpha), parse_rat(args.beta)
    grid = range(1, args.grid + 1)
    if args.k == 4:
        pair = companion4(alpha, beta, args.grid + args.grid)
        r1, r2 = verify_companion(pair, grid, grid)
    else:
        p0 = companion5(alpha, beta, 0, args.grid + args.grid)
        p1 = companion5(alpha, beta, 1, args.grid + args.grid)
        r1, r2 = verify_companion(p0, grid, grid, pair_other=p1)
    return {"for1": {"ok": r1.ok, "checked": r1.checked,
                     "violations": r1.violations},
            "for2": {"ok": r2.ok, "checked": r2.checked,
                     "violations": r2.violations}}


def _run_gaps(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    reports = gap_scan(win, args.p, args.rmax)
    return {"p": args.p, "rmax": args.rmax,
            "reports": [_gap_report_dict(r) for r in reports]}


def _run_robinson(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    primes = [int(p) for p in args.primes.split(",")]
    table = robinson_report(spec, primes, win, args.rmax)
    return {str(p): {
        "classification": row["classification"],
        "observations": row["observations"],
        "w": row["w"],
        "gaps": {str(r.r): r.gap for r in row["reports"]},
    } for p, row in table.items()}


def _run_polydiv(args):
    ok = poly_div_check(args.k, args.n, args.l)
    return {"k": args.k, "n": args.n, "l": args.l,
            "d": 2 * args.n - args.k - 1, "divides": ok}


def _run_laurent(args):
    win = extend(laurent_spec(args.k), 1, args.n)
    out = {}
    for n in win.indices():
        t = win[n]
        out[str(n)] = {"num_terms": len(t.num.terms()),
                       "denominator_exponents": list(t.den)}
    return {"k": args.k, "n_max": args.n, "terms": out, "all_divisions_exact": True}


def _run_closure(args):
    seed = {int(s) for s in args.seed.split(",")}
    res = closure_oracle(seed, (args.lo, args.hi))
    return {"seed": sorted(res.seed), "closure": list(res.closure),
            "is_ap": res.is_ap, "difference": res.difference,
            "trivial": res.trivial}


def _run_conjecture(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    rep = conjecture_check(args.k, args.n, args.mmax, win)
    return {"k": rep.k, "n": rep.n, "q": _s(rep.q), "d": rep.d,
            "consistent": rep.consistent,
            "entries": [{
                "m": e["m"], "predicted_l": e["predicted_l"],
                "divides_at_predicted": e["divides_at_predicted"],
                "occurrences": list(e["occurrences"]),
            } for e in rep.entries]}


def _run_cavachi(args):
    n_lo, n_hi = (int(x) for x in args.nrange.split(".."))
    ms = [int(x) for x in args.mrange.split(",")]
    rep = cavachi_check(range(n_lo, n_hi + 1), ms,
                        exceptional_m_max=args.exceptional_mmax)
    return {"ok": rep.ok,
            "checked": [{"n": n, "m": m, "index": i, "ok": ok}
                        for n, m, i, ok in rep.checked],
            "exceptional": [{"m": m, "index": i, "ok": ok}
                            for m, i, ok in rep.exceptional]}


def _curve_from_args(args):
    coeffs = [parse_rat(t) for t in args.c.split(",")]
    if len(coeffs) != 4:
        raise SystemExit("error: --c needs exactly 4 coefficients c3,c2,c1,c0")
    adjoin = args.adjoin
    y = parse_coord(args.y)
    if adjoin is None and isinstance(y, tuple):
        # extend automatically when the sqrt coordinate is a non-residue
        from .curves import Fp
        if not Fp(args.p)(y[1]).is_square():
            adjoin = y[1]
    curve = make_curve(coeffs, args.p, adjoin=adjoin)
    point = make_point(curve, parse_coord(args.x), y)
    return curve, point


def _run_curve_order(args):
    if args.singular_node:
        coeffs = [parse_rat(t) for t in args.c.split(",")]
        order = node_order(coeffs, args.p, parse_rat(args.x))
        return {"p": args.p, "order": order, "singular_node": True}
    curve, point = _curve_from_args(args)
    return {"p": args.p, "order": point_order(curve, point),
            "singular": curve.singular, "notice": curve.notice}


def _run_gap_vs_order(args):
    spec = _make_spec(args)
    win = _window(args, spec)
    rep = gap_scan(win, args.p, 1)[0]
    if args.singular_node:
        coeffs = [parse_rat(t) for t in args.c.split(",")]
        order = node_order(coeffs, args.p, parse_rat(args.x))
        return {"p": args.p, "gap": rep.gap, "order": order,
                "equal": rep.gap == order, "singular_node": True}
    curve, point = _curve_from_args(args)
    cmp_ = gap_vs_order(rep, curve, point)
    return {"p": args.p, "gap": cmp_.gap, "order": cmp_.order,
            "equal": cmp_.equal,
            "gap_divides_order": cmp_.gap_divides_order,
            "order_divides_gap": cmp_.order_divides_gap}


# ---------------------------------------------------------------------------
# serialization


def _emit_json(report):
    return (json.dumps(report, sort_keys=True, separators=(",", ": "),
                       indent=1) + "\n").encode()


def _emit_csv(report):
    sub = report["subcommand"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    res = report["results"]
    if sub == "gaps":
        w.writerow(["p", "r", "first", "gap", "is_ap", "classification", "w",
                    "occurrences"])
        for r in res["reports"]:
            w.writerow([r["p"], r["r"], r["first"], r["gap"], r["is_ap"],
                        r["classification"], r["w"],
                        " ".join(str(i) for i in r["occurrences"])])
    elif sub == "robinson":
        w.writerow(["p", "classification", "equally_spaced", "gap_bound",
                    "p_squared_gap", "geometric_gaps", "w", "gap_1"])
        for p in sorted(res, key=int):
            row = res[p]
            obs = row["observations"]
            w.writerow([p, row["classification"], obs["equally_spaced"],
                        obs["gap_bound"], obs["p_squared_gap"],
                        obs["geometric_gaps"], row["w"],
                        row["gaps"].get("1")])
    else:
        raise SystemExit(f"error: csv format is not defined for '{sub}'")
    return buf.getvalue().encode()


def emit(report, fmt, path=None):
    """Serialize deterministically; write atomically when a path is given."""
    data = _emit_json(report) if fmt == "json" else _emit_csv(report)
    if path:
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return len(data)


# ---------------------------------------------------------------------------
# argument parsing


def _add_spec_args(p, k_default=4):
    p.add_argument("--k", type=int, default=k_default, choices=(4, 5))
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="1")
    p.add_argument("--init", default=None,
                   help="comma-separated initial values (default: all 1)")
    p.add_argument("--from", dest="lo", type=int, default=DEFAULT_LO)
    p.add_argument("--to", dest="hi", type=int, default=DEFAULT_HI)


def _add_output_args(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, help="output path (default stdout)")


def build_parser():
    top = argparse.ArgumentParser(
        prog="somoseds",
        description="Exact Somos-4/5 and elliptic divisibility sequence checks")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, spec=False, **kw):
        p = sub.add_parser(name, **kw)
        if spec:
            _add_spec_args(p)
        _add_output_args(p)
        p.set_defaults(handler=fn)
        return p

    add("seq", _run_seq, spec=True, help="generate a sequence window")
    add("invariants", _run_invariants, spec=True,
        help="invariant values T, I (k=4) or S, J (k=5)")
    p = add("symmetry", _run_symmetry, spec=True,
            help="window symmetry tau_n = tau_{k+1-n}")
    p.add_argument("--fibonacci", action="store_true",
                   help="check tau_{-n} = (-1)^(n+1) tau_n instead")
    p = add("period", _run_period, spec=True, help="period of residues mod m")
    p.add_argument("--mod", type=int, required=True)
    p = add("transform", _run_transform,
            help="verify an equivalent-sequence transformation")
    p.add_argument("--kind", required=True,
                   choices=("mg", "mgs", "somos5_abcba", "sign_twist"))
    p.add_argument("--nmax", type=int, default=12)
    p = add("eds", _run_eds, help="extend and verify an EDS")
    p.add_argument("--init", required=True, help="a1,a2,a3,a4")
    p.add_argument("--from", dest="lo", type=int, default=-10)
    p.add_argument("--to", dest="hi", type=int, default=20)
    p = add("companion", _run_companion, help="companion EDS identity families")
    p.add_argument("--k", type=int, default=4, choices=(4, 5))
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="1")
    p.add_argument("--grid", type=int, default=10, help="max m = max n")
    p = add("gaps", _run_gaps, spec=True, help="prime-power gap scan")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rmax", type=int, default=DEFAULT_RMAX)
    p = add("robinson", _run_robinson, spec=True,
            help="consolidated observation report")
    p.add_argument("--primes", default="2,3,5,7,11")
    p.add_argument("--rmax", type=int, default=DEFAULT_RMAX)
    p = add("polydiv", _run_polydiv, help="polynomial divisibility certificate")
    p.add_argument("--k", type=int, default=4, choices=(4, 5))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = add("laurent", _run_laurent, help="variable-initial Laurent window")
    p.add_argument("--k", type=int, default=4, choices=(4, 5))
    p.add_argument("--n", type=int, default=12)
    p = add("closure", _run_closure, help="modified-set-of-differences oracle")
    p.add_argument("--seed", required=True, help="comma-separated integers")
    p.add_argument("--from", dest="lo", type=int, default=-100)
    p.add_argument("--to", dest="hi", type=int, default=100)
    p = add("conjecture", _run_conjecture, spec=True,
            help="prime-power index formula report (non-asserting)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mmax", type=int, default=1)
    p = add("cavachi", _run_cavachi, help="Fibonacci divisibility facts")
    p.add_argument("--nrange", default="4..9", help="lo..hi")
    p.add_argument("--mrange", default="1,2")
    p.add_argument("--exceptional-mmax", type=int, default=6)
    for name, fn in (("curve-order", _run_curve_order),
                     ("gap-vs-order", _run_gap_vs_order)):
        p = add(name, fn, spec=(name == "gap-vs-order"),
                help="point order on a reduced cubic"
                if name == "curve-order" else "compare gap with point order")
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--c", required=True, help="c3,c2,c1,c0 as rationals")
        p.add_argument("--x", required=True)
        p.add_argument("--y", default="0")
        p.add_argument("--adjoin", type=int, default=None)
        p.add_argument("--singular-node", action="store_true",
                       help="use the node parametrization (singular curve "
                            "whose coefficients do not reduce mod p)")

    p = sub.add_parser("batch", help="run a list of configs from a JSON file")
    p.add_argument("config")
    p.set_defaults(handler=None)
    return top


def _finalize_args(args):
    if getattr(args, "init", None) is None and hasattr(args, "k") \
            and args.subcommand != "eds":
        args.init = ",".join(["1"] * args.k)


def _config_echo(args):
    skip = {"handler", "output", "format"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and not callable(v)}


def run_one(argv):
    """Execute one subcommand; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "batch":
        return run_batch(args.config)
    _finalize_args(args)
    try:
        results = args.handler(args)
    except ExactMathError as exc:
        err = {"error": {"kind": type(exc).__name__, "detail": str(exc)}}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    report = {
        "subcommand": args.subcommand,
        "config": _config_echo(args),
        "version": __version__,
        "results": results,
    }
    emit(report, args.format, args.output)
    return 0


def _batch_entry(entry):
    return run_one(entry)


def run_batch(config_path):
    with open(config_path, "rb") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list):
        raise SystemExit("error: batch config must be a JSON list of argv lists")
    jobs = int(os.environ.get("SOMOSEDS_JOBS", "1"))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            codes = list(pool.map(_batch_entry, entries))
    else:
        codes = [run_one(entry) for entry in entries]
    return max(codes, default=0)


def main(argv=None):
    return run_one(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
