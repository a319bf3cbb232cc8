"""Command-line interface: scans, verification suites, audits, and table reports.

Every run emits one report with a fixed envelope -- schema_version, command,
params, results, errata, status -- rendered as canonical JSON, as TSV rows
for spreadsheet diffing, or as readable text.  Report content is
deterministic for a fixed configuration: the worker count never changes
results or their order, and wall-clock timing appears only in the text
rendering.

Exit status: 0 every check passed, 1 a mathematical check failed (a closed
form disagreed with the recurrence, a sporadic zero appeared, an audit band
was missed, ...), 2 usage, domain, or feasibility errors.
"""

import argparse
import concurrent.futures
import functools
import json
import math
import os
import sys
import time
from decimal import Decimal
from fractions import Fraction

from . import bounds, census, closed_forms, engine, reduction, roots
from .errors import (
    CertificationError,
    IntegralityError,
    LucaskitError,
    ParameterError,
    ReductionFailureError,
)

SCHEMA_VERSION = 1

# Corrections the closed forms apply relative to their naive derivations.
# Surfaced whenever the forms are exercised so report readers know the
# evaluated expressions are not the uncorrected ones.
_CLOSED_FORM_ERRATA = (
    "band closed form: the descending sum starts at j = r-1; starting at "
    "j = r drops the Q_0 term and is contradicted by the recurrence at "
    "k=5, m=3, r=1",
    "small-band closed form: (m, r) = (0, 0) is excluded from the stated "
    "domain; the expression gives 1 there while Q_0 = 2, so Q_0 is served "
    "by the recurrence",
)

_AUDIT_ITEM_NAMES = (
    "distinct_ratio_tiny_floor",
    "dominant_f_band",
    "inner_f_cap",
    "smallest_log_bounds",
    "smallest_cubic_bounds",
    "even_pair_gap",
    "distinct_ratio_coarse_floor",
)


# ---------------------------------------------------------------------------
# argument plumbing

def parse_k_spec(spec):
    """Parses --k values: '7', '2..30', '4,6,8', or mixtures ('2..5,9')."""
    ks = []
    for atom in spec.split(","):
        atom = atom.strip()
        if ".." in atom:
            lo_s, _, hi_s = atom.partition("..")
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise ParameterError(f"empty k range {atom!r}")
            ks.extend(range(lo, hi + 1))
        elif atom:
            ks.append(int(atom))
    if not ks:
        raise ParameterError(f"no k values in {spec!r}")
    if min(ks) < 2:
        raise ParameterError(f"order k must be >= 2, got {min(ks)}")
    return sorted(set(ks))


def _parse_magnitude(text):
    """'1.5e46' -> exact integer part (binary floats would perturb it)."""
    try:
        return int(Fraction(Decimal(text)))
    except (ValueError, ArithmeticError):
        raise ParameterError(f"cannot parse magnitude {text!r}") from None


def _env_digits():
    raw = os.environ.get("LUCASKIT_DIGITS")
    if raw is None:
        return None
    try:
        digits = int(raw)
    except ValueError:
        raise ParameterError(f"LUCASKIT_DIGITS must be an integer, got {raw!r}") from None
    if digits < 10:
        raise ParameterError(f"LUCASKIT_DIGITS must be >= 10, got {digits}")
    return digits


def _k_map(fn, ks, workers):
    """Maps fn over ks, optionally in a process pool; order is by k either way."""
    if workers <= 1 or len(ks) <= 1:
        return [fn(k) for k in ks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, ks))


# ---------------------------------------------------------------------------
# per-k workers (module level so a process pool can pickle them)

def _zeros_row(k, limit):
    window = limit if limit is not None else 4 * k * k
    z = census.census(k, window)
    expected = census.multiplicity_formula(k)
    return {
        "k": k,
        "limit": window,
        "zero_indices": list(z.zeros),
        "lucas_indices": [-n for n in z.zeros],
        "count": len(z.zeros),
        "expected": expected,
        "sporadic": list(z.sporadic),
        "ok": len(z.zeros) == expected and not z.sporadic,
    }


def closed_form_verification(k, idx_cap):
    """Cross-checks every closed form against the recurrence, index <= idx_cap.

    Covers the diagonal, small-band, band, and deep general forms of Q, the
    H band, arbitrary-depth block values, and the independently written
    two-term first-block expansion.  Exact integer comparisons throughout.
    """
    if idx_cap < k + 1:
        raise ParameterError(f"idx_cap must be >= k+1 = {k + 1}, got {idx_cap}")
    qs = engine.q_range(k, 0, idx_cap)
    hs = engine.h_range(k, 0, idx_cap)
    checks = 0
    mismatches = []

    def confirm(form, n, got, want):
        nonlocal checks
        checks += 1
        if got != want:
            mismatches.append({"form": form, "n": n})

    for m in range(1, k - 1):
        n = m * k - 1
        if n <= idx_cap:
            confirm("diagonal", n, closed_forms.q_diagonal(k, m), qs[n])
        for r in range(0, m + 1):
            n = m * k + r
            if n <= idx_cap:
                confirm("small", n, closed_forms.q_closed_small(k, m, r), qs[n])
        for r in range(-1, m):
            n = m * k + r
            if n <= idx_cap:
                confirm("band", n, closed_forms.q_block_diag(k, m, r), qs[n])
    for m in range(1, k):
        for r in range(-1, m):
            n = m * k + r
            if n <= idx_cap:
                confirm("h_band", n, closed_forms.h_closed(k, m, r), hs[n])

    m_max = (idx_cap + 1) // k
    if m_max >= closed_forms.general_min_m(k):
        for (m, r), value in closed_forms.q_closed_table(k, m_max).items():
            n = m * k + r
            if 0 <= n <= idx_cap:
                confirm("general", n, value, qs[n])

    if k > 2:
        stride = k * (k - 1)
        b_max = (idx_cap + 1) // stride
        if b_max >= 1:
            for (b, j, r), value in closed_forms.block_table(k, b_max).items():
                n = closed_forms.block_index(k, b, j, r)
                if 0 <= n <= idx_cap:
                    confirm("block", n, value, qs[n])
        for j in range(k - 1):
            for r in range(k - 1):
                checks += 1
                if closed_forms.first_block_terms(k, j, r) != closed_forms.block_terms(k, 1, j, r):
                    mismatches.append({"form": "first_block", "n": closed_forms.block_index(k, 1, j, r)})

    return {
        "k": k,
        "idx_cap": idx_cap,
        "checks": checks,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def _identities_row(k, n_max):
    report = engine.identity_audit(k, n_max)
    return {
        "k": k,
        "n_max": n_max,
        "checks_passed": report.checks_passed,
        "first_failure": report.first_failure,
        "ok": report.first_failure is None,
    }


def _signs_row(k, limit):
    lo = k * k - 2 * k - 1
    hi = limit if limit is not None else 10 * k * k
    audit = census.even_sign_audit(k, lo, hi)
    return {
        "k": k,
        "lo": lo,
        "hi": hi,
        "checked": audit.checked,
        "first_violation": audit.first_violation,
        "ok": audit.first_violation is None,
    }


def _roots_row(k, digits):
    policy = roots.default_policy(k, start_digits=digits) if digits else None
    system = roots.solve(k, policy)
    return {
        "k": k,
        "digits": system.digits,
        "dominant": float(system.gamma.mid),
        "smallest_modulus": float(abs(system.smallest().mid)),
        "real_roots": system.real_count(),
        "class_sizes": [len(c["members"]) for c in system.classes],
        "ok": True,
    }


def _bounds_row(k, digits):
    policy = roots.default_policy(k, start_digits=digits) if digits else None
    if k % 2 == 0:
        return {
            "k": k,
            "parity": "even",
            "zero_index_cap_log10": float(bounds.even_zero_index_cap(k).log10),
            "secondary_cap": bounds.even_ratio_cap(k, policy),
            "ok": True,
        }
    return {
        "k": k,
        "parity": "odd",
        "zero_index_cap_log10": float(bounds.odd_zero_index_cap(k).log10),
        "secondary_cap": float(bounds.odd_chain_cap(k).log10),
        "ok": True,
    }


def _reduce_row(k, m_text, digits):
    m_value = _parse_magnitude(m_text)
    policy = roots.default_policy(k, start_digits=digits) if digits else None
    out = reduction.reduce_odd_k(k, m_value, policy)
    result, problem = out["result"], out["problem"]
    return {
        "k": k,
        "M": m_text,
        "tau": float(problem.tau.value),
        "mu": float(problem.mu.value),
        "A": float(problem.A.value),
        "B": float(problem.B.value),
        "index": result.index,
        "q": int(result.q),
        "epsilon": float(result.epsilon),
        "w_cap": int(result.w_cap),
        "R_k": int(out["R_k"]),
        "attempts": len(result.attempts),
        "ok": True,
    }


def _root_audit_row(k, digits):
    policy = roots.default_policy(k, start_digits=digits) if digits else None
    report = roots.root_property_audit(k, policy)
    row = {"k": k, "digits": report["digits"], "all_pass": report["all_pass"]}
    for name in _AUDIT_ITEM_NAMES:
        item = report["items"].get(name, {"applicable": False})
        if not item.get("applicable"):
            row[name] = "n/a"
        else:
            row[name] = "pass" if item["pass"] else "fail"
    row["ok"] = report["all_pass"]
    return row


# ---------------------------------------------------------------------------
# command handlers: each returns (results, errata, all_ok)

def _cmd_zeros(args):
    ks = parse_k_spec(args.k) if args.k else list(range(2, 61 if args.long_run else 21))
    rows = _k_map(functools.partial(_zeros_row, limit=args.limit), ks, args.workers)
    return rows, [], all(r["ok"] for r in rows)


def _cmd_verify_closed_forms(args):
    ks = parse_k_spec(args.k) if args.k else [2, 3, 4, 5, 8, 13, 20]
    cap = args.limit if args.limit is not None else (20000 if args.long_run else 2000)
    rows = _k_map(functools.partial(closed_form_verification, idx_cap=cap), ks, args.workers)
    return rows, list(_CLOSED_FORM_ERRATA), all(r["ok"] for r in rows)


def _cmd_verify_identities(args):
    ks = parse_k_spec(args.k) if args.k else list(range(2, 31))
    n_max = args.limit if args.limit is not None else (5000 if args.long_run else 1000)
    rows = _k_map(functools.partial(_identities_row, n_max=n_max), ks, args.workers)
    return rows, [], all(r["ok"] for r in rows)


def _cmd_verify_signs(args):
    ks = parse_k_spec(args.k) if args.k else [4, 6, 8, 10, 20, 40]
    rows = _k_map(functools.partial(_signs_row, limit=args.limit), ks, args.workers)
    return rows, [], all(r["ok"] for r in rows)


def _cmd_roots(args):
    ks = parse_k_spec(args.k) if args.k else [2, 3, 4, 5]
    rows = _k_map(functools.partial(_roots_row, digits=args.digits), ks, args.workers)
    return rows, [], True


def _cmd_bounds(args):
    if args.k:
        ks = parse_k_spec(args.k)
        rows = _k_map(functools.partial(_bounds_row, digits=args.digits), ks, args.workers)
        return rows, [], True
    rows = [
        {"item": "floor_cap_crossover", "value": bounds.floor_cap_crossover()},
        {"item": "combined_two_adic_cap", "value": bounds.combined_two_adic_cap()},
        {"item": "large_k_gap_cap", "value": float(bounds.large_k_gap_cap())},
    ]
    return rows, [], True


def _cmd_reduce(args):
    ks = parse_k_spec(args.k) if args.k else [5, 9, 15, 21, 51, 101]
    rows = _k_map(
        functools.partial(_reduce_row, m_text=args.M, digits=args.digits),
        ks, args.workers,
    )
    return rows, [], True


def _cmd_audit_kummer(args):
    report = closed_forms.kummer_audit(args.limit if args.limit is not None else 256)
    errata = []
    if report["violations"]:
        errata.append(
            f"{len(report['violations'])} valuation values exceed the working "
            f"cap 2*log2(y)+2; the cap is a scan heuristic, not a theorem, so "
            f"these are findings rather than failures"
        )
    return [report], errata, True


def _cmd_audit_root_properties(args):
    if args.k:
        ks = parse_k_spec(args.k)
    else:
        ks = list(range(2, 101 if args.long_run else 13))
    rows = _k_map(functools.partial(_root_audit_row, digits=args.digits), ks, args.workers)
    return rows, [], all(r["ok"] for r in rows)


def _cmd_audit_bands(args):
    ks = parse_k_spec(args.k) if args.k else [501, 885]
    policy = roots.default_policy(max(ks), start_digits=args.digits) if args.digits else None
    report = bounds.band_constants_audit(ks, policy)
    rows = []
    for sample in report["samples"]:
        rows.append({
            "k": sample["k"],
            "digits": sample["digits"],
            "f_log_lo": sample["f_log"]["lo"],
            "f_log_hi": sample["f_log"]["hi"],
            "f_inside": sample["f_log"]["inside"],
            "ratio_log_lo": sample["ratio_log"]["lo"],
            "ratio_log_hi": sample["ratio_log"]["hi"],
            "ratio_inside": sample["ratio_log"]["inside"],
            "ok": sample["f_log"]["inside"] and sample["ratio_log"]["inside"],
        })
    return rows, [], report["all_inside"]


def _render_runs(zeros):
    """Groups an ascending zero list into maximal runs, mirrored to -n."""
    runs = []
    for n in zeros:
        if runs and n == runs[-1][1] + 1:
            runs[-1][1] = n
        else:
            runs.append([n, n])
    intervals = [[-hi, -lo] for lo, hi in runs]
    rendered = " ".join(
        ("{%d}" % lo) if lo == hi else ("[%d,%d]" % (lo, hi)) for lo, hi in intervals
    )
    return intervals, rendered


def _cmd_report_table1(args):
    rows = []
    for k in range(2, 8):
        z = census.census(k, 4 * k * k)
        intervals, rendered = _render_runs(z.zeros)
        expected = census.multiplicity_formula(k)
        rows.append({
            "k": k,
            "multiplicity": len(z.zeros),
            "expected": expected,
            "intervals": intervals,
            "rendered": rendered,
            "sporadic": list(z.sporadic),
            "ok": len(z.zeros) == expected and not z.sporadic,
        })
    return rows, [], all(r["ok"] for r in rows)


def _selftest_checks():
    def recurrence_anchors():
        assert engine.lucas_at(2, 10) == 123 and engine.fib_at(2, 10) == 55
        assert engine.q_at(2, 3) == -4 and engine.h_at(3, 5) == 2
        return "classic order-2 values and two reversed-index anchors"

    def identity_scan():
        report = engine.identity_audit(5, 200)
        assert report.first_failure is None
        return f"{report.checks_passed} identity checks, no failure"

    def zero_census():
        z = census.census(6, 144)
        assert len(z.zeros) == 10 and not z.sporadic
        return "k=6 census finds 10 zeros, none sporadic"

    def closed_forms_spot():
        out = closed_form_verification(4, 200)
        assert out["ok"]
        return f"{out['checks']} closed-form comparisons agree"

    def sign_window():
        audit = census.even_sign_audit(4, 7, 160)
        assert audit.first_violation is None
        return "k=4 alternating-sign window clean"

    def binet_round_trip():
        out = roots.binet_eval(2, 10, full_sum=True)
        assert out["rounded"] == 123 and out["residual"] < 1.5
        return "dominant-term residual and full-sum rounding agree"

    def root_audit():
        report = roots.root_property_audit(4)
        assert report["all_pass"]
        return "k=4 root-property audit passes"

    def toy_reduction():
        import mpmath
        from mpmath import mp
        with mp.workdps(50):
            tau = reduction.ValidatedReal(+mpmath.sqrt(2), Fraction(1, 10 ** 45))
        problem = reduction.ReductionProblem(
            tau=tau, mu=reduction.ValidatedReal(Fraction(1, 2), Fraction(1, 10 ** 40)),
            A=10, B=2, M=100)
        result = reduction.bd_reduce(problem)
        assert result.q == 985 and result.w_cap == 14
        return "toy instance: q=985, w_cap=14"

    def valuation_agreement():
        value = math.comb(100, 37)
        direct = (value & -value).bit_length() - 1
        assert closed_forms.nu2_binom(100, 37) == direct
        return "carry-count valuation matches factor counting"

    def magnitude_bound():
        value = bounds.matveev_log_lower(3, 2, 10.0, [1.0, 1.0, 2.0])
        assert value < 0 and math.isfinite(value)
        return "linear-form lower bound is finite and negative"

    return [
        ("recurrence_anchors", recurrence_anchors),
        ("identity_scan", identity_scan),
        ("zero_census", zero_census),
        ("closed_forms_spot", closed_forms_spot),
        ("sign_window", sign_window),
        ("binet_round_trip", binet_round_trip),
        ("root_audit", root_audit),
        ("toy_reduction", toy_reduction),
        ("valuation_agreement", valuation_agreement),
        ("magnitude_bound", magnitude_bound),
    ]


def _cmd_selftest(args):
    rows = []
    for name, fn in _selftest_checks():
        try:
            detail = fn()
            rows.append({"check": name, "ok": True, "detail": detail})
        except AssertionError:
            rows.append({"check": name, "ok": False, "detail": "assertion failed"})
        except LucaskitError as exc:
            rows.append({"check": name, "ok": False, "detail": f"{type(exc).__name__}: {exc}"})
    return rows, [], all(r["ok"] for r in rows)


# ---------------------------------------------------------------------------
# rendering

def render_json(report):
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _tsv_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, float)):
        return repr(value)
    return json.dumps(value)


def render_tsv(report):
    rows = report["results"]
    if not rows:
        return ""
    header = list(rows[0].keys())
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(_tsv_cell(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def render_text(report, elapsed):
    lines = [f"lucaskit {report['command']}"]
    params = ", ".join(f"{key}={value}" for key, value in report["params"].items()
                       if value is not None)
    if params:
        lines.append(f"  config: {params}")
    for row in report["results"]:
        body = "  ".join(f"{key}={_tsv_cell(value)}" for key, value in row.items())
        lines.append(f"  {body}")
    for note in report["errata"]:
        lines.append(f"  note: {note}")
    lines.append(f"  status: {report['status']} ({elapsed:.2f} s)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser / dispatch

def build_parser():
    parser = argparse.ArgumentParser(
        prog="lucaskit",
        description="Exact scans, certified root data, and Diophantine bound "
                    "chains for order-k additive recurrences.",
    )

    def add_common(p, digits=False, m_flag=False):
        p.add_argument("--k", help="order(s): '7', '2..30', or '4,6,8'")
        p.add_argument("--limit", "--n-max", dest="limit", type=int,
                       help="scan/index cap (command-specific default)")
        if digits:
            p.add_argument("--digits", type=int, default=_ENV_SENTINEL,
                           help="working precision in decimal digits "
                                "(default: LUCASKIT_DIGITS or adaptive)")
        if m_flag:
            p.add_argument("--M", default="1.5e46",
                           help="analytic cap fed to the reduction (default 1.5e46)")
        p.add_argument("--format", choices=("json", "tsv", "text"), default="text")
        p.add_argument("--long-run", action="store_true",
                       help="widen default ranges to the full published sweeps")
        p.add_argument("--workers", type=int, default=1,
                       help="process count for independent k values (content-neutral)")

    sub = parser.add_subparsers(dest="command", required=True)

    add_common(sub.add_parser("zeros", help="exhaustive zero census per order"))

    verify = sub.add_parser("verify", help="exact cross-validation suites")
    vsub = verify.add_subparsers(dest="what", required=True)
    add_common(vsub.add_parser("closed-forms", help="closed forms vs recurrence"))
    add_common(vsub.add_parser("identities", help="doubling identities and short recurrence"))
    add_common(vsub.add_parser("signs", help="alternating-sign windows for even orders"))

    add_common(sub.add_parser("roots", help="certified characteristic-root summary"),
               digits=True)
    add_common(sub.add_parser("bounds", help="index caps and crossover scans"),
               digits=True)
    add_common(sub.add_parser("reduce", help="continued-fraction reduction of the odd-order gap"),
               digits=True, m_flag=True)

    audit = sub.add_parser("audit", help="property audits with certified enclosures")
    asub = audit.add_subparsers(dest="what", required=True)
    add_common(asub.add_parser("kummer", help="2-adic valuation scan of the combinator"))
    add_common(asub.add_parser("root-properties", help="root-geometry property audit"),
               digits=True)
    add_common(asub.add_parser("bands", help="large-order constant-band audit"),
               digits=True)

    report = sub.add_parser("report", help="table reproductions")
    rsub = report.add_subparsers(dest="what", required=True)
    add_common(rsub.add_parser("table1", help="zero multiplicities for orders 2..7"))

    add_common(sub.add_parser("selftest", help="fast end-to-end smoke checks"))
    return parser


_ENV_SENTINEL = object()


def _resolve_args(args):
    if getattr(args, "digits", None) is _ENV_SENTINEL:
        args.digits = _env_digits()
    if getattr(args, "workers", 1) < 1:
        raise ParameterError(f"--workers must be >= 1, got {args.workers}")
    if getattr(args, "limit", None) is not None and args.limit < 1:
        raise ParameterError(f"--limit must be >= 1, got {args.limit}")
    if getattr(args, "digits", None) is not None and args.digits < 10:
        raise ParameterError(f"--digits must be >= 10, got {args.digits}")


_HANDLERS = {
    ("zeros", None): _cmd_zeros,
    ("verify", "closed-forms"): _cmd_verify_closed_forms,
    ("verify", "identities"): _cmd_verify_identities,
    ("verify", "signs"): _cmd_verify_signs,
    ("roots", None): _cmd_roots,
    ("bounds", None): _cmd_bounds,
    ("reduce", None): _cmd_reduce,
    ("audit", "kummer"): _cmd_audit_kummer,
    ("audit", "root-properties"): _cmd_audit_root_properties,
    ("audit", "bands"): _cmd_audit_bands,
    ("report", "table1"): _cmd_report_table1,
    ("selftest", None): _cmd_selftest,
}


def run(argv=None):
    """Parses argv, dispatches, prints one report; returns the exit code."""
    args = build_parser().parse_args(argv)
    _resolve_args(args)
    command = args.command + (f" {args.what}" if getattr(args, "what", None) else "")
    handler = _HANDLERS[(args.command, getattr(args, "what", None))]

    started = time.monotonic()
    results, errata, all_ok = handler(args)
    elapsed = time.monotonic() - started

    params = {
        "k": args.k,
        "limit": args.limit,
        "digits": getattr(args, "digits", None),
        "M": getattr(args, "M", None),
        "long_run": args.long_run,
        "workers": args.workers,
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "errata": errata,
        "status": "pass" if all_ok else "fail",
    }
    if args.format == "json":
        sys.stdout.write(render_json(report))
    elif args.format == "tsv":
        sys.stdout.write(render_tsv(report))
    else:
        sys.stdout.write(render_text(report, elapsed))
    return 0 if all_ok else 1


def main(argv=None):
    try:
        return run(argv)
    except (CertificationError, IntegralityError, ReductionFailureError) as exc:
        print(f"lucaskit: check failed: {exc}", file=sys.stderr)
        return 1
    except LucaskitError as exc:
        print(f"lucaskit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
