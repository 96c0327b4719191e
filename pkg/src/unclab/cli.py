"""Command-line interface: ``unclab classify | estimate | scan``.

Every run builds a report holding the full configuration, the oracle
answer, any measurements and their agreement flags.  ``--out`` writes the
report (JSON, or CSV rows for scans) atomically; stdout gets a short
summary, or the JSON itself with ``--format json``.

Exit codes: 0 all agreement checks passed, 1 a disagreement, 2 usage error
(including violated parameter preconditions), 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from . import __version__
from .exponents import ExponentPair, as_number, fmt
from .extremizers import FalsifyBudget, falsify_symmetric
from .regime_oracle import (
    AsymProfile,
    H_profile,
    Verdict,
    classify_nonsymmetric,
    classify_symmetric,
    consistency_nonsym_vs_H,
    discrete_constant_profile,
    local_constant_profile,
)
from .sharp_constants import DiscreteConstantSweep, LocalConstantSweep, OptimizerBudget
from .weights import BrokenWeight

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SCAN_COLUMNS = ("d", "p", "A1", "A2", "B1", "B2", "oracle", "empirical", "family", "rate")
NONSYM_COLUMNS = ("d", "p", "q", "alpha", "beta", "verdict", "H_profile", "consistent")


class UsageError(Exception):
    pass


# -- parsing -------------------------------------------------------------------


def parse_number(text: str):
    """``2``, ``0.25``, ``4/3``, ``inf`` or ``2^-6``."""
    text = text.strip()
    if "^" in text:
        base, expo = text.split("^", 1)
        return as_number(base) ** int(expo) if expo.lstrip("-").isdigit() else \
            float(as_number(base)) ** float(as_number(expo))
    return as_number(text)


def parse_ladder(text: str) -> list:
    """``16:512:x2`` (geometric), ``2:10:+2`` (arithmetic) or a comma list."""
    text = text.strip()
    if not text:
        return []
    if ":" not in text:
        return [parse_number(t) for t in text.split(",") if t.strip()]
    parts = text.split(":")
    if len(parts) != 3 or parts[2][:1] not in ("x", "+"):
        raise UsageError(f"ladder {text!r} must look like start:stop:xK or start:stop:+K")
    start, stop = Fraction(parse_number(parts[0])), Fraction(parse_number(parts[1]))
    step = Fraction(parse_number(parts[2][1:]))
    geometric = parts[2][0] == "x"
    if (geometric and (step == 1 or start <= 0)) or (not geometric and step == 0):
        raise UsageError(f"ladder {text!r} does not progress")
    out, v = [], start
    forward = (step > 1) if geometric else (step > 0)
    while (v <= stop) if forward else (v >= stop):
        out.append(v)
        v = v * step if geometric else v + step
        if len(out) > 10_000:
            raise UsageError(f"ladder {text!r} is too long")
    return out


def parse_list(text: str) -> list:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def _pair(args) -> ExponentPair:
    try:
        return ExponentPair(parse_number(args.p), parse_number(args.q))
    except ValueError as exc:
        raise UsageError(f"invalid exponent pair (p, q): {exc}") from exc


def _weight(text: str, name: str) -> BrokenWeight:
    try:
        return BrokenWeight(*[parse_number(t) for t in text.split(",")]) if "," in text \
            else BrokenWeight.parse(parse_number(text))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid weight {name}={text!r}: {exc}") from exc


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (Verdict, BrokenWeight, ExponentPair)):
        return str(value)
    return value


def profile_payload(prof: AsymProfile) -> dict:
    out = {"render": prof.render(), "finite": prof.is_finite}
    for name in ("small", "large"):
        term = getattr(prof, name)
        if term is not None and prof.is_finite:
            out[name] = {"power": fmt(term.power), "logpow": fmt(term.logpow),
                         "logarg": term.logarg.value}
    return out


# -- output ---------------------------------------------------------------------


def atomic_write(path: str, text: str) -> None:
    """Write UTF-8 text via a temporary file in the target directory and rename it."""
    if not text.endswith("\n"):
        text += "\n"
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".unclab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_jsonable(row.get(c, "")) for c in columns])
    return buf.getvalue()


def threads() -> int:
    raw = os.environ.get("UNCLAB_THREADS", "")
    try:
        n = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"UNCLAB_THREADS must be an integer, got {raw!r}")
    return max(1, n)


# -- commands ---------------------------------------------------------------------


def cmd_classify(args) -> tuple[dict, int]:
    kind = args.kind
    d = args.d
    if kind == "nonsym":
        e = _pair(args)
        if args.alpha is None or args.beta is None:
            raise UsageError("classify nonsym needs --alpha and --beta")
        verdict = classify_nonsymmetric(d, e, parse_number(args.alpha), parse_number(args.beta))
        return {"verdict": str(verdict), "summary": str(verdict)}, EXIT_OK
    if kind == "sym":
        p = parse_number(args.p)
        if not p >= 2:
            raise UsageError("classify sym needs p >= 2")
        verdict = classify_symmetric(d, p, _weight(args.A, "A"), _weight(args.B, "B"))
        return {"verdict": str(verdict), "summary": str(verdict)}, EXIT_OK
    e = _pair(args)
    if kind == "H":
        prof = H_profile(d, e, _weight(args.A, "A"), _weight(args.B, "B"))
    elif kind == "local":
        D = _weight(args.D, "D")
        if not D.is_nonnegative():
            raise UsageError("the local weight D must be nonnegative")
        prof = local_constant_profile(d, e, D)
    else:
        gamma = parse_number(args.gamma)
        if gamma < 0:
            raise UsageError("gamma must be nonnegative")
        prof = discrete_constant_profile(d, e, gamma)
    return {"profile": profile_payload(prof), "summary": prof.render()}, EXIT_OK


def _budget(args) -> OptimizerBudget:
    return OptimizerBudget(max_iter=args.max_iter, restarts=args.restarts, oversample=args.oversample)


def _fit_payload(fit) -> dict | None:
    return None if fit is None else {k: _jsonable(v) for k, v in asdict(fit).items()}


def cmd_estimate(args) -> tuple[dict, int]:
    e = _pair(args)
    ladder = parse_ladder(args.Ms if args.kind == "discrete" else args.ts)
    if len(ladder) < 4:
        raise UsageError("a growth fit needs at least 4 ladder points")
    if args.kind == "discrete":
        gamma = parse_number(args.gamma)
        if gamma < 0:
            raise UsageError("gamma must be nonnegative")
        Ms = [int(m) for m in ladder]
        sweep = DiscreteConstantSweep(args.d, e.p, e.q, float(gamma), args.seed, _budget(args)).fit(Ms)
        points = [{"M": M, "value": est.value, "method": str(est.method), "converged": est.converged}
                  for M, est in zip(Ms, sweep.estimates_)]
    else:
        D = _weight(args.D, "D")
        ts = [float(t) for t in ladder]
        regime = args.regime or ("Small" if max(ts) < 1 else "Large")
        sweep = LocalConstantSweep(args.d, e.p, e.q, D, regime, args.seed).fit(ts)
        points = [{"t": t, "value": est.value, "method": str(est.method)}
                  for t, est in zip(sweep.ts_, sweep.estimates_)]
    if not np.all(np.isfinite(sweep.values_)):
        raise FloatingPointError("non-finite estimate in the ladder")
    agree = sweep.agrees(args.power_tol)
    fit = sweep.fit_
    summary = (f"fitted power {fit.power:.3f} ± {args.power_tol:g}, logpow {fit.logpow:.3f}; "
               f"oracle {sweep.profile_.render('M' if args.kind == 'discrete' else 't')}; "
               f"{'AGREE' if agree else 'DISAGREE'}")
    payload = {"points": points, "fit": _fit_payload(fit), "profile": profile_payload(sweep.profile_),
               "agree": agree, "summary": summary}
    return payload, EXIT_OK if agree else EXIT_DISAGREE


def _sym_cell(job):
    d, p, A, B, budget = job
    oracle = classify_symmetric(d, p, A, B)
    res = falsify_symmetric(d, p, A, B, budget)
    return {"d": d, "p": fmt(p), "A1": fmt(A.a1), "A2": fmt(A.a2), "B1": fmt(B.a1), "B2": fmt(B.a2),
            "oracle": oracle.value, "empirical": res.verdict,
            "family": getattr(res, "family", ""), "rate": getattr(res, "rate", ""),
            "max_ratio": getattr(res, "max_ratio", "")}


def _nonsym_cell(job):
    d, p, q, a, b = job
    e = ExponentPair(p, q)
    cons = consistency_nonsym_vs_H(d, e, a, b)
    return {"d": d, "p": fmt(e.p), "q": fmt(e.q), "alpha": fmt(a), "beta": fmt(b),
            "verdict": classify_nonsymmetric(d, e, a, b).value,
            "H_profile": H_profile(d, e, (a, a), (b, b)).render(), "consistent": cons.consistent,
            "detail": cons.detail}


def _run_cells(func, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(func, jobs))


def cmd_scan(args) -> tuple[dict, int]:
    workers = threads()
    if args.kind == "sym":
        ps = parse_list(args.ps)
        if any(not p >= 2 for p in ps):
            raise UsageError("symmetric scans need p >= 2")
        grid = parse_list(args.grid)
        budget = FalsifyBudget(draws=args.draws, seed=args.seed)
        jobs = [(args.d, p, BrokenWeight(a1, a2), BrokenWeight(b1, b2), budget)
                for p in ps for a1, a2, b1, b2 in itertools.product(grid, repeat=4)]
        rows = _run_cells(_sym_cell, jobs, workers)
        table = {f"{o}/{m}": sum(1 for r in rows if r["oracle"] == o and r["empirical"] == m)
                 for o in ("Holds", "Fails") for m in ("Divergent", "Bounded")}
        unsound = table["Holds/Divergent"]
        fails = table["Fails/Divergent"] + table["Fails/Bounded"]
        summary = (f"{len(rows)} cells; Holds&Divergent {unsound}; "
                   f"Fails detected {table['Fails/Divergent']}/{fails}")
        columns = SCAN_COLUMNS
        code = EXIT_DISAGREE if unsound else EXIT_OK
    else:
        dims = [int(v) for v in parse_list(args.dims)]
        jobs = [(d, p, q, a, b) for d in dims for p in parse_list(args.ps) for q in parse_list(args.qs)
                for a in parse_list(args.alphas) for b in parse_list(args.betas)]
        rows = _run_cells(_nonsym_cell, jobs, workers)
        bad = sum(1 for r in rows if not r["consistent"])
        table = {"consistent": len(rows) - bad, "inconsistent": bad}
        summary = f"{len(rows)} cells; inconsistent {bad}"
        columns = NONSYM_COLUMNS
        code = EXIT_DISAGREE if bad else EXIT_OK
    if args.csv:
        atomic_write(args.csv, rows_to_csv(columns, rows))
    return {"rows": rows, "confusion": table, "columns": list(columns), "summary": summary}, code


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unclab", description="Weighted uncertainty principle lab.")
    parser.add_argument("--version", action="version", version=f"unclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text",
                        help="stdout format (default text)")
        sp.add_argument("--out", help="write the JSON report to this file")
        sp.add_argument("-d", type=int, default=1, help="dimension (default 1)")

    c = sub.add_parser("classify", help="oracle verdicts and profiles")
    c.add_argument("kind", choices=("nonsym", "sym", "H", "local", "discrete"))
    common(c)
    c.add_argument("-p", default="2")
    c.add_argument("-q", default="2")
    c.add_argument("--alpha")
    c.add_argument("--beta")
    c.add_argument("-A", default="1,1")
    c.add_argument("-B", default="1,1")
    c.add_argument("-D", default="0,0")
    c.add_argument("--gamma", default="0")

    e = sub.add_parser("estimate", help="numerical sweeps compared against the oracle")
    e.add_argument("kind", choices=("discrete", "local"))
    common(e)
    e.add_argument("-p", default="2")
    e.add_argument("-q", default="2")
    e.add_argument("--gamma", default="0")
    e.add_argument("-D", default="0,1")
    e.add_argument("--Ms", default="16:512:x2", help="degree ladder, e.g. 16:512:x2")
    e.add_argument("--ts", default="2^-12:2^-6:x2", help="radius ladder for local sweeps")
    e.add_argument("--regime", choices=("Small", "Large"))
    e.add_argument("--power-tol", type=float, default=0.05)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--max-iter", type=int, default=OptimizerBudget.max_iter)
    e.add_argument("--restarts", type=int, default=OptimizerBudget.restarts)
    e.add_argument("--oversample", type=int, default=OptimizerBudget.oversample)

    s = sub.add_parser("scan", help="grid scans of the symmetric or non-symmetric inequality")
    s.add_argument("kind", choices=("sym", "nonsym"))
    common(s)
    s.add_argument("--ps", default="2,4,inf")
    s.add_argument("--grid", default="0.25,0.5,1", help="values for A1, A2, B1, B2 (sym)")
    s.add_argument("--dims", default="1,2")
    s.add_argument("--qs", default="1,4/3,2,3,inf")
    s.add_argument("--alphas", default="0.1,0.5,1,2")
    s.add_argument("--betas", default="0.1,0.5,1,2")
    s.add_argument("--draws", type=int, default=FalsifyBudget.draws)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv", help="write the per-cell table as CSV")
    return parser


COMMANDS = {"classify": cmd_classify, "estimate": cmd_estimate, "scan": cmd_scan}


def run(argv=None) -> tuple[dict, int]:
    """Parse ``argv`` and run; returns ``(report, exit code)`` without printing."""
    args = build_parser().parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("format", "out")}
    started = time.perf_counter()
    payload, code = COMMANDS[args.command](args)
    report = {"version": __version__, "config": config, **payload,
              "timing": {"wall_seconds": time.perf_counter() - started}}
    return report, code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code = run(argv)
    except (UsageError, ValueError) as exc:
        # library ValueErrors are violated preconditions on the parameters
        print(f"unclab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"unclab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = json.dumps(_jsonable(report), indent=2, ensure_ascii=False)
    if args.out:
        atomic_write(args.out, text)
    print(text if args.format == "json" else report["summary"])
    return code


if __name__ == "__main__":
    sys.exit(main())
