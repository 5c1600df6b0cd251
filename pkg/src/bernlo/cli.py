"""Command-line surface: every computation exposed with JSON (or CSV) output.

Subcommands
  bound              exact concentration maximum over splits and points
  verify             extremality check for sampled/grid coefficient vectors
  decompose          convex decomposition of a subset profile (JSON in)
  fourier-check      inversion-identity and asymptotic cross-check
  lstar              exact/float ell* with the case-table prediction
  scan               ell* over a range of n (JSON or CSV)
  probe-periodicity  residue boundedness / period search

All results are wrapped in an envelope {schema_version, command,
timestamp, backend, payload}; diagnostics go to stderr.  Exit codes:
0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

SCHEMA_VERSION = 1


def _parse_p(text: str):
    """'r/s' -> exact Fraction; decimal string stays a string for the
    high-precision float path.  The two paths are never mixed silently."""
    if "/" in text:
        return Fraction(text)
    return text


def _p_backend(p) -> str:
    return "rational" if isinstance(p, Fraction) else "decimal"


def _parse_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("range must be a:b or a:b:step")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("range must be increasing with positive step")
    return list(range(a, b + 1, step))


def _emit(command: str, payload: dict, backend: str, fmt: str = "json", csv_text: str | None = None) -> None:
    if fmt == "csv":
        if csv_text is None:
            raise ValueError("csv output is only available for scan")
        sys.stdout.write(csv_text)
        return
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "backend": backend,
        "payload": payload,
    }
    json.dump(envelope, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _frac_field(value) -> dict:
    if isinstance(value, Fraction):
        return {"kind": "rational", "value": str(value)}
    return {"kind": "decimal", "value": str(value)}


def _cmd_bound(args) -> dict:
    from bernlo.exactdist import concentration_bound

    p = _parse_p(args.p)
    if not isinstance(p, Fraction):
        raise ValueError("bound requires exact rational p (use r/s)")
    res = concentration_bound(args.n, p)
    return {
        "n": res.n,
        "p": str(res.p),
        "ell_star": res.ell_star,
        "x_star": res.x_star,
        "prob": _frac_field(res.prob),
        "degenerate": res.degenerate,
        "tie_count": len(res.ties),
        "ties": [list(t) for t in res.ties[:200]],
    }


def _cmd_verify(args) -> dict:
    from dataclasses import asdict

    from bernlo.oracle import verify_theorem1

    p = _parse_p(args.p)
    if not isinstance(p, Fraction):
        raise ValueError("verify requires exact rational p (use r/s)")
    report = verify_theorem1(
        args.n, p, args.strategy, count=args.count, seed=args.seed
    )
    return asdict(report)


def _cmd_decompose(args) -> dict:
    from bernlo.puredecomp import SubsetProfile, decompose

    text = sys.stdin.read() if args.profile == "-" else open(args.profile).read()
    profile = SubsetProfile.from_json(text)
    decomp = decompose(profile)
    return {
        "i": profile.i,
        "term_count": len(decomp.terms),
        "terms": [
            {"weight": str(w), "points": [str(r) for r in pure.points]}
            for w, pure in decomp.terms
        ],
        "weights_sum": str(decomp.total_weight()),
    }


def _cmd_fourier_check(args) -> dict:
    from bernlo.exactdist import bin_diff_pmf
    from bernlo.fourier import FourierParams, prob_identity, q_asymptotic, q_integral

    p = _parse_p(args.p)
    params = FourierParams(n=args.n, t=args.t, x=args.x, p=p)
    tol = args.tol
    q = q_integral(params, tol)
    prob_f = prob_identity(params, tol)
    payload = {
        "n": args.n,
        "t": args.t,
        "x": args.x,
        "p": str(p),
        "q": _frac_field(q.value),
        "q_evaluations": q.evaluations,
        "prob_fourier": _frac_field(prob_f),
    }
    try:
        qa = q_asymptotic(params)
        payload["q_asym"] = _frac_field(qa)
        payload["ratio"] = _frac_field(q.value / qa if qa != 0 else float("nan"))
    except ValueError as exc:
        payload["q_asym"] = {"kind": "unavailable", "value": str(exc)}
    if isinstance(p, Fraction):
        ell = params.ell
        exact = bin_diff_pmf(ell, args.n - ell, p, args.x)
        payload["prob_exact"] = _frac_field(exact)
        payload["identity_abs_error"] = _frac_field(abs(prob_f - float(exact)))
    return payload


def _cmd_lstar(args) -> dict:
    from bernlo.lstar import exact_lstar, float_lstar, predict

    p = _parse_p(args.p)
    if isinstance(p, Fraction):
        res = exact_lstar(args.n, p)
    else:
        res = float_lstar(args.n, p)
    pred = predict(args.n, p, irrational=args.irrational)
    return {
        "n": args.n,
        "p": str(p),
        "ell_star": res.ell_star,
        "x_star": res.x_star,
        "prob": _frac_field(res.prob),
        "tie_count": len(res.ties),
        "prediction": {
            "kind": pred.kind,
            "value": str(pred.value),
            "x": pred.x_value,
            "provenance": pred.provenance,
        },
    }


def _scan_rows_payload(rows) -> dict:
    return {
        "rows": [
            {
                "n": r.n,
                "ell_star": r.ell_star,
                "x_star": r.x_star,
                "prob": _frac_field(r.prob),
                "prediction": str(r.prediction.value),
                "deviation": None if r.deviation is None else str(r.deviation),
                "tie_count": r.tie_count,
            }
            for r in rows
        ]
    }


def _cmd_scan(args) -> tuple[dict, str]:
    from bernlo.lstar import scan, scan_to_csv

    p = _parse_p(args.p)
    backend = args.backend or ("exact" if isinstance(p, Fraction) else "float")
    rows = scan(p, args.range, backend=backend, irrational=args.irrational)
    return _scan_rows_payload(rows), scan_to_csv(rows)


def _cmd_probe(args) -> dict:
    from bernlo.lstar import periodicity_probe

    p = _parse_p(args.p)
    if not isinstance(p, Fraction):
        raise ValueError("probe-periodicity requires exact rational p (use r/s)")
    n_values = [n for n in args.range if n % 2 == 1]
    report = periodicity_probe(p, n_values, backend=args.backend or "float")
    return {
        "p": str(report.p),
        "trend": str(report.trend),
        "max_abs_residue": str(report.max_abs_residue),
        "candidate_period": report.candidate_period,
        "residues": [str(r) for r in report.residues],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernlo",
        description="Concentration probabilities of signed Bernoulli sums",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, n=True):
        if n:
            sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--p", type=str, required=True, help="exact 'r/s' or decimal string")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--threads", type=int, default=0, help="0 = auto (currently single-threaded)")

    sp = sub.add_parser("bound", help="exact concentration maximum")
    common(sp)

    sp = sub.add_parser("verify", help="extremality verification run")
    common(sp)
    sp.add_argument("--strategy", choices=["grid", "random", "hill-climb"], default="grid")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("decompose", help="convex decomposition of a profile JSON")
    sp.add_argument("--profile", type=str, default="-", help="path or - for stdin")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--threads", type=int, default=0)

    sp = sub.add_parser("fourier-check", help="inversion identity cross-check")
    common(sp)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--tol", type=float, default=None)

    sp = sub.add_parser("lstar", help="ell* with prediction")
    common(sp)
    sp.add_argument("--irrational", action="store_true")

    sp = sub.add_parser("scan", help="ell* over a range of n")
    common(sp, n=False)
    sp.add_argument("--range", type=_parse_range, required=True, metavar="a:b:step")
    sp.add_argument("--backend", choices=["exact", "float"], default=None)
    sp.add_argument("--irrational", action="store_true")

    sp = sub.add_parser("probe-periodicity", help="residue boundedness / period search")
    common(sp, n=False)
    sp.add_argument("--range", type=_parse_range, required=True, metavar="a:b:step")
    sp.add_argument("--backend", choices=["exact", "float"], default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        csv_text = None
        if args.command == "bound":
            payload, backend = _cmd_bound(args), "rational"
        elif args.command == "verify":
            payload, backend = _cmd_verify(args), "rational"
        elif args.command == "decompose":
            payload, backend = _cmd_decompose(args), "rational"
        elif args.command == "fourier-check":
            payload, backend = _cmd_fourier_check(args), _p_backend(_parse_p(args.p))
        elif args.command == "lstar":
            payload, backend = _cmd_lstar(args), _p_backend(_parse_p(args.p))
        elif args.command == "scan":
            payload, csv_text = _cmd_scan(args)
            backend = args.backend or _p_backend(_parse_p(args.p))
        elif args.command == "probe-periodicity":
            payload, backend = _cmd_probe(args), args.backend or "float"
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
        _emit(args.command, payload, backend, getattr(args, "format", "json"), csv_text)
        return 0
    except (ValueError, TypeError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
