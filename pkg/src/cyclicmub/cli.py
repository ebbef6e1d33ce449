"""Command-line front end.

Exit codes: 0 pass, 1 verification failed, 2 usage error, 3 nothing found,
4 build precondition failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cyclicmub.certificate import (
    LEVELS,
    BuildPreconditionError,
    MubCertificate,
    build_certificate,
    verify_certificate,
)
from cyclicmub.cyclotomic import DENSE_MAX_M, Cyc8Matrix
from cyclicmub.exceptions import BudgetError
from cyclicmub.gf2 import BitMatrix
from cyclicmub.search import (
    EXHAUSTIVE_MAX_M,
    KNOWN_CORNERS,
    ansatz_b,
    enumerate_all,
    known_corner,
    search_ansatz,
    staircase,
)

EXIT_OK, EXIT_VERIFY_FAIL, EXIT_USAGE, EXIT_NOT_FOUND, EXIT_PRECONDITION = 0, 1, 2, 3, 4

M_CAP = 24
OPT_IN_M = 20
DEFAULT_BUDGET = 60.0


class UsageError(Exception):
    pass


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _check_m(m: int, force: bool, heavy: bool) -> None:
    if m < 1:
        raise UsageError("m must be >= 1")
    if m > M_CAP and not force:
        raise UsageError(f"m > {M_CAP} needs --force")
    if heavy and m >= OPT_IN_M and not force:
        raise UsageError(f"searching m >= {OPT_IN_M} is opt-in; pass --force")


def parse_corner(text: str) -> BitMatrix:
    """Full row-major (4 or 9 bits) or upper triangle (3 or 6 bits), comma separated."""
    bits = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    if any(v not in (0, 1) for v in bits):
        raise UsageError(f"corner entries must be 0/1: {text!r}")
    full = {4: 2, 9: 3, 16: 4}
    tri = {3: 2, 6: 3, 10: 4}
    if len(bits) in full:
        n = full[len(bits)]
        return BitMatrix.from_array([bits[i * n : (i + 1) * n] for i in range(n)])
    if len(bits) in tri:
        n = tri[len(bits)]
        rows = [[0] * n for _ in range(n)]
        it = iter(bits)
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = next(it)
        return BitMatrix.from_array(rows)
    raise UsageError(f"cannot read a corner from {len(bits)} entries")


def parse_m_range(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        for sep in ("..", "-"):
            if sep in part:
                lo, hi = part.split(sep)
                out.extend(range(int(lo), int(hi) + 1))
                break
        else:
            out.append(int(part))
    return out


def _text_matrix(b: BitMatrix) -> str:
    return "\n".join("  " + " ".join(row) for row in b.to_strings())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_search(args) -> int:
    _check_m(args.m, args.force, heavy=True)
    if args.m < 4:
        res = enumerate_all(args.m, workers=args.workers)
    else:
        res = search_ansatz(
            args.m, max_corner=args.max_corner, budget=args.budget, workers=args.workers, halved=args.halved
        )
    if args.text:
        lines = [f"m = {res.m}  strategy = {res.strategy}  solutions = {len(res.solutions)}"]
        for s in res.solutions:
            lines.append(f"corner {s.corner.to_strings() if s.corner else '-'}")
            lines.append(_text_matrix(s.b))
        _emit(args, "\n".join(lines))
    else:
        _emit(args, res.to_json(include_timing=args.timing))
    return EXIT_OK if res.solutions else EXIT_NOT_FOUND


def _resolve_b(args) -> tuple[BitMatrix, BitMatrix | None]:
    if args.from_cert:
        cert = MubCertificate.loads(Path(args.from_cert).read_text())
        return cert.b, cert.corner
    if args.b:
        b = BitMatrix.from_strings(args.b.split(","))
        if args.m is not None and b.n_rows != args.m:
            raise UsageError("-m disagrees with --b")
        return b, None
    if args.m is None:
        raise UsageError("build needs -m, --b or --from-cert")
    _check_m(args.m, args.force, heavy=False)
    if args.corner:
        corner = parse_corner(args.corner)
        if corner.n_rows > args.m:
            raise UsageError("corner larger than m")
        return ansatz_b(args.m, corner), corner
    if args.m < 4:
        return staircase(args.m), None
    if args.m in KNOWN_CORNERS:
        corner = known_corner(args.m)
        return ansatz_b(args.m, corner), corner
    res = search_ansatz(args.m, max_corner=args.max_corner, budget=args.budget)
    if not res.solutions:
        raise LookupError(f"no ansatz solution for m = {args.m}")
    return res.canonical.b, res.canonical.corner


def cmd_build(args) -> int:
    try:
        b, corner = _resolve_b(args)
    except LookupError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_FOUND
    if args.emit_u and b.n_rows > DENSE_MAX_M:
        raise UsageError(f"--emit-u needs m <= {DENSE_MAX_M}")
    try:
        cert = build_certificate(b, corner, level=args.level, emit_u=args.emit_u, timestamp=not args.no_timestamp)
    except BuildPreconditionError as exc:
        print(f"build precondition failed: {exc}", file=sys.stderr)
        print(json.dumps(exc.report.to_json(), sort_keys=True), file=sys.stderr)
        return EXIT_PRECONDITION
    if args.text:
        lines = [f"m = {cert.m}", "B =", _text_matrix(cert.b)]
        lines.append("conditions: " + json.dumps(cert.condition_report.to_json(), sort_keys=True))
        if cert.phase_exps is not None and cert.m <= 6:
            lines.append("phases: " + " ".join(("1", "i", "-1", "-i")[e] for e in cert.phase_exps))
        if cert.global_phase is not None:
            lines.append(f"global phase: {cert.global_phase.render()}")
        lines.append("verification: " + json.dumps(cert.verification.to_json(), sort_keys=True))
        if cert.u is not None:
            lines.append("U =")
            lines.extend("  " + "  ".join(row) for row in cert.u.render())
        _emit(args, "\n".join(lines))
    else:
        _emit(args, cert.dumps(include_timestamps=not args.no_timestamp))
    return EXIT_OK if cert.fully_verified else EXIT_VERIFY_FAIL


def cmd_verify(args) -> int:
    try:
        cert = MubCertificate.loads(Path(args.cert).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        outcome = verify_certificate(cert, args.level)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        _emit(args, {"ok": outcome.ok, "level": args.level, "checks": outcome.checks, "failures": outcome.failures})
    else:
        lines = [f"{'PASS' if v else 'FAIL'} {k}" for k, v in outcome.checks.items()]
        lines.append("OK" if outcome.ok else f"FAILED: {outcome.failures[0]}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if outcome.ok else EXIT_VERIFY_FAIL


def cmd_table(args) -> int:
    ms = parse_m_range(args.m)
    for m in ms:
        if m not in KNOWN_CORNERS:
            raise UsageError(f"no reference corner for m = {m} (range 4..24)")
        _check_m(m, args.force, heavy=True)
    rows = []
    for m in ms:
        res = search_ansatz(m, max_corner=args.max_corner, budget=args.budget, workers=args.workers, halved=args.halved)
        ref = known_corner(m)
        rows.append(
            {
                "m": m,
                "corner_size": res.corner_sizes[-1] if res.corner_sizes else None,
                "solutions": len(res.solutions),
                "canonical_corner": res.canonical.corner.to_strings() if res.canonical else None,
                "reference_corner": ref.to_strings(),
                "reference_in_solutions": res.has_corner(ref),
                "timed_out": res.timed_out,
            }
        )
    if args.json:
        _emit(args, rows)
    else:
        lines = [f"{'m':>3}  {'size':>4}  {'#sol':>4}  {'canonical':<18} {'reference':<18} confirmed"]
        for r in rows:
            lines.append(
                f"{r['m']:>3}  {r['corner_size'] or '-':>4}  {r['solutions']:>4}  "
                f"{'/'.join(r['canonical_corner'] or ['-']):<18} {'/'.join(r['reference_corner']):<18} "
                f"{'yes' if r['reference_in_solutions'] else 'NO'}"
            )
        _emit(args, "\n".join(lines))
    return EXIT_OK if all(r["reference_in_solutions"] for r in rows) else EXIT_NOT_FOUND


def cmd_enumerate(args) -> int:
    if args.m > EXHAUSTIVE_MAX_M and not args.force:
        raise UsageError(f"exhaustive enumeration needs m <= {EXHAUSTIVE_MAX_M} (or --force)")
    res = enumerate_all(args.m, force=args.force, workers=args.workers)
    if args.text:
        lines = [f"m = {res.m}: {len(res.solutions)} solutions out of {res.candidates_tested} symmetric matrices"]
        for s in res.solutions:
            lines.append(" ".join(s.b.to_strings()))
        _emit(args, "\n".join(lines))
    else:
        _emit(args, res.to_json(include_timing=args.timing))
    return EXIT_OK if res.solutions else EXIT_NOT_FOUND


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclicmub", description="Cyclic MUBs in dimension 2^m")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, json_default: bool):
        sp.add_argument("--out", help="write output to this path")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", dest="json", action="store_true", default=json_default)
        g.add_argument("--text", dest="json", action="store_false")

    def search_flags(sp):
        sp.add_argument("--max-corner", type=int, choices=(2, 3, 4), default=3)
        sp.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="seconds per m")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--force", action="store_true", help="allow m beyond the default caps")
        sp.add_argument("--halved", action="store_true", help="walk only even indices in condition ii")

    s = sub.add_parser("search", help="search the staircase ansatz (exhaustive for m < 4)")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("--timing", action="store_true", help="include elapsed time (non-deterministic)")
    search_flags(s)
    common(s, True)
    s.set_defaults(func=cmd_search)

    b = sub.add_parser("build", help="construct and certify one B")
    b.add_argument("-m", type=int)
    b.add_argument("--corner", help="corner bits, e.g. 0,0,0,1")
    b.add_argument("--b", help="explicit B as comma-separated row bitstrings")
    b.add_argument("--from-cert", help="rebuild from an existing certificate's B")
    b.add_argument("--level", choices=LEVELS)
    b.add_argument("--emit-u", action="store_true", help="include the exact U")
    b.add_argument("--no-timestamp", action="store_true")
    search_flags(b)
    common(b, True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="recompute a certificate from B")
    v.add_argument("cert")
    v.add_argument("--level", choices=LEVELS, default="symplectic")
    common(v, False)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="check the reference corners for a range of m")
    t.add_argument("-m", default="4..16", help="e.g. 4..16 or 12,20")
    search_flags(t)
    common(t, False)
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("enumerate", help="all solutions by exhaustive search (m <= 4)")
    e.add_argument("-m", type=int, required=True)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--force", action="store_true")
    e.add_argument("--timing", action="store_true")
    common(e, True)
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.text = not getattr(args, "json", True)
    try:
        return args.func(args)
    except (UsageError, BudgetError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
