"""Command-line front end: a thin HTTP client over the service.

By default the CLI talks to an in-process instance of the FastAPI app (no
socket, same process); ``--server URL`` points it at a remote instance
instead.  All math runs behind the service either way, so both paths return
byte-identical payloads.

Exit codes: 0 success/pass, 1 usage error, 2 verification failure,
3 internal tripwire (depth cap, classification conflict, criterion/oracle
disagreement).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import httpx

from . import __version__
from .counting import CACHE_ENV_VAR
from .quartic import Quartic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_TRIPWIRE = 3


class _CliUsageError(Exception):
    pass


def _parse_poly_args(tokens: list[str]) -> dict:
    """Accept "a3 a2 a1 a0" (monic implied) or a single "x^4+..." string."""
    if len(tokens) == 4:
        try:
            a3, a2, a1, a0 = (int(t) for t in tokens)
        except ValueError:
            raise _CliUsageError(f"expected four integers, got {tokens}")
        f = Quartic(a3, a2, a1, a0)  # validates irreducibility early
    elif len(tokens) == 1:
        f = Quartic.parse(tokens[0])
    else:
        raise _CliUsageError(
            "polynomial must be four integers 'a3 a2 a1 a0' or one string 'x^4+...'"
        )
    return {"a3": f.a3, "a2": f.a2, "a1": f.a1, "a0": f.a0}


def _bound_arg(text: str) -> int:
    """Positive integer for argparse; scientific notation allowed (1e6)."""
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if val != int(val) or val < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return int(val)


def _bound_or_zero_arg(text: str) -> int:
    """Like ``_bound_arg`` but 0 is allowed (it disables the feature)."""
    if text.strip() == "0":
        return 0
    return _bound_arg(text)


def _parse_checkpoints(text: str) -> list[int]:
    """Comma-separated checkpoint list; scientific notation allowed (1e6)."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(_bound_arg(tok))
        except argparse.ArgumentTypeError:
            raise _CliUsageError(f"checkpoint {tok!r} is not a positive integer")
    if not out:
        raise _CliUsageError("empty checkpoint list")
    return out


def make_client(server: str | None):
    """HTTP client: remote when --server is given, in-process otherwise."""
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # starlette testclient deprecation chatter
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


# ---------------------------------------------------------------------------
# text / csv renderers


def _term_notation(term: dict) -> str:
    """Render one merged series term: coeff * prefactor^{-s} * g^{chars}."""
    coeff = Fraction(term["sign_num"], term["sign_den"])
    chars = []
    if term["chi"] != 1:
        chars.append(f"chi_{term['chi']}")
    for r in term["psis"]:
        chars.append(f"psi_{r}")
    g = "g" if not chars else "g^{" + "*".join(chars) + "}"
    pieces = []
    if coeff != 1:
        pieces.append(f"({coeff})")
    if term["prefactor"] != 1:
        pieces.append(f"{term['prefactor']}^{{-s}}")
    pieces.append(g)
    return " * ".join(pieces)


def _render_analyze_text(d: dict) -> str:
    lines = [
        f"f = {d['f']['poly']}",
        f"disc = {d['disc']}",
        f"galois = {d['galois']}",
        f"mean_rho = {d['mean_rho']}    m = {d['m']}",
        f"realizable types = {[tuple(t) for t in d['realizable_types']]}",
        f"mod 8 allowed: odd q in {sorted(d['mod8']['odd'])}, "
        f"q/2 in {sorted(d['mod8']['half'])}",
    ]
    for t in d["odd_tables"]:
        lines.append(
            f"odd bad prime p={t['p']}: least nonresidue u={t['u']}, "
            f"coprime rule={t['coprime_rule']}, dividing rule={t['dividing_rule']}"
        )
    lines.append(f"condition sets ({len(d['sets'])}):")
    for s in d["sets"]:
        leg = " ".join(f"({p}/.)={v:+d}" for p, v in s["legendre"])
        lines.append(
            f"  bad_part={s['bad_part']:<6} cofactor mod 8 = {s['mod8_class']}  {leg}"
        )
    lines.append(f"series terms ({len(d['terms'])}):")
    for t in d["terms"]:
        lines.append(f"  {_term_notation(t)}")
    return "\n".join(lines)


def _render_terms_text(d: dict) -> str:
    return "\n".join(_term_notation(t) for t in d["terms"])


def _render_local_text(d: dict) -> str:
    line = f"solvable = {str(d['solvable']).lower()}"
    if d.get("chart"):
        line += f" (chart: {d['chart']}, depth used: {d['depth_used']})"
    w = d.get("witness")
    if w:
        extra = f", valuation {w['valuation']}" if w.get("valuation") is not None else ""
        line += f"\nwitness: {w['kind']} at x0={w['x0']} mod p^{w['k']}{extra}"
    return line


def _render_els_text(d: dict) -> str:
    return (
        f"q = {d['q']}: els = {str(d['els']).lower()} "
        f"(criterion = {str(d['criterion']).lower()}, "
        f"direct = {str(d['direct']).lower()}, agree)"
    )


def _render_count_text(d: dict) -> str:
    lines = [f"galois = {d['galois']}", f"{'x':>12} {'L(x)':>12}"]
    lines += [f"{r['x']:>12} {r['count']:>12}" for r in d["rows"]]
    return "\n".join(lines)


def _render_fit_text(d: dict) -> str:
    lines = [
        f"galois = {d['galois']}   m = {d['m']} = {d['m_float']:.6f}",
        f"{'x':>12} {'L(x)':>12} {'c(x)':>12}",
    ]
    lines += [f"{p['x']:>12} {p['count']:>12} {p['cx']:>12.6f}" for p in d["points"]]
    lines.append(f"cf_estimate = {d['cf_estimate']:.6f}")
    if d.get("trend") is not None:
        lines.append(f"trend (rel. change, last two checkpoints) = {d['trend']:.4%}")
    if d.get("euler_estimate") is not None:
        lines.append(f"euler_estimate = {d['euler_estimate']:.6f}")
    return "\n".join(lines)


def _render_verify_text(d: dict) -> str:
    lines = []
    for s in d["suites"]:
        lines.append(f"[{'PASS' if s['passed'] else 'FAIL'}] suite {s['suite']}")
        for c in s["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            detail = f"  {c['detail']}" if c["detail"] else ""
            lines.append(f"  [{mark}] {c['name']}{detail}")
    lines.append("all checks passed" if d["passed"] else "some checks FAILED")
    return "\n".join(lines)


def _render_csv(cmd: str, d: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if cmd == "count":
        w.writerow(["x", "count"])
        for r in d["rows"]:
            w.writerow([r["x"], r["count"]])
    elif cmd == "fit":
        w.writerow(["x", "count", "cx"])
        for p in d["points"]:
            w.writerow([p["x"], p["count"], p["cx"]])
    elif cmd == "verify":
        w.writerow(["suite", "check", "passed", "detail"])
        for s in d["suites"]:
            for c in s["checks"]:
                w.writerow([s["suite"], c["name"], c["passed"], c["detail"]])
    else:
        raise _CliUsageError(f"csv format is not defined for {cmd!r}")
    return buf.getvalue().rstrip("\n")


_TEXT_RENDERERS = {
    "analyze": _render_analyze_text,
    "terms": _render_terms_text,
    "local": _render_local_text,
    "els": _render_els_text,
    "count": _render_count_text,
    "fit": _render_fit_text,
    "verify": _render_verify_text,
}


def _emit(args, cmd: str, payload: dict) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
    elif args.format == "csv":
        text = _render_csv(cmd, payload)
    else:
        text = _TEXT_RENDERERS[cmd](payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# argument parsing


def _common_flags(p: argparse.ArgumentParser) -> None:
    """Output/transport flags, accepted before or after the subcommand."""
    p.add_argument("--server", default=argparse.SUPPRESS, metavar="URL",
                   help="remote service URL (default: run in-process)")
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default=argparse.SUPPRESS)
    p.add_argument("--output", default=argparse.SUPPRESS, metavar="PATH",
                   help="write output to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qtwist",
        description="Everywhere-local solvability of quadratic twists q*y^2 = f(x).",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common_flags(ap)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def poly_positional(p):
        _common_flags(p)
        p.add_argument("poly", nargs="+",
                       help="a3 a2 a1 a0 (monic implied) or 'x^4+...'")

    p = sub.add_parser("analyze", help="criterion bundle: tables, sets, terms")
    poly_positional(p)

    p = sub.add_parser("terms", help="merged series terms only")
    poly_positional(p)

    p = sub.add_parser("local", help="solvability over one completion Q_p")
    poly_positional(p)
    p.add_argument("--q", type=int, required=True, help="twist (may be negative)")
    p.add_argument("--p", type=int, required=True, help="prime")

    p = sub.add_parser("els", help="everywhere-local solvability, both routes")
    poly_positional(p)
    p.add_argument("--q", type=int, required=True)

    for name in ("count", "fit"):
        p = sub.add_parser(
            name,
            help="count solvable twists up to xmax"
            + ("" if name == "count" else " and fit the constant"),
        )
        _common_flags(p)
        p.add_argument("--f", dest="poly", nargs="+", required=True,
                       metavar="COEFF", help="a3 a2 a1 a0 or 'x^4+...'")
        p.add_argument("--xmax", type=_bound_arg, required=True)
        p.add_argument("--checkpoints", default=None,
                       help="comma-separated, e.g. 1e4,1e5,1e6")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--no-cache", action="store_true",
                       help=f"ignore the census cache (see ${CACHE_ENV_VAR})")
        if name == "fit":
            p.add_argument("--euler-bound", type=_bound_or_zero_arg, default=0,
                           help="also report the truncated Euler-product estimate")

    p = sub.add_parser("verify", help="run a self-verification suite")
    _common_flags(p)
    p.add_argument("--suite", required=True,
                   choices=("filtration", "terms", "zeta", "density", "oracle", "all"))
    p.add_argument("--f", dest="poly", nargs="+", default=None,
                   metavar="COEFF", help="quartic (default: built-in corpus)")
    p.add_argument("--N", type=_bound_arg, default=10**5,
                   help="coefficient range for series suites")
    p.add_argument("--qmax", type=_bound_arg, default=2000,
                   help="twist range for the oracle suite")
    p.add_argument("--B", type=_bound_arg, default=10**6,
                   help="prime bound for the density suite")
    p.add_argument("--r", type=int, action="append", default=None,
                   help="odd modulus for the filtration suite (repeatable)")
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--group", choices=("V4", "C4", "D4", "A4", "S4"), default=None,
                   help="restrict the zeta suite to one Galois group")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


def _build_request(args) -> tuple[str, dict]:
    """(endpoint, json payload) for the parsed arguments."""
    if args.cmd in ("analyze", "terms"):
        return "/analyze", {"poly": _parse_poly_args(args.poly)}
    if args.cmd == "local":
        return "/local", {"poly": _parse_poly_args(args.poly), "q": args.q, "p": args.p}
    if args.cmd == "els":
        return "/els", {"poly": _parse_poly_args(args.poly), "q": args.q}
    if args.cmd in ("count", "fit"):
        payload = {
            "poly": _parse_poly_args(args.poly),
            "xmax": args.xmax,
            "workers": args.threads,
            "use_cache": not args.no_cache,
        }
        if args.checkpoints:
            payload["checkpoints"] = _parse_checkpoints(args.checkpoints)
        if args.cmd == "fit" and args.euler_bound:
            payload["euler_bound"] = args.euler_bound
        return f"/{args.cmd}", payload
    if args.cmd == "verify":
        payload = {
            "suite": args.suite,
            "N": args.N,
            "qmax": args.qmax,
            "B": args.B,
            "tolerance": args.tolerance,
        }
        if args.poly:
            payload["polys"] = [_parse_poly_args(args.poly)]
        if args.r:
            payload["rs"] = args.r
        if args.group:
            payload["group"] = args.group
        return "/verify", payload
    raise _CliUsageError(f"unknown command {args.cmd!r}")


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; normalize to the documented code
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for name, default in (("server", None), ("format", "text"), ("output", None)):
        if not hasattr(args, name):
            setattr(args, name, default)

    if args.cmd == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    try:
        endpoint, payload = _build_request(args)
    except (_CliUsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        with make_client(args.server) as client:
            resp = client.post(endpoint, json=payload)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if resp.status_code in (400, 422):
        body = resp.json()
        detail = body.get("detail", body)
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_USAGE
    if resp.status_code == 500:
        try:
            body = resp.json()
        except ValueError:
            body = {}
        if body.get("error") == "tripwire":
            print(f"tripwire [{body.get('kind')}]: {body.get('detail')}", file=sys.stderr)
            return EXIT_TRIPWIRE
        print(f"error: server failure: {resp.text}", file=sys.stderr)
        return EXIT_USAGE
    if resp.status_code != 200:
        print(f"error: unexpected status {resp.status_code}: {resp.text}",
              file=sys.stderr)
        return EXIT_USAGE

    data = resp.json()
    try:
        _emit(args, args.cmd, data)
    except _CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.cmd == "verify" and not data["passed"]:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
