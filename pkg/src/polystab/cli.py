"""Command-line front end.

Exit codes: 0 success / semistable, 1 I/O error, 2 validation error,
3 destabilized.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import PolystabError
from .lattice import OneParamSubgroup, sum_zero_box
from .polytope import LatticePolytope, support_min
from .rep_weyl import Partition, hypersimplex, orbit_polytope
from .stability import (StabilityPair, complete_intersection_degree,
                        complete_intersection_mu_times_d, curve_degree, curve_pair,
                        degeneration_report, energy_slope, find_m0,
                        hyperdiscriminant_degree, is_semistable,
                        mu_times_d_from_sectional_genus, proper_inclusion_holds,
                        veronese_degree, veronese_mu_times_d)
from .sympoly import (SparsePolynomial, act_linear, discriminant, newton_polytope,
                      row_degrees, sylvester_resultant, total_degree)

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_DESTABILIZED = 0, 1, 2, 3

DEFAULT_T_GRID = ("1/100000", "1/1000000")
SLOPE_TOLERANCE = Fraction(1, 100)
SIGMA_ENTRY_RANGE = 2


class IOFailure(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str):
    try:
        if path == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def parse_lambda(text: str) -> OneParamSubgroup:
    try:
        coords = [int(c) for c in text.replace(" ", "").split(",") if c != ""]
    except ValueError as exc:
        raise PolystabError(f"cannot parse lambda {text!r}: {exc}") from exc
    return OneParamSubgroup(coords)


class Run:
    """Collects one RunReport and emits it."""

    def __init__(self, args, command: str, inputs: dict):
        self.args = args
        self.command = command
        self.inputs = inputs
        self.seed = None
        self.start = time.perf_counter()

    def emit(self, code: int, result=None, certificates=None, stream=None) -> int:
        report = {
            "command": self.command,
            "inputs": self.inputs,
            "result": result if code == EXIT_OK else None,
            "certificates": certificates or [],
            "timing_ms": (round((time.perf_counter() - self.start) * 1000)
                          if self.args.timing else None),
            "seed": self.seed,
        }
        out = stream or (sys.stderr if getattr(self.args, "out", None) == "-" else sys.stdout)
        out.write(dumps(report) + "\n")
        out.flush()
        return code


def _artifact(args, text: str, result: dict, key: str, obj):
    if args.out:
        _write_text(args.out, text)
    else:
        result[key] = obj


# ---------------------------------------------------------------------------


def cmd_resultant(args) -> int:
    run = Run(args, "resultant", {"m": args.m, "n": args.n})
    p = sylvester_resultant(args.m, args.n)
    rows = row_degrees(p)
    result = {"total_degree": total_degree(p), "row_degrees": rows, "terms": len(p)}
    print(f"total={result['total_degree']}, rows=({', '.join(map(str, rows))})", file=sys.stderr)
    _artifact(args, p.dumps(), result, "polynomial", p.to_json())
    return run.emit(EXIT_OK, result)


def cmd_discriminant(args) -> int:
    run = Run(args, "discriminant", {"d": args.d})
    p = discriminant(args.d)
    result = {"total_degree": total_degree(p), "terms": len(p)}
    print(f"total={result['total_degree']}, terms={len(p)}", file=sys.stderr)
    _artifact(args, p.dumps(), result, "polynomial", p.to_json())
    return run.emit(EXIT_OK, result)


def _polytope_result(P: LatticePolytope) -> dict:
    return {"vertex_count": len(P.vertices), "facet_count": len(P.facets),
            "affine_dim": P.affine_dim}


def cmd_newton(args) -> int:
    run = Run(args, "newton", {"in": args.input})
    p = SparsePolynomial.from_json(_read_json(args.input))
    P = newton_polytope(p)
    result = _polytope_result(P)
    _artifact(args, P.dumps(), result, "polytope", P.to_json())
    return run.emit(EXIT_OK, result)


def cmd_hypersimplex(args) -> int:
    run = Run(args, "hypersimplex", {"k": args.k, "l": args.l})
    P = hypersimplex(args.k, args.l)
    result = _polytope_result(P)
    _artifact(args, P.dumps(), result, "polytope", P.to_json())
    return run.emit(EXIT_OK, result)


def cmd_orbit(args) -> int:
    lam = Partition(parse_lambda_like(args.partition))
    run = Run(args, "orbit", {"partition": list(lam)})
    P = orbit_polytope(lam)
    result = _polytope_result(P)
    _artifact(args, P.dumps(), result, "polytope", P.to_json())
    return run.emit(EXIT_OK, result)


def parse_lambda_like(text: str) -> list:
    try:
        return [int(c) for c in text.split(",") if c.strip() != ""]
    except ValueError as exc:
        raise PolystabError(f"cannot parse integer list {text!r}") from exc


def cmd_curve_pair(args) -> int:
    run = Run(args, "curve-pair", {"d": args.d})
    p = curve_pair(args.d)
    result = {"label": p.label, "deg_v": p.deg_v, "deg_w": p.deg_w}
    _artifact(args, dumps(p.to_json()) + "\n", result, "pair", p.to_json())
    return run.emit(EXIT_OK, result)


def _load_pair(path: str) -> StabilityPair:
    data = _read_json(path)
    try:
        return StabilityPair.from_json(data)
    except (KeyError, TypeError) as exc:
        raise PolystabError(f"malformed pair file {path}: {exc}") from exc


def sample_sigmas(dim: int, count: int, seed: int) -> list:
    """Seeded invertible integer matrices with entries in [-2, 2]."""
    from sympy import Matrix

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = [[rng.randint(-SIGMA_ENTRY_RANGE, SIGMA_ENTRY_RANGE) for _ in range(dim)]
             for _ in range(dim)]
        if Matrix(s).det() != 0:
            out.append(s)
    return out


def _analyse(p: StabilityPair, m_max: int, torus) -> tuple:
    """Verdict dict and certificates for one torus."""
    res = is_semistable(p)
    verdict = {"torus": torus, "semistable": res.semistable}
    certs = []
    if not res.semistable:
        cert = {"kind": "destabilizing", "torus": torus}
        cert.update(res.certificate.to_json())
        certs.append(cert)
        return verdict, certs
    m0 = find_m0(p)
    verdict["k_stable"] = m0 is not None
    verdict["m0"] = m0
    if m0 is not None and m0 <= m_max:
        checked = {"kind": "m0", "torus": torus, "m0": m0,
                   "holds_at_m0": proper_inclusion_holds(p, m0)}
        if m0 > 1:
            checked["fails_at_m0_minus_1"] = not proper_inclusion_holds(p, m0 - 1)
        certs.append(checked)
    return verdict, certs


def cmd_check_pair(args) -> int:
    p = _load_pair(args.pair)
    run = Run(args, "check-pair", {"pair": args.pair, "label": p.label, "m_max": args.m_max,
                                   "conjugates": args.conjugates})
    verdicts, certs = [], []
    v, c = _analyse(p, args.m_max, "standard")
    verdicts.append(v)
    certs.extend(c)
    if args.conjugates:
        if p.poly_v is None or p.poly_w is None:
            raise PolystabError("--conjugates needs polynomials in the pair file (see curve-pair)")
        run.seed = args.seed
        for sigma in sample_sigmas(p.dim, args.conjugates, args.seed):
            q = p.with_polynomials(act_linear(p.poly_v, sigma), act_linear(p.poly_w, sigma))
            v, c = _analyse(q, args.m_max, {"sigma": sigma})
            verdicts.append(v)
            certs.extend(c)
    semistable = all(v["semistable"] for v in verdicts)
    result = {"semistable": semistable,
              "k_stable": semistable and all(v["k_stable"] for v in verdicts),
              "tori": verdicts}
    return run.emit(EXIT_OK if semistable else EXIT_DESTABILIZED, result, certs)


def cmd_futaki(args) -> int:
    p = _load_pair(args.pair)
    if args.scan_box is not None:
        if args.scan_box < 0:
            raise PolystabError("--scan-box radius must be non-negative")
        lams = list(sum_zero_box(p.dim, args.scan_box))
    else:
        lams = [parse_lambda(args.lam)]
    grid = args.t_grid.split(",") if args.t_grid else DEFAULT_T_GRID
    worst = EXIT_OK
    for lam in lams:
        rep = degeneration_report(p, lam)
        line = rep.to_json()
        if args.slope:
            s = energy_slope(p, lam, grid)
            line["slope"] = float(s)
            line["slope_match"] = bool(abs(s - rep.futaki) <= float(SLOPE_TOLERANCE))
        sys.stdout.write(dumps(line) + "\n")
        if rep.futaki > 0:
            worst = EXIT_DESTABILIZED
    sys.stdout.flush()
    return worst


def cmd_degree(args) -> int:
    run = Run(args, "degree", {"family": args.family, "n": args.n, "d": args.d, "g": args.g,
                               "degrees": args.degrees})
    if args.family == "veronese":
        n, d = args.n or 1, _need(args.d, "--d")
        general = hyperdiscriminant_degree(n, d, veronese_mu_times_d(n))
        shortcut = veronese_degree(n, d)
    elif args.family == "curve":
        d, g = _need(args.d, "--d"), args.g or 0
        general = hyperdiscriminant_degree(1, d, mu_times_d_from_sectional_genus(1, d, g))
        shortcut = curve_degree(d, g)
    else:
        n = args.n or 1
        degrees = parse_lambda_like(_need(args.degrees, "--degrees"))
        if not degrees or min(degrees) < 1:
            raise PolystabError("--degrees must be positive integers")
        deg_x = math.prod(degrees)
        if deg_x < 2:
            raise PolystabError("complete intersection must have degree >= 2")
        general = hyperdiscriminant_degree(n, deg_x, complete_intersection_mu_times_d(n, degrees))
        shortcut = complete_intersection_degree(n, degrees)
    agree = general == shortcut
    result = {"general": str(general), "shortcut": shortcut, "agree": agree}
    print(f"general={general} shortcut={shortcut}", file=sys.stderr)
    if not agree:
        return run.emit(EXIT_VALIDATION, certificates=[result])
    return run.emit(EXIT_OK, result)


def _need(value, flag):
    if value is None:
        raise PolystabError(f"{flag} is required for this family")
    return value


def cmd_verify_certificate(args) -> int:
    p = _load_pair(args.pair)
    report = _read_json(args.report)
    run = Run(args, "verify-certificate", {"pair": args.pair, "report": args.report})
    try:
        checks = [_verify_one(p, cert) for cert in report.get("certificates", [])]
    except PolystabError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PolystabError(f"malformed certificate in {args.report}: {exc!r}") from exc
    ok = all(c["verified"] for c in checks)
    return run.emit(EXIT_OK if ok else EXIT_VALIDATION, {"verified": ok, "checks": checks}, checks)


def _verify_one(p: StabilityPair, cert: dict) -> dict:
    """Re-check one certificate using only polytope arithmetic."""
    q = p
    torus = cert.get("torus", "standard")
    if isinstance(torus, dict):
        if p.poly_v is None or p.poly_w is None:
            raise PolystabError("conjugate certificate needs polynomials in the pair file")
        sigma = torus["sigma"]
        q = p.with_polynomials(act_linear(p.poly_v, sigma), act_linear(p.poly_w, sigma))
    if cert["kind"] == "destabilizing":
        lam = OneParamSubgroup(cert["lambda"])
        # recomputed from the scaled polytopes alone
        f = support_min(q.polytope_w(), lam) - support_min(q.polytope_v(), lam)
        ok = (f == cert["futaki"] > 0
              and cert.get("w_v") == support_min(q.support_v.hull(), lam)
              and cert.get("w_w") == support_min(q.support_w.hull(), lam))
    elif cert["kind"] == "m0":
        m0 = int(cert["m0"])
        ok = proper_inclusion_holds(q, m0) and (m0 == 1 or not proper_inclusion_holds(q, m0 - 1))
    else:
        raise PolystabError(f"unknown certificate kind {cert['kind']!r}")
    return {"kind": cert["kind"], "torus": torus, "verified": ok}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polystab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--timing", action="store_true",
                    help="record wall-clock timing_ms in reports (breaks byte-identity)")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(sp):
        sp.add_argument("--out", help="write the artifact here ('-' for stdout)")
        return sp

    sp = with_out(sub.add_parser("resultant", help="generic Sylvester resultant R_{m,n}"))
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_resultant)

    sp = with_out(sub.add_parser("discriminant", help="discriminant of a degree-d binary form"))
    sp.add_argument("d", type=int)
    sp.set_defaults(func=cmd_discriminant)

    sp = with_out(sub.add_parser("newton", help="weight polytope of a polynomial"))
    sp.add_argument("--in", dest="input", required=True)
    sp.set_defaults(func=cmd_newton)

    sp = with_out(sub.add_parser("hypersimplex", help="hypersimplex Delta(k, l)"))
    sp.add_argument("k", type=int)
    sp.add_argument("l", type=int)
    sp.set_defaults(func=cmd_hypersimplex)

    sp = with_out(sub.add_parser("orbit", help="Weyl orbit polytope of a partition"))
    sp.add_argument("partition", help="comma-separated, e.g. 2,1,0")
    sp.set_defaults(func=cmd_orbit)

    sp = with_out(sub.add_parser("curve-pair", help="(resultant, discriminant) pair for d"))
    sp.add_argument("d", type=int)
    sp.set_defaults(func=cmd_curve_pair)

    sp = sub.add_parser("check-pair", help="semistability, m0 and conjugate tori")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--m-max", type=int, default=50,
                    help="verify m0 by direct inclusion when m0 <= this")
    sp.add_argument("--conjugates", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check_pair)

    sp = sub.add_parser("futaki", help="generalized Futaki invariants")
    sp.add_argument("--pair", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda", dest="lam")
    g.add_argument("--scan-box", type=int)
    sp.add_argument("--slope", action="store_true", help="also estimate the energy slope")
    sp.add_argument("--t-grid", help="comma-separated decreasing t values in (0, 1)")
    sp.set_defaults(func=cmd_futaki)

    sp = sub.add_parser("degree", help="hyperdiscriminant degree self-check")
    sp.add_argument("--family", choices=("veronese", "curve", "ci"), required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--g", type=int)
    sp.add_argument("--degrees")
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("verify-certificate", help="re-check certificates of a check-pair report")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--report", required=True)
    sp.set_defaults(func=cmd_verify_certificate)
    return ap


def main(argv=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IOFailure as exc:
        print(f"polystab: {exc}", file=sys.stderr)
        return EXIT_IO
    except PolystabError as exc:
        print(f"polystab: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
