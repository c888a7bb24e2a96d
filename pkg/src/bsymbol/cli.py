"""Command-line front end: ``bsymbol {validate,enumerate,verify,scan}``.

Exit codes: 0 success, 1 verification failure, 2 parameter rejection,
3 budget exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from typing import Sequence, TextIO

from .code import CodeParams, WeightEnumerator, validate_params
from .errors import BOutOfRangeError, BudgetExceededError, DegreeMismatchError, ParameterError
from .field import (
    FieldSpec,
    GaloisField,
    build_field,
    default_poly_q,
    default_poly_qr,
    default_spec,
    is_prime,
    subfield,
)
from .oracle import enumerator_brute, resolve_budget, verify_all
from .theory import (
    SemiprimitiveData,
    build_P,
    bsymbol_enumerator_closed,
    bsymbol_weights,
    hamming_weights,
    mu_profile,
    semiprimitive_instances,
    semiprimitivity,
    theory_params,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARAMS = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

_TOKEN = re.compile(r"^z\^(\d+)$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# polynomial grammar


def parse_poly(text: str, degree: int, p: int, fq: GaloisField | None = None) -> tuple[int, ...]:
    """Parse comma-separated ascending coefficients into a monic tuple.

    With ``fq`` given (an extension F_q, t > 1), coefficients are ``0`` or
    ``z^k`` meaning the k-th power of the F_q generator; ``1`` is accepted
    for ``z^0``.  Otherwise they are decimal residues mod p.  ``degree``
    tokens imply the leading 1; ``degree + 1`` tokens must end in 1.
    """
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    coeffs = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m:
            k = int(m.group(1))
            coeffs.append(fq.exp(k) if fq is not None else pow(_prime_generator(p), k, p))
        elif tok.isdigit():
            v = int(tok)
            if fq is not None and v not in (0, 1):
                raise UsageError(f"coefficient {tok!r}: use 0 or z^k for F_q elements")
            if v >= p:
                raise UsageError(f"coefficient {tok!r} is not a residue mod {p}")
            coeffs.append(v)
        else:
            raise UsageError(f"cannot parse coefficient {tok!r}")
    if len(coeffs) == degree:
        coeffs.append(1)
    if len(coeffs) != degree + 1:
        raise DegreeMismatchError(f"{text!r}: expected {degree} or {degree + 1} coefficients")
    if coeffs[-1] != 1:
        raise DegreeMismatchError(f"{text!r}: polynomial must be monic")
    return tuple(coeffs)


def _prime_generator(p: int) -> int:
    # z in a prime field means the root of the default degree-1 polynomial
    return (-default_poly_q(p, 1)[0]) % p


def format_poly(coeffs: Sequence[int], fq: GaloisField | None = None) -> str:
    if fq is None or fq.degree == 1:
        return ",".join(str(c) for c in coeffs)
    return ",".join("0" if c == 0 else f"z^{fq.log(c)}" for c in coeffs)


# --------------------------------------------------------------------------
# shared setup


def _add_code_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("-p", type=int, required=True, help="characteristic")
    ap.add_argument("-t", type=int, default=1, help="q = p^t (default 1)")
    ap.add_argument("-r", type=int, required=True, help="code dimension / extension degree")
    ap.add_argument("-N", type=int, required=True, help="n*N = q^r - 1")
    ap.add_argument("--poly-q", help="defining polynomial of F_q over F_p")
    ap.add_argument("--poly-qr", help="defining polynomial of F_{q^r} over F_q")


def _add_output_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--format", choices=("text", "json", "csv"), default="text")
    ap.add_argument("--budget", type=int, default=None,
                    help="max field order for brute force (env BSYMBOL_BUDGET, default 2^20)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)


def build_spec(p: int, t: int, r: int, poly_q: str | None, poly_qr: str | None) -> FieldSpec:
    if t < 1 or r < 1:
        raise DegreeMismatchError(f"t and r must be >= 1 (t={t}, r={r})")
    pq = parse_poly(poly_q, t, p) if poly_q else default_poly_q(p, t)
    fq = subfield(p, pq)
    pqr = parse_poly(poly_qr, r, p, fq if t > 1 else None) if poly_qr else default_poly_qr(p, pq, r)
    return FieldSpec(p, t, r, pq, pqr)


def _params_from_args(args) -> CodeParams:
    spec = build_spec(args.p, args.t, args.r, args.poly_q, args.poly_qr)
    return validate_params(build_field(spec), args.N)


def parse_b(text: str | None, params: CodeParams) -> list[int]:
    if text is None or text == "all":
        return list(range(1, params.max_b + 1))
    out: set[int] = set()
    for part in text.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\.\.|-)\s*(\d+)\s*)?", part)
        if not m:
            raise UsageError(f"cannot parse b range {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        out.update(range(lo, hi + 1))
    bs = sorted(out)
    if not bs or bs[0] < 1 or bs[-1] > params.max_b:
        raise BOutOfRangeError(f"b={text} outside [1, min(r, n-1)] = [1, {params.max_b}]")
    return bs


def _param_echo(params: CodeParams, sp: SemiprimitiveData | None) -> dict:
    out = params.as_dict()
    fq = params.field.fq
    out["poly_q"] = format_poly(params.field.spec.poly_q)
    out["poly_qr"] = format_poly(params.field.spec.poly_qr, fq)
    if sp is not None:
        out.update(sp.as_dict())
    return out


def _dump_json(obj, out: TextIO) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out: TextIO) -> int:
    params = _params_from_args(args)
    d = semiprimitivity(params.p, params.u)
    sp = theory_params(params) if params.u == 1 or d is not None else None
    echo = _param_echo(params, sp)
    if params.u == 1:
        regime = "one-weight"
    elif sp is not None:
        regime = "two-weight semiprimitive"
    else:
        regime = "not semiprimitive"
    echo["regime"] = regime
    if args.format == "json":
        _dump_json(echo, out)
    elif args.format == "csv":
        w = csv.DictWriter(out, fieldnames=list(echo))
        w.writeheader()
        w.writerow(echo)
    else:
        out.write(f"p={params.p} t={params.t} r={params.r} q={params.q} N={params.N}\n")
        out.write(f"n={params.n} Delta={params.Delta} u={params.u}\n")
        out.write(f"poly_q={echo['poly_q']} poly_qr={echo['poly_qr']}\n")
        out.write(f"regime: {regime}\n")
        if sp is not None:
            out.write(f"d={sp.d} s={sp.s} delta={sp.delta}\n")
    if sp is None:
        print(f"p={params.p} is not semiprimitive modulo u={params.u}", file=sys.stderr)
        return EXIT_PARAMS
    return EXIT_OK


def _enumerate_records(args, params: CodeParams) -> list[dict]:
    bs = parse_b(args.b, params)
    records = []
    if args.mode == "formula":
        sp = theory_params(params)
        echo = _param_echo(params, sp)
        for b in bs:
            P = build_P(params, b)
            mu = mu_profile(params, b, P)
            enum = bsymbol_enumerator_closed(params, sp, b, mu)
            rec = {"params": echo, "b": b, "mode": "formula", **enum.to_json(),
                   "P_size": len(P), "mu": list(mu.mu),
                   "class_weights": list(bsymbol_weights(params, sp, b, mu))}
            records.append(rec)
    else:
        budget = resolve_budget(args.budget)
        echo = _param_echo(params, None)
        for b in bs:
            enum = enumerator_brute(params, b, budget=budget, workers=args.workers)
            records.append({"params": echo, "b": b, "mode": "oracle", **enum.to_json()})
    return records


def cmd_enumerate(args, out: TextIO) -> int:
    params = _params_from_args(args)
    records = _enumerate_records(args, params)
    if args.format == "json":
        _dump_json(records[0] if len(records) == 1 else records, out)
    elif args.format == "csv":
        w = csv.writer(out)
        w.writerow(["b", "weight", "count"])
        for rec in records:
            w.writerow([rec["b"], 0, rec["constant_term"]])
            for e in rec["enumerator"]:
                w.writerow([rec["b"], e["weight"], e["count"]])
    else:
        for rec in records:
            text = WeightEnumerator.from_json(rec).to_text()
            out.write(f"b={rec['b']}: {text}\n")
            if rec["mode"] == "formula":
                out.write(f"  |P(b)|={rec['P_size']} mu={tuple(rec['mu'])} "
                          f"W_i={tuple(rec['class_weights'])}\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    params = _params_from_args(args)
    bs = parse_b(args.b, params)
    report = verify_all(params, bs, inject_delta_flip=args.inject_delta_flip,
                        budget=resolve_budget(args.budget), seed=args.seed,
                        lemmas=not args.no_lemmas, workers=args.workers)
    if args.format == "json":
        _dump_json(report.to_json(include_timing=args.timing), out)
    elif args.format == "csv":
        w = csv.writer(out)
        w.writerow(["check", "passed", "witness", "detail"])
        for c in report.checks:
            w.writerow([c.name, int(c.passed), json.dumps(c.witness) if c.witness else "", c.detail])
    else:
        for c in report.checks:
            line = f"{'PASS' if c.passed else 'FAIL'} {c.name}"
            if c.detail:
                line += f"  ({c.detail})"
            if c.witness:
                line += f"  witness={json.dumps(c.witness)}"
            out.write(line + "\n")
        summary = "all checks passed" if report.passed else f"{len(report.failures())} checks failed"
        if args.timing:
            summary += f" in {report.elapsed:.3f}s"
        out.write(summary + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _int_range(text: str | None) -> list[int] | None:
    if text is None:
        return None
    m = re.fullmatch(r"(\d+)(?:(?:\.\.|-)(\d+))?", text.strip())
    if not m:
        raise UsageError(f"cannot parse range {text!r}")
    lo = int(m.group(1))
    return list(range(lo, int(m.group(2) or lo) + 1))


_SCAN_FIELDS = ["p", "t", "r", "q", "N", "n", "Delta", "u", "d", "s", "delta",
                "W_A", "W_B", "weights", "crosscheck"]


def cmd_scan(args, out: TextIO) -> int:
    primes = _int_range(args.p_range)
    if primes is not None:
        primes = [p for p in primes if is_prime(p)]
    budget = resolve_budget(args.budget)
    want_b = None if args.b in (None, "all") else set(_int_range(args.b) or [])
    writer = None
    mismatches = 0
    rows = 0
    try:
        for p, t, r, N in semiprimitive_instances(args.max_order, primes, _int_range(args.t_range),
                                                  _int_range(args.r_range), args.min_order):
            params = validate_params(build_field(default_spec(p, t, r)), N)
            if args.u_one and params.u != 1:
                continue
            if not args.u_one and params.u == 1 and not args.include_one_weight:
                continue
            sp = theory_params(params)
            w_a, w_b = hamming_weights(params, sp)
            bs = [b for b in range(1, params.max_b + 1) if want_b is None or b in want_b]
            weights = {b: bsymbol_weights(params, sp, b) for b in bs}
            cross = ""
            if args.crosscheck:
                if params.size > budget:
                    cross = "skipped"
                else:
                    ok = all(bsymbol_enumerator_closed(params, sp, b) == enumerator_brute(params, b)
                             for b in bs)
                    cross = "match" if ok else "mismatch"
                    mismatches += not ok
            row = {"p": p, "t": t, "r": r, "q": params.q, "N": N, "n": params.n,
                   "Delta": params.Delta, "u": params.u, "d": sp.d, "s": sp.s,
                   "delta": sp.delta, "W_A": w_a, "W_B": w_b,
                   "weights": {str(b): list(ws) for b, ws in weights.items()},
                   "crosscheck": cross}
            if args.format == "json":
                out.write(json.dumps(row) + "\n")
            elif args.format == "csv":
                if writer is None:
                    writer = csv.DictWriter(out, fieldnames=_SCAN_FIELDS)
                    writer.writeheader()
                flat = dict(row, W_B="" if w_b is None else w_b,
                            weights=";".join(f"{b}:" + "/".join(map(str, ws))
                                             for b, ws in weights.items()))
                writer.writerow(flat)
            else:
                ws = " ".join(f"b{b}={'/'.join(map(str, v))}" for b, v in weights.items())
                out.write(f"q={params.q} r={r} N={N} n={params.n} u={params.u} "
                          f"d={sp.d} s={sp.s} delta={sp.delta} W_A={w_a} W_B={w_b} {ws}"
                          f"{' ' + cross if cross else ''}\n")
            out.flush()
            rows += 1
            if args.limit and rows >= args.limit:
                break
    except KeyboardInterrupt:
        out.flush()
        return EXIT_BUDGET
    return EXIT_VERIFY_FAILED if mismatches else EXIT_OK


# --------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bsymbol", description=(
        "b-symbol weight enumerators of one-weight and semiprimitive two-weight "
        "irreducible cyclic codes"))
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check parameters and print n, Delta, u, d, s, delta")
    _add_code_args(v)
    _add_output_args(v)

    e = sub.add_parser("enumerate", help="weight enumerators from the closed form or brute force")
    _add_code_args(e)
    _add_output_args(e)
    e.add_argument("--mode", choices=("formula", "oracle"), default="formula")
    e.add_argument("-b", help="window size: 3, 1..3, 1,3 or all (default)")

    f = sub.add_parser("verify", help="check every closed form against brute force")
    _add_code_args(f)
    _add_output_args(f)
    f.add_argument("-b", help="window sizes (default: all)")
    f.add_argument("--inject-delta-flip", action="store_true",
                   help="negative control: feed the closed forms a wrong delta")
    f.add_argument("--no-lemmas", action="store_true", help="skip the lemma verifiers")
    f.add_argument("--timing", action="store_true", help="include elapsed time in the output")

    s = sub.add_parser("scan", help="catalog semiprimitive codes over a parameter range")
    _add_output_args(s)
    s.add_argument("--p-range", help="e.g. 2..5")
    s.add_argument("--t-range")
    s.add_argument("--r-range")
    s.add_argument("--max-order", type=int, default=4096, help="largest q^r (default 4096)")
    s.add_argument("--min-order", type=int, default=2)
    s.add_argument("-b", help="window sizes to tabulate (default: all valid)")
    s.add_argument("--u-one", action="store_true", help="only one-weight codes (u = 1)")
    s.add_argument("--include-one-weight", action="store_true",
                   help="also list one-weight codes alongside the u >= 2 ones")
    s.add_argument("--crosscheck", action="store_true", help="compare against brute force")
    s.add_argument("--limit", type=int, default=0, help="stop after this many rows")
    return ap


_COMMANDS = {"validate": cmd_validate, "enumerate": cmd_enumerate,
             "verify": cmd_verify, "scan": cmd_scan}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, BOutOfRangeError) as exc:
        print(f"bsymbol: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"bsymbol: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except BudgetExceededError as exc:
        print(f"bsymbol: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
