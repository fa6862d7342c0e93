"""Command line front end.

Subcommands: count (closed-form counts), enumerate (stream Hermite forms as
JSON lines), poly (polynomial-in-the-prime answers), verify (diff formulas
against the brute-force oracle).  Structured output goes to stdout; timing and
warnings go to stderr so reports stay byte-stable across worker counts.

Exit codes: 0 success, 1 verification mismatch or internal inconsistency,
2 invalid input, 3 work would exceed the matrix budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time

from .arith import is_prime
from .census import (
    class_count,
    class_size,
    class_size_prime,
    cocyclic_count,
    cocyclic_count_upto,
    sublattice_count,
    sublattice_count_recursion,
    validate_chain,
)
from .enumeration import hnf_stream
from .forms import invariant_factors
from .oracle import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    VerifyReport,
    verify_index,
    verify_prime_powers,
    verify_suite,
)
from .polyalg import (
    class_size_poly,
    cocyclic_count_poly,
    leading_terms_check,
    poly_eval,
    poly_render,
    sublattice_count_poly,
)

SCHEMA_VERSION = "1"
CACHE_ENV = "SUBLATTICE_CACHE"


def _print_json(command: str, params: dict, payload) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "payload": payload,
    }
    print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def _print_csv(header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    sys.stdout.write(buf.getvalue())


def _emit_value(args, command: str, params: dict, value: int) -> int:
    if args.format == "plain":
        print(value)
    elif args.format == "csv":
        keys = sorted(params)
        _print_csv(keys + ["value"], [[params[k] for k in keys] + [str(value)]])
    else:
        _print_json(command, params, {"value": str(value)})
    return 0


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"{what} must be comma-separated integers, got {text!r}")


# ---------------------------------------------------------------- cache

def _cache_path(args) -> str | None:
    if getattr(args, "cache", None):
        return args.cache
    return os.environ.get(CACHE_ENV) or None


def _memo_key(exps: tuple[int, ...]) -> str:
    return f"{len(exps)}:{sum(exps)}:{','.join(map(str, exps))}"


def _load_memo(path: str | None) -> dict:
    """Read a coefficient cache, dropping it with a warning if anything is off.

    Keys look like "n:k:a1,...,aN" for a nondecreasing exponent tuple of length
    n summing to k; values are constant-first integer coefficient lists.
    """
    if not path or not os.path.exists(path):
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("cache root must be an object")
        memo = {}
        for key, val in raw.items():
            n_text, k_text, exps_text = key.split(":")
            exps = tuple(int(x) for x in exps_text.split(","))
            if int(n_text) != len(exps) or int(k_text) != sum(exps):
                raise ValueError(f"key {key!r} disagrees with its exponents")
            if any(a < 0 for a in exps) or list(exps) != sorted(exps):
                raise ValueError(f"bad exponent key {key!r}")
            if not isinstance(val, list) or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in val
            ):
                raise ValueError(f"bad coefficient list under {key!r}")
            if val and val[-1] == 0:
                raise ValueError(f"coefficient list under {key!r} has trailing zeros")
            memo[exps] = val
        return memo
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"warning: ignoring unusable cache {path}: {exc}", file=sys.stderr)
        return {}


def _save_memo(path: str | None, memo: dict) -> None:
    if not path:
        return
    payload = {_memo_key(k): v for k, v in sorted(memo.items())}
    target_dir = os.path.dirname(os.path.abspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=target_dir, suffix=".cache")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        print(f"warning: could not write cache {path}: {exc}", file=sys.stderr)


# ---------------------------------------------------------------- count

def _cmd_count_fn(args) -> int:
    if args.method == "recursion":
        value = sublattice_count_recursion(args.n, args.m)
    else:
        value = sublattice_count(args.n, args.m)
    params = {"n": args.n, "m": args.m, "method": args.method}
    return _emit_value(args, "count fn", params, value)


def _cmd_count_gn(args) -> int:
    value = class_count(args.n, args.m)
    return _emit_value(args, "count gn", {"n": args.n, "m": args.m}, value)


def _cmd_count_class(args) -> int:
    by_chain = args.divisors is not None
    by_partition = args.partition is not None or args.prime is not None or args.n is not None
    if by_chain == by_partition:
        raise ValueError("give either --divisors, or --n with --prime and --partition")
    path = _cache_path(args)
    memo = _load_memo(path)
    if by_chain:
        chain = validate_chain(_parse_int_list(args.divisors, "--divisors"))
        if path:
            # derive the count from cached polynomials so hits skip the recursion
            from .arith import factorize, ord_p

            value = 1
            for p, _ in factorize(chain[-1]):
                exps = tuple(int(ord_p(p, d)) for d in chain)
                value *= poly_eval(class_size_poly(exps, memo), p)
        else:
            value = class_size(chain)
        params = {"divisors": ",".join(map(str, chain))}
    else:
        if args.n is None or args.prime is None or args.partition is None:
            raise ValueError("the partition form needs --n, --prime, and --partition together")
        exps = _parse_int_list(args.partition, "--partition")
        if len(exps) != args.n:
            raise ValueError(f"--partition must have exactly n={args.n} parts, got {len(exps)}")
        if not is_prime(args.prime):
            raise ValueError(f"{args.prime} is not prime")
        if path:
            value = poly_eval(class_size_poly(exps, memo), args.prime)
        else:
            value = class_size_prime(exps, args.prime)
        params = {
            "n": args.n,
            "prime": args.prime,
            "partition": ",".join(map(str, exps)),
        }
    _save_memo(path, memo)
    return _emit_value(args, "count class", params, value)


def _cmd_count_cocyclic(args) -> int:
    value = cocyclic_count(args.n, args.m)
    return _emit_value(args, "count cocyclic", {"n": args.n, "m": args.m}, value)


def _cmd_count_cumulative(args) -> int:
    value = cocyclic_count_upto(args.n, args.max)
    return _emit_value(
        args, "count cocyclic-cumulative", {"n": args.n, "max": args.max}, value
    )


# ---------------------------------------------------------------- enumerate

def _cmd_enumerate(args) -> int:
    total = sublattice_count(args.n, args.m)
    effective = total if args.limit is None else min(total, args.limit)
    if effective > args.budget:
        raise BudgetExceededError(effective, args.budget, f"enumerate n={args.n} m={args.m}")
    emitted = 0
    for h in hnf_stream(args.n, args.m):
        if args.limit is not None and emitted >= args.limit:
            break
        line = {
            "schema_version": SCHEMA_VERSION,
            "kind": "hnf",
            "n": args.n,
            "m": args.m,
            "rows": [list(r) for r in h.rows],
        }
        if args.with_snf:
            line["snf"] = ",".join(map(str, invariant_factors(h.rows)))
        print(json.dumps(line, sort_keys=True, separators=(",", ":")))
        emitted += 1
    return 0


# ---------------------------------------------------------------- poly

def _emit_poly(args, command: str, params: dict, coeffs: list[int]) -> int:
    value = None
    if getattr(args, "eval", None) is not None:
        value = poly_eval(coeffs, args.eval)
        params = dict(params, eval=args.eval)
    if args.format == "plain":
        print(poly_render(coeffs))
        if value is not None:
            print(value)
    elif args.format == "csv":
        rows = [[i, str(c)] for i, c in enumerate(coeffs)]
        _print_csv(["degree", "coefficient"], rows)
        if value is not None:
            print(value)
    else:
        payload = {
            "coefficients": [str(c) for c in coeffs],
            "rendered": poly_render(coeffs),
        }
        if value is not None:
            payload["value"] = str(value)
        _print_json(command, params, payload)
    return 0


def _cmd_poly_class(args) -> int:
    exps = _parse_int_list(args.partition, "--partition")
    if len(exps) != args.n:
        raise ValueError(f"--partition must have exactly n={args.n} parts, got {len(exps)}")
    path = _cache_path(args)
    memo = _load_memo(path)
    coeffs = class_size_poly(exps, memo)
    _save_memo(path, memo)
    params = {"n": args.n, "partition": ",".join(map(str, exps))}
    return _emit_poly(args, "poly class", params, coeffs)


def _cmd_poly_fn(args) -> int:
    path = _cache_path(args)
    memo = _load_memo(path)
    coeffs = sublattice_count_poly(args.n, args.r, memo)
    _save_memo(path, memo)
    return _emit_poly(args, "poly fn", {"n": args.n, "r": args.r}, coeffs)


def _cmd_poly_cocyclic(args) -> int:
    coeffs = cocyclic_count_poly(args.n, args.r)
    return _emit_poly(args, "poly cocyclic", {"n": args.n, "r": args.r}, coeffs)


def _cmd_poly_leading(args) -> int:
    ok, report = leading_terms_check(args.n, args.r)
    payload = {
        "degree": report["degree"],
        "full_top": [str(c) for c in report["full_top"]],
        "cocyclic_top": [str(c) for c in report["cocyclic_top"]],
        "difference_degree": report["difference_degree"],
        "match": ok,
    }
    if args.format == "plain":
        state = "ok" if ok else "FAIL"
        print(
            f"{state} degree {report['degree']},"
            f" top coefficients {report['full_top']} vs {report['cocyclic_top']}"
        )
    elif args.format == "csv":
        _print_csv(
            ["n", "r", "degree", "difference_degree", "match"],
            [[args.n, args.r, report["degree"], report["difference_degree"], str(ok).lower()]],
        )
    else:
        _print_json("poly leading-check", {"n": args.n, "r": args.r}, payload)
    return 0 if ok else 1


# ---------------------------------------------------------------- verify

def _verify_plain(report: VerifyReport) -> str:
    lines = []
    for section in report.sections:
        lines.append(f"{'ok  ' if section.ok else 'FAIL'} {section.scope}")
    lines.append("all sections match" if report.all_match else "MISMATCH found")
    return "\n".join(lines)


def _verify_csv(report: VerifyReport) -> tuple[list[str], list[list[str]]]:
    rows = []
    for section in report.sections:
        for r in section.rows:
            rows.append(
                [
                    section.scope,
                    "class",
                    ",".join(map(str, r.key)),
                    f"formula={r.formula} oracle={r.oracle}",
                    str(r.match).lower(),
                ]
            )
        for c in section.checks:
            rows.append([section.scope, "check", c.name, c.detail, str(c.ok).lower()])
    return ["section", "kind", "name", "detail", "ok"], rows


def _cmd_verify(args) -> int:
    if args.mode == "suite":
        if args.n is not None or args.m is not None or args.prime is not None:
            raise ValueError("'verify suite' takes no scope flags")
        command, params = "verify suite", {}
        report = verify_suite(jobs=args.jobs, budget=args.budget)
    elif args.n is not None and args.m is not None and args.prime is None:
        command, params = "verify index", {"n": args.n, "m": args.m}
        t0 = time.perf_counter()
        section = verify_index(args.n, args.m, jobs=args.jobs, budget=args.budget)
        report = VerifyReport(
            f"n={args.n} m={args.m}", [section], elapsed=time.perf_counter() - t0
        )
    elif args.n is not None and args.prime is not None and args.max_r is not None:
        if args.m is not None:
            raise ValueError("give either --m or --prime/--max-r, not both")
        command = "verify prime-powers"
        params = {"n": args.n, "prime": args.prime, "max_r": args.max_r}
        t0 = time.perf_counter()
        sections = verify_prime_powers(
            args.n, args.prime, args.max_r, jobs=args.jobs, budget=args.budget
        )
        report = VerifyReport(
            f"n={args.n} p={args.prime} r=1..{args.max_r}",
            sections,
            elapsed=time.perf_counter() - t0,
        )
    else:
        raise ValueError("verify needs 'suite', or --n with --m, or --n with --prime and --max-r")
    print(f"elapsed {report.elapsed:.2f}s", file=sys.stderr)
    if args.format == "plain":
        print(_verify_plain(report))
    elif args.format == "csv":
        header, rows = _verify_csv(report)
        _print_csv(header, rows)
    else:
        _print_json(command, params, report.to_payload())
    return 0 if report.all_match else 1


# ---------------------------------------------------------------- parser

def _add_format(parser) -> None:
    parser.add_argument(
        "--format",
        choices=("json", "plain", "csv"),
        default="json",
        help="output format (default json)",
    )


def _add_cache(parser) -> None:
    parser.add_argument(
        "--cache",
        default=None,
        help=f"JSON coefficient cache file (default from ${CACHE_ENV})",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublattices",
        description="Count, enumerate, and classify finite-index sublattices of Z^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="closed-form counts")
    csub = count.add_subparsers(dest="what", required=True)

    p = csub.add_parser("fn", help="number of sublattices of index m in Z^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=("closed", "recursion"), default="closed")
    _add_format(p)
    p.set_defaults(func=_cmd_count_fn)

    p = csub.add_parser("gn", help="number of equivalence classes at index m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_count_gn)

    p = csub.add_parser("class", help="size of one equivalence class")
    p.add_argument("--divisors", default=None, help="invariant factor chain d1,...,dn")
    p.add_argument("--n", type=int, default=None, help="dimension, for the partition form")
    p.add_argument("--prime", type=int, default=None)
    p.add_argument(
        "--partition", default=None, help="nondecreasing exponents a1,...,aN of the prime"
    )
    _add_cache(p)
    _add_format(p)
    p.set_defaults(func=_cmd_count_class)

    p = csub.add_parser("cocyclic", help="sublattices with cyclic quotient at index m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_count_cocyclic)

    p = csub.add_parser(
        "cocyclic-cumulative", help="cyclic-quotient sublattices over all indices up to a bound"
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_count_cumulative)

    p = sub.add_parser("enumerate", help="stream Hermite forms as JSON lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--with-snf", action="store_true", help="attach the invariant factor chain")
    p.add_argument("--limit", type=int, default=None, help="stop after this many matrices")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_enumerate)

    poly = sub.add_parser("poly", help="answers as polynomials in the prime")
    psub = poly.add_subparsers(dest="what", required=True)

    p = psub.add_parser("class", help="class size for a partition of prime exponents")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--partition", required=True, help="nondecreasing exponents a1,...,aN")
    p.add_argument("--eval", type=int, default=None, help="also evaluate at this integer")
    _add_cache(p)
    _add_format(p)
    p.set_defaults(func=_cmd_poly_class)

    p = psub.add_parser("fn", help="sublattice count of index p^r as a polynomial in p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eval", type=int, default=None)
    _add_cache(p)
    _add_format(p)
    p.set_defaults(func=_cmd_poly_fn)

    p = psub.add_parser("cocyclic", help="cyclic-quotient count of index p^r as a polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eval", type=int, default=None)
    _add_format(p)
    p.set_defaults(func=_cmd_poly_cocyclic)

    p = psub.add_parser("leading-check", help="compare top coefficients of the two polynomials")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_poly_leading)

    p = sub.add_parser("verify", help="diff formulas against the brute-force oracle")
    p.add_argument("mode", nargs="?", choices=("suite",), help="run the fixed suite")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--max-r", type=int, default=None, dest="max_r")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the oracle")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_format(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        try:
            sys.stdout.close()
        except OSError:
            pass
        return 0
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AssertionError, ArithmeticError) as exc:
        print(f"error: internal inconsistency: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
