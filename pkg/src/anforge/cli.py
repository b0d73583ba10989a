"""Command line: forge, verify, stats, count-fields.

Exit codes: 0 success, 2 budget exhausted, 3 verification reject,
4 invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import certificate
from .congruence import EmptyProgram, Window, assemble_b_program
from .construct import ConstructionError, build_shape
from .forge import BudgetExhausted, Budgets, count_fields, forge, sample_shape
from .numtheory import InfeasibleConstraint
from .sieve import BudgetExceeded, local_density, sieve_stats

log = logging.getLogger("anforge")

EXIT_OK, EXIT_BUDGET, EXIT_REJECT, EXIT_ARGS = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _primes_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


def _big_int(text: str) -> int:
    """Exact integer from 123, 10^80, 10**80 or 1e80."""
    t = text.strip().replace("**", "^")
    try:
        if "^" in t:
            base, exp = t.split("^")
            return int(base) ** int(exp)
        if "e" in t.lower():
            mant, exp = t.lower().split("e")
            return int(mant) * 10 ** int(exp)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer such as 10^12 or 1e12, got {text!r}") from None


def _budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shapes", type=int, default=Budgets.shapes, help="shape draws before giving up")
    p.add_argument("--candidates", type=int, default=Budgets.candidates, help="b values tried per shape")
    p.add_argument("--rho-budget", type=int, default=Budgets.rho, help="Pollard rho iterations per factor")


def _budgets(args) -> Budgets:
    return Budgets(shapes=args.shapes, candidates=args.candidates, rho=args.rho_budget)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="anforge", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    f = sub.add_parser("forge", help="construct and certify polynomials")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--r", type=int, required=True, help="number of complex-conjugate pairs")
    f.add_argument("--count", type=int, required=True)
    f.add_argument("--avoid", type=_primes_list, default=[])
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--allow-small-n", action="store_true")
    f.add_argument("--out", type=Path, required=True)
    _budget_args(f)

    v = sub.add_parser("verify", help="re-check certificate files")
    v.add_argument("files", nargs="+", type=Path)

    s = sub.add_parser("stats", help="sieve statistics on a window of b")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--shape-seed", type=int, default=0)
    s.add_argument("--u", type=int, default=None, help="explicit shape instead of a seeded draw")
    s.add_argument("--A", type=_primes_list, default=None, help="A_2,...,A_{n-1} for --u")
    s.add_argument("--window", type=_window, required=True)
    s.add_argument("--ell", type=int, default=None)
    s.add_argument("--xi", type=float, default=None)
    s.add_argument("--local-primes", type=int, default=100, help="P for the truncated density product")

    c = sub.add_parser("count-fields", help="count distinct squarefree discriminants")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--max-disc", type=_big_int, required=True, help="bound on |disc|, e.g. 10^80")
    c.add_argument("--target", type=int, default=10)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--allow-small-n", action="store_true")
    c.add_argument("--out", type=Path, default=None, help="also write the certificates here")
    _budget_args(c)
    return ap


def _write(out: Path, certs: list[dict], prefix: str) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, cert in enumerate(certs):
        path = out / f"{prefix}_{i:03d}.json"
        path.write_text(certificate.dumps(cert), encoding="utf-8")
        paths.append(path)
    return paths


def cmd_forge(args) -> int:
    prefix = f"cert_n{args.n}_r{args.r}_s{args.seed}"
    try:
        certs = forge(args.n, args.r, args.count, args.avoid, args.seed, _budgets(args), args.allow_small_n)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_ARGS
    except BudgetExhausted as exc:
        log.error("%s after %d certificate(s)", exc, len(exc.partial))
        for path in _write(args.out, exc.partial, prefix):
            print(path)
        return EXIT_BUDGET
    for path in _write(args.out, certs, prefix):
        print(path)
    return EXIT_OK


def cmd_verify(args) -> int:
    status = EXIT_OK
    for path in args.files:
        try:
            cert = json.loads(path.read_text(encoding="utf-8"))
            verdict = certificate.verify(cert) if isinstance(cert, dict) else certificate.Verdict(False, ["not a JSON object"])
        except (OSError, ValueError) as exc:
            verdict = certificate.Verdict(False, [f"unreadable: {exc}"])
        if verdict.accepted:
            print(f"ACCEPT {path}")
        else:
            status = EXIT_REJECT
            print(f"REJECT {path}")
            for reason in verdict.reasons:
                print(f"  {reason}")
    return status


def _fraction(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator), "approx": float(x)}


def cmd_stats(args) -> int:
    n, (lo, hi) = args.n, args.window
    try:
        if args.u is not None:
            shape = build_shape(n, args.u, args.A or [])
        else:
            shape = sample_shape(n, random.Random(args.shape_seed))
    except (ConstructionError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ARGS
    report: dict = {"n": n, "u": str(shape.u), "A": [str(a) for a in shape.A], "ell": args.ell, "window": [lo, hi]}
    if hi < lo:
        report.update(n0=0, n1=0, n2=0, n3=0, xi=None, empirical_density=None, local_density=None, inequality=True)
        print(json.dumps(report, indent=2))
        return EXIT_OK
    try:
        program = assemble_b_program(n, None, shape, args.ell, Window(lo, hi), ())
        st = sieve_stats(shape, args.ell, program, (lo, hi), args.xi)
    except EmptyProgram:
        report.update(n0=0, n1=0, n2=0, n3=0, xi=None, empirical_density=None, local_density=None, inequality=True)
        print(json.dumps(report, indent=2))
        return EXIT_OK
    except (InfeasibleConstraint, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ARGS
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    ld = local_density(shape, args.ell, args.local_primes, program)
    report.update(
        n0=st.n0,
        n1=st.n1,
        n2=st.n2,
        n3=st.n3,
        xi=st.xi,
        modulus=str(st.modulus),
        empirical_density=_fraction(Fraction(st.n1, st.n0)) if st.n0 else None,
        local_density=_fraction(ld),
        inequality=st.inequality_holds(),
    )
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_count_fields(args) -> int:
    keep: list[dict] = []
    try:
        fc = count_fields(args.n, args.r, args.max_disc, _budgets(args), args.seed, args.target,
                          allow_small_n=args.allow_small_n, keep=keep)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_ARGS
    if args.out is not None:
        _write(args.out, keep, f"field_n{args.n}_r{args.r}_s{args.seed}")
    print(json.dumps({
        "n": fc.n,
        "r": fc.r,
        "bound": str(fc.bound),
        "count": fc.count,
        "deltas": [str(d) for d in fc.deltas],
        "collisions": fc.collisions,
        "certificates_examined": fc.examined,
        "budget_exhausted": fc.exhausted,
    }, indent=2))
    return EXIT_BUDGET if fc.exhausted else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"forge": cmd_forge, "verify": cmd_verify, "stats": cmd_stats, "count-fields": cmd_count_fields}
    return handler[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
