"""JSON certificates and a verifier that re-derives every claim from them.

The verifier only uses the polynomial and integer primitives; it rebuilds
P_b from (n, u, A, ell, b) by multiplying out the derivative, computes the
discriminant through a resultant, and never calls the construction code.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from .intpoly import (
    DegreeDropModP,
    IntPoly,
    NonIntegralAntiderivative,
    NotSeparableModP,
    NotSquarefree,
    antiderivative_from_zero,
    degree_multiset_mod_p,
    derivative,
    discriminant,
    eval_homogeneous,
    evaluate,
    reduce_mod,
    roots_mod_p,
    sturm_count,
)
from .numtheory import is_probable_prime, lcm_upto, primality_tag, primes_up_to

SCHEMA_KEY = "anforge_cert"
SCHEMA_VERSION = 1
ROLES = ("p1", "p2", "p3")


def _s(v: int) -> str:
    return str(int(v))


def _strs(vs) -> list[str]:
    return [_s(v) for v in vs]


def build_certificate(
    *,
    n: int,
    r: int,
    avoid,
    inst,
    fd,
    sf,
    gc,
    R: IntPoly,
    wp,
    sturm: int,
    seed: int,
) -> dict[str, Any]:
    shape = inst.shape
    delta = fd.value
    return {
        SCHEMA_KEY: SCHEMA_VERSION,
        "n": _s(n),
        "r": _s(r),
        "polynomial": _strs(inst.Pb.coeffs),
        "construction": {
            "ell": _s(inst.ell),
            "b": _s(inst.b),
            "u": _s(shape.u),
            "A": _strs(shape.A),
        },
        "discriminant": {
            "sign": _s(fd.sign),
            "factors": _strs(fd.factors),
            "value": _s(delta),
        },
        "squarefree": [[{"p": _s(p), "primality": tag} for p, tag in plist] for plist in sf.primes],
        "galois": {
            "witnesses": [{"p": _s(p), "cycle_type": _strs(ct)} for p, ct in gc.witnesses],
            "conclusion": "S_n",
        },
        "signature": {
            "sturm_count": _s(sturm),
            "real_embeddings": _s(sturm),
            "complex_pairs": _s((n - sturm) // 2),
        },
        "quadratic_field": {
            "delta_sign": _s(1 if delta > 0 else -1),
            "type": "real" if delta > 0 else "imaginary",
        },
        "avoid": [
            {"prime": _s(s), "disc_residue": _s(delta % s), "factor_residues": _strs(f % s for f in fd.factors)}
            for s in sorted(set(avoid))
        ],
        "reference": {
            "R": _strs(R.coeffs),
            "witness_primes": [
                {"role": role, "p": _s(w.p), "cycle_type": _strs(w.pattern), "roots": _strs(w.roots), "r0": _s(w.r0)}
                for role, w in zip(ROLES, wp)
            ],
        },
        "provenance": {"seed": _s(seed)},
    }


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2) + "\n"


@dataclass
class Verdict:
    accepted: bool
    reasons: list[str] = field(default_factory=list)


class _Reject(Exception):
    pass


def _int(v: Any) -> int:
    if not isinstance(v, str):
        raise _Reject(f"expected a decimal string, got {v!r}")
    try:
        return int(v, 10)
    except ValueError:
        raise _Reject(f"not a decimal integer: {v!r}") from None


def _ints(vs: Any) -> list[int]:
    if not isinstance(vs, list):
        raise _Reject(f"expected a list, got {type(vs).__name__}")
    return [_int(v) for v in vs]


def _sn_patterns(n: int) -> dict[str, tuple[int, ...]]:
    return {"p1": (n,), "p2": (2,) + (1,) * (n - 2), "p3": (n - 1, 1)}


def verify(cert: dict) -> Verdict:
    """Accept iff every recorded claim re-checks; reasons lists each failure."""
    reasons: list[str] = []
    try:
        if cert.get(SCHEMA_KEY) != SCHEMA_VERSION:
            return Verdict(False, [f"unsupported schema {cert.get(SCHEMA_KEY)!r}"])
        n, r = _int(cert["n"]), _int(cert["r"])
        if n < 3 or not 0 <= r <= n // 2:
            return Verdict(False, [f"bad degree/signature n={n}, r={r}"])
        Pb = IntPoly(tuple(_ints(cert["polynomial"])))
        if Pb.degree != n or Pb.lc != 1:
            return Verdict(False, ["polynomial is not monic of degree n"])
        con = cert["construction"]
        ell, b, u = _int(con["ell"]), _int(con["b"]), _int(con["u"])
        A = _ints(con["A"])
        disc = cert["discriminant"]
        sign, F, delta = _int(disc["sign"]), _ints(disc["factors"]), _int(disc["value"])
    except (KeyError, TypeError, _Reject) as exc:
        return Verdict(False, [f"malformed certificate: {exc}"])

    def check(name: str, fn: Callable[[], bool | str | None]) -> None:
        try:
            res = fn()
        except (KeyError, TypeError, ValueError, ArithmeticError, _Reject) as exc:
            reasons.append(f"{name}: {type(exc).__name__}: {exc}")
            return
        if res is False:
            reasons.append(name)
        elif isinstance(res, str):
            reasons.append(f"{name}: {res}")

    fact = math.factorial(n)

    def integrality() -> str | None:
        if len(A) != n - 2:
            return "wrong number of A values"
        if math.gcd(u, n) != 1:
            return "gcd(u, n) != 1"
        need = math.lcm(n - 1, *[p for p in primes_up_to(n - 1) if n % p])
        if u % need:
            return f"u not divisible by {need}"
        if any(a % fact for a in A):
            return "n! does not divide every A_i"
        if math.gcd(b, fact) != 1:
            return "b not coprime to n!"
        if ell <= n or not is_probable_prime(ell):
            return "ell is not a prime greater than n"
        return None

    def rebuild() -> str | None:
        Q = IntPoly((-u * ell, n))
        for a in A:
            Q = Q * IntPoly((-a * ell, 1))
        try:
            P = antiderivative_from_zero(Q) + IntPoly((b,))
        except NonIntegralAntiderivative as exc:
            return str(exc)
        return None if P == Pb else "P_b does not match (n, u, A, ell, b)"

    def factors() -> str | None:
        if len(F) != n - 1:
            return "wrong number of factors"
        # n^n * P_b(u*ell/n), homogenized
        expect = [eval_homogeneous(Pb, u * ell, n)] + [evaluate(Pb, a * ell) for a in A]
        if F != expect:
            return "factors are not the critical values of P_b"
        return None

    def disc_value() -> str | None:
        if sign != (-1 if (n * (n - 1) // 2) % 2 else 1):
            return "wrong sign convention"
        if sign * math.prod(F) != delta:
            return "sign * prod(factors) != value"
        if discriminant(Pb) != delta:
            return "value != disc(P_b) by resultant"
        return None

    def squarefree() -> str | None:
        sq = cert["squarefree"]
        if not isinstance(sq, list) or len(sq) != len(F):
            return "one prime list per factor required"
        seen: set[int] = set()
        for f, plist in zip(F, sq):
            ps = [_int(e["p"]) for e in plist]
            if ps != sorted(set(ps)):
                return "primes not strictly increasing"
            if math.prod(ps) != abs(f):
                return f"primes do not multiply to |{f}|"
            for e, p in zip(plist, ps):
                if not is_probable_prime(p):
                    return f"{p} is not prime"
                if e.get("primality") != primality_tag(p):
                    return f"primality tag of {p} is {e.get('primality')!r}"
            if seen & set(ps):
                return "factors share a prime"
            seen |= set(ps)
        return None

    def coprime_small() -> str | None:
        g = math.gcd(delta, lcm_upto(n))
        return None if g == 1 else f"gcd(disc, lcm(1..n)) = {g}"

    def signature() -> str | None:
        sig = cert["signature"]
        sc = sturm_count(Pb)
        if _int(sig["sturm_count"]) != sc or _int(sig["real_embeddings"]) != sc:
            return f"real root count is {sc}"
        if _int(sig["complex_pairs"]) != r or sc != n - 2 * r:
            return f"{sc} real roots do not give {r} complex pairs"
        return None

    def quadratic() -> str | None:
        q = cert["quadratic_field"]
        s = 1 if delta > 0 else -1
        if _int(q["delta_sign"]) != s or q["type"] != ("real" if s > 0 else "imaginary"):
            return "quadratic field type does not match the sign of disc"
        if s != (-1) ** r:
            return "sign of disc contradicts the signature"
        return None

    def avoid() -> str | None:
        primes = []
        for e in cert["avoid"]:
            s = _int(e["prime"])
            if not is_probable_prime(s):
                return f"avoid entry {s} is not prime"
            if _int(e["disc_residue"]) != delta % s or delta % s == 0:
                return f"disc residue mod {s} wrong or zero"
            if _ints(e["factor_residues"]) != [f % s for f in F]:
                return f"factor residues mod {s} wrong"
            primes.append(s)
        if primes != sorted(set(primes)):
            return "avoid primes not sorted and distinct"
        return None

    def galois() -> str | None:
        ref = cert["reference"]
        R = IntPoly(tuple(_ints(ref["R"])))
        if R.degree != n or R.lc != 1:
            return "R is not monic of degree n"
        Rp = derivative(R)
        wps = ref["witness_primes"]
        if [w["role"] for w in wps] != list(ROLES):
            return "witness roles must be p1, p2, p3"
        pats = _sn_patterns(n)
        ref_primes = []
        for w in wps:
            p = _int(w["p"])
            if p <= n or not is_probable_prime(p):
                return f"witness {p} is not a prime above n"
            ct = tuple(_ints(w["cycle_type"]))
            if ct != pats[w["role"]]:
                return f"{w['role']} must have cycle type {pats[w['role']]}"
            try:
                if degree_multiset_mod_p(R, p) != ct:
                    return f"R mod {p} does not have cycle type {ct}"
            except (NotSeparableModP, DegreeDropModP) as exc:
                return str(exc)
            roots = _ints(w["roots"])
            if sorted(roots) != roots_mod_p(Rp, p) or len(roots) != n - 1:
                return f"roots of R' mod {p} are not {roots}"
            crit = [u * ell * pow(n, -1, p) % p] + [a * ell % p for a in A]
            if roots != crit:
                return f"root assignment mod {p} does not match the critical points"
            if _int(w["r0"]) != R.coeffs[0] % p or b % p != R.coeffs[0] % p:
                return f"constant terms disagree mod {p}"
            if reduce_mod(Pb, p) != reduce_mod(R, p):
                return f"P_b and R differ mod {p}"
            ref_primes.append((p, ct))
        gw = cert["galois"]["witnesses"]
        claimed = [(_int(w["p"]), tuple(_ints(w["cycle_type"]))) for w in gw]
        if claimed != ref_primes:
            return "Galois witnesses differ from the reference witness primes"
        if cert["galois"].get("conclusion") != "S_n":
            return "unexpected conclusion"
        for p, ct in claimed:
            try:
                if degree_multiset_mod_p(Pb, p) != ct:
                    return f"P_b mod {p} does not have cycle type {ct}"
            except (NotSeparableModP, DegreeDropModP) as exc:
                return str(exc)
        have = {ct for _, ct in claimed}
        missing = [k for k, pat in pats.items() if pat not in have]
        if missing:
            return f"insufficient witnesses, missing {missing}"
        return None

    for name, fn in [
        ("integrality", integrality),
        ("reconstruction", rebuild),
        ("factors", factors),
        ("discriminant", disc_value),
        ("squarefree", squarefree),
        ("small-prime coprimality", coprime_small),
        ("signature", signature),
        ("quadratic field", quadratic),
        ("avoidance", avoid),
        ("galois", galois),
    ]:
        check(name, fn)
    try:
        _int(cert["provenance"]["seed"])
    except (KeyError, TypeError, _Reject) as exc:
        reasons.append(f"provenance: {exc}")
    return Verdict(not reasons, reasons)


__all__ = ["SCHEMA_KEY", "SCHEMA_VERSION", "Verdict", "build_certificate", "dumps", "verify", "NotSquarefree"]
