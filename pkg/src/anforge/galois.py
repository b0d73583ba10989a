"""Reference polynomial, witness primes and S_n / A_n certification.

Frobenius at an unramified prime p has the cycle type of the factorization
of P mod p.  Witnesses for an n-cycle, an (n-1)-cycle and a transposition
force the full symmetric group: the n-cycle makes the group transitive, the
(n-1)-cycle fixing a point makes it doubly transitive hence primitive, and a
primitive group containing a transposition is S_n (Jordan).
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .construct import Instance, discriminant_factored
from .intpoly import (
    DegreeDropModP,
    IntPoly,
    NotSeparableModP,
    degree_multiset_mod_p,
    derivative,
    discriminant,
    evaluate,
    roots_mod_p,
)
from .numtheory import crt, primes_up_to

log = logging.getLogger(__name__)

SN_SEARCH_BOUND = 10**4
WITNESS_BOUND = 10**6


class GaloisError(ValueError):
    pass


class SearchExhausted(GaloisError):
    pass


class NotFoundWithinBound(GaloisError):
    def __init__(self, missing: list[str]):
        super().__init__(f"no prime found for pattern(s): {', '.join(missing)}")
        self.missing = missing


class InsufficientWitnesses(GaloisError):
    def __init__(self, missing: list[str]):
        super().__init__(f"missing witness pattern(s): {', '.join(missing)}")
        self.missing = missing


class BadWitness(GaloisError):
    def __init__(self, p: int, reason: str):
        super().__init__(f"witness prime {p}: {reason}")
        self.p = p


class AvoidanceViolated(GaloisError):
    def __init__(self, primes: list[int]):
        super().__init__(f"avoid primes dividing the discriminant: {primes}")
        self.primes = primes


class MismatchedComponents(GaloisError):
    pass


def sn_patterns(n: int) -> dict[str, tuple[int, ...]]:
    return {
        "n-cycle": (n,),
        "(n-1)-cycle": (n - 1, 1),
        "transposition": (2,) + (1,) * (n - 2),
    }


Witness = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class GaloisCertificate:
    poly: IntPoly
    witnesses: tuple[Witness, ...]
    conclusion: str = "S_n"


def certify_sn(P: IntPoly, witnesses: Iterable[Witness]) -> GaloisCertificate:
    n = P.degree
    checked = []
    for p, shape in witnesses:
        shape = tuple(sorted(shape, reverse=True))
        try:
            actual = degree_multiset_mod_p(P, p)
        except (NotSeparableModP, DegreeDropModP) as exc:
            raise BadWitness(p, str(exc)) from exc
        if actual != shape:
            raise BadWitness(p, f"claimed cycle type {shape}, actual {actual}")
        checked.append((p, shape))
    seen = {s for _, s in checked}
    missing = [name for name, pat in sn_patterns(n).items() if pat not in seen]
    if missing:
        raise InsufficientWitnesses(missing)
    return GaloisCertificate(P, tuple(checked))


def _sn_witnesses(P: IntPoly, bound: int) -> Optional[tuple[Witness, ...]]:
    patterns = {pat: name for name, pat in sn_patterns(P.degree).items()}
    found: dict[tuple[int, ...], int] = {}
    for p in primes_up_to(bound):
        try:
            shape = degree_multiset_mod_p(P, p)
        except (NotSeparableModP, DegreeDropModP):
            continue
        if shape in patterns and shape not in found:
            found[shape] = p
            if len(found) == len(patterns):
                return tuple(sorted((p, s) for s, p in found.items()))
    return None


@dataclass(frozen=True)
class ReferencePoly:
    R: IntPoly
    Rprime: IntPoly
    sn_witnesses: tuple[Witness, ...]


@dataclass(frozen=True)
class WitnessPrime:
    p: int
    pattern: tuple[int, ...]
    roots: tuple[int, ...]  # roots of R' mod p, ascending; index 1 gets roots[0]
    r0: int


@dataclass(frozen=True)
class WitnessPrimes:
    p1: WitnessPrime
    p2: WitnessPrime
    p3: WitnessPrime

    def __iter__(self):
        return iter((self.p1, self.p2, self.p3))

    @property
    def primes(self) -> tuple[int, int, int]:
        return (self.p1.p, self.p2.p, self.p3.p)

    @property
    def product(self) -> int:
        return self.p1.p * self.p2.p * self.p3.p


def classify_prime(R: IntPoly, p: int) -> Optional[WitnessPrime]:
    """The witness record for p when R' splits into n-1 distinct roots mod p."""
    n = R.degree
    if p <= n:
        return None
    Rp = derivative(R)
    roots = roots_mod_p(Rp, p)
    if len(roots) != n - 1:
        return None
    try:
        shape = degree_multiset_mod_p(R, p)
    except (NotSeparableModP, DegreeDropModP):
        return None
    return WitnessPrime(p, shape, tuple(roots), evaluate(R, 0) % p)


def find_witness_primes(ref: ReferencePoly | IntPoly, bound: int = WITNESS_BOUND) -> WitnessPrimes:
    """Smallest primes p <= bound for each of the three joint patterns."""
    R = ref.R if isinstance(ref, ReferencePoly) else ref
    pats = sn_patterns(R.degree)
    slots = [("p1", pats["n-cycle"]), ("p2", pats["transposition"]), ("p3", pats["(n-1)-cycle"])]
    found: dict[str, WitnessPrime] = {}
    for p in primes_up_to(bound):
        if len(found) == 3:
            break
        w = classify_prime(R, p)
        if w is None:
            continue
        # for n = 3 the transposition and (n-1)-cycle patterns coincide
        for name, pat in slots:
            if name not in found and w.pattern == pat:
                found[name] = w
                break
    if len(found) < 3:
        raise NotFoundWithinBound([k for k in ("p1", "p2", "p3") if k not in found])
    return WitnessPrimes(found["p1"], found["p2"], found["p3"])


def _sample_poly(n: int, rng: random.Random) -> IntPoly:
    c = n * n
    return IntPoly(tuple(rng.randint(-c, c) for _ in range(n)) + (1,))


def find_reference_poly(
    n: int,
    seed: int = 0,
    budget: int = 100_000,
    sn_bound: int = SN_SEARCH_BOUND,
    witness_bound: int = WITNESS_BOUND,
) -> tuple[ReferencePoly, WitnessPrimes]:
    """Seeded random search over monic R with coefficients in [-n^2, n^2].

    A draw is accepted once S_n witnesses turn up below `sn_bound` and the
    three joint witness primes below `witness_bound`.
    """
    if n < 3:
        raise GaloisError("n must be at least 3")
    rng = random.Random(seed)
    for attempt in range(budget):
        R = _sample_poly(n, rng)
        Rp = derivative(R)
        try:
            if discriminant(R) == 0:
                continue
            wp = find_witness_primes(R, witness_bound)
        except NotFoundWithinBound:
            continue
        sn = _sn_witnesses(R, sn_bound)
        if sn is None:
            continue
        log.info("reference polynomial %s after %d draws; witness primes %s", R, attempt + 1, wp.primes)
        return ReferencePoly(R, Rp, sn), wp
    raise SearchExhausted(f"no reference polynomial of degree {n} within {budget} draws")


@dataclass(frozen=True)
class UnramifiedAnCertificate:
    poly: IntPoly
    delta: int
    quadratic_field: str
    galois: GaloisCertificate
    avoid: tuple[int, ...]
    claims: tuple[str, ...] = field(default=())


def certify_unramified_an(inst: Instance, sf, gc: GaloisCertificate, avoid: Iterable[int] = ()) -> UnramifiedAnCertificate:
    """Combine a squarefree discriminant and an S_n certificate for the same P_b.

    With disc(P_b) squarefree, the polynomial discriminant equals the field
    discriminant of K = Q[x]/(P_b), so K(sqrt(disc))/Q(sqrt(disc)) is
    unramified at every finite place and the group over Q(sqrt(disc)) is A_n.
    """
    if gc.poly != inst.Pb:
        raise MismatchedComponents("Galois certificate is for a different polynomial")
    if tuple(sf.factors) != tuple(inst.F):
        raise MismatchedComponents("squarefree proof is for different factors")
    if not sf.is_proof():
        raise MismatchedComponents("squarefree component is not a proof")
    fd = discriminant_factored(inst)
    avoid = tuple(sorted(set(avoid)))
    bad = [s for s in avoid if fd.value % s == 0]
    if bad:
        raise AvoidanceViolated(bad)
    assert math.gcd(fd.value, math.prod(avoid)) == 1
    field_type = "real" if fd.value > 0 else "imaginary"
    n = inst.n
    claims = (
        f"P_b irreducible over Q (cycle type ({n},) witnessed)",
        "field discriminant of Q[x]/(P_b) equals the squarefree polynomial discriminant",
        f"Galois group over Q is S_{n}; over Q(sqrt({fd.value})) it is A_{n}",
        "compositum is unramified over the quadratic field at every finite place",
    )
    return UnramifiedAnCertificate(inst.Pb, fd.value, field_type, gc, avoid, claims)


def family_witness_primes(
    p0: IntPoly,
    critical: Iterable[tuple[int, int]],
    exclude: Iterable[int] = (),
    bound: int = 2000,
) -> tuple[IntPoly, WitnessPrimes]:
    """Witness primes for a reference polynomial R = p0 + c taken from the family.

    p0' = n * prod(x - a_i) splits over Q, so R' splits completely modulo
    every prime p > n at which the critical points `critical` (given as
    (numerator, denominator) pairs) stay distinct.  For such p each residue
    c mod p yields a factorization pattern of p0 + c; the smallest prime
    offering each of the three S_n patterns is taken (distinct primes),
    the constant term of R is the CRT of the chosen residues, and the root
    list of each witness follows the order of `critical`.
    """
    n = p0.degree
    critical = list(critical)
    exclude = set(exclude)
    pats = sn_patterns(n)
    slots = [("p1", pats["n-cycle"]), ("p2", pats["transposition"]), ("p3", pats["(n-1)-cycle"])]
    offers: dict[int, dict[tuple[int, ...], int]] = {}
    chosen: Optional[dict[str, int]] = None
    for p in primes_up_to(bound):
        if p <= n or p in exclude:
            continue
        pts = [num * pow(den, -1, p) % p for num, den in critical]
        if len(set(pts)) != len(pts):
            continue
        offer: dict[tuple[int, ...], int] = {}
        for c in range(p):
            try:
                shape = degree_multiset_mod_p(p0 + IntPoly((c,)), p)
            except (NotSeparableModP, DegreeDropModP):
                continue
            offer.setdefault(shape, c)
        offers[p] = offer
        chosen = _assign(slots, offers)
        if chosen is not None:
            break
    if chosen is None:
        raise NotFoundWithinBound([name for name, _ in slots])
    ps = [chosen[name] for name, _ in slots]
    cs = [offers[p][pat] for p, (_, pat) in zip(ps, slots)]
    c0, _ = crt(cs, ps)
    R = p0 + IntPoly((c0,))
    recs = {}
    for (name, pat), p in zip(slots, ps):
        pts = tuple(num * pow(den, -1, p) % p for num, den in critical)
        recs[name] = WitnessPrime(p, pat, pts, c0 % p)
    return R, WitnessPrimes(recs["p1"], recs["p2"], recs["p3"])


def _assign(slots, offers) -> Optional[dict[str, int]]:
    """Lexicographically smallest distinct primes (p1, p2, p3) covering the slots."""
    def rec(k: int, used: set[int]) -> Optional[list[int]]:
        if k == len(slots):
            return []
        for p in sorted(offers):
            if p not in used and slots[k][1] in offers[p]:
                rest = rec(k + 1, used | {p})
                if rest is not None:
                    return [p] + rest
        return None

    got = rec(0, set())
    return None if got is None else {name: p for (name, _), p in zip(slots, got)}
