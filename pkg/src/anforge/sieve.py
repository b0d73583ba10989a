"""Squarefree certification of the discriminant factors, the b-scan, and
empirical sieve statistics (N0..N3) over a window of b."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .congruence import BProgram, EmptyProgram
from .construct import ConstructionError, Instance, Shape, factors_at, instantiate
from .numtheory import (
    DEFAULT_RHO_BUDGET,
    factorize,
    is_probable_prime,
    primality_tag,
    primes_up_to,
)

log = logging.getLogger(__name__)

__all__ = [
    "BudgetExceeded",
    "ScanStats",
    "SieveStats",
    "SquarefreeProof",
    "factorize",
    "is_probable_prime",
    "local_density",
    "global_xi",
    "scan",
    "sieve_stats",
    "squarefree_proof",
]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SquarefreeProof:
    """Verdict on whether prod(factors) is squarefree.

    status is 'proof', 'no' or 'unknown'.  For a proof, primes[i] lists
    (prime, primality tag) for factor i, strictly increasing, each to the
    first power.  For 'no', witness is (i, p) with p^2 | F_i, or (i, j, p)
    with p dividing two different factors.
    """

    status: str
    factors: tuple[int, ...]
    primes: tuple[tuple[tuple[int, str], ...], ...] = ()
    witness: tuple[int, ...] = ()

    def is_proof(self) -> bool:
        return self.status == "proof"

    def check(self) -> bool:
        """Re-multiply, re-test primality and disjointness from scratch."""
        if not self.is_proof() or len(self.primes) != len(self.factors):
            return False
        seen: set[int] = set()
        for F, plist in zip(self.factors, self.primes):
            ps = [p for p, _ in plist]
            if ps != sorted(set(ps)) or math.prod(ps) != abs(F):
                return False
            if any(not is_probable_prime(p) or tag != primality_tag(p) for p, tag in plist):
                return False
            if seen & set(ps):
                return False
            seen |= set(ps)
        return True


def squarefree_proof(F: Sequence[int], budget: int = DEFAULT_RHO_BUDGET) -> SquarefreeProof:
    F = tuple(F)
    if any(f == 0 for f in F):
        raise ValueError("zero factor")
    owner: dict[int, int] = {}
    primes = []
    # smallest factors first: cheap rejections before expensive factorizations
    order = sorted(range(len(F)), key=lambda i: abs(F[i]))
    by_index: dict[int, tuple[tuple[int, str], ...]] = {}
    unknown = False
    for i in order:
        fac = factorize(F[i], budget)
        for p, e in fac.primes.items():
            if e > 1:
                return SquarefreeProof("no", F, witness=(i + 1, p))
            if p in owner:
                j = owner[p]
                return SquarefreeProof("no", F, witness=(min(i, j) + 1, max(i, j) + 1, p))
            owner[p] = i
        if not fac.complete:
            unknown = True
            continue
        by_index[i] = tuple((p, primality_tag(p)) for p in fac.primes)
    if unknown:
        return SquarefreeProof("unknown", F)
    primes = tuple(by_index[i] for i in range(len(F)))
    return SquarefreeProof("proof", F, primes)


@dataclass
class ScanStats:
    examined: int = 0
    accepted: int = 0
    zero_factor: int = 0
    square_found: int = 0
    unknown: int = 0


def scan(
    shape: Shape,
    ell: Optional[int],
    program: BProgram,
    max_results: int,
    budget: int = DEFAULT_RHO_BUDGET,
    max_candidates: Optional[int] = None,
) -> tuple[list[tuple[Instance, SquarefreeProof]], ScanStats]:
    """Walk admissible b upward through the window and certify squarefree ones."""
    stats = ScanStats()
    out: list[tuple[Instance, SquarefreeProof]] = []
    if program.window.hi is not None and next(iter(program), None) is None:
        raise EmptyProgram("no admissible b in window")
    if max_results <= 0:
        return out, stats
    for b in program:
        if max_candidates is not None and stats.examined >= max_candidates:
            break
        stats.examined += 1
        try:
            inst = instantiate(shape, ell, b)
        except ConstructionError:
            stats.zero_factor += 1
            continue
        sf = squarefree_proof(inst.F, budget)
        if sf.status == "no":
            stats.square_found += 1
        elif sf.status == "unknown":
            stats.unknown += 1
        else:
            stats.accepted += 1
            out.append((inst, sf))
            if len(out) >= max_results:
                break
    log.debug("scan: %s", stats)
    return out, stats


def global_xi(N: float, n: int) -> float:
    """Cutoff (1/4) * log N^(1/(n-1))."""
    return 0.25 * math.log(N) / (n - 1)


@dataclass
class SieveStats:
    n0: int
    n1: int
    n2: int
    n3: int
    xi: float
    window: tuple[int, int]
    modulus: int
    sieve_limit: int = 0
    extra: dict = field(default_factory=dict)

    def inequality_holds(self) -> bool:
        return self.n2 >= self.n1 >= self.n2 - self.n3 and self.n0 >= self.n1


def _linear_forms(shape: Shape, ell: Optional[int]) -> list[tuple[int, int]]:
    """F_i(b) = alpha_i * b + beta_i."""
    L = 1 if ell is None else ell
    ln = L**shape.n
    return [(shape.n**shape.n, shape.T1 * ln)] + [(1, B * ln) for B in shape.B]


def sieve_stats(
    shape: Shape,
    ell: Optional[int],
    program: BProgram,
    window: Optional[tuple[int, int]] = None,
    xi: Optional[float] = None,
    sieve_limit: int = 10**7,
) -> SieveStats:
    """Exact N0..N3 over the admissible b of a bounded window.

    Squares are located by sieving: for every prime p <= sqrt(max |F_i|) the
    b with p^2 | F_i form one residue class mod p^2 per factor, which is an
    exact substitute for factoring every F_i.
    """
    lo, hi = window if window is not None else (program.window.lo, program.window.hi)
    if hi is None:
        raise ValueError("sieve_stats needs a bounded window")
    bs = list(program.iter_range(lo, hi)) if hi >= lo else []
    width = max(hi - lo + 1, 0)
    if xi is None:
        xi = 0.25 * math.log(width) if width > 1 else 0.0
    forms = _linear_forms(shape, ell)
    if not bs:
        return SieveStats(0, 0, 0, 0, xi, (lo, hi), program.M)
    biggest = max(abs(a * b + c) for a, c in forms for b in (bs[0], bs[-1]))
    limit = math.isqrt(biggest)
    if limit > sieve_limit:
        raise BudgetExceeded(f"need primes up to {limit}, limit is {sieve_limit}")
    index = {b: k for k, b in enumerate(bs)}
    bad_small = bytearray(len(bs))
    bad_any = bytearray(len(bs))
    incidences = 0
    M, r0 = program.M, bs[0]
    for p in primes_up_to(limit):
        p2 = p * p
        hit: set[int] = set()
        for a, c in forms:
            if a % p == 0:
                hit.update(k for k, b in enumerate(bs) if (a * b + c) % p2 == 0)
                continue
            rb = (-c * pow(a, -1, p2)) % p2
            # walk the progression b = r0 + t*M restricted to b = rb mod p^2
            g = math.gcd(M, p2)
            if (rb - r0) % g:
                continue
            m2 = p2 // g
            t0 = ((rb - r0) // g) * pow(M // g, -1, m2) % m2 if m2 > 1 else 0
            b = r0 + t0 * M
            step = M * m2
            while b <= bs[-1]:
                k = index.get(b)
                if k is not None:
                    hit.add(k)
                b += step
        for k in hit:
            bad_any[k] = 1
            if p < xi:
                bad_small[k] = 1
            else:
                incidences += 1
    n0 = len(bs)
    n1 = n0 - sum(bad_any)
    n2 = n0 - sum(bad_small)
    st = SieveStats(n0, n1, n2, incidences, xi, (lo, hi), M, limit)
    assert st.inequality_holds(), st
    return st


def local_density(
    shape: Shape,
    ell: Optional[int],
    P: int,
    program: Optional[BProgram] = None,
    skip: Iterable[int] = (),
    brute: bool = False,
) -> Fraction:
    """Truncated product over primes p <= P of the fraction of b mod p^2 with no
    factor divisible by p^2.

    Primes dividing the program's fixed modulus, and those in `skip`, are left
    out.  For a prime carrying an exclusion the fraction is taken among the
    admissible residues only.  Each factor with a unit slope mod p vanishes
    mod p^2 on exactly one class, so counting those classes is exact; a
    factor whose slope p divides is handled by running over all p^2 residues,
    as is every prime when `brute` is set.
    """
    if P > 10**3:
        raise ValueError("local_density is meant for P <= 1000")
    forms = _linear_forms(shape, ell)
    skip = set(skip)
    M = 1 if program is None else program.M
    excl = {}
    if program is not None:
        for ex in program.exclusions:
            if ex.kind == "forbidden":
                excl[ex.modulus] = ex.forbidden
    prod = Fraction(1)
    for p in primes_up_to(P):
        if M % p == 0 or p in skip:
            continue
        p2 = p * p
        banned = excl.get(p, frozenset())
        total = p2 - p * len(banned)
        bad: set[int] = set()
        for a, c in forms:
            if a % p and not brute:
                rb = (-c * pow(a, -1, p2)) % p2
                if rb % p not in banned:
                    bad.add(rb)
            else:
                bad.update(b for b in range(p2) if b % p not in banned and (a * b + c) % p2 == 0)
        prod *= Fraction(total - len(bad), total)
    return prod


def empirical_density(shape: Shape, ell: Optional[int], program: BProgram, window: tuple[int, int], **kw) -> Fraction:
    st = sieve_stats(shape, ell, program, window, **kw)
    return Fraction(st.n1, st.n0) if st.n0 else Fraction(0)


def factor_values(shape: Shape, ell: Optional[int], b: int) -> tuple[int, ...]:
    return factors_at(shape, 1 if ell is None else ell, b)
