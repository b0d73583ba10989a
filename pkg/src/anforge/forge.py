"""End-to-end pipeline: shape, ell, window, witness primes, b-scan, certificates.

The reference polynomial is taken from the family itself, R = P_0 + c with
P_0 the b = 0 member at the chosen ell.  Since P_0' splits over Q, R' splits
modulo every prime that keeps the critical points apart, and the witness
primes only have to supply the factorization pattern of R.  The congruence
P_b = R mod p_k then reduces to b = c mod p_k.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .certificate import build_certificate, verify
from .congruence import EmptyProgram, Window, assemble_b_program
from .construct import (
    ConstructionError,
    Shape,
    build_shape,
    discriminant_factored,
    scaled_p0,
    u_modulus,
)
from .galois import (
    GaloisError,
    certify_sn,
    certify_unramified_an,
    family_witness_primes,
)
from .intpoly import sturm_count
from .numtheory import DEFAULT_RHO_BUDGET, InfeasibleConstraint, is_probable_prime, next_prime
from .sieve import scan
from .signature import SignatureError, root_profile, select_window

log = logging.getLogger(__name__)


class BudgetExhausted(RuntimeError):
    def __init__(self, stage: str, partial: Optional[list] = None):
        super().__init__(f"budget exhausted at stage {stage!r}")
        self.stage = stage
        self.partial = partial or []


@dataclass(frozen=True)
class Budgets:
    shapes: int = 200
    ell_steps: int = 12
    candidates: int = 400  # b values tried per (shape, ell)
    per_window: int = 4  # certificates taken from one (shape, ell)
    rho: int = DEFAULT_RHO_BUDGET
    witness_bound: int = 2000
    coeff_range: int = 3  # u/u_modulus and A_i/n! drawn from [-k, k]


def sample_shape(n: int, rng: random.Random, k: int = 3) -> Shape:
    um = u_modulus(n)
    fact = math.factorial(n)
    while True:
        u = um * rng.choice([m for m in range(-k, k + 1) if m])
        if math.gcd(u, n) != 1:
            continue
        A = rng.sample(range(-k, k + 1), n - 2)
        return build_shape(n, u, [fact * a for a in A])


def _ells(n: int, avoid: set[int], steps: int) -> Iterator[int]:
    ell = n
    for _ in range(steps):
        ell = next_prime(ell)
        while ell in avoid:
            ell = next_prime(ell)
        yield ell


def _check_args(n: int, r: int, avoid: Iterable[int], allow_small_n: bool) -> set[int]:
    if n < 3 or (n < 5 and not allow_small_n):
        raise ValueError(f"n = {n} needs n >= 5 (n >= 3 with allow_small_n)")
    if not 0 <= r <= n // 2:
        raise ValueError(f"r = {r} outside 0..{n // 2}")
    avoid = set(avoid)
    bad = [s for s in avoid if not is_probable_prime(s)]
    if bad:
        raise ValueError(f"avoid entries must be primes: {sorted(bad)}")
    return avoid


def certificates(
    n: int,
    r: int,
    avoid: Iterable[int] = (),
    seed: int = 0,
    budgets: Budgets = Budgets(),
    allow_small_n: bool = False,
) -> Iterator[dict]:
    """Yield verified certificates until the shape budget runs out."""
    avoid = _check_args(n, r, avoid, allow_small_n)
    rng = random.Random(seed)
    stage = "shape"
    for attempt in range(budgets.shapes):
        try:
            shape = sample_shape(n, rng, budgets.coeff_range)
        except ConstructionError:
            stage = "shape"
            continue
        for ell in _ells(n, avoid, budgets.ell_steps):
            try:
                window = select_window(root_profile(shape, ell), r, n)
            except SignatureError:
                stage = "signature"
                break  # the root profile does not depend on ell
            try:
                R, wp = family_witness_primes(
                    scaled_p0(shape, ell), _critical(shape, ell), {ell}, budgets.witness_bound
                )
            except GaloisError:
                stage = "witness"
                continue
            try:
                program = assemble_b_program(n, wp, shape, ell, window, avoid, budget=budgets.rho)
            except (EmptyProgram, InfeasibleConstraint):
                stage = "congruence"
                continue
            if window.width is not None and window.width < program.M:
                stage = "congruence"
                continue
            found, stats = scan(shape, ell, program, max_results=budgets.per_window, budget=budgets.rho,
                                max_candidates=budgets.candidates)
            log.info("shape %d (u=%d, A=%s) ell=%d: %s", attempt, shape.u, shape.A, ell, stats)
            if not found:
                stage = "scan"
            for inst, sf in found:
                sc = sturm_count(inst.Pb)
                if sc != n - 2 * r:
                    raise AssertionError(f"window gave {sc} real roots for b = {inst.b}")
                gc = certify_sn(inst.Pb, [(w.p, w.pattern) for w in wp])
                certify_unramified_an(inst, sf, gc, avoid)
                cert = build_certificate(
                    n=n, r=r, avoid=avoid, inst=inst, fd=discriminant_factored(inst), sf=sf,
                    gc=gc, R=R, wp=wp, sturm=sc, seed=seed,
                )
                verdict = verify(cert)
                if not verdict.accepted:
                    raise AssertionError(f"emitted certificate fails verification: {verdict.reasons}")
                yield cert
            break
    raise BudgetExhausted(stage)


def _critical(shape: Shape, ell: int) -> list[tuple[int, int]]:
    return [(shape.u * ell, shape.n)] + [(a * ell, 1) for a in shape.A]


def forge(
    n: int,
    r: int,
    count: int,
    avoid: Iterable[int] = (),
    seed: int = 0,
    budgets: Budgets = Budgets(),
    allow_small_n: bool = False,
) -> list[dict]:
    out: list[dict] = []
    gen = certificates(n, r, avoid, seed, budgets, allow_small_n)
    try:
        while len(out) < count:
            out.append(next(gen))
    except BudgetExhausted as exc:
        exc.partial = out
        raise
    finally:
        gen.close()
    return out


@dataclass
class FieldCount:
    n: int
    r: int
    bound: int
    deltas: list[int] = field(default_factory=list)
    collisions: int = 0
    examined: int = 0
    exhausted: bool = False

    @property
    def count(self) -> int:
        return len(self.deltas)


def count_fields(
    n: int,
    r: int,
    max_disc: int,
    budgets: Budgets = Budgets(),
    seed: int = 0,
    target: int = 10,
    max_certificates: Optional[int] = None,
    allow_small_n: bool = False,
    keep: Optional[list] = None,
) -> FieldCount:
    """Distinct squarefree discriminants with |disc| <= max_disc.

    Stops at `target` distinct values or after `max_certificates` certificates
    (default 5 * target); certificates are appended to `keep` if given.
    """
    limit = 5 * target if max_certificates is None else max_certificates
    fc = FieldCount(n, r, max_disc)
    seen: set[int] = set()
    gen = certificates(n, r, (), seed, budgets, allow_small_n)
    try:
        while fc.count < target and fc.examined < limit:
            cert = next(gen)
            fc.examined += 1
            d = int(cert["discriminant"]["value"])
            if abs(d) > max_disc:
                continue
            if d in seen:
                fc.collisions += 1
                continue
            seen.add(d)
            fc.deltas.append(d)
            if keep is not None:
                keep.append(cert)
    except BudgetExhausted:
        fc.exhausted = True
    finally:
        gen.close()
    return fc
