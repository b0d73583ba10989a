"""Integer primitives: prime sieving, Miller-Rabin, factorization, CRT."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

TRIAL_BOUND = 10**5
DEFAULT_RHO_BUDGET = 400_000
DEFAULT_MR_ROUNDS = 40

# Bases 2..41 give a correct answer for every m below this bound.
DETERMINISTIC_MR_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


@lru_cache(maxsize=None)
def _trial_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(TRIAL_BOUND))


@lru_cache(maxsize=None)
def _trial_chunks() -> tuple[tuple[int, tuple[int, ...]], ...]:
    ps = _trial_primes()
    out = []
    for i in range(0, len(ps), 256):
        chunk = ps[i : i + 256]
        out.append((math.prod(chunk), chunk))
    return tuple(out)


def next_prime(m: int) -> int:
    """Smallest prime strictly greater than m."""
    c = max(m + 1, 2)
    while not is_probable_prime(c):
        c += 1
    return c


def lcm_upto(n: int) -> int:
    return math.lcm(*range(1, n + 1))


def _mr_round(m: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, m)
    if x == 1 or x == m - 1:
        return True
    for _ in range(s - 1):
        x = x * x % m
        if x == m - 1:
            return True
    return False


def is_probable_prime(m: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Miller-Rabin; exact below DETERMINISTIC_MR_BOUND, `rounds` random bases above.

    Random bases are drawn from a generator seeded with m, so the answer is
    reproducible.
    """
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if m < DETERMINISTIC_MR_BOUND:
        return all(_mr_round(m, d, s, a) for a in _MR_BASES)
    rng = random.Random(m)
    return all(_mr_round(m, d, s, rng.randrange(2, m - 1)) for _ in range(rounds))


def primality_tag(p: int, rounds: int = DEFAULT_MR_ROUNDS) -> str:
    return "deterministic" if p < DETERMINISTIC_MR_BOUND else f"probabilistic({rounds})"


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in primes_up_to(n.bit_length()):
        r = iroot(n, k)
        if r**k == n:
            return r, k
    return None


def pollard_brent(n: int, budget: int, seed: int = 1) -> int | None:
    """A nontrivial factor of composite odd n, or None when the budget runs out."""
    rng = random.Random(seed ^ n)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(x - ys, n)
        if 1 < g < n:
            return g
    return None


@dataclass
class Factorization:
    """m = unit * cofactor * prod(p**e); cofactor == 1 means complete."""

    unit: int
    primes: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def value(self) -> int:
        v = self.unit * self.cofactor
        for p, e in self.primes.items():
            v *= p**e
        return v


def factorize(m: int, budget: int = DEFAULT_RHO_BUDGET) -> Factorization:
    """Trial division to TRIAL_BOUND, then Brent's rho per composite part.

    Parts that resist rho within `budget` iterations are multiplied into
    `cofactor`.
    """
    if m == 0:
        raise ValueError("cannot factor 0")
    out = Factorization(unit=-1 if m < 0 else 1)
    n = abs(m)
    for prod, chunk in _trial_chunks():
        if n == 1:
            break
        if chunk[0] ** 2 > n:
            break
        if math.gcd(n, prod) == 1:
            continue
        for p in chunk:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.primes[p] = e
    if n > 1:
        stack = [(n, 1)]
        while stack:
            c, mult = stack.pop()
            if c < TRIAL_BOUND**2 or is_probable_prime(c):
                # anything below TRIAL_BOUND**2 that survived trial division is prime
                out.primes[c] = out.primes.get(c, 0) + mult
                continue
            pp = _perfect_power(c)
            if pp:
                stack.append((pp[0], mult * pp[1]))
                continue
            d = pollard_brent(c, budget)
            if d is None:
                out.cofactor *= c**mult
                continue
            g = math.gcd(d, c // d)
            if g > 1:
                stack.append((g, mult))
                rest = c // g
                stack.append((rest, mult))
            else:
                stack.extend(((d, mult), (c // d, mult)))
    out.primes = dict(sorted(out.primes.items()))
    return out


class InfeasibleConstraint(ValueError):
    pass


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Combine x = r_i mod m_i into x = r mod M; moduli need not be coprime.

    Raises InfeasibleConstraint on inconsistent congruences.
    """
    r, M = 0, 1
    for ri, mi in zip(residues, moduli):
        if mi <= 0:
            raise ValueError("moduli must be positive")
        g = math.gcd(M, mi)
        if (ri - r) % g:
            raise InfeasibleConstraint(f"x = {r} mod {M} contradicts x = {ri} mod {mi}")
        lcm = M // g * mi
        t = ((ri - r) // g) * pow(M // g, -1, mi // g) % (mi // g) if mi // g > 1 else 0
        r = (r + M * t) % lcm
        M = lcm
    return r, M
