"""The parametrized polynomial family and its factored discriminant.

A shape fixes the degree n, the integer u and the integers A_2..A_{n-1}.
At a prime ell the critical points of P_b are u*ell/n and A_i*ell, and

    P_b(x) = b + integral_0^x (n*t - u*ell) * prod_i (t - A_i*ell) dt.

Its discriminant splits into the critical values F_1 = T1*ell^n + n^n*b and
F_i = B_i*ell^n + b, up to the sign (-1)^(n(n-1)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .intpoly import (
    IntPoly,
    NonIntegralAntiderivative,
    antiderivative_from_zero,
    evaluate,
)
from .numtheory import is_probable_prime, lcm_upto, primes_up_to


class ConstructionError(ValueError):
    pass


class IntegralityViolation(ConstructionError):
    pass


class DegenerateShape(ConstructionError):
    pass


class ZeroFactor(ConstructionError):
    def __init__(self, index: int):
        super().__init__(f"discriminant factor F_{index} vanishes")
        self.index = index


class BNotCoprime(ConstructionError):
    pass


class InvalidEll(ConstructionError):
    pass


def u_modulus(n: int) -> int:
    """lcm of n-1 and the primes below n that do not divide n."""
    return math.lcm(n - 1, *[p for p in primes_up_to(n - 1) if n % p])


def disc_sign(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass(frozen=True)
class Shape:
    n: int
    u: int
    A: tuple[int, ...]
    q_shape: IntPoly
    p0_shape: IntPoly
    B: tuple[int, ...]
    T1: int

    def breakpoints_scaled(self, ell: int = 1) -> tuple[int, tuple[int, ...], int]:
        """(numerator of F_1's root, roots of F_2.., denominator n^n) at this ell."""
        ln = ell**self.n
        return -self.T1 * ln, tuple(-b * ln for b in self.B), self.n**self.n


def build_shape(n: int, u: int, A: Sequence[int]) -> Shape:
    if n < 3:
        raise ConstructionError("degree must be at least 3")
    A = tuple(int(a) for a in A)
    if len(A) != n - 2:
        raise ConstructionError(f"expected {n - 2} values A_2..A_{n - 1}, got {len(A)}")
    fact = math.factorial(n)
    if math.gcd(u, n) != 1:
        raise IntegralityViolation(f"gcd(u, n) = {math.gcd(u, n)} != 1")
    um = u_modulus(n)
    if u % um:
        raise IntegralityViolation(f"u = {u} is not divisible by {um}")
    for i, a in enumerate(A, start=2):
        if a % fact:
            raise IntegralityViolation(f"{n}! does not divide A_{i} = {a}")
    if len(set(A)) != len(A) or any(n * a == u for a in A):
        raise DegenerateShape("critical points u/n, A_2, ... are not distinct")

    q_shape = IntPoly((-u, n))
    for a in A:
        q_shape = q_shape * IntPoly((-a, 1))
    expected = [0] * (n - 2) + [-u, n]
    if any((c - e) % fact for c, e in zip(q_shape.coeffs, expected)):
        raise IntegralityViolation("Q is not congruent to (n x - u) x^(n-2) mod n!")
    try:
        p0 = antiderivative_from_zero(q_shape)
    except NonIntegralAntiderivative as exc:
        raise IntegralityViolation(str(exc)) from exc
    B = tuple(evaluate(p0, a) for a in A)
    T1 = sum(c * u**j * n ** (n - j) for j, c in enumerate(p0.coeffs))
    return Shape(n=n, u=u, A=A, q_shape=q_shape, p0_shape=p0, B=B, T1=T1)


@dataclass(frozen=True)
class Instance:
    shape: Shape
    ell: Optional[int]
    b: int
    Pb: IntPoly
    F: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def scale(self) -> int:
        return 1 if self.ell is None else self.ell

    def critical_points(self) -> tuple[tuple[int, int], ...]:
        """Critical points as (numerator, denominator) pairs."""
        L = self.scale
        return ((self.shape.u * L, self.n),) + tuple((a * L, 1) for a in self.shape.A)


def scaled_p0(shape: Shape, L: int) -> IntPoly:
    """P_0 for critical points scaled by L: coefficient k picks up L^(n-k)."""
    n = shape.n
    return IntPoly(tuple(c * L ** (n - k) for k, c in enumerate(shape.p0_shape.coeffs)))


def factors_at(shape: Shape, L: int, b: int) -> tuple[int, ...]:
    ln = L**shape.n
    return (shape.T1 * ln + shape.n**shape.n * b,) + tuple(B * ln + b for B in shape.B)


def instantiate(shape: Shape, ell: Optional[int], b: int) -> Instance:
    n = shape.n
    if ell is not None:
        if ell <= n or not is_probable_prime(ell):
            raise InvalidEll(f"ell = {ell} must be a prime greater than {n}")
    L = 1 if ell is None else ell
    F = factors_at(shape, L, b)
    for i, f in enumerate(F, start=1):
        if f == 0:
            raise ZeroFactor(i)
    if math.gcd(b, math.factorial(n)) != 1:
        raise BNotCoprime(f"gcd(b, {n}!) = {math.gcd(b, math.factorial(n))}")
    Pb = scaled_p0(shape, L) + IntPoly((b,))
    return Instance(shape=shape, ell=ell, b=b, Pb=Pb, F=F)


@dataclass(frozen=True)
class FactoredDiscriminant:
    sign: int
    factors: tuple[int, ...]
    value: int


def discriminant_factored(inst: Instance) -> FactoredDiscriminant:
    s = disc_sign(inst.n)
    return FactoredDiscriminant(sign=s, factors=inst.F, value=s * math.prod(inst.F))


@dataclass(frozen=True)
class CoprimalityReport:
    passed: bool
    prime: Optional[int] = None


def small_prime_coprimality_check(inst: Instance) -> CoprimalityReport:
    """Checks gcd(disc, lcm(1..n)) = 1 and names the smallest offending prime."""
    delta = discriminant_factored(inst).value
    for p in primes_up_to(inst.n):
        if delta % p == 0:
            return CoprimalityReport(False, p)
    assert math.gcd(delta, lcm_upto(inst.n)) == 1
    return CoprimalityReport(True)
