"""Exact integer polynomials and their reductions modulo primes.

Coefficient sequences are stored low degree first, so ``coeffs[k]`` is the
coefficient of ``x**k``.  Nothing in here touches floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Endpoint = Union[int, Fraction, float]


class PolyError(ArithmeticError):
    pass


class ZeroPolynomial(PolyError):
    pass


class DegreeTooSmall(PolyError):
    pass


class NotSquarefree(PolyError):
    pass


class NonIntegralAntiderivative(PolyError):
    def __init__(self, m: int):
        super().__init__(f"{m} does not divide the coefficient of x^{m - 1}")
        self.m = m


class NotSeparableModP(PolyError):
    def __init__(self, p: int):
        super().__init__(f"polynomial is not separable modulo {p}")
        self.p = p


class DegreeDropModP(PolyError):
    def __init__(self, p: int):
        super().__init__(f"leading coefficient vanishes modulo {p}")
        self.p = p


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(_trim([int(c) for c in self.coeffs])))

    @classmethod
    def x(cls) -> IntPoly:
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[int], lead: int = 1) -> IntPoly:
        p = cls((lead,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def __add__(self, other: IntPoly) -> IntPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: Union[IntPoly, int]) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k) else str(mag)
            if k:
                body += "x" if k == 1 else f"x^{k}"
            terms.append(("-" if c < 0 else "+") + body)
        s = " ".join(terms)
        return s[1:] if s.startswith("+") else s


def evaluate(P: IntPoly, x: int) -> int:
    """Horner evaluation at an integer (or any ring element supporting * and +)."""
    acc = 0
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def eval_homogeneous(P: IntPoly, num: int, den: int) -> int:
    """``den**deg(P) * P(num/den)`` as an exact integer."""
    d = P.degree
    acc = 0
    for k, c in enumerate(P.coeffs):
        acc += c * num**k * den ** (d - k)
    return acc


def derivative(P: IntPoly) -> IntPoly:
    return IntPoly(tuple(k * c for k, c in enumerate(P.coeffs))[1:])


def antiderivative_from_zero(Q: IntPoly) -> IntPoly:
    """The integer polynomial P with P(0) = 0 and P' = Q.

    Raises NonIntegralAntiderivative(m) when m does not divide the
    coefficient of x^(m-1).
    """
    out = [0]
    for k, c in enumerate(Q.coeffs):
        m = k + 1
        if c % m:
            raise NonIntegralAntiderivative(m)
        out.append(c // m)
    return IntPoly(tuple(out))


def _prem(A: list[int], B: list[int]) -> list[int]:
    """Pseudo-remainder of lc(B)**(deg A - deg B + 1) * A by B."""
    r = list(A)
    db = len(B) - 1
    lb = B[-1]
    e = len(A) - len(B) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, bc in enumerate(B):
            r[shift + j] -= lr * bc
        r.pop()
        _trim(r)
        e -= 1
    if e > 0:
        f = lb**e
        r = [c * f for c in r]
    return r


def prem(A: IntPoly, B: IntPoly) -> IntPoly:
    if B.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    if A.degree < B.degree:
        return A
    return IntPoly(tuple(_prem(list(A.coeffs), list(B.coeffs))))


def resultant(A: IntPoly, B: IntPoly) -> int:
    """Resultant by the subresultant pseudo-remainder sequence."""
    if A.is_zero() or B.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    a_c, b_c = list(A.coeffs), list(B.coeffs)
    da, db = len(a_c) - 1, len(b_c) - 1
    s = 1
    if da < db:
        a_c, b_c, da, db = b_c, a_c, db, da
        if da % 2 and db % 2:
            s = -1
    if db == 0:
        return s * b_c[0] ** da
    ca = reduce(math.gcd, a_c)
    cb = reduce(math.gcd, b_c)
    a_c = [c // ca for c in a_c]
    b_c = [c // cb for c in b_c]
    t = ca**db * cb**da
    g = h = 1
    while True:
        da, db = len(a_c) - 1, len(b_c) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a_c, b_c)
        if not r:
            return 0
        a_c = b_c
        div = g * h**delta
        b_c = [c // div for c in r]
        g = a_c[-1]
        if delta:
            # h <- h^(1 - delta) * g^delta, exact
            h = g**delta // h ** (delta - 1)
        if len(b_c) == 1:
            dA = len(a_c) - 1
            lb = b_c[0]
            if dA == 0:
                return s * t * h
            h = lb**dA // h ** (dA - 1)
            return s * t * h


def discriminant(P: IntPoly) -> int:
    n = P.degree
    if n < 2:
        raise DegreeTooSmall(f"discriminant needs degree >= 2, got {n}")
    res = resultant(P, derivative(P))
    q, rem = divmod(res, P.lc)
    assert rem == 0
    return -q if (n * (n - 1) // 2) % 2 else q


# -- Sturm sequences ---------------------------------------------------------


def _primitive(c: list[int]) -> list[int]:
    g = reduce(math.gcd, c, 0)
    return [x // g for x in c] if g > 1 else c


def sturm_chain(P: IntPoly) -> list[IntPoly]:
    """Sturm chain via sign-corrected primitive pseudo-remainders."""
    if P.is_zero():
        raise ZeroPolynomial("Sturm chain of zero polynomial")
    chain = [list(P.coeffs), list(derivative(P).coeffs)]
    if not chain[1]:
        return [P]
    while len(chain[-1]) > 1:
        A, B = chain[-2], chain[-1]
        r = _prem(A, B)
        if not r:
            break
        e = len(A) - len(B) + 1
        # prem multiplies by lc(B)^e; flip back when that factor is negative
        if B[-1] < 0 and e % 2:
            r = [-c for c in r]
        chain.append(_primitive([-c for c in r]))
    return [IntPoly(tuple(c)) for c in chain]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _sign_at(S: IntPoly, x: Endpoint) -> int:
    if isinstance(x, float):
        if math.isinf(x):
            s = _sign(S.lc)
            return s if (x > 0 or S.degree % 2 == 0) else -s
        x = Fraction(x)
    if isinstance(x, Fraction):
        return _sign(eval_homogeneous(S, x.numerator, x.denominator))
    return _sign(evaluate(S, x))


def _variations(chain: list[IntPoly], x: Endpoint) -> int:
    signs = [s for s in (_sign_at(S, x) for S in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(P: IntPoly, lo: Endpoint = -math.inf, hi: Endpoint = math.inf) -> int:
    """Number of distinct real roots of a squarefree P in the open interval (lo, hi).

    Infinite endpoints are given as ``-math.inf`` / ``math.inf``.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    chain = sturm_chain(P)
    if chain[-1].degree > 0:
        raise NotSquarefree(f"gcd(P, P') has degree {chain[-1].degree}")
    for x in (lo, hi):
        if not (isinstance(x, float) and math.isinf(x)) and _sign_at(P, x) == 0:
            raise ValueError(f"endpoint {x} is a root")
    return _variations(chain, lo) - _variations(chain, hi)


# -- polynomials over F_p ----------------------------------------------------


@dataclass(frozen=True)
class ModPoly:
    coeffs: tuple[int, ...]
    p: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def reduce_mod(P: IntPoly, p: int) -> ModPoly:
    return ModPoly(tuple(_trim([c % p for c in P.coeffs])), p)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        c = r[-1] * inv % p
        shift = len(r) - 1 - db
        q[shift] = c
        for j, bc in enumerate(b):
            r[shift + j] = (r[shift + j] - c * bc) % p
        _trim(r)
    return _trim(q), r


def _pmonic(a: list[int], p: int) -> list[int]:
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p) if a else a


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = _pdivmod(_pmul(base, base, p), mod, p)[1]
    return result


def _pderiv(a: list[int], p: int) -> list[int]:
    return _trim([k * c % p for k, c in enumerate(a)][1:])


def _separable_reduction(P: IntPoly, p: int) -> list[int]:
    f = list(reduce_mod(P, p).coeffs)
    if len(f) - 1 < P.degree:
        raise DegreeDropModP(p)
    if len(_pgcd(f, _pderiv(f, p), p)) > 1:
        raise NotSeparableModP(p)
    return f


def degree_multiset_mod_p(P: IntPoly, p: int) -> tuple[int, ...]:
    """Degrees of the irreducible factors of P mod p, largest first.

    Uses distinct-degree factorization only; a degree-d*k block counts as
    k factors of degree d.
    """
    f = _pmonic(_separable_reduction(P, p), p)
    degrees: list[int] = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowmod(h, p, f, p)
        g = _pgcd(f, _psub(h, [0, 1], p), p)
        if len(g) > 1:
            degrees += [d] * ((len(g) - 1) // d)
            f = _pdivmod(f, g, p)[0]
            h = _pdivmod(h, f, p)[1]
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return tuple(sorted(degrees, reverse=True))


def _split_linear(g: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of a monic product of distinct linear factors over F_p (p odd)."""
    if len(g) == 1:
        return []
    if len(g) == 2:
        return [(-g[0]) % p]
    while True:
        a = rng.randrange(p)
        w = _psub(_ppowmod([a, 1], (p - 1) // 2, g, p), [1], p)
        h = _pgcd(g, w, p) if w else []
        if h and 1 < len(h) < len(g):
            return _split_linear(h, p, rng) + _split_linear(_pdivmod(g, h, p)[0], p, rng)


def roots_mod_p(P: IntPoly, p: int) -> list[int]:
    """All residues x in [0, p) with P(x) = 0 mod p, ascending."""
    f = list(reduce_mod(P, p).coeffs)
    if not f:
        return list(range(p))
    if len(f) == 1:
        return []
    if p == 2:
        return [x for x in (0, 1) if evaluate(IntPoly(tuple(f)), x) % 2 == 0]
    f = _pmonic(f, p)
    xp = _ppowmod([0, 1], p, f, p)
    g = _pgcd(f, _psub(xp, [0, 1], p), p)
    return sorted(_split_linear(g, p, random.Random(p)))


def splits_completely_mod_p(P: IntPoly, p: int) -> bool:
    """True iff P mod p keeps its degree and has deg(P) distinct roots."""
    f = reduce_mod(P, p)
    return f.degree == P.degree and len(roots_mod_p(P, p)) == P.degree
