"""Residue constraints on (u, A, ell, b) and the admissible progression of b."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .construct import Shape, u_modulus
from .numtheory import InfeasibleConstraint, crt, factorize


class EmptyProgram(ValueError):
    pass


class AvoidEqualsEll(ValueError):
    pass


class FeasibilityViolation(ValueError):
    pass


@dataclass(frozen=True)
class ResidueConstraint:
    """One condition on a variable ('u', 'A_i', 'ell' or 'b').

    kind 'fixed' pins the variable to `residue`; kind 'forbidden' bans every
    residue in `forbidden`.  kind 'coprime' (b only) rejects b whenever the
    discriminant factor `factor_index` shares a divisor with `modulus`; it is
    used for composite numbers the factorizer could not split.
    """

    variable: str
    modulus: int
    kind: str
    residue: int = 0
    forbidden: frozenset[int] = frozenset()
    factor_index: int = 0

    def __post_init__(self) -> None:
        if self.kind == "fixed":
            object.__setattr__(self, "residue", self.residue % self.modulus)
        elif self.kind == "forbidden":
            fs = frozenset(r % self.modulus for r in self.forbidden)
            if len(fs) >= self.modulus:
                raise FeasibilityViolation(f"every residue mod {self.modulus} is forbidden")
            object.__setattr__(self, "forbidden", fs)


@dataclass(frozen=True)
class ShapeCongruences:
    constraints: tuple[ResidueConstraint, ...]
    u: int
    u_mod: int
    A: tuple[int, ...]
    A_mod: int


def _solve(constraints: list[ResidueConstraint]) -> tuple[int, int]:
    return crt([c.residue for c in constraints], [c.modulus for c in constraints])


def derive_shape_congruences(n: int, witnesses: Iterable, ell: int = 1) -> ShapeCongruences:
    """Congruences on u and A_2..A_{n-1} so that P_b' = R' modulo each witness prime.

    `witnesses` yields records with fields `p` and `roots` (ascending roots
    of R' mod p).  The critical points are u*ell/n and A_i*ell, so with
    ell = 1 mod p the conditions read u = n*rho_1 and A_i = rho_i.
    """
    fact = math.factorial(n)
    um = u_modulus(n)
    cons: list[ResidueConstraint] = [ResidueConstraint("u", um, "fixed", 0)]
    A_cons: list[list[ResidueConstraint]] = [[ResidueConstraint(f"A_{i}", fact, "fixed", 0)] for i in range(2, n)]
    for w in witnesses:
        p = w.p
        if p <= n:
            raise InfeasibleConstraint(f"witness prime {p} must exceed n = {n}")
        roots = tuple(w.roots)
        if len(roots) != n - 1:
            raise InfeasibleConstraint(f"R' has {len(roots)} roots mod {p}, need {n - 1}")
        inv = pow(ell, -1, p)
        cons.append(ResidueConstraint("u", p, "fixed", n * roots[0] * inv))
        for i in range(2, n):
            A_cons[i - 2].append(ResidueConstraint(f"A_{i}", p, "fixed", roots[i - 1] * inv))
    u, u_mod = _solve(cons)
    # u_mod is coprime to n, so some lift of u is a unit mod n
    for t in range(n):
        if math.gcd(u + t * u_mod, n) == 1:
            u += t * u_mod
            break
    else:
        raise InfeasibleConstraint("no lift of u is coprime to n")
    A, A_mod = [], fact
    for group in A_cons:
        a, A_mod = _solve(group)
        A.append(a if a else A_mod)
        cons.extend(group)
    return ShapeCongruences(tuple(cons), u if u else u_mod, u_mod, tuple(A), A_mod)


def _factor_roots(shape: Shape, ell: int, P: int) -> tuple[Optional[int], list[int]]:
    """Residues of b mod P killing F_1 (None if P | n) and F_2, F_3, ..."""
    n = shape.n
    ln = pow(ell, n, P)
    nn = pow(n, n, P)
    r1 = None if nn == 0 else (-shape.T1 * ln * pow(nn, -1, P)) % P
    return r1, [(-B * ln) % P for B in shape.B]


def pairwise_differences(shape: Shape) -> dict[tuple[int, int], int]:
    """D_ij for 1 <= i < j <= n-1, indexed from 1 like the factors."""
    n = shape.n
    nn = n**n
    out = {}
    for j, Bj in enumerate(shape.B, start=2):
        out[(1, j)] = shape.T1 - nn * Bj
    for (i, Bi), (j, Bj) in combinations(list(enumerate(shape.B, start=2)), 2):
        out[(i, j)] = Bi - Bj
    return out


def derive_pairwise_coprime_constraints(
    shape: Shape, ell: int, skip: Iterable[int] = (), budget: int = 400_000
) -> list[ResidueConstraint]:
    """Forbid b where a prime other than ell divides two discriminant factors.

    Primes up to n never divide a factor; primes in `skip` are handled by the
    fixed residue classes of b and are left alone as well.
    """
    n = shape.n
    skip = set(skip)
    forbidden: dict[int, set[int]] = {}
    coprime: list[ResidueConstraint] = []
    for (i, j), D in pairwise_differences(shape).items():
        if D == 0:
            raise FeasibilityViolation(f"factors F_{i} and F_{j} coincide")
        fac = factorize(D, budget)
        for P in fac.primes:
            if P <= n or P == ell or P in skip:
                continue
            r1, rest = _factor_roots(shape, ell, P)
            res = r1 if i == 1 else rest[i - 2]
            forbidden.setdefault(P, set()).add(res)
        if not fac.complete:
            coprime.append(ResidueConstraint("b", fac.cofactor, "coprime", factor_index=j))
    out = [ResidueConstraint("b", P, "forbidden", forbidden=frozenset(s)) for P, s in sorted(forbidden.items())]
    out.append(ResidueConstraint("b", ell, "forbidden", forbidden=frozenset({0})))
    return out + coprime


def derive_avoidance_constraints(
    shape: Shape, ell: Optional[int], avoid: Iterable[int], skip: Iterable[int] = ()
) -> list[ResidueConstraint]:
    """Forbid every b for which an avoid prime s > n divides the discriminant."""
    n = shape.n
    skip = set(skip)
    out = []
    for s in sorted(set(avoid)):
        if ell is not None and s == ell:
            raise AvoidEqualsEll(f"avoid prime {s} equals ell")
        if s <= n or s in skip:
            continue
        r1, rest = _factor_roots(shape, 1 if ell is None else ell, s)
        res = set(rest) | ({r1} if r1 is not None else set())
        out.append(ResidueConstraint("b", s, "forbidden", forbidden=frozenset(res)))
    return out


@dataclass(frozen=True)
class Window:
    """Closed integer interval; hi None means unbounded above."""

    lo: int
    hi: Optional[int]

    @property
    def width(self) -> Optional[int]:
        return None if self.hi is None else self.hi - self.lo + 1


@dataclass(frozen=True)
class BProgram:
    M: int
    r: int
    exclusions: tuple[ResidueConstraint, ...]
    window: Window
    shape: Optional[Shape] = None
    ell: Optional[int] = None
    fixed: tuple[ResidueConstraint, ...] = field(default=())

    def admissible(self, b: int) -> bool:
        if (b - self.r) % self.M:
            return False
        for ex in self.exclusions:
            if ex.kind == "forbidden":
                if b % ex.modulus in ex.forbidden:
                    return False
            elif ex.kind == "coprime":
                F = self._factor(ex.factor_index, b)
                if math.gcd(F, ex.modulus) != 1:
                    return False
        return True

    def _factor(self, index: int, b: int) -> int:
        s, L = self.shape, (1 if self.ell is None else self.ell)
        if index == 1:
            return s.T1 * L**s.n + s.n**s.n * b
        return s.B[index - 2] * L**s.n + b

    def first_at_or_after(self, lo: int) -> int:
        return lo + (self.r - lo) % self.M

    def __iter__(self) -> Iterator[int]:
        return self.iter_range(self.window.lo, self.window.hi)

    def iter_range(self, lo: int, hi: Optional[int]) -> Iterator[int]:
        b = self.first_at_or_after(lo)
        while hi is None or b <= hi:
            if self.admissible(b):
                yield b
            b += self.M

    def count(self) -> int:
        if self.window.hi is None:
            raise ValueError("unbounded window")
        return sum(1 for _ in self)


def assemble_b_program(
    n: int,
    witnesses: Optional[Iterable],
    shape: Optional[Shape],
    ell: Optional[int],
    window: Window,
    avoid: Iterable[int] = (),
    unit_class: int = 1,
    budget: int = 400_000,
) -> BProgram:
    """b = unit_class mod n!, b = R(0) mod each witness prime, plus exclusions.

    Raises EmptyProgram when a bounded window holds no admissible b.
    """
    fact = math.factorial(n)
    if math.gcd(unit_class, fact) != 1:
        raise InfeasibleConstraint(f"unit class {unit_class} is not coprime to {n}!")
    fixed = [ResidueConstraint("b", fact, "fixed", unit_class)]
    for w in witnesses or ():
        fixed.append(ResidueConstraint("b", w.p, "fixed", w.r0))
    r, M = crt([c.residue for c in fixed], [c.modulus for c in fixed])
    exclusions: list[ResidueConstraint] = []
    if shape is not None:
        skip = set(range(2, n + 1)) | {w.p for w in witnesses or ()}
        if ell is not None:
            exclusions += derive_pairwise_coprime_constraints(shape, ell, skip, budget)
        exclusions += derive_avoidance_constraints(shape, ell, avoid, skip)
    for ex in exclusions:
        if ex.kind == "forbidden" and math.gcd(ex.modulus, M) != 1:
            raise InfeasibleConstraint(f"exclusion modulus {ex.modulus} meets the fixed modulus {M}")
    prog = BProgram(M, r, tuple(exclusions), window, shape, ell, tuple(fixed))
    if window.hi is not None:
        if window.hi < window.lo:
            raise EmptyProgram("empty window")
        if next(prog.iter_range(window.lo, window.hi), None) is None:
            raise EmptyProgram(f"no admissible b in [{window.lo}, {window.hi}]")
    return prog
