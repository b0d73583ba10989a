"""Real-root counts of P_b as b varies, and the b-window for a target signature.

The number of real roots of P_b only changes when b crosses a value making
some critical value vanish, so the breakpoints -B_i*ell^n and
-T1*ell^n/n^n cut the b-line into intervals of constant root count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .congruence import Window
from .construct import Shape, scaled_p0
from .intpoly import IntPoly, sturm_count


class SignatureError(ValueError):
    pass


class RepeatedCriticalValue(SignatureError):
    pass


class SignatureUnachievable(SignatureError):
    def __init__(self, r: int):
        super().__init__(f"no b-interval gives {r} complex pair(s)")
        self.r = r


@dataclass(frozen=True)
class RootProfile:
    n: int
    breakpoints: tuple[Fraction, ...]
    factor_index: tuple[int, ...]  # which F_i vanishes at each breakpoint
    counts: tuple[int, ...]  # len(breakpoints) + 1 entries, left to right


def _count_at(p0: IntPoly, b: Fraction) -> int:
    # den * P_b has the same roots and integer coefficients
    cleared = p0 * b.denominator + IntPoly((b.numerator,))
    return sturm_count(cleared)


def _sample_points(bps: list[Fraction]) -> list[Fraction]:
    pts = [Fraction(math.floor(bps[0]) - 1)]
    for lo, hi in zip(bps, bps[1:]):
        mid = (lo + hi) / 2
        k = Fraction(math.floor(mid))
        pts.append(k if lo < k < hi else mid)
    pts.append(Fraction(math.ceil(bps[-1]) + 1))
    return pts


def root_profile(shape: Shape, ell: Optional[int] = None) -> RootProfile:
    L = 1 if ell is None else ell
    n = shape.n
    ln = L**n
    pts = [(Fraction(-shape.T1 * ln, n**n), 1)] + [(Fraction(-B * ln), i) for i, B in enumerate(shape.B, start=2)]
    if len({v for v, _ in pts}) != len(pts):
        raise RepeatedCriticalValue("two critical values coincide")
    pts.sort()
    bps = [v for v, _ in pts]
    p0 = scaled_p0(shape, L)
    counts = tuple(_count_at(p0, x) for x in _sample_points(bps))
    return RootProfile(n, tuple(bps), tuple(i for _, i in pts), counts)


def select_window(profile: RootProfile, r: int, n: int, span: Optional[int] = None) -> Window:
    """Widest interval with n - 2r real roots, shrunk to integers strictly inside.

    Unbounded intervals count as widest, the upper one first.  The upper one
    is returned open-ended; the lower one is cut to `span` integers (default:
    the widest finite gap, at least 10**6).
    """
    if not 0 <= r <= n // 2:
        raise ValueError(f"r = {r} outside 0..{n // 2}")
    target = n - 2 * r
    bps = profile.breakpoints
    gaps = [hi - lo for lo, hi in zip(bps, bps[1:])]
    if span is None:
        span = max([math.floor(g) for g in gaps] + [10**6])
    k = len(bps)
    candidates = []
    for j, c in enumerate(profile.counts):
        if c != target:
            continue
        if j == k:
            candidates.append((2, 0, j))
        elif j == 0:
            candidates.append((1, 0, j))
        else:
            lo, hi = math.floor(bps[j - 1]) + 1, math.ceil(bps[j]) - 1
            if hi >= lo:
                candidates.append((0, hi - lo, j))
    if not candidates:
        raise SignatureUnachievable(r)
    _, _, j = max(candidates)
    if j == k:
        return Window(math.floor(bps[-1]) + 1, None)
    if j == 0:
        hi = math.ceil(bps[0]) - 1
        return Window(hi - span + 1, hi)
    return Window(math.floor(bps[j - 1]) + 1, math.ceil(bps[j]) - 1)


def verify_signature(Pb: IntPoly, r: int, n: int) -> bool:
    return sturm_count(Pb) == n - 2 * r
