import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from anforge.construct import (
    BNotCoprime,
    DegenerateShape,
    IntegralityViolation,
    InvalidEll,
    Instance,
    ZeroFactor,
    build_shape,
    discriminant_factored,
    instantiate,
    small_prime_coprimality_check,
    u_modulus,
)
from anforge.forge import sample_shape
from anforge.intpoly import IntPoly, derivative, discriminant, sturm_count

from oracles import lcm_1_to

DEMO = build_shape(3, 2, [6])


def test_demo_shape():
    assert DEMO.q_shape == IntPoly((12, -20, 3))
    assert DEMO.p0_shape == IntPoly((0, 12, -10, 1))
    assert DEMO.B == (-72,)
    assert DEMO.T1 == 104


def test_shape_errors():
    with pytest.raises(IntegralityViolation):
        build_shape(3, 3, [6])
    with pytest.raises(IntegralityViolation):
        build_shape(3, 2, [5])
    with pytest.raises(IntegralityViolation):
        build_shape(5, 6, [120, 240, 360])  # 4 does not divide 6
    with pytest.raises(DegenerateShape):
        build_shape(5, 24, [120, 120, 240])


def test_u_modulus():
    # lcm(n-1, primes below n not dividing n)
    assert u_modulus(3) == 2
    assert u_modulus(5) == 12
    assert u_modulus(6) == 5
    assert u_modulus(7) == 30
    assert build_shape(5, 24, [120, 240, -360]).u == 24


def test_instantiate_demo():
    inst = instantiate(DEMO, None, 1)
    assert inst.Pb == IntPoly((1, 12, -10, 1))
    assert inst.F == (131, -71)
    with pytest.raises(ZeroFactor) as exc:
        instantiate(DEMO, None, 72)
    assert exc.value.index == 2
    with pytest.raises(BNotCoprime):
        instantiate(DEMO, None, 2)
    with pytest.raises(InvalidEll):
        instantiate(DEMO, 3, 1)
    with pytest.raises(InvalidEll):
        instantiate(DEMO, 9, 1)


def test_discriminant_factored_demo():
    fd = discriminant_factored(instantiate(DEMO, None, 1))
    assert (fd.sign, fd.factors, fd.value) == (-1, (131, -71), 9301)


def test_coprimality_reports():
    assert small_prime_coprimality_check(instantiate(DEMO, None, 1)).passed
    inst5 = instantiate(DEMO, None, 5)
    assert discriminant_factored(inst5).value == 16013
    assert small_prime_coprimality_check(inst5).passed
    bad = Instance(DEMO, None, 1, IntPoly((1, 12, -10, 1)), (2, 1))
    rep = small_prime_coprimality_check(bad)
    assert not rep.passed and rep.prime == 2


def test_scaled_instance_derivative():
    shape = build_shape(5, 24, [120, 240, -360])
    inst = instantiate(shape, 7, 1)
    Q = IntPoly((-24 * 7, 5))
    for a in shape.A:
        Q = Q * IntPoly((-a * 7, 1))
    assert derivative(inst.Pb) == Q
    assert inst.Pb.coeffs[0] == 1


def _random_instance(rng: random.Random):
    n = rng.randint(3, 7)
    shape = sample_shape(n, rng, 3)
    ell = rng.choice([None, 7, 11, 13]) if n < 7 else rng.choice([None, 11, 13])
    fact = math.factorial(n)
    while True:
        b = rng.randint(-10**6, 10**6)
        if math.gcd(b, fact) == 1:
            try:
                return instantiate(shape, ell, b)
            except ZeroFactor:
                continue


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_factored_discriminant_equals_resultant(seed):
    inst = _random_instance(random.Random(seed))
    fd = discriminant_factored(inst)
    assert fd.value == discriminant(inst.Pb)
    assert math.gcd(fd.value, lcm_1_to(inst.n)) == 1
    assert small_prime_coprimality_check(inst).passed


def test_demo_sturm():
    assert sturm_count(instantiate(DEMO, None, 1).Pb) == 3
