import pytest

from anforge.construct import build_shape, instantiate, scaled_p0
from anforge.galois import (
    AvoidanceViolated,
    BadWitness,
    InsufficientWitnesses,
    MismatchedComponents,
    NotFoundWithinBound,
    SearchExhausted,
    certify_sn,
    certify_unramified_an,
    classify_prime,
    family_witness_primes,
    find_reference_poly,
    find_witness_primes,
)
from anforge.intpoly import IntPoly, derivative, discriminant, degree_multiset_mod_p, reduce_mod
from anforge.numtheory import crt, factorize, primes_up_to
from anforge.sieve import squarefree_proof

from oracles import brute_roots, sympy_pattern

X5 = IntPoly((-1, -1, 0, 0, 0, 1))


def test_x5_is_acceptable_reference():
    assert discriminant(X5) == 2869
    assert factorize(2869).primes == {19: 1, 151: 1}


def test_x5_witness_primes_regression():
    # frozen from an exhaustive sympy scan of primes 7..10^6 (tests/oracles.py)
    wp = find_witness_primes(X5, 10**6)
    assert wp.primes == (109, 761, 101)
    assert wp.p1.roots == (35, 44, 65, 74) and wp.p1.r0 == 108
    assert wp.p2.roots == (65, 252, 509, 696) and wp.p2.r0 == 760
    assert wp.p3.roots == (3, 30, 71, 98) and wp.p3.r0 == 100
    for w in wp:
        assert sympy_pattern(list(X5.coeffs), w.p) == w.pattern
        assert brute_roots(list(derivative(X5).coeffs), w.p) == list(w.roots)


def test_witness_search_errors():
    with pytest.raises(NotFoundWithinBound) as exc:
        find_witness_primes(X5, 2)
    assert exc.value.missing == ["p1", "p2", "p3"]


def test_classify_prime_definition():
    w = classify_prime(X5, 109)
    assert w is not None and w.pattern == (5,) and len(w.roots) == 4
    assert classify_prime(X5, 3) is None  # p must exceed n


@pytest.mark.parametrize("n", [3, 4, 5])
def test_find_reference_poly(n):
    ref, wp = find_reference_poly(n, seed=1)
    assert discriminant(ref.R) != 0
    certify_sn(ref.R, ref.sn_witnesses)
    assert len(set(wp.primes)) == 3 and all(p > n for p in wp.primes)
    again, wp2 = find_reference_poly(n, seed=1)
    assert again == ref and wp2 == wp


def test_find_reference_poly_zero_budget():
    with pytest.raises(SearchExhausted):
        find_reference_poly(3, seed=0, budget=0)


def test_certify_sn_rule():
    wp = find_witness_primes(X5, 10**6)
    gc = certify_sn(X5, [(w.p, w.pattern) for w in wp])
    assert gc.conclusion == "S_n"
    with pytest.raises(InsufficientWitnesses) as exc:
        certify_sn(X5, [(109, (5,)), (109, (5,))])
    assert set(exc.value.missing) == {"(n-1)-cycle", "transposition"}
    with pytest.raises(BadWitness):
        certify_sn(X5, [(19, (5,))])  # 19 divides disc(X5)
    with pytest.raises(BadWitness):
        certify_sn(X5, [(109, (4, 1))])  # wrong claimed cycle type


def test_a5_probe_never_shows_transposition():
    # x^5 + 20x + 16: a transposition pattern would refute an A_5 group
    probe = IntPoly((16, 20, 0, 0, 0, 1))
    seen = set()
    for p in primes_up_to(10**4):
        try:
            seen.add(degree_multiset_mod_p(probe, p))
        except ArithmeticError:
            continue
    assert (2, 1, 1, 1) not in seen and (4, 1) not in seen
    assert seen == {(1, 1, 1, 1, 1), (2, 2, 1), (3, 1, 1), (5,)}
    with pytest.raises(InsufficientWitnesses):
        certify_sn(probe, [(p, degree_multiset_mod_p(probe, p)) for p in (7, 11, 13, 17, 19, 23, 29, 31)
                           if discriminant(probe) % p])


def _demo_inputs():
    shape = build_shape(5, 24, [120, 240, -360])
    ell = 7
    crit = [(24 * ell, 5)] + [(a * ell, 1) for a in shape.A]
    R, wp = family_witness_primes(scaled_p0(shape, ell), crit, {ell})
    return shape, ell, R, wp


def test_family_witness_primes():
    shape, ell, R, wp = _demo_inputs()
    assert wp.primes == (11, 23, 13)
    for w in wp:
        assert degree_multiset_mod_p(R, w.p) == w.pattern
        assert sorted(w.roots) == brute_roots(list(derivative(R).coeffs), w.p)
    # P_b = R mod p_k once b = R(0) mod p_k
    b, M = crt([1] + [w.r0 for w in wp], [120] + [w.p for w in wp])
    inst = instantiate(shape, ell, b)
    for w in wp:
        assert reduce_mod(inst.Pb, w.p) == reduce_mod(R, w.p)


def test_certify_unramified_an_and_errors():
    shape, ell, R, wp = _demo_inputs()
    b, M = crt([1] + [w.r0 for w in wp], [120] + [w.p for w in wp])
    while True:
        inst = instantiate(shape, ell, b)
        sf = squarefree_proof(inst.F)
        if sf.is_proof():
            break
        b += M
    gc = certify_sn(inst.Pb, [(w.p, w.pattern) for w in wp])
    cert = certify_unramified_an(inst, sf, gc, ())
    assert cert.delta == discriminant(inst.Pb)
    assert cert.quadratic_field == ("real" if cert.delta > 0 else "imaginary")
    offender = sf.primes[0][0][0]
    with pytest.raises(AvoidanceViolated) as exc:
        certify_unramified_an(inst, sf, gc, {offender})
    assert exc.value.primes == [offender]
    other = certify_sn(R, [(w.p, w.pattern) for w in wp])
    with pytest.raises(MismatchedComponents):
        certify_unramified_an(inst, sf, other, ())


def test_demo_avoid_71():
    inst = instantiate(build_shape(3, 2, [6]), None, 1)
    sf = squarefree_proof(inst.F)
    # an S_3 certificate for the cubic from the small primes not dividing 9301
    wits = []
    for p in primes_up_to(200):
        if p > 3 and 9301 % p:
            wits.append((p, degree_multiset_mod_p(inst.Pb, p)))
    gc = certify_sn(inst.Pb, wits)
    with pytest.raises(AvoidanceViolated) as exc:
        certify_unramified_an(inst, sf, gc, {71})
    assert exc.value.primes == [71]
