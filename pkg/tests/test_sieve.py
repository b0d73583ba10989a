import math
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anforge.congruence import EmptyProgram, Window, assemble_b_program
from anforge.construct import build_shape, factors_at
from anforge.forge import sample_shape
from anforge.numtheory import (
    DETERMINISTIC_MR_BOUND,
    InfeasibleConstraint,
    crt,
    factorize,
    is_probable_prime,
    next_prime,
    pollard_brent,
    primality_tag,
    primes_up_to,
)
from anforge.sieve import (
    SquarefreeProof,
    local_density,
    scan,
    sieve_stats,
    squarefree_proof,
)

from oracles import factorint, is_squarefree

DEMO = build_shape(3, 2, [6])


def test_is_probable_prime_examples():
    assert is_probable_prime(2)
    assert not is_probable_prime(561)
    assert is_probable_prime(131)
    assert not is_probable_prime(1) and not is_probable_prime(0) and not is_probable_prime(-7)
    m = 2**127 - 1
    assert m > DETERMINISTIC_MR_BOUND and is_probable_prime(m)
    assert primality_tag(131) == "deterministic"
    assert primality_tag(m) == "probabilistic(40)"


def test_primes_up_to_matches_trial_division():
    expect = [p for p in range(2, 2000) if all(p % d for d in range(2, math.isqrt(p) + 1))]
    assert primes_up_to(1999) == expect
    assert next_prime(7) == 11 and next_prime(1) == 2


def test_factorize_examples():
    assert factorize(9301).primes == {71: 1, 131: 1}
    assert factorize(2048).primes == {2: 11}
    f = factorize(-72)
    assert f.unit == -1 and f.primes == {2: 3, 3: 2} and f.complete
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    f = factorize(p * q * 3)
    assert f.primes == {3: 1, q: 1, p: 1} and f.complete


def test_factorize_prime_power_beyond_trial():
    p = 1000003
    assert factorize(p**3 * 101).primes == {101: 1, p: 3}


def test_rho_budget_zero_leaves_cofactor():
    n = 1000000007 * 998244353
    assert pollard_brent(n, 0) is None
    f = factorize(n, budget=0)
    assert not f.complete and f.cofactor == n


@settings(max_examples=80, deadline=None)
@given(st.integers(-10**18, 10**18).filter(lambda m: m != 0))
def test_factorize_matches_sympy(m):
    f = factorize(m)
    assert f.complete
    assert f.primes == factorint(abs(m))
    assert f.value() == m


def test_crt():
    assert crt([1, 3], [6, 5]) == (13, 30)
    assert crt([1, 7], [6, 4]) == (7, 12)
    with pytest.raises(InfeasibleConstraint):
        crt([1, 2], [7, 7])


def test_squarefree_examples():
    pr = squarefree_proof([131, -71])
    assert pr.is_proof() and pr.primes == (((131, "deterministic"),), ((71, "deterministic"),))
    assert pr.check()
    no = squarefree_proof([12])
    assert no.status == "no" and no.witness == (1, 2)
    unit = squarefree_proof([1])
    assert unit.is_proof() and unit.primes == ((),)
    shared = squarefree_proof([15, 21])
    assert shared.status == "no" and shared.witness == (1, 2, 3)


def test_squarefree_unknown_without_budget():
    n = 1000000007 * 998244353
    assert squarefree_proof([n], budget=0).status == "unknown"


def test_tampered_proof_fails_check():
    pr = squarefree_proof([131, -71])
    bad = SquarefreeProof("proof", pr.factors, (((131, "deterministic"),), ((73, "deterministic"),)))
    assert not bad.check()


def _demo_program():
    return assemble_b_program(3, None, DEMO, None, Window(-3, 71))


def test_scan_demo():
    prog = _demo_program()
    assert list(prog) == list(range(1, 68, 6))
    found, stats = scan(DEMO, None, prog, max_results=1)
    inst, sf = found[0]
    assert inst.b == 1 and sf.is_proof() and stats.accepted == 1
    empty, st0 = scan(DEMO, None, prog, max_results=0)
    assert empty == [] and st0.examined == 0


def test_scan_empty_program():
    prog = _demo_program()
    with pytest.raises(EmptyProgram):
        scan(DEMO, None, replace(prog, window=Window(2, 6)), max_results=1)


def test_demo_sieve_stats():
    st_ = sieve_stats(DEMO, None, _demo_program())
    # exhaustive oracle: factor (104 + 27b)(b - 72) for b = 1, 7, ..., 67
    bs = list(range(1, 68, 6))
    n1 = sum(1 for b in bs if is_squarefree(104 + 27 * b) and is_squarefree(b - 72))
    assert (st_.n0, st_.n1) == (12, n1) == (12, 12)
    assert st_.n2 == 12 and st_.n3 == 0


def _sieve_oracle(shape, ell, prog, lo, hi, xi):
    bs = list(prog.iter_range(lo, hi))
    n1 = n2 = n3 = 0
    for b in bs:
        fs = factors_at(shape, 1 if ell is None else ell, b)
        sq = {p for f in fs for p, e in factorint(abs(f)).items() if e >= 2}
        n1 += not sq
        n2 += not any(p < xi for p in sq)
        n3 += len({p for p in sq if p >= xi})
    return len(bs), n1, n2, n3


@pytest.mark.parametrize("seed", range(6))
def test_sieve_stats_matches_factoring(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4, 5])
    shape = sample_shape(n, rng, 2)
    lo = rng.randint(-5000, 5000)
    prog = assemble_b_program(n, None, shape, None, Window(lo, lo + 3000))
    st_ = sieve_stats(shape, None, prog, xi=30)
    assert (st_.n0, st_.n1, st_.n2, st_.n3) == _sieve_oracle(shape, None, prog, lo, lo + 3000, 30)
    assert st_.inequality_holds()


def test_local_density_class_count_equals_brute_force():
    rng = random.Random(5)
    for n in (3, 4, 5):
        shape = sample_shape(n, rng, 2)
        prog = assemble_b_program(n, None, shape, 11, Window(1, 10**4))
        assert local_density(shape, 11, 60, prog) == local_density(shape, 11, 60, prog, brute=True)


def test_local_density_generic_prime_factor():
    # p = 7 > n, both slopes are units mod 7 and the two roots mod 49 differ: rho = n - 1
    assert (-DEMO.T1 * pow(27, -1, 49)) % 49 != (-DEMO.B[0]) % 49
    only7 = local_density(DEMO, None, 7) / local_density(DEMO, None, 5)
    assert only7 == 1 - Fraction(2, 49)


def test_local_density_rejects_large_P():
    with pytest.raises(ValueError):
        local_density(DEMO, None, 1001)


def test_empty_window_stats():
    prog = _demo_program()
    st_ = sieve_stats(DEMO, None, prog, window=(10, 9))
    assert (st_.n0, st_.n1, st_.n2, st_.n3) == (0, 0, 0, 0)
