import hashlib
import importlib
import math

import pytest

from anforge.certificate import dumps, verify
from anforge.forge import BudgetExhausted, Budgets, count_fields, forge


def _digest(certs):
    return hashlib.sha256("".join(dumps(c) for c in certs).encode()).hexdigest()[:16]


def test_forge_n5_r0_regression():
    certs = forge(5, 0, 3, seed=0)
    assert [c["construction"]["b"] for c in certs] == ["-25092053039", "-25091177879", "-25090886159"]
    assert certs[0]["construction"]["u"] == "12"
    assert certs[0]["construction"]["A"] == ["360", "0", "-360"]
    assert [w["p"] for w in certs[0]["reference"]["witness_primes"]] == ["11", "13", "17"]
    assert _digest(certs) == "49c2fc19ee250f87"
    for c in certs:
        assert c["signature"]["sturm_count"] == "5"
        assert verify(c).accepted


def test_forge_is_deterministic():
    a = [dumps(c) for c in forge(5, 2, 2, seed=9)]
    b = [dumps(c) for c in forge(5, 2, 2, seed=9)]
    assert a == b


def test_forge_avoid_7():
    (c,) = forge(5, 1, 1, avoid={7}, seed=0)
    assert int(c["discriminant"]["value"]) % 7 != 0
    assert c["construction"]["ell"] == "11"
    assert c["quadratic_field"]["type"] == "imaginary"


def test_forge_preconditions():
    with pytest.raises(ValueError):
        forge(5, 3, 1)
    with pytest.raises(ValueError):
        forge(4, 0, 1)
    with pytest.raises(ValueError):
        forge(5, 0, 1, avoid={9})
    (c,) = forge(4, 1, 1, allow_small_n=True, seed=2)
    assert verify(c).accepted


def test_budget_exhausted_reports_stage():
    with pytest.raises(BudgetExhausted) as exc:
        forge(5, 0, 5, seed=0, budgets=Budgets(shapes=1, per_window=2))
    assert exc.value.stage in {"shape", "signature", "witness", "congruence", "scan"}
    assert len(exc.value.partial) == 2


def test_count_fields_dedup_and_bounds():
    fc = count_fields(5, 0, 10**80, seed=0, target=6)
    assert fc.count == 6 and len(set(fc.deltas)) == 6
    assert all(abs(d) <= 10**80 for d in fc.deltas)
    none = count_fields(5, 0, 10**12, seed=0, target=3, max_certificates=4)
    assert none.count == 0 and none.examined == 4


def test_count_fields_counts_duplicates_once(monkeypatch):
    fmod = importlib.import_module("anforge.forge")  # the package re-exports a function of the same name
    one = forge(5, 0, 1, seed=0)[0]

    def repeat(*args, **kw):
        yield one
        yield one
        yield one

    monkeypatch.setattr(fmod, "certificates", repeat)
    fc = fmod.count_fields(5, 0, 10**80, target=5, max_certificates=3)
    assert fc.count == 1 and fc.collisions == 2


def test_forge_n6_r0():
    (c,) = forge(6, 0, 1, seed=0)
    assert c["signature"]["sturm_count"] == "6"
    assert verify(c).accepted
    assert math.gcd(int(c["discriminant"]["value"]), 60) == 1
