import numpy as np
import pytest
from hypothesis import given, settings, strategies

from kstandard.scripts.catalog import X
from kstandard.scripts.exactlin import inv
from kstandard.scripts.pathalg import center_basis
from kstandard.scripts.pseudofunctor import (
    ScalarSystem,
    TrivializationError,
    all_ones,
    check_consistency,
    coboundary_system,
    conjugate,
    extract_relations,
    normalize_connecting,
    perturb,
    prop_a2_eta,
    random_object_scalars,
    system_from_json,
    telescope_phi,
    trivialize,
    validate_system,
)

LO, HI = -1, 1
WIDE = (-2, 2)
PERTURBED_EDGES = 4


def sensitive_morphisms(alg, lo, hi):
    """Morphisms with exponent ±1 in some relation; scaling one of them breaks that relation."""
    found = extract_relations(alg, lo, hi)
    return sorted({mid for rel in found.relations for mid, e in rel.morphs if abs(e) == 1},
                  key=lambda mid: mid.sort_key())


def test_all_ones_is_consistent(a12):
    report = check_consistency(a12, all_ones(a12, LO, HI))
    assert report.passed, f"all-ones system fails: {report.witnesses[:3]}"
    assert report.details["relations"] > 0, "the window must produce relations"


@given(strategies.data())
@settings(max_examples=5, deadline=None)
def test_coboundary_trivializes_back(a12, data):
    seed = data.draw(strategies.integers(0, 2 ** 16))
    rng = np.random.default_rng(seed)
    c = random_object_scalars(a12, LO, HI, rng)
    system = coboundary_system(a12, LO, HI, c)
    assert check_consistency(a12, system).passed, "a coboundary satisfies every relation"
    triv = trivialize(a12, system)
    p = a12.prime
    for component in triv.components:
        ratios = {triv.objects[u] * inv(c[u], p) % p for u in component}
        assert len(ratios) == 1, f"δ/c must be constant on {[str(u) for u in component]}, got {ratios}"


def test_perturbed_system_is_inconsistent(a12):
    mids = sensitive_morphisms(a12, LO, HI)
    assert mids, "expected at least one morphism with exponent ±1"
    broken = perturb(a12, all_ones(a12, LO, HI), mids[0], 2)
    report = check_consistency(a12, broken)
    assert report.verdict == "fail"
    with pytest.raises(TrivializationError, match="inconsistent"):
        trivialize(a12, broken)


def test_random_single_edge_perturbations_are_detected(algebra):
    lo, hi = WIDE
    rng = np.random.default_rng([algebra.r, algebra.N])
    base = coboundary_system(algebra, lo, hi, random_object_scalars(algebra, lo, hi, rng))
    mids = sorted(base.scalars, key=lambda mid: mid.sort_key())
    for index in rng.choice(len(mids), size=min(PERTURBED_EDGES, len(mids)), replace=False):
        mid = mids[int(index)]
        broken = perturb(algebra, base, mid, 2)
        report = check_consistency(algebra, broken)
        assert report.verdict == "fail", f"scaling {mid} on {algebra.presentation.name} went undetected"
        with pytest.raises(TrivializationError, match="inconsistent"):
            trivialize(algebra, broken)


def test_planted_coboundary_is_recovered(algebra):
    lo, hi = WIDE
    p = algebra.prime
    c = random_object_scalars(algebra, lo, hi, np.random.default_rng([algebra.N, algebra.r]))
    system = coboundary_system(algebra, lo, hi, c)
    triv = trivialize(algebra, system)
    for component in triv.components:
        ratios = {triv.objects[u] * inv(c[u], p) % p for u in component}
        assert len(ratios) == 1, f"δ/c must be constant on {[str(u) for u in component]}, got {ratios}"
    assert set(conjugate(algebra, system, triv.objects).scalars.values()) == {1}


def test_system_validation(a12):
    system = all_ones(a12, LO, HI)
    missing = ScalarSystem(system.window, dict(list(system.scalars.items())[1:]))
    with pytest.raises(ValueError, match="misses"):
        validate_system(a12, missing)
    mid = next(iter(system.scalars))
    zero = ScalarSystem(system.window, {**system.scalars, mid: a12.prime})
    with pytest.raises(ValueError, match="zero mod"):
        validate_system(a12, zero)


def test_system_json(a12):
    system = perturb(a12, all_ones(a12, LO, HI), next(iter(all_ones(a12, LO, HI).scalars)), 3)
    assert system_from_json(system.to_json()).scalars == system.scalars


def test_trivialization_json_lists_every_object(a12):
    triv = trivialize(a12, all_ones(a12, LO, HI))
    payload = triv.to_json()
    assert set(payload["objects"].values()) == {1}
    assert sum(len(c) for c in payload["components"]) == len(payload["objects"])


def test_normalize_connecting(a12):
    p = a12.prime
    one = a12.one()
    a = normalize_connecting(a12, {0: 2, 1: 3})
    assert sorted(a) == [0, 1, 2]
    assert np.array_equal(a[1], np.mod(2 * one, p))
    assert np.array_equal(a[2], np.mod(6 * one, p))
    a = normalize_connecting(a12, {-1: 2})
    assert np.array_equal(np.mod(a[-1] * 2, p), one), "a_{-1} = λ_{-1}^{-1}"
    with pytest.raises(ValueError, match="contiguous"):
        normalize_connecting(a12, {0: 1, 2: 1})
    with pytest.raises(ValueError, match="must contain 0"):
        normalize_connecting(a12, {3: 2})


def test_normalize_connecting_with_central_elements(a12):
    p = a12.prime
    z = center_basis(a12)[1]
    lam = np.mod(a12.one() + z, p)
    a = normalize_connecting(a12, {0: lam})
    assert np.array_equal(a12.multiply_global(a[0], lam), a[1])


def test_telescope_phi(a12):
    b = {X(1, 2): 1, X(2, 2): 1}
    phi = telescope_phi(a12, b, 0, 2)
    assert phi[X(0, 1)] == 0 and phi[X(0, 0)] == 0
    assert phi[X(1, 2)] == 1 and phi[X(2, 2)] == 1 and phi[X(1, 1)] == 0


def test_eta_identity(a12):
    assert prop_a2_eta(a12, {}, 0, 2).verdict == "pass"
    b = {X(1, 2): 1, X(2, 2): 1}
    result = prop_a2_eta(a12, b, 0, 2)
    assert result.verdict == "pass", f"telescoped φ fails at {result.failures}"
    wrong = prop_a2_eta(a12, b, 0, 2, phi_override={X(1, 2): 5})
    assert wrong.verdict == "fail" and wrong.failures == ["X[1,2]"]


def test_eta_needs_r_equal_one(a23):
    with pytest.raises(ValueError, match="only defined for r = 1"):
        prop_a2_eta(a23, {}, 0, 1)


def test_conjugating_by_the_trivialization_gives_all_ones(a23):
    rng = np.random.default_rng(7)
    c = random_object_scalars(a23, 0, 1, rng)
    system = coboundary_system(a23, 0, 1, c)
    triv = trivialize(a23, system)
    conjugated = conjugate(a23, system, triv.objects)
    assert set(conjugated.scalars.values()) == {1}
