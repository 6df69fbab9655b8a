import numpy as np

from kstandard.scripts.catalog import L, X, delta, realize
from kstandard.scripts.complexes import compose, identity, scale_map, zero_map
from kstandard.scripts.homotopy import (
    HOM_CACHE_SIZE,
    endomorphism_frame,
    hom_dim_oracle,
    hom_kb,
    is_homotopy_equivalence,
    is_indecomposable,
    is_isomorphic,
)


def test_end_of_x_object_is_two_dimensional(a12):
    x = realize(a12, X(0, 1))
    assert hom_kb(a12, x, x).dim == 2, "End_K(X(0,1)) over A(1,2) is spanned by Id and Δ"


def test_hom_into_the_top_stalk(a12):
    x, s = realize(a12, X(0, 1)), realize(a12, X(1, 1))
    assert hom_kb(a12, x, s).dim == 1, "Only the cycle in degree 1 survives"


def test_end_for_r_greater_than_one(a23):
    for cid in (X(0, 1), X(0, 0, 1), L(0, 2, 2)):
        x = realize(a23, cid)
        assert hom_kb(a23, x, x).dim == 1, f"End_K({cid}) over A(2,3) should be the field"


def test_oracle_agrees(a12, a23):
    for alg, pairs in ((a12, [(X(0, 1), X(1, 2)), (X(0, 2), L(0, 1, 1))]),
                       (a23, [(X(0, 2), X(1, 2, 1)), (L(0, 1, 2), X(1, 1, 1))])):
        for x_id, y_id in pairs:
            x, y = realize(alg, x_id), realize(alg, y_id)
            got, oracle = hom_kb(alg, x, y).dim, hom_dim_oracle(alg, x, y)
            assert got == oracle, f"Hom({x_id},{y_id}): {got} vs oracle {oracle}"


def test_reduce_is_linear(a12):
    x = realize(a12, X(0, 2))
    space = hom_kb(a12, x, x)
    ident = identity(a12, x)
    assert np.array_equal(space.reduce(scale_map(a12, ident, 3)), np.mod(3 * space.reduce(ident), a12.prime))
    assert not space.reduce(zero_map(a12, x, x)).any()


def test_delta_squares_to_zero_in_k(a12):
    d = delta(a12, 0, 2)
    space = hom_kb(a12, d.domain, d.codomain)
    assert space.reduce(d).any(), "Δ must be nonzero in K^b"
    assert not space.reduce(compose(a12, d, d)).any(), "Δ² must be null-homotopic"


def test_equivalences(a12):
    x = realize(a12, X(0, 1))
    assert is_homotopy_equivalence(a12, identity(a12, x))
    assert not is_homotopy_equivalence(a12, zero_map(a12, x, x))
    assert not is_homotopy_equivalence(a12, delta(a12, 0, 1))


def test_local_endomorphism_rings(a12):
    frame = endomorphism_frame(a12, realize(a12, X(0, 1)))
    assert frame.local and frame.radical.shape[1] == 1
    assert is_indecomposable(a12, realize(a12, L(0, 1, 1)))


def test_non_isomorphic_objects(a12):
    assert is_isomorphic(a12, realize(a12, X(0, 1)), realize(a12, X(0, 2))) is False
    x = realize(a12, X(0, 1))
    assert is_isomorphic(a12, x, x) is True


def test_hom_caches_are_bounded(a12):
    x = realize(a12, X(0, 1))
    endomorphism_frame(a12, x)
    for cached in (hom_kb, endomorphism_frame):
        info = cached.cache_info()
        assert info.maxsize == HOM_CACHE_SIZE, f"Expected maxsize {HOM_CACHE_SIZE}, got {info.maxsize}"
        assert info.currsize <= HOM_CACHE_SIZE
