import pytest

from kstandard.scripts.catalog import (
    B,
    L,
    MalformedIdError,
    R,
    X,
    Z,
    delta,
    enumerate_window,
    lower_truncation,
    orbit_iso,
    parse_id,
    realize,
    shift_id,
    top_stalk,
    upper_truncation,
    validate_id,
    vertices,
)
from kstandard.scripts.homotopy import is_homotopy_equivalence


def test_parse_ids():
    assert parse_id("X[0,3]") == X(0, 3)
    assert parse_id("X[s=1;0,3]") == X(0, 3, 1)
    assert parse_id("L[0,2;a=1]") == L(0, 2, 1)
    assert parse_id("B[0,4;a=2,b=1]") == B(0, 4, 2, 1)
    assert parse_id(" Z[-1;a=2,b=1] ") == Z(-1, 2, 1)
    assert str(parse_id("R[0,2;b=1]")) == "R[0,2;b=1]"


@pytest.mark.parametrize("text", ["Q[0,1]", "X[0]", "L[0,2]", "Z[0,1;a=2,b=1]", "L[s=1;0,2;a=1]",
                                  "B[0,4;a=2,a=1]", "X[0,1"])
def test_parse_rejects_malformed_text(text):
    with pytest.raises(MalformedIdError):
        parse_id(text)


def test_validate_index_constraints():
    with pytest.raises(MalformedIdError, match="r ≤ b < a < N"):
        validate_id(Z(0, 2, 1), 1, 2)
    with pytest.raises(MalformedIdError, match="m ≤ n"):
        validate_id(X(2, 1), 1, 2)
    with pytest.raises(MalformedIdError, match="0 ≤ s"):
        validate_id(X(0, 1, 1), 1, 2)
    assert validate_id(B(0, 2, 1, 1), 1, 2) == B(0, 2, 1, 1)


def test_r_stalk_is_the_l_stalk():
    assert R(3, 3, 1) == L(3, 3, 1)


def test_vertices_by_degree():
    assert vertices(L(0, 2, 1), 1) == [1, 0, 0]
    assert vertices(R(0, 2, 2), 2) == [1, 0, 2]
    assert vertices(X(0, 2, 1), 2) == [1, 0, 1]


def test_window_enumeration():
    objects = enumerate_window(1, 2, 0, 1)
    expected = {X(0, 0), X(0, 1), X(1, 1), L(0, 0, 1), L(0, 1, 1), L(1, 1, 1), R(0, 1, 1)}
    assert set(objects) == expected, f"Unexpected window objects {[str(o) for o in objects]}"
    assert enumerate_window(1, 2, 1, 0) == []


def test_every_window_object_realizes(a13):
    for cid in enumerate_window(1, 3, 0, 2):
        x = realize(a13, cid)
        assert (x.lo, x.hi) == cid.support, f"{cid} realized with support [{x.lo},{x.hi}]"


def test_truncations():
    y = B(0, 3, 3, 2)
    assert lower_truncation(y, 2, 2) == L(0, 2, 3)
    assert upper_truncation(y, 2, 1) == R(1, 3, 2)
    assert top_stalk(y, 2) == L(3, 3, 2)
    assert top_stalk(X(0, 2, 1), 2) == X(2, 2, 1)
    assert shift_id(X(0, 2), 1) == X(-1, 1)


def test_orbit_isomorphism(a12, a23):
    for alg, cid in ((a12, X(0, 2)), (a23, R(0, 1, 2))):
        assert is_homotopy_equivalence(alg, orbit_iso(alg, cid, 1)), f"orbit map of {cid} is not invertible"


def test_delta_needs_r_equal_one(a23):
    with pytest.raises(ValueError, match="only defined for r = 1"):
        delta(a23, 0, 1)
