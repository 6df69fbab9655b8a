import pytest

from kstandard.scripts.catalog import X, arrow, realize
from kstandard.scripts.complexes import (
    InvalidComplexError,
    compose,
    cone,
    direct_sum,
    identity,
    make_complex,
    shift,
    stalk,
    support,
    validate_chain_map,
    validate_complex,
    zero_map,
)
from kstandard.scripts.homotopy import hom_kb


def test_catalog_complex_squares_to_zero(a12):
    x = realize(a12, X(0, 2))
    assert x.terms == ((0,), (0,), (0,)), f"Unexpected terms {x.terms}"
    assert validate_complex(a12, x) is x


def test_nonzero_square_is_rejected(a12):
    bad = make_complex(a12, 0, [(0,), (1,), (0,)], [((arrow(a12, 0, 1),),), ((arrow(a12, 1, 0),),)])
    with pytest.raises(InvalidComplexError, match="≠ 0"):
        validate_complex(a12, bad)


def test_make_complex_trims_empty_degrees(a12):
    x = make_complex(a12, -1, [(), (0,), ()])
    assert (x.lo, x.hi) == (0, 0), f"Expected support [0,0], got [{x.lo},{x.hi}]"
    assert support(x) == (0, 0)


def test_stalk_and_shift(a12):
    s = stalk(a12, 1, 2)
    assert (s.lo, s.hi) == (-2, -2)
    x = realize(a12, X(0, 1))
    shifted = shift(a12, x, 1)
    assert (shifted.lo, shifted.hi) == (-1, 0)
    assert shifted.terms == x.terms


def test_identity_is_a_chain_map(a12):
    x = realize(a12, X(0, 2))
    f = validate_chain_map(a12, identity(a12, x))
    assert compose(a12, f, f) == f


def test_cone_of_identity_is_contractible(a12):
    x = realize(a12, X(0, 1))
    c, inc, proj = cone(a12, identity(a12, x))
    assert (c.lo, c.hi) == (-1, 1), f"cone support should be [-1,1], got [{c.lo},{c.hi}]"
    assert hom_kb(a12, c, c).dim == 0, "cone(Id) must be contractible"
    assert inc.domain == x and proj.codomain == shift(a12, x, 1)


def test_cone_of_zero_map_is_the_direct_sum(a12):
    x = realize(a12, X(0, 0))
    y = realize(a12, X(1, 1))
    c, _, _ = cone(a12, zero_map(a12, x, y))
    total = direct_sum(a12, shift(a12, x, 1), y)[0]
    assert c.terms == total.terms
    assert (c.lo, c.hi) == (total.lo, total.hi)
