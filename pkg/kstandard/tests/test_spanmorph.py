import pytest

from kstandard.scripts.catalog import L, MalformedIdError, R, X, realize
from kstandard.scripts.homotopy import hom_kb
from kstandard.scripts.spanmorph import (
    check_morph,
    endpoints,
    enumerate_spanning,
    morph_id,
    parse_morph,
    realize_morph,
    truncation_inclusion,
    truncation_projection,
)


def test_parse_morphism_ids():
    mid = parse_morph("c[l=0,m=0,n=1;a=1,b=1]")
    assert mid == morph_id("c", l=0, m=0, n=1, a=1, b=1)
    assert str(mid) == "c[l=0,m=0,n=1;a=1,b=1]"
    assert parse_morph("pi[m=0,n=1]").family == "π"
    primed = parse_morph("mx.V[m=0,m'=1,n=4,n'=5;a=1,b=1,a'=1,b'=1]")
    assert primed["m'"] == 1 and primed["b'"] == 1


@pytest.mark.parametrize("text", ["c[l=0,m=0,n=1;a=1]", "nope[m=0]", "π[m=0,n=1;x=2]", "π m=0"])
def test_parse_rejects_malformed_morphisms(text):
    with pytest.raises(MalformedIdError):
        parse_morph(text)


def test_family_conditions():
    with pytest.raises(MalformedIdError, match="m < n"):
        check_morph(morph_id("π", m=1, n=1), 1, 2)
    with pytest.raises(MalformedIdError, match="b < a"):
        check_morph(morph_id("mx.II", m=0, n=1, a=1, b=1), 1, 2)


def test_connection_endpoints(a12):
    mid = parse_morph("c[l=0,m=0,n=1;a=1,b=1]")
    assert endpoints(mid, 1, 2) == (L(0, 0, 1), R(0, 1, 1))
    f = realize_morph(a12, mid)
    assert hom_kb(a12, f.domain, f.codomain).reduce(f).any(), "c must be nonzero in K^b"


def test_inclusion_and_projection_are_nonzero(a12):
    for mid in (morph_id("i", m=1, n=2), morph_id("π", m=0, n=2), morph_id("j", m=1, n=2, a=1)):
        f = realize_morph(a12, mid)
        assert hom_kb(a12, f.domain, f.codomain).reduce(f).any(), f"{mid} is null-homotopic"


def test_enumerated_morphisms_stay_in_the_window():
    for mid in enumerate_spanning(1, 3, 0, 2):
        dom, cod = endpoints(mid, 1, 3)
        assert 0 <= dom.m and dom.n <= 2 and 0 <= cod.m and cod.n <= 2, f"{mid} leaves the window"


def test_truncation_maps(a12):
    pr = truncation_projection(a12, X(0, 1), 0)
    inc = truncation_inclusion(a12, X(0, 1), 1)
    assert pr.codomain == realize(a12, X(0, 0))
    assert inc.domain == realize(a12, X(1, 1))
    for f in (pr, inc):
        assert hom_kb(a12, f.domain, f.codomain).reduce(f).any()
