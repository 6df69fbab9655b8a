from types import SimpleNamespace

import pytest

from kstandard.scripts import spanmorph
from kstandard.scripts.catalog import X, realize
from kstandard.scripts.complexes import identity
from kstandard.scripts.pathalg import PathAlgebra, make_arn
from kstandard.scripts.reports import dumps
from kstandard.scripts.verify import (
    SUITES,
    MalformedTriangleError,
    check_almost_vanishing,
    check_catalog,
    check_center,
    check_cones,
    check_end_rings,
    check_homdim,
    check_orbit,
    check_orbit_window,
    check_restriction,
    check_rigidity,
    check_spanning,
    check_triangle,
    make_triangle,
    run_suite,
    truncation_triangle,
    window_center,
)

SETTINGS = SimpleNamespace(spanning_margin=1, progress=False, workers=1, almost_vanishing_margin=1,
                           scalars=(1, 2, 3), samples=16, enumeration_cap=4096, seed=0)


def test_spanning_passes(algebra):
    report = check_spanning(algebra, 0, 1)
    assert report.passed, f"spanning failed on {algebra.presentation.name}: {report.witnesses[:3]}"
    assert report.details["margin"] == max(1, algebra.r)


def test_spanning_margin_is_raised_to_r(a23):
    report = check_spanning(a23, -1, 1, margin=1)
    assert report.details["requested_margin"] == 1 and report.details["margin"] == 2
    assert report.passed, f"spanning witnesses: {report.witnesses[:3]}"


def test_spanning_without_generators_fails(a12):
    report = check_spanning(a12, 0, 1, exclude_families=spanmorph.FAMILIES)
    assert report.verdict == "fail"
    assert any(w["domain"] == "X[0,1]" and w["codomain"] == "X[0,0]" for w in report.witnesses)


def test_spanning_needs_the_connections(a12):
    report = check_spanning(a12, 0, 1, exclude_families=spanmorph.CONNECTIONS)
    assert report.verdict == "fail"
    uncovered = {(w["domain"], w["codomain"]) for w in report.witnesses}
    assert ("L[0,0;a=1]", "R[0,1;b=1]") in uncovered, f"Uncovered pairs: {sorted(uncovered)}"


def test_homdim_bounds(a12, a23):
    report = check_homdim(a12, 0, 1)
    assert report.passed, f"homdim witnesses: {report.witnesses[:3]}"
    assert report.details["max_dim"] == 2 and report.details["bound"] == 2
    report = check_homdim(a23, 0, 1, workers=2)
    assert report.passed and report.details["max_dim"] == 1


def test_homdim_on_every_configuration(algebra):
    report = check_homdim(algebra, 0, 1)
    assert report.passed, f"homdim witnesses: {report.witnesses[:3]}"
    assert report.details["max_dim"] <= (2 if algebra.r == 1 else 1)


def test_report_payload_validates(a12):
    payload = check_end_rings(a12, 0, 1).to_json()
    assert payload["schema"] == "kstandard.report/1"
    assert payload["params"] == {"r": 1, "N": 2, "p": 32003}


def test_end_rings(a12, a23):
    assert check_end_rings(a12, 0, 1).passed
    assert check_end_rings(a23, 0, 1).passed


def test_truncation_triangle_is_exact(a12):
    result = check_triangle(a12, truncation_triangle(a12, X(0, 1)))
    assert result.status == "exact", f"Expected exact, got {result}"


def test_scaled_connecting_map_breaks_exactness(a12_small):
    report = check_rigidity(a12_small, 0, 1, scalars=(1, 2))
    assert report.passed, f"rigidity witnesses: {report.witnesses}"


@pytest.mark.parametrize("fixture", ["a12", "a23"])
def test_rigidity_at_the_default_prime(request, fixture):
    alg = request.getfixturevalue(fixture)
    report = check_rigidity(alg, 0, 1)
    assert report.passed, f"rigidity witnesses: {report.witnesses}"
    for row in report.details["results"]:
        expected = "exact" if row["lambda"] == 1 else "non-exact"
        assert row["status"] == expected, f"Expected {expected} at λ={row['lambda']}, got {row}"


def test_malformed_triangles(a12):
    tri = truncation_triangle(a12, X(0, 1))
    with pytest.raises(MalformedTriangleError):
        make_triangle(a12, tri.f, tri.f, tri.h)
    with pytest.raises(ValueError, match="stalk"):
        truncation_triangle(a12, X(1, 1))


def test_almost_vanishing(a12):
    report = check_almost_vanishing(a12, 0, 1, -1, 2)
    assert report.passed, f"Δ kills radical maps: {report.witnesses[:3]}"
    report = check_almost_vanishing(a12, 0, 1, -1, 2, endo=identity(a12, realize(a12, X(0, 1))))
    assert not report.passed, "The identity is invertible, not almost-vanishing"


def test_orbit(a12):
    assert check_orbit(a12, 1, 2).passed


def test_center_contains_the_deltas(a12):
    report = check_center(a12, 0, 1)
    assert report.passed, f"centre witnesses: {report.witnesses}"
    assert report.details["dim"] == 4, "1 and δ(X) for X[0,0], X[1,1], X[0,1]"
    assert window_center(a12, 0, 1).dim == report.details["oracle_dim"]


def test_center_is_scalar_for_r_above_one(a23):
    report = check_center(a23, 0, 1)
    assert report.verdict == "pass", f"Expected pass, got {report.verdict} with dim {report.details['dim']}"
    assert report.details["dim"] == report.details["predicted_dim"] == 1


@pytest.mark.parametrize("fixture, lo, hi, expected", [
    ("a12", 0, 1, 1),
    ("a12", -1, 1, 2),
    ("a13", 0, 1, 1),
    ("a23", 0, 1, 0),
])
def test_restriction_kernel(request, fixture, lo, hi, expected):
    report = check_restriction(request.getfixturevalue(fixture), lo, hi)
    assert report.details["kernel_dim"] == expected, f"Expected kernel {expected}, got {report.details}"
    assert report.passed and report.details["expected_kernel_dim"] == expected


def test_run_suite_dispatch(a12):
    assert "spanning" in SUITES
    assert run_suite(a12, "end", 0, 1, SETTINGS).check == "end"
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite(a12, "nothing", 0, 1, SETTINGS)
    with pytest.raises(ValueError, match="needs r < N"):
        run_suite(PathAlgebra(make_arn(2, 2), 32003), "end", 0, 1, SETTINGS)


def test_catalog_objects_are_distinct(algebra):
    report = check_catalog(algebra, 0, 1)
    assert report.passed, f"catalog witnesses: {report.witnesses[:3]}"


def test_cones_of_top_stalk_inclusions(algebra):
    report = check_cones(algebra, 0, 1)
    assert report.passed, f"cone witnesses: {report.witnesses[:3]}"
    assert report.details["objects"], "the window has non-stalk objects"


def test_orbit_window(algebra):
    report = check_orbit_window(algebra, 0, 1)
    assert report.passed, f"orbit witnesses: {report.witnesses[:3]}"


def test_reports_are_reproducible():
    first = check_rigidity(PathAlgebra(make_arn(1, 2), 32003), 0, 1).to_json()
    second = check_rigidity(PathAlgebra(make_arn(1, 2), 32003), 0, 1).to_json()
    assert dumps(first) == dumps(second)
