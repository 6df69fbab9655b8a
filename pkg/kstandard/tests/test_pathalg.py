import numpy as np
import pytest

from kstandard.scripts.pathalg import PathAlgebra, center_basis, make_arn, presentation_to_json


@pytest.mark.parametrize("r,N,expected", [(1, 2, 5), (2, 3, 7), (1, 1, 2)])
def test_algebra_dimension(r, N, expected):
    alg = PathAlgebra(make_arn(r, N), 32003)
    assert alg.basis.dim == expected, f"dim A({r},{N}) should be {expected}, got {alg.basis.dim}"


def test_make_arn_rejects_bad_parameters():
    with pytest.raises(ValueError, match="need N >= r"):
        make_arn(3, 2)
    with pytest.raises(ValueError, match="need r >= 1"):
        make_arn(0, 2)


def test_projective_injective_vertices(a23):
    assert a23.presentation.projective_injective == (0, 1)
    assert a23.presentation.q_vertices == (2,)


def test_one_is_a_unit(a12):
    one = a12.one()
    for z in center_basis(a12):
        assert np.array_equal(a12.multiply_global(one, z), z), "1·z must equal z"
        assert np.array_equal(a12.multiply_global(z, one), z), "z·1 must equal z"


def test_centre_dimension(a12, a13, a23):
    assert len(center_basis(a12)) == 2, "Z(A(1,2)) is spanned by 1 and the cycle at vertex 0"
    assert len(center_basis(a13)) == 2, "Z(A(1,3)) is spanned by 1 and the cycle at vertex 0"
    assert len(center_basis(a23)) == 1, "Z(A(2,3)) consists of the scalars"


def test_radical_centre_element_is_nilpotent(a12):
    z = center_basis(a12)[1]
    assert a12.is_radical(z)
    assert not a12.multiply_global(z, z).any(), "The radical central element squares to zero"


def test_presentation_json(a23):
    data = presentation_to_json(a23.presentation)
    assert data["r"] == 2 and data["N"] == 3
    assert len(data["arrows"]) == 3
    assert data["projective_injective"] == [0, 1]
