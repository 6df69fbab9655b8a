import numpy as np
import pytest
from hypothesis import given, settings, strategies

from kstandard.scripts.exactlin import (
    check_prime,
    in_span,
    inverse,
    kernel,
    matmul,
    normalize_ray,
    rank,
    rref,
    solve,
)

P = 7


def matrices(rows=4, cols=4):
    return strategies.lists(
        strategies.lists(strategies.integers(0, P - 1), min_size=cols, max_size=cols),
        min_size=rows, max_size=rows,
    ).map(lambda m: np.array(m, dtype=np.int64))


def test_rref_small_example():
    reduced, pivots = rref(np.array([[2, 4], [1, 2]]), 5)
    assert pivots == [0], f"Expected one pivot in column 0, got {pivots}"
    assert reduced.tolist() == [[1, 2], [0, 0]], f"Unexpected rref {reduced.tolist()}"


def test_kernel_of_single_row():
    basis = kernel(np.array([[1, 1]]), 7)
    assert basis.shape == (2, 1), f"Expected one kernel vector, got shape {basis.shape}"
    assert basis[:, 0].tolist() == [6, 1], f"Unexpected kernel vector {basis[:, 0].tolist()}"


def test_solve_inconsistent_returns_none():
    assert solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 5) is None


def test_inverse_rejects_singular_matrix():
    with pytest.raises(ZeroDivisionError):
        inverse(np.array([[1, 2], [2, 4]]), 5)


def test_check_prime_rejects_composites():
    with pytest.raises(ValueError, match="must be prime"):
        check_prime(15)
    assert check_prime(32003) == 32003


def test_normalize_ray_is_scale_invariant():
    v = np.array([0, 3, 5])
    assert normalize_ray(v, 7) == normalize_ray(4 * v, 7)
    assert normalize_ray(v, 7)[1] == 1


@given(strategies.data())
@settings(max_examples=40, deadline=None)
def test_rank_nullity(data):
    m = data.draw(matrices(3, 5))
    assert rank(m, P) + kernel(m, P).shape[1] == 5, "rank + nullity must equal the column count"
    assert not matmul(m, kernel(m, P), P).any(), "kernel vectors must be annihilated"


@given(strategies.data())
@settings(max_examples=40, deadline=None)
def test_solve_recovers_consistent_right_hand_sides(data):
    m = data.draw(matrices(4, 3))
    x = np.array(data.draw(strategies.lists(strategies.integers(0, P - 1), min_size=3, max_size=3)))
    b = matmul(m, x, P)
    found = solve(m, b, P)
    assert found is not None, "A consistent system must be solvable"
    assert np.array_equal(matmul(m, found[0], P), b), "Particular solution does not solve the system"
    assert in_span(m, b, P)


def test_solve_returns_particular_solution_and_kernel():
    x, directions = solve(np.array([[1, 1]]), np.array([3]), 5)
    assert x.tolist() == [3, 0], f"Unexpected particular solution {x.tolist()}"
    assert directions.shape[1] == 1
