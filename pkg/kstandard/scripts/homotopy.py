#!/usr/bin/env python3
"""
Morphism spaces in the homotopy category K^b(proj A).

A graded map X -> Y of degree k is a vector over the variables (n, s, t, path):
one coordinate for every path-basis element of e_u A e_v, where u is summand s of
X^n and v is summand t of Y^{n+k}. The differential

    D(g) = d_Y∘g - (-1)^k g∘d_X

sends degree-k maps to degree-(k+1) maps. Chain maps are ker D_0, null-homotopic
maps are im D_{-1}, and Hom_K(X, Y) is their quotient.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import (
    ChainMap,
    InvalidComplexError,
    ProjComplex,
    compose,
    cone,
    graded_map,
    identity,
    linear_combination,
    zero_block,
)
from .exactlin import (
    column_space,
    independent_columns,
    in_span,
    inv,
    inverse,
    kernel,
    matmul,
    rank,
)
from .pathalg import NotComposableError, Path, PathAlgebra

logger = logging.getLogger(__name__)

__all__ = [
    "GradedLayout", "HomSpace", "EndFrame", "differential_matrix", "chain_maps",
    "null_homotopics", "hom_kb", "reduce", "representative", "compose",
    "is_homotopy_equivalence", "endomorphism_frame", "is_indecomposable",
    "hom_dim_oracle", "is_isomorphic",
]

Variable = Tuple[int, int, int, Path]

# entries kept by the hom_kb and endomorphism_frame caches
HOM_CACHE_SIZE = 8192


class GradedLayout:
    """Coordinates of the degree-k graded maps X -> Y."""

    def __init__(self, alg: PathAlgebra, x: ProjComplex, y: ProjComplex, degree: int = 0, reverse: bool = False):
        self.alg = alg
        self.domain = x
        self.codomain = y
        self.degree = degree
        variables: List[Variable] = []
        for n in x.degrees():
            cols = y.term(n + degree)
            for s, u in enumerate(x.term(n)):
                for t, v in enumerate(cols):
                    for path in alg.basis.paths_between(v, u):
                        variables.append((n, s, t, path))
        if reverse:
            variables.reverse()
        self.variables: Tuple[Variable, ...] = tuple(variables)
        self.index: Dict[Variable, int] = {var: i for i, var in enumerate(self.variables)}

    def __len__(self) -> int:
        return len(self.variables)

    def vectorize(self, f: ChainMap) -> np.ndarray:
        if (f.domain, f.codomain, f.degree) != (self.domain, self.codomain, self.degree):
            raise NotComposableError("graded map does not live in this layout")
        v = np.zeros(len(self), dtype=np.int64)
        for n, block in f.components:
            for s, row in enumerate(block):
                for t, entry in enumerate(row):
                    for path, coeff in entry.terms:
                        v[self.index[(n, s, t, path)]] = coeff
        return v

    def materialize(self, v: np.ndarray) -> ChainMap:
        x, y, k = self.domain, self.codomain, self.degree
        p = self.alg.prime
        entries: Dict[Tuple[int, int, int], list] = {}
        for i, (n, s, t, path) in enumerate(self.variables):
            c = int(v[i]) % p
            if c:
                entries.setdefault((n, s, t), []).append((path, c))
        comps = {}
        for n in {key[0] for key in entries}:
            rows, cols = x.term(n), y.term(n + k)
            block = [list(r) for r in zero_block(self.alg, rows, cols)]
            for (m, s, t), terms in entries.items():
                if m == n:
                    block[s][t] = self.alg.from_terms(cols[t], rows[s], terms)
            comps[n] = tuple(tuple(r) for r in block)
        return graded_map(self.alg, x, y, comps, k)


def differential_matrix(alg: PathAlgebra, x: ProjComplex, y: ProjComplex, degree: int,
                        reverse: bool = False) -> Tuple[np.ndarray, GradedLayout, GradedLayout]:
    """Matrix of D on degree-`degree` maps, with its source and target layouts."""
    source = GradedLayout(alg, x, y, degree, reverse)
    target = GradedLayout(alg, x, y, degree + 1, reverse)
    p = alg.prime
    sign = -1 if degree % 2 else 1
    m = np.zeros((len(target), len(source)), dtype=np.int64)
    for col, (n, s, t, path) in enumerate(source.variables):
        e = alg.element(path)
        d_y = y.diff(n + degree)
        if d_y:
            for t2 in range(len(y.term(n + degree + 1))):
                for q, c in alg.multiply(e, d_y[t][t2]).terms:
                    row = target.index[(n, s, t2, q)]
                    m[row, col] = (m[row, col] + c) % p
        d_x = x.diff(n - 1)
        if d_x:
            for s2 in range(len(x.term(n - 1))):
                for q, c in alg.multiply(d_x[s2][s], e).terms:
                    row = target.index[(n - 1, s2, t, q)]
                    m[row, col] = (m[row, col] - sign * c) % p
    return m, source, target


def chain_maps(alg: PathAlgebra, x: ProjComplex, y: ProjComplex) -> List[ChainMap]:
    """Basis of all chain maps X -> Y."""
    d0, layout, _ = differential_matrix(alg, x, y, 0)
    if not len(layout):
        return []
    basis = kernel(d0, alg.prime)
    return [layout.materialize(basis[:, j]) for j in range(basis.shape[1])]


def null_homotopics(alg: PathAlgebra, x: ProjComplex, y: ProjComplex) -> List[ChainMap]:
    """Basis of {d_Y s + s d_X : s of degree -1}."""
    d_minus, _, layout = differential_matrix(alg, x, y, -1)
    if not len(layout) or d_minus.size == 0:
        return []
    basis = column_space(d_minus, alg.prime)
    return [layout.materialize(basis[:, j]) for j in range(basis.shape[1])]


@dataclass(frozen=True, eq=False)
class HomSpace:
    """
    Hom_K(domain, codomain) with a fixed quotient basis.

    `frame` holds a basis of the null-homotopic maps (first `homotopy_dim` columns)
    followed by the chain-map representatives of `basis`; `solver` inverts the
    frame on the rows listed in `solver_rows`.
    """

    alg: PathAlgebra
    domain: ProjComplex
    codomain: ProjComplex
    basis: Tuple[ChainMap, ...]
    homotopy_dim: int
    chain_dim: int
    layout: GradedLayout
    frame: np.ndarray
    solver_rows: Tuple[int, ...]
    solver: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the class of f in `basis`."""
        p = self.alg.prime
        v = self.layout.vectorize(f)
        if self.frame.shape[1] == 0:
            if v.any():
                raise InvalidComplexError("map is not a chain map")
            return np.zeros(0, dtype=np.int64)
        x = matmul(self.solver, v[list(self.solver_rows)], p)
        if not np.array_equal(matmul(self.frame, x, p), v):
            raise InvalidComplexError("map is not a chain map")
        return x[self.homotopy_dim:]

    def representative(self, coords: Sequence[int]) -> ChainMap:
        return linear_combination(self.alg, self.basis, coords, self.domain, self.codomain)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "homotopy_dim": self.homotopy_dim,
            "chain_dim": self.chain_dim,
            "basis": [[int(c) for c in self.layout.vectorize(f)] for f in self.basis],
            "variables": [
                {"n": n, "s": s, "t": t, "path": path.to_json()} for n, s, t, path in self.layout.variables
            ],
        }


@lru_cache(maxsize=HOM_CACHE_SIZE)
def hom_kb(alg: PathAlgebra, x: ProjComplex, y: ProjComplex) -> HomSpace:
    p = alg.prime
    d0, layout, _ = differential_matrix(alg, x, y, 0)
    if not len(layout):
        return HomSpace(alg, x, y, (), 0, 0, layout, np.zeros((0, 0), dtype=np.int64), (), np.zeros((0, 0), dtype=np.int64))
    cycles = kernel(d0, p)
    d_minus, _, _ = differential_matrix(alg, x, y, -1)
    nb = d_minus.shape[1]
    stacked = np.concatenate([d_minus, cycles], axis=1)
    pivots = independent_columns(stacked, p)
    boundary_cols = [j for j in pivots if j < nb]
    cycle_cols = [j - nb for j in pivots if j >= nb]
    if len(boundary_cols) + len(cycle_cols) != cycles.shape[1]:
        raise InvalidComplexError("null-homotopic maps are not all chain maps; check d∘d = 0")
    frame = np.concatenate([d_minus[:, boundary_cols], cycles[:, cycle_cols]], axis=1)
    if frame.shape[1]:
        rows = tuple(independent_columns(frame.T, p))
        solver = inverse(frame[list(rows)], p)
    else:
        rows, solver = (), np.zeros((0, 0), dtype=np.int64)
    basis = tuple(layout.materialize(cycles[:, j]) for j in cycle_cols)
    logger.debug(
        f"Hom_K: {len(layout)} variables, chain maps {cycles.shape[1]}, "
        f"null-homotopic {len(boundary_cols)}, dim {len(basis)}"
    )
    return HomSpace(alg, x, y, basis, len(boundary_cols), cycles.shape[1], layout, frame, rows, solver)


def reduce(f: ChainMap, space: HomSpace) -> np.ndarray:
    return space.reduce(f)


def representative(space: HomSpace, coords: Sequence[int]) -> ChainMap:
    return space.representative(coords)


def is_homotopy_equivalence(alg: PathAlgebra, f: ChainMap) -> bool:
    """True iff cone(f) is contractible, i.e. Id of the cone is null-homotopic."""
    c, _, _ = cone(alg, f)
    if c.is_zero:
        return True
    return hom_kb(alg, c, c).dim == 0


@dataclass(frozen=True, eq=False)
class EndFrame:
    """End_K(X) with structure constants, the identity class and a radical basis (columns)."""

    space: HomSpace
    structure: np.ndarray
    identity: np.ndarray
    radical: np.ndarray
    local: bool

    @property
    def dim(self) -> int:
        return self.space.dim

    def left(self, a: np.ndarray) -> np.ndarray:
        """Matrix of b ↦ a∘b in basis coordinates."""
        p = self.space.alg.prime
        return np.mod(np.tensordot(np.mod(a, p), self.structure, axes=(0, 0)), p).T.copy()

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return matmul(self.left(a), np.mod(b, self.space.alg.prime), self.space.alg.prime)


def _is_nilpotent(m: np.ndarray, p: int) -> bool:
    power = np.mod(m, p)
    for _ in range(m.shape[0]):
        if not power.any():
            return True
        power = matmul(power, m, p)
    return not power.any()


def _eigenvalue(m: np.ndarray, p: int) -> Optional[int]:
    """The single eigenvalue of a scalar-plus-nilpotent matrix, if it is one."""
    k = m.shape[0]
    if k % p:
        lam = int(np.trace(m)) * inv(k, p) % p
        candidates = [lam]
    else:
        candidates = range(p)
    for lam in candidates:
        if _is_nilpotent(np.mod(m - lam * np.eye(k, dtype=np.int64), p), p):
            return lam
    return None


@lru_cache(maxsize=HOM_CACHE_SIZE)
def endomorphism_frame(alg: PathAlgebra, x: ProjComplex) -> EndFrame:
    p = alg.prime
    space = hom_kb(alg, x, x)
    k = space.dim
    structure = np.zeros((k, k, k), dtype=np.int64)
    for i, a in enumerate(space.basis):
        for j, b in enumerate(space.basis):
            structure[i, j] = space.reduce(compose(alg, a, b))
    if k == 0:
        return EndFrame(space, structure, np.zeros(0, dtype=np.int64), np.zeros((0, 0), dtype=np.int64), False)
    ident = space.reduce(identity(alg, x))
    frame = EndFrame(space, structure, ident, np.zeros((k, 0), dtype=np.int64), False)

    nilpotent_parts = []
    for j in range(k):
        unit = np.zeros(k, dtype=np.int64)
        unit[j] = 1
        lam = _eigenvalue(frame.left(unit), p)
        if lam is None:
            logger.debug(f"End_K: basis element {j} is not scalar plus nilpotent")
            return frame
        nilpotent_parts.append(np.mod(unit - lam * ident, p))
    radical = column_space(np.stack(nilpotent_parts, axis=1), p)
    if radical.shape[1] != k - 1 or in_span(radical, ident, p):
        return EndFrame(space, structure, ident, radical, False)

    # the candidate must be a two-sided ideal whose powers vanish
    for a in range(radical.shape[1]):
        for b in range(radical.shape[1]):
            if not in_span(radical, frame.product(radical[:, a], radical[:, b]), p):
                return EndFrame(space, structure, ident, radical, False)
    power = radical
    for _ in range(k):
        if power.shape[1] == 0:
            break
        products = [frame.product(radical[:, a], power[:, b])
                    for a in range(radical.shape[1]) for b in range(power.shape[1])]
        power = column_space(np.stack(products, axis=1), p) if products else power[:, :0]
    return EndFrame(space, structure, ident, radical, power.shape[1] == 0)


def is_indecomposable(alg: PathAlgebra, x: ProjComplex) -> bool:
    """True iff End_K(X) is local with residue field F_p."""
    return endomorphism_frame(alg, x).local


def hom_dim_oracle(alg: PathAlgebra, x: ProjComplex, y: ProjComplex) -> int:
    """dim Hom_K(X, Y) from ranks alone, with the variables in reverse order."""
    p = alg.prime
    d0, layout, _ = differential_matrix(alg, x, y, 0, reverse=True)
    if not len(layout):
        return 0
    d_minus, _, _ = differential_matrix(alg, x, y, -1, reverse=True)
    return len(layout) - rank(d0, p) - rank(d_minus, p)


def is_isomorphic(alg: PathAlgebra, x: ProjComplex, y: ProjComplex,
                  samples: int = 64, seed: int = 0) -> Optional[bool]:
    """
    Decide X ≅ Y in K^b.

    False comes with a certificate: a zero Hom, or Id_X outside the span of the
    composites Hom(Y,X)∘Hom(X,Y). True comes from a homotopy equivalence found among
    the basis classes and `samples` random classes. None means neither was found.
    """
    p = alg.prime
    end_x, end_y = hom_kb(alg, x, x), hom_kb(alg, y, y)
    if end_x.dim == 0 or end_y.dim == 0:
        return end_x.dim == end_y.dim
    forward, backward = hom_kb(alg, x, y), hom_kb(alg, y, x)
    if forward.dim == 0 or backward.dim == 0:
        return False
    for space, first, second, end in ((end_x, forward, backward, x), (end_y, backward, forward, y)):
        composites = [space.reduce(compose(alg, g, f)) for f in first.basis for g in second.basis]
        if not in_span(np.stack(composites, axis=1), space.reduce(identity(alg, end)), p):
            return False

    if forward.dim == 1:
        return is_homotopy_equivalence(alg, forward.basis[0])
    for f in forward.basis:
        if is_homotopy_equivalence(alg, f):
            return True
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        coords = rng.integers(0, p, size=forward.dim)
        if coords.any() and is_homotopy_equivalence(alg, forward.representative(coords)):
            return True
    logger.info(f"isomorphism search inconclusive after {samples} samples")
    return None
