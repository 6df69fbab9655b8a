#!/usr/bin/env python3
"""
Path algebras of quivers with quadratic monomial relations, in particular the
Nakayama algebras A(r, N) on the cyclic quiver 0 -> 1 -> ... -> N-1 -> 0.

Conventions
-----------
* Paths are written right to left: ``Path(arrows=(1, 0))`` is alpha_1 alpha_0,
  alpha_0 applied first.
* A forbidden pair ``(later, earlier)`` means the length-2 path ``later earlier``
  is zero.
* An element x of e_i A e_j (walks from j to i) is an ``AlgElem`` with
  ``start=j`` and ``end=i``. It is read as the module map Ae_i -> Ae_j sending
  e_i to x. For f: Ae_i -> Ae_j given by x and g: Ae_j -> Ae_l given by y the
  composite g∘f is ``multiply(x, y)`` = x·y.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from .exactlin import DEFAULT_PRIME, check_prime, kernel, solve

logger = logging.getLogger(__name__)


class NotComposableError(ValueError):
    """Raised when idempotents (or complexes) do not match for a composition."""


@dataclass(frozen=True)
class Arrow:
    id: int
    source: int
    target: int

    @property
    def label(self) -> str:
        return f"a{self.id}"


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: Tuple[Arrow, ...]

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.id)
        return graph

    def arrows_from(self, vertex: int) -> List[Arrow]:
        return [self.arrow(key) for _, _, key in sorted(self.graph.out_edges(vertex, keys=True))]

    def arrow(self, arrow_id: int) -> Arrow:
        return self.arrows[arrow_id]


@dataclass(frozen=True)
class MonomialPresentation:
    quiver: Quiver
    forbidden: frozenset
    r: int
    N: int

    @property
    def projective_injective(self) -> Tuple[int, ...]:
        return tuple(range(self.r))

    @property
    def q_vertices(self) -> Tuple[int, ...]:
        """Vertices a with Q_a = Ae_a not projective-injective."""
        return tuple(range(self.r, self.N))

    @property
    def suites_supported(self) -> bool:
        return self.r < self.N

    @property
    def name(self) -> str:
        return f"A({self.r},{self.N})"


@dataclass(frozen=True, order=True)
class Path:
    source: int
    target: int
    arrows: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_idempotent(self) -> bool:
        return not self.arrows

    @property
    def word(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(f"a{a}" for a in self.arrows)

    def sort_key(self):
        return (self.source, len(self.arrows), self.target, self.arrows)

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "arrows": list(self.arrows)}

    @classmethod
    def from_json(cls, data: dict) -> "Path":
        return cls(int(data["source"]), int(data["target"]), tuple(int(a) for a in data["arrows"]))


@dataclass(frozen=True)
class AlgElem:
    """Sparse element of e_end A e_start: sorted (path, coefficient) pairs, coefficients nonzero."""

    start: int
    end: int
    terms: Tuple[Tuple[Path, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, path: Path) -> int:
        for q, c in self.terms:
            if q == path:
                return c
        return 0

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for path, coeff in self.terms:
            parts.append(path.word if coeff == 1 else f"{coeff}*{path.word}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "terms": [{"path": p.to_json(), "coeff": c} for p, c in self.terms],
        }


@dataclass(frozen=True)
class PathBasis:
    paths: Tuple[Path, ...]

    @cached_property
    def index(self) -> Dict[Path, int]:
        return {p: i for i, p in enumerate(self.paths)}

    @cached_property
    def between(self) -> Dict[Tuple[int, int], Tuple[Path, ...]]:
        table: Dict[Tuple[int, int], list] = {}
        for p in self.paths:
            table.setdefault((p.source, p.target), []).append(p)
        return {k: tuple(v) for k, v in table.items()}

    @property
    def dim(self) -> int:
        return len(self.paths)

    def paths_between(self, source: int, target: int) -> Tuple[Path, ...]:
        return self.between.get((source, target), ())

    def dim_projective(self, vertex: int) -> int:
        """dim Ae_v: paths starting at v."""
        return sum(1 for p in self.paths if p.source == vertex)

    def dim_right(self, vertex: int) -> int:
        """dim e_vA: paths ending at v."""
        return sum(1 for p in self.paths if p.target == vertex)


def make_arn(r: int, N: int) -> MonomialPresentation:
    """A(r, N): cyclic quiver alpha_i: i -> i+1 mod N, relations alpha_0 alpha_{N-1}, alpha_1 alpha_0, ..."""
    if not isinstance(r, int) or not isinstance(N, int):
        raise ValueError(f"✗ Error: r and N must be integers, got r={r!r}, N={N!r}")
    if r < 1:
        raise ValueError(f"✗ Error: invalid parameters r={r}, N={N}: need r >= 1")
    if N < r:
        raise ValueError(f"✗ Error: invalid parameters r={r}, N={N}: need N >= r")
    arrows = tuple(Arrow(i, i, (i + 1) % N) for i in range(N))
    forbidden = frozenset(((i % N), ((i - 1) % N)) for i in range(r))
    presentation = MonomialPresentation(Quiver(N, arrows), forbidden, r, N)
    if not presentation.suites_supported:
        logger.warning(f"{presentation.name}: verification suites unsupported (they need r < N)")
    return presentation


def path_basis(presentation: MonomialPresentation) -> PathBasis:
    """All walks avoiding the forbidden pairs, by depth-first search from every vertex."""
    quiver = presentation.quiver
    bound = quiver.vertex_count * max(1, len(quiver.arrows)) + 1
    found = []
    for start in range(quiver.vertex_count):
        stack = [Path(start, start, ())]
        while stack:
            path = stack.pop()
            found.append(path)
            if len(path) > bound:
                raise ValueError(f"{presentation.name} is infinite-dimensional: walk of length {len(path)}")
            for arrow in quiver.arrows_from(path.target):
                if path.arrows and (arrow.id, path.arrows[0]) in presentation.forbidden:
                    continue
                stack.append(Path(start, arrow.target, (arrow.id,) + path.arrows))
    return PathBasis(tuple(sorted(found, key=Path.sort_key)))


class PathAlgebra:
    """A monomial path algebra over F_p with element arithmetic."""

    def __init__(self, presentation: MonomialPresentation, prime: int = DEFAULT_PRIME):
        self.presentation = presentation
        self.prime = check_prime(prime)
        self.basis = path_basis(presentation)
        self._table: Optional[Dict[Tuple[int, int], int]] = None
        logger.debug(f"{presentation.name} over F_{self.prime}: dim {self.basis.dim}")

    def __repr__(self) -> str:
        return f"PathAlgebra({self.presentation.name}, p={self.prime})"

    @property
    def r(self) -> int:
        return self.presentation.r

    @property
    def N(self) -> int:
        return self.presentation.N

    # -- paths ---------------------------------------------------------------

    def concat(self, outer: Path, inner: Path) -> Optional[Path]:
        """outer·inner (inner walked first), or None if it is zero."""
        if inner.target != outer.source:
            return None
        if outer.arrows and inner.arrows and (outer.arrows[-1], inner.arrows[0]) in self.presentation.forbidden:
            return None
        return Path(inner.source, outer.target, outer.arrows + inner.arrows)

    def shortest_path(self, start: int, end: int) -> Path:
        """The shortest nonzero path of positive length from start to end."""
        candidates = [p for p in self.basis.paths_between(start, end) if p.arrows]
        if not candidates:
            raise NotComposableError(f"no nonzero path of positive length from {start} to {end} in {self.presentation.name}")
        return min(candidates, key=len)

    # -- elements ------------------------------------------------------------

    def from_terms(self, start: int, end: int, terms: Iterable[Tuple[Path, int]]) -> AlgElem:
        acc: Dict[Path, int] = {}
        for path, coeff in terms:
            if path.source != start or path.target != end:
                raise NotComposableError(f"path {path.word} is not a walk from {start} to {end}")
            acc[path] = (acc.get(path, 0) + int(coeff)) % self.prime
        items = sorted(((p, c) for p, c in acc.items() if c), key=lambda pc: pc[0].sort_key())
        return AlgElem(start, end, tuple(items))

    def zero(self, start: int, end: int) -> AlgElem:
        return AlgElem(start, end, ())

    def idempotent(self, vertex: int) -> AlgElem:
        return AlgElem(vertex, vertex, ((Path(vertex, vertex, ()), 1),))

    def element(self, path: Path, coeff: int = 1) -> AlgElem:
        return self.from_terms(path.source, path.target, [(path, coeff)])

    def add(self, x: AlgElem, y: AlgElem) -> AlgElem:
        if (x.start, x.end) != (y.start, y.end):
            raise NotComposableError(f"cannot add elements of e{x.end}Ae{x.start} and e{y.end}Ae{y.start}")
        return self.from_terms(x.start, x.end, list(x.terms) + list(y.terms))

    def scale(self, x: AlgElem, c: int) -> AlgElem:
        return self.from_terms(x.start, x.end, [(p, v * c) for p, v in x.terms])

    def neg(self, x: AlgElem) -> AlgElem:
        return self.scale(x, -1)

    def sub(self, x: AlgElem, y: AlgElem) -> AlgElem:
        return self.add(x, self.neg(y))

    def multiply(self, x: AlgElem, y: AlgElem) -> AlgElem:
        """x·y for x in e_iAe_j and y in e_jAe_l; the composite of the maps x then y."""
        if x.start != y.end:
            raise NotComposableError(
                f"cannot multiply e{x.end}Ae{x.start} by e{y.end}Ae{y.start}: idempotent mismatch"
            )
        terms = []
        for px, cx in x.terms:
            for py, cy in y.terms:
                q = self.concat(px, py)
                if q is not None:
                    terms.append((q, cx * cy))
        return self.from_terms(y.start, x.end, terms)

    def elem_from_json(self, data: dict) -> AlgElem:
        return self.from_terms(
            int(data["start"]), int(data["end"]),
            [(Path.from_json(t["path"]), int(t["coeff"])) for t in data["terms"]],
        )

    # -- global elements (dense vectors over the whole path basis) ----------

    @property
    def table(self) -> Dict[Tuple[int, int], int]:
        if self._table is None:
            index = self.basis.index
            table = {}
            for i, p in enumerate(self.basis.paths):
                for j, q in enumerate(self.basis.paths):
                    pq = self.concat(p, q)
                    if pq is not None:
                        table[(i, j)] = index[pq]
            self._table = table
        return self._table

    def global_vector(self, x: AlgElem) -> np.ndarray:
        v = np.zeros(self.basis.dim, dtype=np.int64)
        for path, coeff in x.terms:
            v[self.basis.index[path]] = coeff
        return v

    def one(self) -> np.ndarray:
        v = np.zeros(self.basis.dim, dtype=np.int64)
        for vertex in range(self.N):
            v[self.basis.index[Path(vertex, vertex, ())]] = 1
        return v

    def multiply_global(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.basis.dim, dtype=np.int64)
        for (i, j), k in self.table.items():
            if u[i] and v[j]:
                out[k] = (out[k] + int(u[i]) * int(v[j])) % self.prime
        return out

    def left_multiplication(self, u: np.ndarray) -> np.ndarray:
        """Matrix of x ↦ u·x on the path basis."""
        d = self.basis.dim
        m = np.zeros((d, d), dtype=np.int64)
        for (i, j), k in self.table.items():
            if u[i]:
                m[k, j] = (m[k, j] + int(u[i])) % self.prime
        return m

    def inverse_global(self, u: np.ndarray) -> np.ndarray:
        found = solve(self.left_multiplication(u), self.one(), self.prime)
        if found is None:
            raise ValueError("✗ Error: element is not invertible in A")
        x = found[0]
        if not np.array_equal(self.multiply_global(x, u), self.one()):
            raise ValueError("✗ Error: element has no two-sided inverse in A")
        return x

    def is_radical(self, u: np.ndarray) -> bool:
        return not any(u[self.basis.index[Path(v, v, ())]] % self.prime for v in range(self.N))

    def describe_global(self, u: np.ndarray) -> str:
        parts = []
        for i, c in enumerate(u):
            if c % self.prime:
                word = self.basis.paths[i].word
                parts.append(word if c % self.prime == 1 else f"{int(c) % self.prime}*{word}")
        return " + ".join(parts) if parts else "0"


def center_basis(algebra: PathAlgebra) -> List[np.ndarray]:
    """
    Basis of Z(A) as dense vectors: the identity first, then a basis of Z(A) ∩ rad A
    when the two together span the centre.
    """
    d = algebra.basis.dim
    p = algebra.prime
    blocks = []
    for a in range(d):
        block = np.zeros((d, d), dtype=np.int64)
        for (i, j), k in algebra.table.items():
            if j == a:
                block[k, i] += 1
            if i == a:
                block[k, j] -= 1
        blocks.append(np.mod(block, p))
    constraints = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, d), dtype=np.int64)
    full = kernel(constraints, p)

    idempotent_rows = np.zeros((algebra.N, d), dtype=np.int64)
    for v in range(algebra.N):
        idempotent_rows[v, algebra.basis.index[Path(v, v, ())]] = 1
    radical_part = kernel(np.concatenate([constraints, idempotent_rows], axis=0), p)

    if radical_part.shape[1] + 1 == full.shape[1]:
        return [algebra.one()] + [radical_part[:, k].copy() for k in range(radical_part.shape[1])]
    return [full[:, k].copy() for k in range(full.shape[1])]


def presentation_to_json(presentation: MonomialPresentation) -> dict:
    return {
        "name": presentation.name,
        "r": presentation.r,
        "N": presentation.N,
        "vertices": list(range(presentation.N)),
        "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in presentation.quiver.arrows],
        "forbidden": [list(pair) for pair in sorted(presentation.forbidden)],
        "projective_injective": list(presentation.projective_injective),
    }
