#!/usr/bin/env python3
"""
Bounded complexes of projective modules over a monomial path algebra.

A differential block d^n is a tuple of rows, one per summand of degree n; entry
(s, t) is the AlgElem of the map from summand s of degree n to summand t of
degree n+1. Composition of blocks is row-vector style: (first then second)
has entries sum_k multiply(first[s][k], second[k][t]).

Sign conventions: Σ(X)^n = X^{n+1}, d_{Σ(X)}^n = -d_X^{n+1}; Σ on chain maps
has no sign. cone(f)^n = X^{n+1} ⊕ Y^n; in the row convention its differential
block is [[-d_X^{n+1}, f^{n+1}], [0, d_Y^n]].
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

from .pathalg import AlgElem, NotComposableError, PathAlgebra

Block = Tuple[Tuple[AlgElem, ...], ...]
Vertices = Tuple[int, ...]


class InvalidComplexError(ValueError):
    """Raised for d∘d ≠ 0, a non-commuting square, or badly shaped blocks."""


@dataclass(frozen=True)
class ProjComplex:
    lo: int
    terms: Tuple[Vertices, ...] = ()
    differentials: Tuple[Block, ...] = ()

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.terms)

    def term(self, n: int) -> Vertices:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.lo]
        return ()

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def diff(self, n: int) -> Optional[Block]:
        """d^n, or None when it is zero for lack of terms."""
        if self.lo <= n < self.hi:
            return self.differentials[n - self.lo]
        return None

    def summand_count(self) -> int:
        return sum(len(t) for t in self.terms)

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        lines = []
        for n in self.degrees():
            names = " ⊕ ".join(f"P{v}" for v in self.term(n)) or "0"
            lines.append(f"  degree {n}: {names}")
            block = self.diff(n)
            if block:
                for s, row in enumerate(block):
                    for t, entry in enumerate(row):
                        if not entry.is_zero:
                            lines.append(f"    d[{s},{t}]: {entry.describe()}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "terms": [list(t) for t in self.terms],
            "differentials": [[[e.to_json() for e in row] for row in block] for block in self.differentials],
        }


@dataclass(frozen=True)
class ChainMap:
    """A graded map X -> Y of the given degree; component n maps X^n to Y^{n+degree}."""

    domain: ProjComplex
    codomain: ProjComplex
    components: Tuple[Tuple[int, Block], ...] = ()
    degree: int = 0

    @cached_property
    def _by_degree(self) -> Dict[int, Block]:
        return dict(self.components)

    def component(self, n: int) -> Optional[Block]:
        return self._by_degree.get(n)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for _, block in self.components for row in block for e in row)

    def describe(self) -> str:
        lines = []
        for n, block in self.components:
            for s, row in enumerate(block):
                for t, entry in enumerate(row):
                    if not entry.is_zero:
                        lines.append(f"  f^{n}[{s},{t}]: {entry.describe()}")
        return "\n".join(lines) if lines else "  0"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "components": [
                {"n": n, "block": [[e.to_json() for e in row] for row in block]} for n, block in self.components
            ],
        }


# -- blocks ---------------------------------------------------------------------

def zero_block(alg: PathAlgebra, rows: Vertices, cols: Vertices) -> Block:
    return tuple(tuple(alg.zero(v, u) for v in cols) for u in rows)


def compose_blocks(alg: PathAlgebra, first: Block, second: Block, rows: Vertices, cols: Vertices) -> Block:
    """Block of (first then second), rows × cols."""
    out = []
    for s, u in enumerate(rows):
        row = []
        for t, v in enumerate(cols):
            entry = alg.zero(v, u)
            for k in range(len(second)):
                entry = alg.add(entry, alg.multiply(first[s][k], second[k][t]))
            row.append(entry)
        out.append(tuple(row))
    return tuple(out)


def add_blocks(alg: PathAlgebra, a: Block, b: Block) -> Block:
    return tuple(tuple(alg.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale_block(alg: PathAlgebra, a: Block, c: int) -> Block:
    return tuple(tuple(alg.scale(x, c) for x in row) for row in a)


def block_is_zero(block: Optional[Block]) -> bool:
    return block is None or all(e.is_zero for row in block for e in row)


# -- complexes ------------------------------------------------------------------

def make_complex(alg: PathAlgebra, lo: int, terms: Sequence[Sequence[int]],
                 differentials: Sequence[Block] = ()) -> ProjComplex:
    """Build a complex, trimming empty degrees at both ends and filling missing blocks with zeros."""
    terms = [tuple(t) for t in terms]
    diffs = list(differentials) + [None] * max(0, len(terms) - 1 - len(differentials))
    while terms and not terms[0]:
        terms.pop(0)
        diffs = diffs[1:]
        lo += 1
    while terms and not terms[-1]:
        terms.pop()
        diffs = diffs[:len(terms) - 1] if terms else []
    if not terms:
        return ProjComplex(0, (), ())
    blocks = []
    for k in range(len(terms) - 1):
        block = diffs[k] if k < len(diffs) else None
        blocks.append(block if block is not None else zero_block(alg, terms[k], terms[k + 1]))
    return ProjComplex(lo, tuple(terms), tuple(blocks))


def zero_complex() -> ProjComplex:
    return ProjComplex(0, (), ())


def validate_complex(alg: PathAlgebra, x: ProjComplex) -> ProjComplex:
    for n in range(x.lo, x.hi):
        block = x.diff(n)
        rows, cols = x.term(n), x.term(n + 1)
        if len(block) != len(rows) or any(len(row) != len(cols) for row in block):
            raise InvalidComplexError(f"d^{n} has the wrong shape for {len(rows)}×{len(cols)} summands")
        for s, u in enumerate(rows):
            for t, v in enumerate(cols):
                if (block[s][t].start, block[s][t].end) != (v, u):
                    raise InvalidComplexError(f"d^{n}[{s},{t}] is not a map P{u} -> P{v}")
    for n in range(x.lo, x.hi - 1):
        square = compose_blocks(alg, x.diff(n), x.diff(n + 1), x.term(n), x.term(n + 2))
        if not block_is_zero(square):
            raise InvalidComplexError(f"d^{n + 1}∘d^{n} ≠ 0")
    return x


def support(x: ProjComplex) -> Optional[Tuple[int, int]]:
    """[least, greatest] degree with a nonzero term, or None for the zero complex."""
    nonzero = [n for n in x.degrees() if x.term(n)]
    if not nonzero:
        return None
    return nonzero[0], nonzero[-1]


def stalk(alg: PathAlgebra, vertex: int, n: int) -> ProjComplex:
    """Σ^n(P_vertex), concentrated in degree -n."""
    if not 0 <= vertex < alg.N:
        raise ValueError(f"✗ Error: vertex {vertex} outside 0..{alg.N - 1}")
    return ProjComplex(-n, ((vertex,),), ())


def shift(alg: PathAlgebra, x: ProjComplex, k: int) -> ProjComplex:
    """Σ^k X: degree n holds X^{n+k}, differential multiplied by (-1)^k."""
    if k == 0 or x.is_zero:
        return x
    sign = -1 if k % 2 else 1
    blocks = x.differentials if sign == 1 else tuple(scale_block(alg, b, -1) for b in x.differentials)
    return ProjComplex(x.lo - k, x.terms, blocks)


def direct_sum(alg: PathAlgebra, x: ProjComplex, y: ProjComplex):
    """X ⊕ Y with the canonical injections and projections (in_x, in_y, pr_x, pr_y)."""
    if x.is_zero and y.is_zero:
        z = zero_complex()
        return z, zero_map(alg, x, z), zero_map(alg, y, z), zero_map(alg, z, x), zero_map(alg, z, y)
    lo = min(c.lo for c in (x, y) if not c.is_zero)
    hi = max(c.hi for c in (x, y) if not c.is_zero)
    terms = [x.term(n) + y.term(n) for n in range(lo, hi + 1)]
    blocks = []
    for n in range(lo, hi):
        rows, cols = terms[n - lo], terms[n + 1 - lo]
        block = [list(r) for r in zero_block(alg, rows, cols)]
        for src, offset_r, offset_c in ((x, 0, 0), (y, len(x.term(n)), len(x.term(n + 1)))):
            d = src.diff(n)
            if d:
                for s, row in enumerate(d):
                    for t, e in enumerate(row):
                        block[s + offset_r][t + offset_c] = e
        blocks.append(tuple(tuple(r) for r in block))
    total = make_complex(alg, lo, terms, blocks)

    def selector(small: ProjComplex, offset_of, into: bool) -> ChainMap:
        comps = []
        for n in total.degrees():
            part, whole = small.term(n), total.term(n)
            if not part or not whole:
                continue
            off = offset_of(n)
            if into:
                block = [list(r) for r in zero_block(alg, part, whole)]
                for s, v in enumerate(part):
                    block[s][s + off] = alg.idempotent(v)
            else:
                block = [list(r) for r in zero_block(alg, whole, part)]
                for s, v in enumerate(part):
                    block[s + off][s] = alg.idempotent(v)
            comps.append((n, tuple(tuple(r) for r in block)))
        if into:
            return ChainMap(small, total, tuple(comps))
        return ChainMap(total, small, tuple(comps))

    def no_offset(n: int) -> int:
        return 0

    def after_x(n: int) -> int:
        return len(x.term(n))

    return (total, selector(x, no_offset, True), selector(y, after_x, True),
            selector(x, no_offset, False), selector(y, after_x, False))


# -- chain maps -----------------------------------------------------------------

def graded_map(alg: PathAlgebra, domain: ProjComplex, codomain: ProjComplex,
               components: Dict[int, Block], degree: int = 0) -> ChainMap:
    """Canonical form: one block for every degree where both sides are nonzero."""
    comps = []
    for n in domain.degrees():
        rows, cols = domain.term(n), codomain.term(n + degree)
        if not rows or not cols:
            continue
        block = components.get(n)
        comps.append((n, block if block is not None else zero_block(alg, rows, cols)))
    return ChainMap(domain, codomain, tuple(comps), degree)


def zero_map(alg: PathAlgebra, x: ProjComplex, y: ProjComplex, degree: int = 0) -> ChainMap:
    return graded_map(alg, x, y, {}, degree)


def identity(alg: PathAlgebra, x: ProjComplex) -> ChainMap:
    comps = {}
    for n in x.degrees():
        rows = x.term(n)
        if rows:
            block = [list(r) for r in zero_block(alg, rows, rows)]
            for s, v in enumerate(rows):
                block[s][s] = alg.idempotent(v)
            comps[n] = tuple(tuple(r) for r in block)
    return graded_map(alg, x, x, comps)


def diagonal_map(alg: PathAlgebra, x: ProjComplex, y: ProjComplex, signs: Dict[int, int]) -> ChainMap:
    """Map between complexes with equal terms, sign·Id in each degree (signs default to 1)."""
    comps = {}
    for n in x.degrees():
        rows = x.term(n)
        if rows and rows == y.term(n):
            block = [list(r) for r in zero_block(alg, rows, rows)]
            for s, v in enumerate(rows):
                block[s][s] = alg.scale(alg.idempotent(v), signs.get(n, 1))
            comps[n] = tuple(tuple(r) for r in block)
    return graded_map(alg, x, y, comps)


def add_maps(alg: PathAlgebra, f: ChainMap, g: ChainMap) -> ChainMap:
    if (f.domain, f.codomain, f.degree) != (g.domain, g.codomain, g.degree):
        raise NotComposableError("cannot add maps with different domains, codomains or degrees")
    comps = {n: add_blocks(alg, block, g.component(n)) for n, block in f.components}
    return graded_map(alg, f.domain, f.codomain, comps, f.degree)


def scale_map(alg: PathAlgebra, f: ChainMap, c: int) -> ChainMap:
    comps = {n: scale_block(alg, block, c) for n, block in f.components}
    return graded_map(alg, f.domain, f.codomain, comps, f.degree)


def linear_combination(alg: PathAlgebra, maps: Sequence[ChainMap], coeffs: Sequence[int],
                       domain: ProjComplex, codomain: ProjComplex) -> ChainMap:
    total = zero_map(alg, domain, codomain)
    for f, c in zip(maps, coeffs):
        if int(c) % alg.prime:
            total = add_maps(alg, total, scale_map(alg, f, int(c)))
    return total


def compose(alg: PathAlgebra, g: ChainMap, f: ChainMap) -> ChainMap:
    """g∘f (f applied first)."""
    if f.codomain != g.domain:
        raise NotComposableError("codomain of the first map is not the domain of the second")
    degree = f.degree + g.degree
    comps = {}
    for n, fb in f.components:
        gb = g.component(n + f.degree)
        if gb is None:
            continue
        comps[n] = compose_blocks(alg, fb, gb, f.domain.term(n), g.codomain.term(n + degree))
    return graded_map(alg, f.domain, g.codomain, comps, degree)


def validate_chain_map(alg: PathAlgebra, f: ChainMap) -> ChainMap:
    """Check f^{n+1}∘d_X^n = d_Y^n∘f^n in every degree."""
    x, y = f.domain, f.codomain
    if f.degree != 0:
        raise InvalidComplexError("only degree-0 maps are chain maps")
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    for n in range(lo - 1, hi + 1):
        rows, cols = x.term(n), y.term(n + 1)
        if not rows or not cols:
            continue
        left = zero_block(alg, rows, cols)
        if x.diff(n) is not None and f.component(n + 1) is not None:
            left = compose_blocks(alg, x.diff(n), f.component(n + 1), rows, cols)
        right = zero_block(alg, rows, cols)
        if f.component(n) is not None and y.diff(n) is not None:
            right = compose_blocks(alg, f.component(n), y.diff(n), rows, cols)
        if left != right:
            raise InvalidComplexError(f"square at degree {n} -> {n + 1} does not commute")
    return f


def shift_map(alg: PathAlgebra, f: ChainMap, k: int) -> ChainMap:
    """Σ^k f: component n is f^{n+k}."""
    comps = {n - k: block for n, block in f.components}
    return graded_map(alg, shift(alg, f.domain, k), shift(alg, f.codomain, k), comps, f.degree)


def cone(alg: PathAlgebra, f: ChainMap):
    """(C, inc: Y -> C, proj: C -> ΣX) for f: X -> Y."""
    x, y = f.domain, f.codomain
    sx = shift(alg, x, 1)
    if x.is_zero and y.is_zero:
        z = zero_complex()
        return z, zero_map(alg, y, z), zero_map(alg, z, sx)
    bounds = [c for c in (sx, y) if not c.is_zero]
    lo = min(c.lo for c in bounds)
    hi = max(c.hi for c in bounds)
    terms = [x.term(n + 1) + y.term(n) for n in range(lo, hi + 1)]
    blocks = []
    for n in range(lo, hi):
        xa, ya = x.term(n + 1), y.term(n)
        xb, yb = x.term(n + 2), y.term(n + 1)
        block = [list(r) for r in zero_block(alg, xa + ya, xb + yb)]
        dx = x.diff(n + 1)
        if dx:
            for s in range(len(xa)):
                for t in range(len(xb)):
                    block[s][t] = alg.neg(dx[s][t])
        fn = f.component(n + 1)
        if fn:
            for s in range(len(xa)):
                for t in range(len(yb)):
                    block[s][len(xb) + t] = fn[s][t]
        dy = y.diff(n)
        if dy:
            for s in range(len(ya)):
                for t in range(len(yb)):
                    block[len(xa) + s][len(xb) + t] = dy[s][t]
        blocks.append(tuple(tuple(r) for r in block))
    c = make_complex(alg, lo, terms, blocks)

    inc_comps, proj_comps = {}, {}
    for n in c.degrees():
        xa, ya = x.term(n + 1), y.term(n)
        if ya:
            block = [list(r) for r in zero_block(alg, ya, xa + ya)]
            for s, v in enumerate(ya):
                block[s][len(xa) + s] = alg.idempotent(v)
            inc_comps[n] = tuple(tuple(r) for r in block)
        if xa:
            block = [list(r) for r in zero_block(alg, xa + ya, xa)]
            for s, v in enumerate(xa):
                block[s][s] = alg.idempotent(v)
            proj_comps[n] = tuple(tuple(r) for r in block)
    return c, graded_map(alg, y, c, inc_comps), graded_map(alg, c, sx, proj_comps)


# -- JSON -----------------------------------------------------------------------

def complex_from_json(alg: PathAlgebra, data: dict) -> ProjComplex:
    blocks = [
        tuple(tuple(alg.elem_from_json(e) for e in row) for row in block)
        for block in data["differentials"]
    ]
    return ProjComplex(int(data["lo"]), tuple(tuple(int(v) for v in t) for t in data["terms"]), tuple(blocks))


def chain_map_from_json(alg: PathAlgebra, data: dict) -> ChainMap:
    comps = tuple(
        (int(c["n"]), tuple(tuple(alg.elem_from_json(e) for e in row) for row in c["block"]))
        for c in data["components"]
    )
    return ChainMap(complex_from_json(alg, data["domain"]), complex_from_json(alg, data["codomain"]),
                    comps, int(data.get("degree", 0)))
