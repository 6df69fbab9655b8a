#!/usr/bin/env python3
"""
The indecomposable objects of K^b(proj A(r, N)) as catalog ids, their complexes,
the endomorphism Δ (r = 1) and the orbit isomorphisms Σ^k(Y) -> Y[shifted].

Vertices by degree (k runs over the support [m, n]):

    X(s,m,n)    P_{(s-(k-m)) mod r}
    L(m,n,a)    Q_a at m, then P_{(r-(k-m)) mod r}
    R(m,n,b)    P_{(n-k-1) mod r}, then Q_b at n
    B(m,n,a,b)  Q_a at m, P_{(r-(k-m)) mod r}, Q_b at n
    Z(m,a,b)    Q_a at m, Q_b at m+1

Every differential is the unnamed arrow between consecutive vertices.
"""

import logging
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .complexes import (
    ChainMap,
    ProjComplex,
    diagonal_map,
    graded_map,
    make_complex,
    shift,
    validate_complex,
)
from .pathalg import AlgElem, PathAlgebra

logger = logging.getLogger(__name__)

FAMILIES = "XLRBZ"


class MalformedIdError(ValueError):
    """An id violating its index constraints, or text that does not parse."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class CatalogId:
    family: str
    m: int
    n: int
    s: int = 0
    a: Optional[int] = None
    b: Optional[int] = None

    def sort_key(self):
        return (FAMILIES.index(self.family), self.m, self.n, self.s, self.a or 0, self.b or 0)

    @property
    def support(self) -> Tuple[int, int]:
        return self.m, self.n

    @property
    def is_stalk(self) -> bool:
        return self.m == self.n

    def __str__(self) -> str:
        if self.family == "X":
            prefix = f"s={self.s};" if self.s else ""
            return f"X[{prefix}{self.m},{self.n}]"
        if self.family == "L":
            return f"L[{self.m},{self.n};a={self.a}]"
        if self.family == "R":
            return f"R[{self.m},{self.n};b={self.b}]"
        if self.family == "B":
            return f"B[{self.m},{self.n};a={self.a},b={self.b}]"
        return f"Z[{self.m};a={self.a},b={self.b}]"

    def to_json(self) -> dict:
        data = {"family": self.family, "m": self.m, "n": self.n, "text": str(self)}
        if self.family == "X":
            data["s"] = self.s
        if self.a is not None:
            data["a"] = self.a
        if self.b is not None:
            data["b"] = self.b
        return data


# -- constructors ---------------------------------------------------------------

def X(m: int, n: int, s: int = 0) -> CatalogId:
    return CatalogId("X", m, n, s=s)


def L(m: int, n: int, a: int) -> CatalogId:
    return CatalogId("L", m, n, a=a)


def R(m: int, n: int, b: int) -> CatalogId:
    """R(m, m, b) is the stalk L(m, m, b)."""
    if m == n:
        return CatalogId("L", m, n, a=b)
    return CatalogId("R", m, n, b=b)


def B(m: int, n: int, a: int, b: int) -> CatalogId:
    return CatalogId("B", m, n, a=a, b=b)


def Z(m: int, a: int, b: int) -> CatalogId:
    return CatalogId("Z", m, m + 1, a=a, b=b)


def canonical(cid: CatalogId) -> CatalogId:
    if cid.family == "R" and cid.m == cid.n:
        return R(cid.m, cid.n, cid.b)
    return cid


def validate_id(cid: CatalogId, r: int, N: int) -> CatalogId:
    """Check the index constraints of A(r, N); return the canonical id."""
    def need(condition: bool, text: str):
        if not condition:
            raise MalformedIdError(f"{cid}: violates {text} for A({r},{N})")

    if cid.family not in FAMILIES:
        raise MalformedIdError(f"unknown family {cid.family!r}")
    need(cid.m <= cid.n, "m ≤ n")
    q_range = f"{r} ≤ index < {N}"
    if cid.family == "X":
        need(0 <= cid.s < r, f"0 ≤ s < {r}")
        need(cid.a is None and cid.b is None, "no Q indices on X")
    if cid.family in "LB":
        need(cid.a is not None and r <= cid.a < N, f"a: {q_range}")
    if cid.family in "RB":
        need(cid.b is not None and r <= cid.b < N, f"b: {q_range}")
    if cid.family == "L":
        need(cid.b is None, "no b index on L")
    if cid.family == "R":
        need(cid.a is None, "no a index on R")
    if cid.family == "R" and cid.m == cid.n:
        return validate_id(canonical(cid), r, N)
    if cid.family == "B":
        need(cid.m < cid.n - r, "m < n - r")
        need((cid.n - cid.m - 1) % r == 0, "r | (n - m - 1)")
    if cid.family == "Z":
        need(cid.n == cid.m + 1, "n = m + 1")
        need(cid.a is not None and cid.b is not None and r <= cid.b < cid.a < N, "r ≤ b < a < N")
    return cid


# -- text syntax ----------------------------------------------------------------

_ID_RE = re.compile(
    r"^(?P<family>[XLRBZ])\[(?:s=(?P<s>-?\d+);)?(?P<m>-?\d+)(?:,(?P<n>-?\d+))?"
    r"(?:;(?P<params>[ab]=-?\d+(?:,[ab]=-?\d+)*))?\]$"
)


def parse_id(text: str) -> CatalogId:
    """Parse `X[0,3]`, `X[s=1;0,3]`, `L[0,2;a=1]`, `R[0,2;b=1]`, `B[0,4;a=2,b=1]`, `Z[0;a=2,b=1]`."""
    text = text.strip()
    match = _ID_RE.match(text)
    if not match:
        bad = re.search(r"[^XLRBZsab\[\];,=\d\-]", text)
        raise MalformedIdError(f"cannot parse catalog id {text!r}", bad.start() if bad else len(text))
    family = match["family"]
    params: Dict[str, int] = {}
    if match["params"]:
        for item in match["params"].split(","):
            key, value = item.split("=")
            if key in params:
                raise MalformedIdError(f"duplicate parameter {key!r} in {text!r}", text.index(item))
            params[key] = int(value)
    m = int(match["m"])
    if family == "Z":
        if match["n"] is not None:
            raise MalformedIdError(f"Z takes a single degree: {text!r}", match.start("n"))
        n = m + 1
    else:
        if match["n"] is None:
            raise MalformedIdError(f"{family} needs a support m,n: {text!r}", match.end("m"))
        n = int(match["n"])
    s = int(match["s"]) if match["s"] is not None else 0
    if match["s"] is not None and family != "X":
        raise MalformedIdError(f"only X takes s=: {text!r}", match.start("s"))
    expected = {"X": set(), "L": {"a"}, "R": {"b"}, "B": {"a", "b"}, "Z": {"a", "b"}}[family]
    if set(params) != expected:
        raise MalformedIdError(f"{family} takes parameters {sorted(expected)}, got {sorted(params)} in {text!r}")
    return CatalogId(family, m, n, s=s, a=params.get("a"), b=params.get("b"))


# -- vertices and complexes -----------------------------------------------------

def vertex_at(cid: CatalogId, r: int, k: int) -> int:
    m, n = cid.support
    if not m <= k <= n:
        raise ValueError(f"degree {k} outside the support of {cid}")
    if cid.family == "X":
        return (cid.s - (k - m)) % r
    if cid.family in "LBZ" and k == m:
        return cid.a
    if cid.family in "RBZ" and k == n:
        return cid.b
    if cid.family == "R":
        return (n - k - 1) % r
    return (r - (k - m)) % r


def vertices(cid: CatalogId, r: int) -> List[int]:
    return [vertex_at(cid, r, k) for k in range(cid.m, cid.n + 1)]


def arrow(alg: PathAlgebra, u: int, v: int) -> AlgElem:
    """The unnamed arrow P_u -> P_v: the shortest nonzero path of positive length from v to u."""
    return alg.element(alg.shortest_path(v, u))


@lru_cache(maxsize=None)
def realize(alg: PathAlgebra, cid: CatalogId) -> ProjComplex:
    cid = validate_id(cid, alg.r, alg.N)
    verts = vertices(cid, alg.r)
    blocks = [((arrow(alg, u, v),),) for u, v in zip(verts, verts[1:])]
    return validate_complex(alg, make_complex(alg, cid.m, [(v,) for v in verts], blocks))


def enumerate_window(r: int, N: int, lo: int, hi: int) -> List[CatalogId]:
    """Every catalog id of A(r, N) with support inside [lo, hi], in a fixed order."""
    if lo > hi:
        return []
    q = range(r, N)
    found: List[CatalogId] = []
    for m in range(lo, hi + 1):
        for n in range(m, hi + 1):
            found.extend(X(m, n, s) for s in range(r))
            found.extend(L(m, n, a) for a in q)
            if m < n:
                found.extend(R(m, n, b) for b in q)
            if m < n - r and (n - m - 1) % r == 0:
                found.extend(B(m, n, a, b) for a in q for b in q)
        if m + 1 <= hi:
            found.extend(Z(m, a, b) for a in q for b in q if b < a)
    return sorted(found, key=CatalogId.sort_key)


# -- truncations and shifts -----------------------------------------------------

def stalk_id(vertex: int, k: int, r: int) -> CatalogId:
    """The catalog id of P_vertex concentrated in degree k."""
    return X(k, k, vertex) if vertex < r else L(k, k, vertex)


def top_stalk(cid: CatalogId, r: int) -> CatalogId:
    return stalk_id(vertex_at(cid, r, cid.n), cid.n, r)


def lower_truncation(cid: CatalogId, r: int, top: int) -> CatalogId:
    """The object keeping the degrees m..top (the target of the truncation projection)."""
    m, n = cid.support
    if not m <= top <= n:
        raise ValueError(f"truncation degree {top} outside the support of {cid}")
    if top == n:
        return cid
    if top == m:
        return stalk_id(vertex_at(cid, r, m), m, r)
    if cid.family in "XL":
        return replace(cid, n=top)
    if cid.family == "R":
        return X(m, top, vertex_at(cid, r, m))
    return L(m, top, cid.a)


def upper_truncation(cid: CatalogId, r: int, bottom: int) -> CatalogId:
    """The object keeping the degrees bottom..n (the source of the truncation inclusion)."""
    m, n = cid.support
    if not m <= bottom <= n:
        raise ValueError(f"truncation degree {bottom} outside the support of {cid}")
    if bottom == m:
        return cid
    if bottom == n:
        return stalk_id(vertex_at(cid, r, n), n, r)
    if cid.family in "XL":
        return X(bottom, n, vertex_at(cid, r, bottom))
    return R(bottom, n, cid.b)


def shift_id(cid: CatalogId, k: int) -> CatalogId:
    """The catalog id of Σ^k."""
    return replace(cid, m=cid.m - k, n=cid.n - k)


def orbit_iso(alg: PathAlgebra, cid: CatalogId, k: int = 1) -> ChainMap:
    """Σ^k(Y) -> Y shifted, with degree-p component (-1)^{kp}·Id."""
    source = shift(alg, realize(alg, cid), k)
    target = realize(alg, shift_id(cid, k))
    signs = {p: (-1) ** ((k * p) % 2) for p in target.degrees()}
    return diagonal_map(alg, source, target, signs)


def orbit_iso_inverse(alg: PathAlgebra, cid: CatalogId, k: int = 1) -> ChainMap:
    source = realize(alg, shift_id(cid, k))
    target = shift(alg, realize(alg, cid), k)
    signs = {p: (-1) ** ((k * p) % 2) for p in source.degrees()}
    return diagonal_map(alg, source, target, signs)


# -- r = 1 ----------------------------------------------------------------------

def _require_r1(alg: PathAlgebra, what: str):
    if alg.r != 1:
        raise ValueError(f"✗ Error: {what} is only defined for r = 1, got {alg.presentation.name}")


def delta(alg: PathAlgebra, m: int, n: int) -> ChainMap:
    """Δ_{m,n} on X(m,n): the full cycle at P_0 in degree m, zero elsewhere."""
    _require_r1(alg, "Δ")
    x = realize(alg, X(m, n))
    return graded_map(alg, x, x, {m: ((arrow(alg, 0, 0),),)})


def t_iso(alg: PathAlgebra, m: int, n: int) -> ChainMap:
    """t_{m,n}: Σ(X(m,n)) -> X(m-1,n-1)."""
    _require_r1(alg, "t")
    return orbit_iso(alg, X(m, n), 1)


def t_iso_inverse(alg: PathAlgebra, m: int, n: int) -> ChainMap:
    _require_r1(alg, "t")
    return orbit_iso_inverse(alg, X(m, n), 1)