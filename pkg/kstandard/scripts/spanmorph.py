#!/usr/bin/env python3
"""
The spanning morphisms between catalog objects: inclusions, projections,
connections and the mixed families mx.I .. mx.XI.

Each family is described by its domain, its codomain and the kind of its
degree-k component between the two 1×1 terms:

    id      the identity of P_u (vertices must agree)
    arrow   the unnamed arrow P_u -> P_v
    qmap    id when u = v, otherwise the unnamed arrow
"""

import itertools
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import catalog
from .catalog import CatalogId, MalformedIdError, canonical, realize, validate_id, vertex_at
from .complexes import ChainMap, InvalidComplexError, compose, graded_map, validate_chain_map
from .exactlin import rank
from .homotopy import hom_kb
from .pathalg import NotComposableError, PathAlgebra

logger = logging.getLogger(__name__)

DEGREE_KEYS = ("s", "l", "m", "m'", "n", "n'")
VERTEX_KEYS = ("a", "b", "a'", "b'")

# family -> parameter names, degree keys first
FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
    "i": ("s", "m", "n"),
    "j": ("m", "n", "a"),
    "i'": ("m", "n", "b"),
    "ι": ("m", "n", "a", "b"),
    "ξ": ("m", "a", "b"),
    "π": ("s", "m", "n"),
    "π'": ("m", "n", "a"),
    "p": ("m", "n", "b"),
    "q": ("m", "n", "a", "b"),
    "ζ": ("m", "a", "b"),
    "c": ("l", "m", "n", "a", "b"),
    "mx.I": ("m", "m'", "n", "a", "b"),
    "mx.II": ("m", "n", "a", "b"),
    "mx.III": ("m", "n", "n'", "a", "b"),
    "mx.IV": ("m", "n", "a", "b"),
    "mx.V": ("m", "m'", "n", "n'", "a", "b", "a'", "b'"),
    "mx.VI": ("m", "n", "n'", "a", "b", "a'", "b'"),
    "mx.VII": ("m", "m'", "n", "a", "b", "a'", "b'"),
    "mx.VIII": ("m", "n", "a", "b", "a'", "b'"),
    "mx.IX": ("m", "n", "a", "b", "a'", "b'"),
    "mx.X": ("m", "n", "a", "b", "a'", "b'"),
    "mx.XI": ("m", "a", "b", "a'", "b'"),
}
FAMILIES = tuple(FAMILY_PARAMS)
INCLUSIONS = ("i", "j", "i'", "ι", "ξ")
PROJECTIONS = ("π", "π'", "p", "q", "ζ")
CONNECTIONS = ("c",)
MIXED = tuple(f for f in FAMILIES if f.startswith("mx."))

ALIASES = {"iota": "ι", "xi": "ξ", "pi": "π", "pi'": "π'", "zeta": "ζ"}


@dataclass(frozen=True)
class MorphId:
    family: str
    params: Tuple[Tuple[str, int], ...]

    def __getitem__(self, key: str) -> int:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def sort_key(self):
        return (FAMILIES.index(self.family), tuple(v for _, v in self.params))

    def __str__(self) -> str:
        degrees = [f"{k}={v}" for k, v in self.params if k in DEGREE_KEYS and not (k == "s" and v == 0)]
        verts = [f"{k}={v}" for k, v in self.params if k in VERTEX_KEYS]
        inner = ",".join(degrees)
        if verts:
            inner += ";" + ",".join(verts)
        return f"{self.family}[{inner}]"

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "text": str(self)}


def morph_id(family: str, **params: int) -> MorphId:
    """Build a MorphId; primed keys are passed with a trailing underscore (m_=..., a_=...)."""
    family = ALIASES.get(family, family)
    if family not in FAMILY_PARAMS:
        raise MalformedIdError(f"unknown morphism family {family!r}")
    values = {k.replace("_", "'"): v for k, v in params.items()}
    names = FAMILY_PARAMS[family]
    if "s" in names:
        values.setdefault("s", 0)
    if set(values) != set(names):
        raise MalformedIdError(f"{family} takes parameters {list(names)}, got {sorted(values)}")
    return MorphId(family, tuple((k, int(values[k])) for k in names))


_MORPH_RE = re.compile(r"^(?P<family>[^\[\]\s]+)\[(?P<degrees>[^;\]]*)(?:;(?P<verts>[^\]]*))?\]$")
_PARAM_RE = re.compile(r"^(?P<key>[a-z]'?)=(?P<value>-?\d+)$")


def parse_morph(text: str) -> MorphId:
    """Parse e.g. `c[l=0,m=1,n=2;a=1,b=1]`, `mx.V[m=0,m'=1,n=4,n'=5;a=1,b=1,a'=1,b'=1]`."""
    text = text.strip()
    match = _MORPH_RE.match(text)
    if not match:
        raise MalformedIdError(f"cannot parse morphism id {text!r}", 0 if "[" not in text else text.index("["))
    params: Dict[str, int] = {}
    for group in ("degrees", "verts"):
        body = match[group]
        if not body:
            continue
        offset = match.start(group)
        for item in body.split(","):
            found = _PARAM_RE.match(item.strip())
            if not found:
                raise MalformedIdError(f"bad parameter {item!r} in {text!r}", offset)
            key = found["key"]
            allowed = DEGREE_KEYS if group == "degrees" else VERTEX_KEYS
            if key not in allowed or key in params:
                raise MalformedIdError(f"unexpected parameter {key!r} in {text!r}", offset)
            params[key] = int(found["value"])
            offset += len(item) + 1
    family = ALIASES.get(match["family"], match["family"])
    return morph_id(family, **{k.replace("'", "_"): v for k, v in params.items()})


# -- family layouts -------------------------------------------------------------

@dataclass(frozen=True)
class FamilyLayout:
    domain: CatalogId
    codomain: CatalogId
    components: Tuple[Tuple[int, str], ...]
    conditions: Tuple[Tuple[bool, str], ...]


def _common(domain: CatalogId, codomain: CatalogId) -> Tuple[Tuple[int, str], ...]:
    lo = max(domain.m, codomain.m)
    hi = min(domain.n, codomain.n)
    return tuple((k, "id") for k in range(lo, hi + 1))


def family_layout(mid: MorphId, r: int) -> FamilyLayout:
    f = mid.family
    g = mid.__getitem__
    X, L, R, B, Z = catalog.X, catalog.L, catalog.R, catalog.B, catalog.Z

    if f in INCLUSIONS + PROJECTIONS:
        m = g("m")
        conditions: Tuple[Tuple[bool, str], ...] = ()
        if f == "i":
            dom, cod = X(m, g("n"), g("s")), X(m - 1, g("n"), (g("s") + 1) % r)
        elif f == "j":
            dom, cod = X(m, g("n"), r - 1), L(m - 1, g("n"), g("a"))
        elif f == "i'":
            dom, cod = R(m, g("n"), g("b")), R(m - 1, g("n"), g("b"))
        elif f == "ι":
            dom, cod = R(m, g("n"), g("b")), B(m - 1, g("n"), g("a"), g("b"))
        elif f == "ξ":
            dom, cod = L(m, m, g("b")), Z(m - 1, g("a"), g("b"))
        elif f == "π":
            dom, cod = X(m, g("n"), g("s")), X(m, g("n") - 1, g("s"))
            conditions = ((m < g("n"), "m < n"),)
        elif f == "π'":
            dom, cod = L(m, g("n"), g("a")), L(m, g("n") - 1, g("a"))
            conditions = ((m < g("n"), "m < n"),)
        elif f == "p":
            dom, cod = R(m, g("n"), g("b")), X(m, g("n") - 1, (g("n") - m - 1) % r)
            conditions = ((m < g("n"), "m < n"),)
        elif f == "q":
            dom, cod = B(m, g("n"), g("a"), g("b")), L(m, g("n") - 1, g("a"))
        else:
            dom, cod = Z(m, g("a"), g("b")), L(m, m, g("a"))
        return FamilyLayout(dom, cod, _common(dom, cod), conditions)

    if f == "c":
        l, m, n, a, b = g("l"), g("m"), g("n"), g("a"), g("b")
        conditions = (
            (l <= m <= n, "l ≤ m ≤ n"),
            ((n - l) % r == 0, "r | (n - l)"),
            (not (l == m == n) or b < a, "b < a when l = m = n"),
        )
        return FamilyLayout(L(l, m, a), R(m, n, b), ((m, "arrow"),), conditions)

    m, a, b = g("m"), g("a"), g("b")
    if f == "mx.I":
        m2, n = g("m'"), g("n")
        comps = ((m2, "arrow"),) + tuple((k, "id") for k in range(m2 + 1, n + 1))
        conditions = ((m < m2 < n, "m < m' < n"), ((m2 - m) % r == 0, "r | (m' - m)"))
        return FamilyLayout(L(m, n, a), L(m2, n, b), comps, conditions)
    if f == "mx.II":
        n = g("n")
        comps = ((m, "arrow"),) + tuple((k, "id") for k in range(m + 1, n + 1))
        return FamilyLayout(L(m, n, a), L(m, n, b), comps, ((m < n, "m < n"), (b < a, "b < a")))
    if f == "mx.III":
        n, n2 = g("n"), g("n'")
        comps = tuple((k, "id") for k in range(m, n)) + ((n, "arrow"),)
        conditions = ((m < n < n2, "m < n < n'"), ((n2 - n) % r == 0, "r | (n' - n)"))
        return FamilyLayout(R(m, n, a), R(m, n2, b), comps, conditions)
    if f == "mx.IV":
        n = g("n")
        comps = tuple((k, "id") for k in range(m, n)) + ((n, "arrow"),)
        return FamilyLayout(R(m, n, a), R(m, n, b), comps, ((m < n, "m < n"), (b < a, "b < a")))

    a2, b2 = g("a'"), g("b'")
    if f == "mx.XI":
        conditions = (
            (b2 <= b < a2 <= a, "b' ≤ b < a' ≤ a"),
            ((a2, b2) != (a, b), "not the identity"),
        )
        return FamilyLayout(Z(m, a, b), Z(m, a2, b2), ((m, "qmap"), (m + 1, "qmap")), conditions)
    n = g("n")
    if f == "mx.IX":
        return FamilyLayout(B(m, n, a, b), Z(n - 1, a2, b2), ((n - 1, "arrow"), (n, "qmap")),
                            ((b2 <= b < a2, "b' ≤ b < a'"),))
    if f == "mx.X":
        return FamilyLayout(Z(m, a, b), B(m, n, a2, b2), ((m, "qmap"), (m + 1, "arrow")),
                            ((b < a2 <= a, "b < a' ≤ a"),))

    m2 = g("m'") if "m'" in FAMILY_PARAMS[f] else m
    n2 = g("n'") if "n'" in FAMILY_PARAMS[f] else n
    first = "arrow" if m2 != m else "qmap"
    last = "arrow" if n2 != n else "qmap"
    comps = ((m2, first),) + tuple((k, "id") for k in range(m2 + 1, n)) + ((n, last),)
    if f == "mx.V":
        conditions = (
            (m < m2 < n < n2, "m < m' < n < n'"),
            ((m2 - m) % r == 0, "r | (m' - m)"),
            ((n2 - n) % r == 0, "r | (n' - n)"),
        )
    elif f == "mx.VI":
        conditions = ((n < n2, "n < n'"), ((n2 - n) % r == 0, "r | (n' - n)"), (a2 <= a, "a' ≤ a"))
    elif f == "mx.VII":
        conditions = ((m < m2, "m < m'"), ((m2 - m) % r == 0, "r | (m' - m)"), (b2 <= b, "b' ≤ b"))
    else:
        conditions = (
            (a2 <= a and b2 <= b, "a' ≤ a and b' ≤ b"),
            ((a2, b2) != (a, b), "not the identity"),
        )
    return FamilyLayout(B(m, n, a, b), B(m2, n2, a2, b2), comps, conditions)


def check_morph(mid: MorphId, r: int, N: int) -> FamilyLayout:
    """Validate the parameters of mid for A(r, N); raise MalformedIdError naming the violated condition."""
    if mid.family not in FAMILY_PARAMS or tuple(k for k, _ in mid.params) != FAMILY_PARAMS[mid.family]:
        raise MalformedIdError(f"{mid}: wrong parameters for family {mid.family!r}")
    if "s" in FAMILY_PARAMS[mid.family] and not 0 <= mid["s"] < r:
        raise MalformedIdError(f"{mid}: violates 0 ≤ s < {r}")
    try:
        layout = family_layout(mid, r)
    except ValueError as e:
        raise MalformedIdError(f"{mid}: {e}") from e
    for holds, text in layout.conditions:
        if not holds:
            raise MalformedIdError(f"{mid}: violates {text}")
    domain = validate_id(layout.domain, r, N)
    codomain = validate_id(layout.codomain, r, N)
    return FamilyLayout(domain, codomain, layout.components, layout.conditions)


@lru_cache(maxsize=None)
def realize_morph(alg: PathAlgebra, mid: MorphId) -> ChainMap:
    layout = check_morph(mid, alg.r, alg.N)
    x, y = realize(alg, layout.domain), realize(alg, layout.codomain)
    comps = {}
    for k, kind in layout.components:
        u, v = vertex_at(layout.domain, alg.r, k), vertex_at(layout.codomain, alg.r, k)
        if kind == "id" or (kind == "qmap" and u == v):
            if u != v:
                raise MalformedIdError(f"{mid}: identity component at degree {k} joins P{u} and P{v}")
            entry = alg.idempotent(u)
        else:
            try:
                entry = catalog.arrow(alg, u, v)
            except NotComposableError as e:
                raise MalformedIdError(f"{mid}: no unnamed arrow P{u} -> P{v} at degree {k}") from e
        comps[k] = ((entry,),)
    f = graded_map(alg, x, y, comps)
    try:
        return validate_chain_map(alg, f)
    except InvalidComplexError as e:
        raise MalformedIdError(f"{mid}: displayed map is not a chain map ({e})") from e


def endpoints(mid: MorphId, r: int, N: int) -> Tuple[CatalogId, CatalogId]:
    layout = check_morph(mid, r, N)
    return layout.domain, layout.codomain


def _inside(cid: CatalogId, lo: int, hi: int) -> bool:
    return lo <= cid.m and cid.n <= hi


def _candidates(family: str, r: int, N: int, lo: int, hi: int) -> Iterator[MorphId]:
    ranges = []
    for key in FAMILY_PARAMS[family]:
        if key == "s":
            ranges.append(range(r))
        elif key in DEGREE_KEYS:
            ranges.append(range(lo, hi + 2))
        else:
            ranges.append(range(r, N))
    names = FAMILY_PARAMS[family]
    for values in itertools.product(*ranges):
        yield MorphId(family, tuple(zip(names, values)))


def enumerate_spanning(r: int, N: int, lo: int, hi: int, families=FAMILIES) -> List[MorphId]:
    """Every spanning morphism whose domain and codomain lie in [lo, hi], in a fixed order."""
    if lo > hi:
        return []
    found = []
    for family in families:
        for mid in _candidates(family, r, N, lo, hi):
            try:
                dom, cod = endpoints(mid, r, N)
            except MalformedIdError:
                continue
            if _inside(dom, lo, hi) and _inside(cod, lo, hi):
                found.append(mid)
    logger.debug(f"{len(found)} spanning morphisms in [{lo},{hi}]")
    return sorted(found, key=MorphId.sort_key)


# -- truncations and crossing ---------------------------------------------------

def _identity_on_common(alg: PathAlgebra, x_id: CatalogId, y_id: CatalogId) -> ChainMap:
    x, y = realize(alg, x_id), realize(alg, y_id)
    comps = {}
    for k in range(max(x_id.m, y_id.m), min(x_id.n, y_id.n) + 1):
        u = vertex_at(x_id, alg.r, k)
        comps[k] = ((alg.idempotent(u),),)
    return validate_chain_map(alg, graded_map(alg, x, y, comps))


def truncation_projection(alg: PathAlgebra, cid: CatalogId, top: int) -> ChainMap:
    """Y -> Y restricted to degrees ≤ top."""
    cid = canonical(cid)
    return _identity_on_common(alg, cid, catalog.lower_truncation(cid, alg.r, top))


def truncation_inclusion(alg: PathAlgebra, cid: CatalogId, bottom: int) -> ChainMap:
    """Y restricted to degrees ≥ bottom -> Y."""
    cid = canonical(cid)
    return _identity_on_common(alg, catalog.upper_truncation(cid, alg.r, bottom), cid)


def supports_cross(x_id: CatalogId, y_id: CatalogId) -> bool:
    m, n = x_id.support
    p, q = y_id.support
    return m <= p <= n <= q


def crossing(alg: PathAlgebra, f: ChainMap, x_id: CatalogId, y_id: CatalogId) -> bool:
    """
    Whether f: X -> Y is crossing: the supports cross and every map homotopic to f
    is nonzero in degrees p and n.
    """
    if not supports_cross(x_id, y_id):
        return False
    space = hom_kb(alg, f.domain, f.codomain)
    if not space.reduce(f).any():
        return False
    v = space.layout.vectorize(f)
    null = space.frame[:, :space.homotopy_dim]
    for degree in (y_id.m, x_id.n):
        rows = [i for i, var in enumerate(space.layout.variables) if var[0] == degree]
        part = v[rows]
        # f^degree can be cancelled by a homotopy iff it lies in the span of the null parts
        if not part.any():
            return False
        if null.shape[1] and rank(np.concatenate([null[rows], part.reshape(-1, 1)], axis=1), alg.prime) \
                == rank(null[rows], alg.prime):
            return False
    return True


@dataclass(frozen=True, eq=False)
class CrossingTruncation:
    domain: CatalogId
    codomain: CatalogId
    projection: ChainMap
    inclusion: ChainMap
    image_rank: int
    hom_dim: int

    @property
    def surjective(self) -> bool:
        return self.image_rank == self.hom_dim


def truncate_to_crossing(alg: PathAlgebra, x_id: CatalogId, y_id: CatalogId) -> Optional[CrossingTruncation]:
    """
    X' ≤ X and Y' ≤ Y with crossing supports such that f ↦ inc∘f∘pr maps
    Hom(X', Y') onto Hom(X, Y); None when the supports share no degree.
    """
    x_id, y_id = canonical(x_id), canonical(y_id)
    m, n = x_id.support
    p, q = y_id.support
    top, bottom = min(n, q), max(p, m)
    if bottom > top:
        return None
    pr = truncation_projection(alg, x_id, top)
    inc = truncation_inclusion(alg, y_id, bottom)
    x2 = catalog.lower_truncation(x_id, alg.r, top)
    y2 = catalog.upper_truncation(y_id, alg.r, bottom)
    source = hom_kb(alg, pr.codomain, inc.domain)
    target = hom_kb(alg, pr.domain, inc.codomain)
    if target.dim == 0:
        return CrossingTruncation(x2, y2, pr, inc, 0, 0)
    images = [target.reduce(compose(alg, inc, compose(alg, f, pr))) for f in source.basis]
    image_rank = rank(np.stack(images, axis=1), alg.prime) if images else 0
    return CrossingTruncation(x2, y2, pr, inc, image_rank, target.dim)
