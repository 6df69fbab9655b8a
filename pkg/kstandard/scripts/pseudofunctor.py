#!/usr/bin/env python3
"""
Scalar systems: the action of a pseudo-identity on the spanning morphisms of a window.

A ScalarSystem assigns a nonzero scalar to every spanning morphism and a connecting
scalar to stalks. Relations between the scalars come from chains of spanning
morphisms with proportional composites and from the truncation triangles; a system
satisfying them all is consistent, and trivialize() looks for per-object scalars
conjugating it to the all-ones system.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from . import catalog
from .catalog import CatalogId, enumerate_window, parse_id, realize
from .complexes import ChainMap, add_maps, compose, identity, scale_map, shift_map
from .exactlin import inv, normalize_ray
from .homotopy import hom_kb
from .pathalg import PathAlgebra
from .reports import (
    SCALAR_SYSTEM_SCHEMA,
    SCALAR_SYSTEM_SCHEMA_ID,
    TRIVIALIZATION_SCHEMA,
    TRIVIALIZATION_SCHEMA_ID,
    validate_payload,
)
from .spanmorph import MorphId, endpoints, enumerate_spanning, parse_morph, realize_morph
from .verify import WindowReport, truncation_triangle, window_report

logger = logging.getLogger(__name__)

ECHO_LABEL = "scalar-system echo of K-standardness (window scale)"


class TrivializationError(ValueError):
    """No per-object scalars conjugate the system to all ones; `cycle` names the obstruction."""

    def __init__(self, message: str, cycle: Optional[List[str]] = None):
        self.cycle = cycle
        if cycle:
            message = f"{message}: " + " -> ".join(cycle)
        super().__init__(message)


@dataclass
class ScalarSystem:
    window: Tuple[int, int]
    scalars: Dict[MorphId, int]
    connecting: Dict[CatalogId, int] = field(default_factory=dict)

    def scalar(self, mid: MorphId) -> int:
        return self.scalars[mid]

    def connecting_scalar(self, stalk: CatalogId) -> int:
        return self.connecting.get(stalk, 1)

    def to_json(self) -> dict:
        payload = {
            "schema": SCALAR_SYSTEM_SCHEMA_ID,
            "window": [self.window[0], self.window[1]],
            "scalars": {str(mid): int(c) for mid, c in sorted(self.scalars.items(), key=lambda kv: kv[0].sort_key())},
            "connecting": {str(s): int(c) for s, c in sorted(self.connecting.items(), key=lambda kv: kv[0].sort_key())},
        }
        return validate_payload(payload, SCALAR_SYSTEM_SCHEMA)


def system_from_json(data: dict) -> ScalarSystem:
    validate_payload(data, SCALAR_SYSTEM_SCHEMA)
    scalars = {parse_morph(k): int(v) for k, v in data["scalars"].items()}
    connecting = {parse_id(k): int(v) for k, v in data.get("connecting", {}).items()}
    return ScalarSystem((int(data["window"][0]), int(data["window"][1])), scalars, connecting)


def spanning_set(alg: PathAlgebra, lo: int, hi: int) -> List[MorphId]:
    return enumerate_spanning(alg.r, alg.N, lo, hi)


def validate_system(alg: PathAlgebra, system: ScalarSystem) -> ScalarSystem:
    """The system must be total on the spanning set of its window with nonzero scalars."""
    p = alg.prime
    lo, hi = system.window
    missing = [str(mid) for mid in spanning_set(alg, lo, hi) if mid not in system.scalars]
    if missing:
        raise ValueError(f"✗ Error: scalar system misses {len(missing)} spanning morphisms, e.g. {missing[0]}")
    zero = [str(k) for k, c in list(system.scalars.items()) + list(system.connecting.items()) if c % p == 0]
    if zero:
        raise ValueError(f"✗ Error: scalar for {zero[0]} is zero mod {p}")
    return system


def all_ones(alg: PathAlgebra, lo: int, hi: int) -> ScalarSystem:
    return ScalarSystem((lo, hi), {mid: 1 for mid in spanning_set(alg, lo, hi)})


def coboundary_system(alg: PathAlgebra, lo: int, hi: int, object_scalars: Mapping[CatalogId, int]) -> ScalarSystem:
    """
    s(f) = c(U)·c(V)^{-1} for f: U -> V, and w(S) = c(S')·c(S)^{-1} on each stalk S
    whose shift S' stays in the window.
    """
    p = alg.prime
    scalars = {}
    for mid in spanning_set(alg, lo, hi):
        u, v = endpoints(mid, alg.r, alg.N)
        scalars[mid] = object_scalars[u] * inv(object_scalars[v], p) % p
    objects = set(enumerate_window(alg.r, alg.N, lo, hi))
    connecting = {}
    for s in objects:
        shifted = catalog.shift_id(s, 1)
        if s.is_stalk and shifted in objects:
            connecting[s] = object_scalars[shifted] * inv(object_scalars[s], p) % p
    return ScalarSystem((lo, hi), scalars, connecting)


def random_object_scalars(alg: PathAlgebra, lo: int, hi: int, rng: np.random.Generator) -> Dict[CatalogId, int]:
    objects = enumerate_window(alg.r, alg.N, lo, hi)
    return {cid: int(c) for cid, c in zip(objects, rng.integers(1, alg.prime, size=len(objects)))}


def perturb(alg: PathAlgebra, system: ScalarSystem, mid: MorphId, factor: int) -> ScalarSystem:
    """A copy of the system with the scalar of mid multiplied by factor."""
    if factor % alg.prime == 0:
        raise ValueError("✗ Error: perturbation factor must be nonzero")
    scalars = dict(system.scalars)
    scalars[mid] = scalars[mid] * factor % alg.prime
    return ScalarSystem(system.window, scalars, dict(system.connecting))


# -- relations ------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """Π s(f)^e · Π w(S)^e = 1 over the listed exponents."""

    kind: str
    morphs: Tuple[Tuple[MorphId, int], ...]
    stalks: Tuple[Tuple[CatalogId, int], ...] = ()
    label: str = ""

    def value(self, system: ScalarSystem, p: int) -> int:
        out = 1
        for mid, e in self.morphs:
            out = out * pow(system.scalar(mid) % p, e % (p - 1), p) % p
        for stalk, e in self.stalks:
            out = out * pow(system.connecting_scalar(stalk) % p, e % (p - 1), p) % p
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "morphs": {str(mid): e for mid, e in self.morphs},
            "stalks": {str(s): e for s, e in self.stalks},
        }


def _exponents(plus: Sequence[MorphId], minus: Sequence[MorphId]) -> Tuple[Tuple[MorphId, int], ...]:
    counts = Counter(plus)
    counts.subtract(Counter(minus))
    return tuple(sorted(((mid, e) for mid, e in counts.items() if e), key=lambda kv: kv[0].sort_key()))


def _chain_text(chain: Sequence[MorphId]) -> str:
    return " ∘ ".join(str(mid) for mid in reversed(chain)) or "Id"


@dataclass(frozen=True, eq=False)
class RelationSet:
    """Relations of a window plus the chain whose composite represents each known class."""

    relations: Tuple[Relation, ...]
    rays: Dict[Tuple[CatalogId, CatalogId], Dict[Tuple[int, ...], Tuple[MorphId, ...]]]
    skipped_triangles: Tuple[str, ...]

    def involving(self, mid: MorphId) -> List[Relation]:
        return [rel for rel in self.relations if any(m == mid for m, _ in rel.morphs)]


@lru_cache(maxsize=None)
def extract_relations(alg: PathAlgebra, lo: int, hi: int, max_chain: int = 4) -> RelationSet:
    """
    Breadth-first search over chains of at most `max_chain` spanning morphisms.

    Each (domain, codomain) pair keeps one chain per line of classes; a chain landing on
    a known line gives an equality of scalar products, and a closed chain on a stalk
    gives a product equal to one. Truncation triangles add one relation each.
    """
    p = alg.prime
    objects = enumerate_window(alg.r, alg.N, lo, hi)
    by_domain: Dict[CatalogId, List[Tuple[MorphId, CatalogId, ChainMap]]] = {}
    for mid in spanning_set(alg, lo, hi):
        u, v = endpoints(mid, alg.r, alg.N)
        by_domain.setdefault(u, []).append((mid, v, realize_morph(alg, mid)))

    relations: Dict[Tuple, Relation] = {}

    def add(kind: str, morphs, stalks=(), label=""):
        if not morphs and not stalks:
            return
        key = (morphs, stalks)
        inverse_key = (tuple((m, -e) for m, e in morphs), tuple((s, -e) for s, e in stalks))
        if key not in relations and inverse_key not in relations:
            relations[key] = Relation(kind, morphs, stalks, label)

    rays: Dict[Tuple[CatalogId, CatalogId], Dict[Tuple[int, ...], Tuple[MorphId, ...]]] = {}
    frontier = []
    for u in objects:
        x = realize(alg, u)
        ident = identity(alg, x)
        rays[(u, u)] = {normalize_ray(hom_kb(alg, x, x).reduce(ident), p): ()}
        frontier.append((u, u, (), ident))

    for _ in range(max_chain):
        next_frontier = []
        for u, v, chain, f in frontier:
            x = realize(alg, u)
            for mid, w, g in by_domain.get(v, ()):
                h = compose(alg, g, f)
                coords = hom_kb(alg, x, realize(alg, w)).reduce(h)
                if not coords.any():
                    continue
                extended = chain + (mid,)
                if u == w and u.is_stalk:
                    add("stalk-loop", _exponents(extended, ()), label=f"{_chain_text(extended)} on {u}")
                known = rays.setdefault((u, w), {})
                ray = normalize_ray(coords, p)
                if ray in known:
                    add("chain", _exponents(extended, known[ray]),
                        label=f"{_chain_text(extended)} ∝ {_chain_text(known[ray])}")
                    continue
                known[ray] = extended
                next_frontier.append((u, w, extended, h))
        frontier = next_frontier

    skipped = []
    present = set(objects)
    for y_id in objects:
        if y_id.is_stalk:
            continue
        tri = truncation_triangle(alg, y_id)
        s_id = catalog.top_stalk(y_id, alg.r)
        shifted = catalog.shift_id(s_id, 1)
        y2 = catalog.lower_truncation(y_id, alg.r, y_id.n - 1)
        if shifted not in present:
            skipped.append(str(y_id))
            continue
        k = compose(alg, catalog.orbit_iso(alg, s_id, 1), tri.h)
        chains = []
        for (src, dst), f in (((s_id, y_id), tri.f), ((y_id, y2), tri.g), ((y2, shifted), k)):
            space = hom_kb(alg, realize(alg, src), realize(alg, dst))
            chains.append(rays.get((src, dst), {}).get(normalize_ray(space.reduce(f), p)))
        if any(c is None for c in chains):
            skipped.append(str(y_id))
            continue
        add("triangle", _exponents(chains[0] + chains[1] + chains[2], ()), ((s_id, 1),),
            label=f"truncation triangle of {y_id}")

    logger.info(f"{alg.presentation.name} [{lo},{hi}]: {len(relations)} relations, "
                f"{len(skipped)} triangles without chain expressions")
    return RelationSet(tuple(relations.values()), rays, tuple(skipped))


def check_consistency(alg: PathAlgebra, system: ScalarSystem, max_chain: int = 4) -> WindowReport:
    p = alg.prime
    validate_system(alg, system)
    lo, hi = system.window
    found = extract_relations(alg, lo, hi, max_chain)
    witnesses = []
    for rel in found.relations:
        value = rel.value(system, p)
        if value != 1:
            witnesses.append(dict(rel.to_json(), value=value))
    details = {
        "relations": len(found.relations),
        "skipped_triangles": len(found.skipped_triangles),
        "max_chain": max_chain,
        "label": ECHO_LABEL,
    }
    return window_report(alg, "consistency", lo, hi, "fail" if witnesses else "pass", details, witnesses)


# -- trivialization -------------------------------------------------------------

@dataclass
class Trivialization:
    window: Tuple[int, int]
    objects: Dict[CatalogId, int]
    components: List[List[CatalogId]]
    connecting: Dict[CatalogId, int] = field(default_factory=dict)
    delta: Dict[CatalogId, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        payload = {
            "schema": TRIVIALIZATION_SCHEMA_ID,
            "objects": {str(c): int(v) for c, v in sorted(self.objects.items(), key=lambda kv: kv[0].sort_key())},
            "components": [[str(c) for c in comp] for comp in self.components],
            "connecting": {str(c): int(v) for c, v in sorted(self.connecting.items(), key=lambda kv: kv[0].sort_key())},
        }
        if self.delta:
            payload["delta"] = {str(c): int(v) for c, v in sorted(self.delta.items(), key=lambda kv: kv[0].sort_key())}
        return validate_payload(payload, TRIVIALIZATION_SCHEMA)


def morphism_graph(alg: PathAlgebra, lo: int, hi: int) -> nx.MultiGraph:
    """Window objects joined by one (undirected) edge per spanning morphism."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(enumerate_window(alg.r, alg.N, lo, hi))
    for mid in spanning_set(alg, lo, hi):
        u, v = endpoints(mid, alg.r, alg.N)
        graph.add_edge(u, v, key=mid)
    return graph


def conjugate(alg: PathAlgebra, system: ScalarSystem, object_scalars: Mapping[CatalogId, int]) -> ScalarSystem:
    """s'(f) = δ(V)·s(f)·δ(U)^{-1}; w'(S) = w(S)·δ(S)·δ(S')^{-1}."""
    p = alg.prime
    scalars = {}
    for mid, c in system.scalars.items():
        u, v = endpoints(mid, alg.r, alg.N)
        scalars[mid] = object_scalars[v] * c * inv(object_scalars[u], p) % p
    connecting = {}
    for stalk, c in system.connecting.items():
        shifted = catalog.shift_id(stalk, 1)
        if shifted in object_scalars:
            c = c * object_scalars[stalk] * inv(object_scalars[shifted], p) % p
        connecting[stalk] = c
    return ScalarSystem(system.window, scalars, connecting)


def trivialize(alg: PathAlgebra, system: ScalarSystem, max_chain: int = 4,
               b: Optional[Mapping[CatalogId, int]] = None) -> Trivialization:
    """
    Per-object scalars δ with δ(V)·s(f)·δ(U)^{-1} = 1 for every spanning f: U -> V.

    δ is fixed to 1 on the first object of each connected component and propagated
    along a breadth-first spanning tree; every other edge is then verified.
    """
    p = alg.prime
    report = check_consistency(alg, system, max_chain)
    if not report.passed:
        raise TrivializationError(f"✗ Error: scalar system is inconsistent ({len(report.witnesses)} relations fail)")
    lo, hi = system.window
    graph = morphism_graph(alg, lo, hi)
    scalars: Dict[CatalogId, int] = {}
    components = []
    tree = nx.Graph()
    for nodes in sorted(nx.connected_components(graph), key=lambda c: min(n.sort_key() for n in c)):
        ordered = sorted(nodes, key=CatalogId.sort_key)
        components.append(ordered)
        root = ordered[0]
        scalars[root] = 1
        tree.add_node(root)
        for u, v in nx.bfs_edges(graph, root):
            mid = min(graph[u][v], key=MorphId.sort_key)
            dom, cod = endpoints(mid, alg.r, alg.N)
            c = system.scalar(mid)
            # δ(cod) = δ(dom)·s(f)^{-1}
            if dom == u:
                scalars[v] = scalars[u] * inv(c, p) % p
            else:
                scalars[v] = scalars[u] * c % p
            tree.add_edge(u, v)

    for u, v, mid in graph.edges(keys=True):
        dom, cod = endpoints(mid, alg.r, alg.N)
        if scalars[cod] * system.scalar(mid) * inv(scalars[dom], p) % p != 1:
            path = nx.shortest_path(tree, cod, dom)
            cycle = [str(mid)] + [str(n) for n in path]
            raise TrivializationError("✗ Error: no trivialization, violated cycle", cycle)

    adjusted = conjugate(alg, system, scalars)
    delta = {}
    if b is not None:
        eta = prop_a2_eta(alg, b, lo, hi)
        delta = {cid: v for cid, v in eta.phi.items() if v}
    logger.info(f"trivialized {len(scalars)} objects in {len(components)} components")
    return Trivialization((lo, hi), scalars, components, adjusted.connecting, delta)


# -- connecting normalization and telescoping ----------------------------------

def _as_element(alg: PathAlgebra, value) -> np.ndarray:
    if isinstance(value, (int, np.integer)):
        return np.mod(alg.one() * int(value), alg.prime)
    return np.mod(np.asarray(value, dtype=np.int64), alg.prime)


def normalize_connecting(alg: PathAlgebra, lambdas: Mapping[int, object]) -> Dict[int, np.ndarray]:
    """
    a_0 = 1 and λ_n = a_n^{-1}·a_{n+1}: a_{n+1} = a_n·λ_n upwards, a_n = a_{n+1}·λ_n^{-1}
    downwards. λ_n are invertible central elements of A (integers mean scalars).
    """
    if not lambdas:
        return {0: alg.one()}
    keys = sorted(lambdas)
    if keys != list(range(keys[0], keys[-1] + 1)):
        raise ValueError(f"✗ Error: connecting scalars must cover a contiguous range, got {keys}")
    lo, hi = min(keys[0], 0), max(keys[-1] + 1, 0)
    if not (keys[0] <= 0 <= keys[-1] + 1):
        raise ValueError(f"✗ Error: degree range {keys[0]}..{keys[-1] + 1} must contain 0")
    lams = {n: _as_element(alg, lambdas[n]) for n in keys}
    inverses = {n: alg.inverse_global(lam) for n, lam in lams.items()}
    a = {0: alg.one()}
    for n in range(0, hi):
        a[n + 1] = alg.multiply_global(a[n], lams[n])
    for n in range(-1, lo - 1, -1):
        a[n] = alg.multiply_global(a[n + 1], inverses[n])
    for n in keys:
        if not np.array_equal(alg.multiply_global(alg.inverse_global(a[n]), a[n + 1]), lams[n]):
            raise ValueError(f"✗ Error: telescoping check failed at degree {n}")
    return dict(sorted(a.items()))


@dataclass
class EtaResult:
    phi: Dict[CatalogId, int]
    verdict: str
    failures: List[str]


def telescope_phi(alg: PathAlgebra, b: Mapping[CatalogId, int], lo: int, hi: int) -> Dict[CatalogId, int]:
    """φ(X) - φ(ΣX) = b(X) along each orbit segment, φ = 0 at the segment's lowest member."""
    p = alg.prime
    xs = [cid for cid in enumerate_window(alg.r, alg.N, lo, hi) if cid.family == "X"]
    present = set(xs)
    phi: Dict[CatalogId, int] = {}
    for cid in sorted(xs, key=lambda c: c.m):
        below = catalog.shift_id(cid, 1)
        phi[cid] = (phi[below] + b.get(cid, 0)) % p if below in present else 0
    return phi


def prop_a2_eta(alg: PathAlgebra, b: Mapping[CatalogId, int], lo: int, hi: int,
                phi_override: Optional[Mapping[CatalogId, int]] = None) -> EtaResult:
    """
    η_U = Id + φ(U)·Δ_U on X-objects (Id elsewhere); checks η_{ΣU}∘ω_U = Σ(η_U) through the
    orbit identifications, with ω = Σ(λ), λ = 1 + Σ b(X)·δ(X).
    """
    catalog._require_r1(alg, "the telescoping isomorphism")
    phi = telescope_phi(alg, b, lo, hi)
    if phi_override:
        phi.update({cid: v % alg.prime for cid, v in phi_override.items()})
    objects = enumerate_window(alg.r, alg.N, lo, hi)
    present = set(objects)

    def twisted(cid: CatalogId, coeff: int) -> ChainMap:
        x = realize(alg, cid)
        if cid.family != "X" or not coeff:
            return identity(alg, x)
        return add_maps(alg, identity(alg, x), scale_map(alg, catalog.delta(alg, cid.m, cid.n), coeff))

    failures = []
    for u in objects:
        shifted = catalog.shift_id(u, 1)
        if shifted not in present:
            continue
        t = catalog.orbit_iso(alg, u, 1)
        t_inv = catalog.orbit_iso_inverse(alg, u, 1)
        x = realize(alg, shifted)
        end = hom_kb(alg, x, x)
        omega = compose(alg, t, compose(alg, shift_map(alg, twisted(u, b.get(u, 0)), 1), t_inv))
        left = compose(alg, twisted(shifted, phi.get(shifted, 0)), omega)
        right = compose(alg, t, compose(alg, shift_map(alg, twisted(u, phi.get(u, 0)), 1), t_inv))
        if not np.array_equal(end.reduce(left), end.reduce(right)):
            failures.append(str(u))
    verdict = "fail" if failures else "pass"
    logger.info(f"telescoping η on [{lo},{hi}]: {verdict}")
    return EtaResult(phi, verdict, failures)


__all__ = [
    "ECHO_LABEL",
    "TrivializationError",
    "ScalarSystem",
    "system_from_json",
    "validate_system",
    "all_ones",
    "coboundary_system",
    "random_object_scalars",
    "perturb",
    "Relation",
    "RelationSet",
    "extract_relations",
    "check_consistency",
    "Trivialization",
    "morphism_graph",
    "conjugate",
    "trivialize",
    "normalize_connecting",
    "EtaResult",
    "telescope_phi",
    "prop_a2_eta",
]
