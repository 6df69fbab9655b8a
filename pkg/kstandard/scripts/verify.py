#!/usr/bin/env python3
"""
Window-scale verification suites.

Every check works on the catalog objects whose support lies in a degree window
[lo, hi] and returns a WindowReport with an exact verdict (pass / fail /
undetermined) and the witnesses of any failure.
"""

import itertools
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from . import catalog, spanmorph
from .catalog import CatalogId, canonical, enumerate_window, realize
from .complexes import (
    ChainMap,
    ProjComplex,
    compose,
    cone,
    graded_map,
    identity,
    scale_block,
    scale_map,
    shift,
    shift_map,
    validate_chain_map,
)
from .exactlin import in_span, kernel, matmul, rank, rref, solve
from .homotopy import (
    EndFrame,
    endomorphism_frame,
    hom_dim_oracle,
    hom_kb,
    is_homotopy_equivalence,
    is_indecomposable,
    is_isomorphic,
)
from .pathalg import PathAlgebra
from .reports import REPORT_SCHEMA, REPORT_SCHEMA_ID, combine_verdicts, validate_payload

logger = logging.getLogger(__name__)


class MalformedTriangleError(ValueError):
    """The three maps of a triangle do not chain X -> Y -> Z -> ΣX."""


@dataclass
class WindowReport:
    check: str
    window: Tuple[int, int]
    r: int
    N: int
    p: int
    verdict: str
    details: dict = field(default_factory=dict)
    witnesses: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        payload = {
            "schema": REPORT_SCHEMA_ID,
            "check": self.check,
            "window": [int(self.window[0]), int(self.window[1])],
            "params": {"r": self.r, "N": self.N, "p": self.p},
            "verdict": self.verdict,
            "details": self.details,
            "witnesses": self.witnesses,
        }
        return validate_payload(payload, REPORT_SCHEMA)


def window_report(alg: PathAlgebra, check: str, lo: int, hi: int, verdict: str,
                  details: Optional[dict] = None, witnesses: Optional[List[dict]] = None) -> WindowReport:
    report = WindowReport(check, (lo, hi), alg.r, alg.N, alg.prime, verdict, details or {}, witnesses or [])
    logger.info(f"{check} {alg.presentation.name} [{lo},{hi}]: {verdict}")
    return report


def _progress(items: Iterable, desc: str, enabled: bool):
    return tqdm(items, desc=desc, dynamic_ncols=True, ascii=True, leave=False, disable=not enabled)


def window_objects(alg: PathAlgebra, lo: int, hi: int) -> List[CatalogId]:
    return enumerate_window(alg.r, alg.N, lo, hi)


# -- spanning -------------------------------------------------------------------

def check_spanning(alg: PathAlgebra, lo: int, hi: int, margin: int = 1,
                   exclude_families: Sequence[str] = (), progress: bool = False) -> WindowReport:
    """
    Closure of the identities under post-composition with spanning morphisms.

    Composites may pass through objects of the window widened by `margin`; the
    spanned subspace must be all of Hom_K(U, V) for every pair of window objects.
    The margin is raised to r: for r > 1 maps between stalks factor through
    L(l, ...) with r | (n - l).
    """
    p = alg.prime
    requested, margin = margin, max(margin, alg.r)
    inner = window_objects(alg, lo, hi)
    families = tuple(f for f in spanmorph.FAMILIES if f not in exclude_families)
    generators = spanmorph.enumerate_spanning(alg.r, alg.N, lo - margin, hi + margin, families)
    by_domain: Dict[CatalogId, List[Tuple[CatalogId, ChainMap]]] = {}
    for mid in generators:
        dom, cod = spanmorph.endpoints(mid, alg.r, alg.N)
        by_domain.setdefault(dom, []).append((cod, spanmorph.realize_morph(alg, mid)))

    witnesses = []
    for u in _progress(inner, "spanning", progress):
        x = realize(alg, u)
        spanned: Dict[CatalogId, np.ndarray] = {u: hom_kb(alg, x, x).reduce(identity(alg, x)).reshape(-1, 1)}
        queue = deque([(u, identity(alg, x))])
        while queue:
            v, f = queue.popleft()
            for w, g in by_domain.get(v, ()):
                space = hom_kb(alg, x, realize(alg, w))
                if space.dim == 0:
                    continue
                h = compose(alg, g, f)
                coords = space.reduce(h)
                current = spanned.get(w)
                if not coords.any() or (current is not None and in_span(current, coords, p)):
                    continue
                column = coords.reshape(-1, 1)
                spanned[w] = column if current is None else np.concatenate([current, column], axis=1)
                queue.append((w, h))
        for v in inner:
            dim = hom_kb(alg, x, realize(alg, v)).dim
            got = rank(spanned[v], p) if v in spanned else 0
            if got != dim:
                witnesses.append({"domain": str(u), "codomain": str(v), "spanned": got, "hom_dim": dim})
    details = {
        "objects": len(inner),
        "generators": len(generators),
        "margin": margin,
        "requested_margin": requested,
        "excluded_families": sorted(exclude_families),
    }
    return window_report(alg, "spanning", lo, hi, "fail" if witnesses else "pass", details, witnesses)


# -- Hom dimensions -------------------------------------------------------------

def hom_dim_table(alg: PathAlgebra, objects: Sequence[CatalogId], workers: int = 1,
                  oracle: bool = False) -> Dict[Tuple[CatalogId, CatalogId], Tuple[int, Optional[int]]]:
    pairs = list(itertools.product(objects, objects))

    def dims(pair):
        x, y = realize(alg, pair[0]), realize(alg, pair[1])
        return hom_kb(alg, x, y).dim, hom_dim_oracle(alg, x, y) if oracle else None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(dims, pairs))
    else:
        values = [dims(pair) for pair in pairs]
    return dict(zip(pairs, values))


def check_homdim(alg: PathAlgebra, lo: int, hi: int, workers: int = 1, oracle: bool = True) -> WindowReport:
    objects = window_objects(alg, lo, hi)
    table = hom_dim_table(alg, objects, workers, oracle)
    bound = 2 if alg.r == 1 else 1
    witnesses = []
    for (x, y), (dim, oracle_dim) in table.items():
        if oracle and dim != oracle_dim:
            witnesses.append({"domain": str(x), "codomain": str(y), "dim": dim, "oracle": oracle_dim})
        diagonal_x = alg.r == 1 and x == y and x.family == "X"
        if dim > bound or (alg.r == 1 and (dim == 2) != diagonal_x):
            witnesses.append({"domain": str(x), "codomain": str(y), "dim": dim, "bound": bound})
    details = {
        "objects": [str(x) for x in objects],
        "dims": [[table[(x, y)][0] for y in objects] for x in objects],
        "max_dim": max((d for d, _ in table.values()), default=0),
        "bound": bound,
    }
    return window_report(alg, "homdim", lo, hi, "fail" if witnesses else "pass", details, witnesses)


# -- almost-vanishing -----------------------------------------------------------

def radical_representatives(frame: EndFrame) -> List[ChainMap]:
    return [frame.space.representative(frame.radical[:, j]) for j in range(frame.radical.shape[1])]


def check_almost_vanishing(alg: PathAlgebra, m: int, n: int, lo: int, hi: int,
                           endo: Optional[ChainMap] = None) -> WindowReport:
    """Δ_{m,n} (or `endo`) kills every radical map into and out of X(m,n) from window objects."""
    x_id = catalog.X(m, n)
    x = realize(alg, x_id)
    endo = endo if endo is not None else catalog.delta(alg, m, n)
    end = hom_kb(alg, x, x)
    witnesses = []
    if not end.reduce(endo).any():
        witnesses.append({"reason": "zero in Hom_K"})
    if is_homotopy_equivalence(alg, endo):
        witnesses.append({"reason": "invertible"})
    frame = endomorphism_frame(alg, x)
    for u_id in window_objects(alg, lo, hi):
        u = realize(alg, u_id)
        if u_id == x_id:
            into, out_of = radical_representatives(frame), radical_representatives(frame)
        else:
            into, out_of = hom_kb(alg, u, x).basis, hom_kb(alg, x, u).basis
        for f in into:
            if hom_kb(alg, u, x).reduce(compose(alg, endo, f)).any():
                witnesses.append({"reason": "Δ∘f ≠ 0", "object": str(u_id)})
        for g in out_of:
            if hom_kb(alg, x, u).reduce(compose(alg, g, endo)).any():
                witnesses.append({"reason": "g∘Δ ≠ 0", "object": str(u_id)})
    details = {"object": str(x_id), "margin_ok": lo < m and n < hi}
    return window_report(alg, "almost-vanishing", lo, hi, "fail" if witnesses else "pass", details, witnesses)


# -- triangles ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Triangle:
    f: ChainMap
    g: ChainMap
    h: ChainMap
    label: str = ""

    @property
    def x(self) -> ProjComplex:
        return self.f.domain

    @property
    def y(self) -> ProjComplex:
        return self.f.codomain

    @property
    def z(self) -> ProjComplex:
        return self.g.codomain


def make_triangle(alg: PathAlgebra, f: ChainMap, g: ChainMap, h: ChainMap, label: str = "") -> Triangle:
    if f.codomain != g.domain or g.codomain != h.domain:
        raise MalformedTriangleError(f"{label or 'triangle'}: maps do not chain X -> Y -> Z")
    if h.codomain != shift(alg, f.domain, 1):
        raise MalformedTriangleError(f"{label or 'triangle'}: h does not land in Σ(X)")
    return Triangle(f, g, h, label)


@dataclass(frozen=True)
class TriangleVerdict:
    status: str  # exact | non-exact | undetermined
    certificate: str
    solution_dim: int = -1
    candidates: int = 0

    @property
    def verdict(self) -> str:
        return {"exact": "pass", "non-exact": "fail"}.get(self.status, "undetermined")


def check_triangle(alg: PathAlgebra, tri: Triangle, samples: int = 64,
                   enumeration_cap: int = 4096, seed: int = 0) -> TriangleVerdict:
    """
    Exactness of X -f-> Y -g-> Z -h-> ΣX.

    Solve for the classes φ: cone(f) -> Z with φ∘inc ≃ g and h∘φ ≃ proj, then look
    for a homotopy equivalence among the solutions.
    """
    p = alg.prime
    c, inc, proj = cone(alg, tri.f)
    space = hom_kb(alg, c, tri.z)
    along_inc = hom_kb(alg, tri.y, tri.z)
    along_proj = hom_kb(alg, c, proj.codomain)
    target = np.concatenate([along_inc.reduce(tri.g), along_proj.reduce(proj)])
    columns = [
        np.concatenate([along_inc.reduce(compose(alg, phi, inc)), along_proj.reduce(compose(alg, tri.h, phi))])
        for phi in space.basis
    ]
    matrix = np.stack(columns, axis=1) if columns else np.zeros((target.shape[0], 0), dtype=np.int64)
    found = solve(matrix, target, p)
    if found is None:
        return TriangleVerdict("non-exact", "no-compatible-morphism", -1, 0)
    particular, directions = found
    k = directions.shape[1]

    def candidate(t) -> ChainMap:
        coords = np.mod(particular + matmul(directions, np.asarray(t, dtype=np.int64), p), p) if k else particular
        return space.representative(coords)

    if k == 0:
        if is_homotopy_equivalence(alg, candidate(())):
            return TriangleVerdict("exact", "unique-solution", 0, 1)
        return TriangleVerdict("non-exact", "unique-solution-not-equivalence", 0, 1)
    if p ** k <= enumeration_cap:
        checked = 0
        for t in itertools.product(range(p), repeat=k):
            checked += 1
            if is_homotopy_equivalence(alg, candidate(t)):
                return TriangleVerdict("exact", "equivalence-found", k, checked)
        return TriangleVerdict("non-exact", "exhaustive-no-equivalence", k, checked)

    trials = [np.zeros(k, dtype=np.int64)] + [np.eye(k, dtype=np.int64)[j] for j in range(k)]
    rng = np.random.default_rng(seed)
    trials += [rng.integers(0, p, size=k) for _ in range(samples)]
    for checked, t in enumerate(trials, start=1):
        if is_homotopy_equivalence(alg, candidate(t)):
            return TriangleVerdict("exact", "equivalence-found", k, checked)
    return TriangleVerdict("undetermined", "no-equivalence-sampled", k, len(trials))


def check_scalar_rigidity(alg: PathAlgebra, tri: Triangle, scalars: Sequence[int] = (1, 2, 3),
                          samples: int = 64, enumeration_cap: int = 4096,
                          seed: int = 0) -> Tuple[str, List[dict]]:
    """The triangle with λ·h is exact exactly for λ = 1."""
    rows, verdicts = [], []
    for lam in scalars:
        scaled = Triangle(tri.f, tri.g, scale_map(alg, tri.h, lam), tri.label)
        result = check_triangle(alg, scaled, samples, enumeration_cap, seed)
        expected = "exact" if lam % alg.prime == 1 else "non-exact"
        if result.status == "undetermined":
            verdicts.append("undetermined")
        else:
            verdicts.append("pass" if result.status == expected else "fail")
        rows.append({"triangle": tri.label, "lambda": int(lam), "status": result.status,
                     "certificate": result.certificate, "solution_dim": result.solution_dim})
    return combine_verdicts(verdicts), rows


def truncation_triangle(alg: PathAlgebra, cid: CatalogId) -> Triangle:
    """
    S -> Y -> Y' -> ΣS for Y with support [m, n], m < n: S the top stalk, Y' the
    truncation to [m, n-1], connecting map -d_Y^{n-1} in degree n-1.
    """
    cid = canonical(cid)
    m, n = cid.support
    if m == n:
        raise ValueError(f"{cid} is a stalk; it has no truncation triangle")
    y = realize(alg, cid)
    f = spanmorph.truncation_inclusion(alg, cid, n)
    g = spanmorph.truncation_projection(alg, cid, n - 1)
    shifted = shift(alg, f.domain, 1)
    h = validate_chain_map(alg, graded_map(alg, g.codomain, shifted, {n - 1: scale_block(alg, y.diff(n - 1), -1)}))
    return make_triangle(alg, f, g, h, f"trunc {cid}")


def check_rigidity(alg: PathAlgebra, lo: int, hi: int, scalars: Sequence[int] = (1, 2, 3),
                   samples: int = 64, enumeration_cap: int = 4096, seed: int = 0,
                   progress: bool = False) -> WindowReport:
    verdicts, witnesses, rows_all = [], [], []
    objects = [cid for cid in window_objects(alg, lo, hi) if not cid.is_stalk]
    for cid in _progress(objects, "rigidity", progress):
        verdict, rows = check_scalar_rigidity(alg, truncation_triangle(alg, cid), scalars, samples,
                                              enumeration_cap, seed)
        verdicts.append(verdict)
        rows_all.extend(rows)
        if verdict != "pass":
            witnesses.extend(row for row in rows if row["status"] != ("exact" if row["lambda"] % alg.prime == 1 else "non-exact"))
    details = {"triangles": len(objects), "scalars": [int(s) for s in scalars], "results": rows_all}
    return window_report(alg, "rigidity", lo, hi, combine_verdicts(verdicts), details, witnesses)


# -- cones, catalog, End rings ---------------------------------------------------

def check_cones(alg: PathAlgebra, lo: int, hi: int, samples: int = 64, seed: int = 0,
                limit: Optional[int] = None) -> WindowReport:
    """cone(top stalk -> Y) ≅ Y truncated to [m, n-1] for the window objects with m < n."""
    verdicts, witnesses, checked = [], [], []
    objects = [cid for cid in window_objects(alg, lo, hi) if not cid.is_stalk]
    if limit is not None:
        objects = objects[:limit]
    for cid in objects:
        inc = spanmorph.truncation_inclusion(alg, cid, cid.n)
        c, _, _ = cone(alg, inc)
        expected = catalog.lower_truncation(cid, alg.r, cid.n - 1)
        result = is_isomorphic(alg, c, realize(alg, expected), samples, seed)
        verdict = {True: "pass", False: "fail"}.get(result, "undetermined")
        verdicts.append(verdict)
        checked.append(str(cid))
        if verdict != "pass":
            witnesses.append({"object": str(cid), "expected": str(expected), "result": verdict})
    return window_report(alg, "cones", lo, hi, combine_verdicts(verdicts), {"objects": checked}, witnesses)


def check_catalog(alg: PathAlgebra, lo: int, hi: int, samples: int = 64, seed: int = 0,
                  progress: bool = False) -> WindowReport:
    """d² = 0, indecomposability and pairwise non-isomorphism of the window objects."""
    objects = window_objects(alg, lo, hi)
    witnesses, verdicts = [], []
    for cid in objects:
        if not is_indecomposable(alg, realize(alg, cid)):
            witnesses.append({"object": str(cid), "reason": "decomposable"})
    for x_id, y_id in _progress(list(itertools.combinations(objects, 2)), "catalog", progress):
        result = is_isomorphic(alg, realize(alg, x_id), realize(alg, y_id), samples, seed)
        if result is None:
            verdicts.append("undetermined")
        elif result:
            witnesses.append({"object": str(x_id), "other": str(y_id), "reason": "isomorphic"})
    verdicts.append("fail" if witnesses else "pass")
    return window_report(alg, "catalog", lo, hi, combine_verdicts(verdicts), {"objects": len(objects)}, witnesses)


def check_end_rings(alg: PathAlgebra, lo: int, hi: int) -> WindowReport:
    """dim End_K = 2 on X-objects for r = 1 (with Δ² ≃ 0), 1 everywhere else."""
    witnesses, dims = [], {}
    for cid in window_objects(alg, lo, hi):
        x = realize(alg, cid)
        end = hom_kb(alg, x, x)
        dims[str(cid)] = end.dim
        expected = 2 if alg.r == 1 and cid.family == "X" else 1
        if end.dim != expected:
            witnesses.append({"object": str(cid), "dim": end.dim, "expected": expected})
        if alg.r == 1 and cid.family == "X":
            d = catalog.delta(alg, cid.m, cid.n)
            if not end.reduce(d).any() or end.reduce(compose(alg, d, d)).any():
                witnesses.append({"object": str(cid), "reason": "Δ zero or Δ² ≄ 0"})
    return window_report(alg, "end", lo, hi, "fail" if witnesses else "pass", {"dims": dims}, witnesses)


# -- centres --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CenterResult:
    """
    A basis of the (window) centre.

    Unknowns are the coordinates of λ_U in the frame {Id, radical} of each End_K(U);
    `constraints` is the linear system they satisfy and `basis` holds its solutions as
    rows, in reduced echelon form with the identity coordinates first.
    """

    alg: PathAlgebra
    objects: Tuple[CatalogId, ...]
    variables: Tuple[Tuple[CatalogId, int], ...]
    frames: Dict[CatalogId, np.ndarray]
    constraints: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def assignment(self, vector: np.ndarray) -> Dict[CatalogId, np.ndarray]:
        """End_K(U) coordinates of the element with the given unknowns."""
        p = self.alg.prime
        values = {}
        for cid in self.objects:
            idx = [i for i, (u, _) in enumerate(self.variables) if u == cid]
            order = [self.variables[i][1] for i in idx]
            local = np.zeros(len(idx), dtype=np.int64)
            for i, j in zip(idx, order):
                local[j] = vector[i]
            values[cid] = matmul(self.frames[cid], local, p)
        return values

    def unknowns(self, values: Dict[CatalogId, np.ndarray]) -> Optional[np.ndarray]:
        """Inverse of `assignment`; None when some value is outside the frame."""
        p = self.alg.prime
        vector = np.zeros(len(self.variables), dtype=np.int64)
        for cid in self.objects:
            frame = self.frames[cid]
            value = values.get(cid, np.zeros(frame.shape[0], dtype=np.int64))
            found = solve(frame, value, p)
            if found is None:
                return None
            for i, (u, j) in enumerate(self.variables):
                if u == cid:
                    vector[i] = found[0][j]
        return vector

    def contains(self, values: Dict[CatalogId, np.ndarray]) -> bool:
        vector = self.unknowns(values)
        if vector is None:
            return False
        if self.constraints.size == 0:
            return True
        return not matmul(self.constraints, vector, self.alg.prime).any()

    def is_identity_free(self, row: np.ndarray) -> bool:
        return not any(row[i] % self.alg.prime for i, (_, j) in enumerate(self.variables) if j == 0)

    def to_json(self) -> dict:
        elements = []
        for row in self.basis:
            values = self.assignment(row)
            elements.append({str(cid): [int(c) for c in v] for cid, v in values.items() if v.any()})
        return {"dim": self.dim, "objects": [str(c) for c in self.objects], "elements": elements}


def _end_frame_matrix(frame: EndFrame) -> np.ndarray:
    k = frame.dim
    if frame.local:
        return np.concatenate([frame.identity.reshape(-1, 1), frame.radical], axis=1)
    return np.eye(k, dtype=np.int64)


def _center(alg: PathAlgebra, lo: int, hi: int, order: str, triangle: bool) -> CenterResult:
    p = alg.prime
    objects = tuple(window_objects(alg, lo, hi))
    complexes = {cid: realize(alg, cid) for cid in objects}
    frames: Dict[CatalogId, np.ndarray] = {}
    reps: Dict[CatalogId, List[ChainMap]] = {}
    for cid in objects:
        ef = endomorphism_frame(alg, complexes[cid])
        frames[cid] = _end_frame_matrix(ef)
        reps[cid] = [ef.space.representative(frames[cid][:, j]) for j in range(frames[cid].shape[1])]

    variables = [(cid, 0) for cid in objects] + [
        (cid, j) for cid in objects for j in range(1, frames[cid].shape[1])
    ]
    if order == "reverse":
        variables.reverse()
    index = {var: i for i, var in enumerate(variables)}

    rows: List[np.ndarray] = []

    def add_block(columns: Dict[int, np.ndarray], height: int):
        block = np.zeros((height, len(variables)), dtype=np.int64)
        for col, values in columns.items():
            block[:, col] = np.mod(block[:, col] + values, p)
        rows.extend(block)

    for u_id in objects:
        for v_id in objects:
            space = hom_kb(alg, complexes[u_id], complexes[v_id])
            for f in space.basis:
                columns: Dict[int, np.ndarray] = {}
                for j, e in enumerate(reps[v_id]):
                    col = index[(v_id, j)]
                    columns[col] = np.mod(columns.get(col, 0) + space.reduce(compose(alg, e, f)), p)
                for j, e in enumerate(reps[u_id]):
                    col = index[(u_id, j)]
                    columns[col] = np.mod(columns.get(col, 0) - space.reduce(compose(alg, f, e)), p)
                add_block(columns, space.dim)

    if triangle:
        present = set(objects)
        for u_id in objects:
            v_id = catalog.shift_id(u_id, 1)
            if v_id not in present:
                continue
            t = catalog.orbit_iso(alg, u_id, 1)
            t_inv = catalog.orbit_iso_inverse(alg, u_id, 1)
            space = hom_kb(alg, complexes[v_id], complexes[v_id])
            columns = {}
            for j in range(frames[v_id].shape[1]):
                columns[index[(v_id, j)]] = frames[v_id][:, j].copy()
            for j, e in enumerate(reps[u_id]):
                conj = compose(alg, t, compose(alg, shift_map(alg, e, 1), t_inv))
                columns[index[(u_id, j)]] = np.mod(-space.reduce(conj), p)
            add_block(columns, space.dim)

    constraints = np.stack(rows) if rows else np.zeros((0, len(variables)), dtype=np.int64)
    solutions = kernel(constraints, p)
    if solutions.shape[1]:
        reduced, pivots = rref(solutions.T, p)
        basis = reduced[:len(pivots)]
    else:
        basis = np.zeros((0, len(variables)), dtype=np.int64)
    logger.debug(f"centre [{lo},{hi}] ({order}{', triangle' if triangle else ''}): "
                 f"{len(variables)} unknowns, {constraints.shape[0]} constraints, dim {basis.shape[0]}")
    return CenterResult(alg, objects, tuple(variables), frames, constraints, basis)


def window_center(alg: PathAlgebra, lo: int, hi: int, order: str = "forward") -> CenterResult:
    """Natural endomorphisms of the identity on the window objects."""
    return _center(alg, lo, hi, order, triangle=False)


def window_triangle_center(alg: PathAlgebra, lo: int, hi: int, order: str = "forward") -> CenterResult:
    """The window centre with λ_{ΣU} = t∘Σ(λ_U)∘t^{-1} wherever ΣU stays in the window."""
    return _center(alg, lo, hi, order, triangle=True)


def delta_element(alg: PathAlgebra, center: CenterResult, cid: CatalogId) -> Dict[CatalogId, np.ndarray]:
    """δ(X): Δ on X = X(m,n), zero on every other object."""
    x = realize(alg, cid)
    values = {u: np.zeros(center.frames[u].shape[0], dtype=np.int64) for u in center.objects}
    values[cid] = hom_kb(alg, x, x).reduce(catalog.delta(alg, cid.m, cid.n))
    return values


def check_center(alg: PathAlgebra, lo: int, hi: int) -> WindowReport:
    center = window_center(alg, lo, hi)
    oracle = window_center(alg, lo, hi, order="reverse")
    witnesses = []
    if oracle.dim != center.dim:
        witnesses.append({"reason": "oracle dimension differs", "dim": center.dim, "oracle": oracle.dim})
    x_objects = [cid for cid in center.objects if cid.family == "X"]
    if alg.r == 1:
        for cid in x_objects:
            if not center.contains(delta_element(alg, center, cid)):
                witnesses.append({"reason": "δ(X) not central", "object": str(cid)})
    radical_rows = [row for row in center.basis if center.is_identity_free(row)]
    for a, b in itertools.combinations_with_replacement(range(len(radical_rows)), 2):
        left, right = center.assignment(radical_rows[a]), center.assignment(radical_rows[b])
        for cid in center.objects:
            frame = endomorphism_frame(alg, realize(alg, cid))
            if frame.product(left[cid], right[cid]).any():
                witnesses.append({"reason": "product of radical central elements ≠ 0", "object": str(cid)})
                break
    predicted = 1 + len(x_objects) if alg.r == 1 else 1
    details = {
        "dim": center.dim,
        "oracle_dim": oracle.dim,
        "predicted_dim": predicted,
        "matches_prediction": center.dim == predicted,
        "center": center.to_json(),
    }
    if witnesses:
        verdict = "fail"
    elif center.dim != predicted:
        logger.warning(f"window centre dimension {center.dim} differs from the prediction {predicted}")
        verdict = "undetermined"
    else:
        verdict = "pass"
    return window_report(alg, "center", lo, hi, verdict, details, witnesses)


def check_restriction(alg: PathAlgebra, lo: int, hi: int) -> WindowReport:
    """Kernel of the restriction of the triangle centre to the stalk objects."""
    p = alg.prime
    center = window_triangle_center(alg, lo, hi)
    stalks = [cid for cid in center.objects if cid.is_stalk]
    images = []
    for row in center.basis:
        values = center.assignment(row)
        images.append(np.concatenate([values[cid] for cid in stalks]) if stalks else np.zeros(0, dtype=np.int64))
    restricted_rank = rank(np.stack(images), p) if images and images[0].size else 0
    kernel_dim = center.dim - restricted_rank
    # r = 1: one Δ-orbit per length n - m of the non-stalk X-objects
    expected = hi - lo if alg.r == 1 else 0
    verdict = "pass" if kernel_dim == expected else "fail"
    details = {
        "triangle_center_dim": center.dim,
        "kernel_dim": kernel_dim,
        "expected_kernel_dim": expected,
        "stalks": len(stalks),
    }
    witnesses = [] if verdict == "pass" else [{"kernel_dim": kernel_dim, "expected": expected}]
    return window_report(alg, "restriction", lo, hi, verdict, details, witnesses)


# -- orbits ---------------------------------------------------------------------

def check_orbit(alg: PathAlgebra, m: int, n: int, ks: Sequence[int] = (1, 2),
                samples: int = 64, seed: int = 0) -> WindowReport:
    """t∘Σ(Δ_{m,n})∘t^{-1} ≃ Δ_{m-1,n-1}, and Σ^k X(m,n) ≅ X(m-k,n-k) ≇ X(m,n) for k ≠ 0."""
    witnesses = []
    t = catalog.t_iso(alg, m, n)
    t_inv = catalog.t_iso_inverse(alg, m, n)
    target = realize(alg, catalog.X(m - 1, n - 1))
    end = hom_kb(alg, target, target)
    conj = compose(alg, t, compose(alg, shift_map(alg, catalog.delta(alg, m, n), 1), t_inv))
    if not np.array_equal(end.reduce(conj), end.reduce(catalog.delta(alg, m - 1, n - 1))):
        witnesses.append({"reason": "conjugation", "m": m, "n": n})
    x = realize(alg, catalog.X(m, n))
    for k in ks:
        shifted = shift(alg, x, k)
        if not is_homotopy_equivalence(alg, catalog.orbit_iso(alg, catalog.X(m, n), k)):
            witnesses.append({"reason": "orbit map not an equivalence", "k": k})
        if k != 0 and is_isomorphic(alg, shifted, x, samples, seed) is not False:
            witnesses.append({"reason": "Σ^k X ≅ X", "k": k})
    lo, hi = min(m, n) - max(ks, default=0), max(m, n)
    return window_report(alg, "orbit", lo, hi, "fail" if witnesses else "pass",
                         {"object": str(catalog.X(m, n)), "ks": list(ks)}, witnesses)


def check_orbit_window(alg: PathAlgebra, lo: int, hi: int, ks: Sequence[int] = (1, 2)) -> WindowReport:
    """Orbit maps of every window object; for r = 1 also the conjugation identity on X-objects."""
    witnesses, verdicts = [], []
    objects = window_objects(alg, lo, hi)
    present = set(objects)
    for cid in objects:
        if catalog.shift_id(cid, 1) not in present:
            continue
        if not is_homotopy_equivalence(alg, catalog.orbit_iso(alg, cid, 1)):
            witnesses.append({"object": str(cid), "reason": "orbit map not an equivalence"})
        if alg.r == 1 and cid.family == "X":
            sub = check_orbit(alg, cid.m, cid.n, ks)
            verdicts.append(sub.verdict)
            witnesses.extend(dict(w, object=str(cid)) for w in sub.witnesses)
    verdicts.append("fail" if witnesses else "pass")
    return window_report(alg, "orbit", lo, hi, combine_verdicts(verdicts), {"objects": len(objects)}, witnesses)


def check_almost_vanishing_window(alg: PathAlgebra, lo: int, hi: int, margin: int = 1) -> WindowReport:
    """Every X(m,n) at distance ≥ margin from the window ends (r = 1)."""
    if alg.r != 1:
        return window_report(alg, "almost-vanishing", lo, hi, "pass", {"applicable": False})
    witnesses, checked = [], []
    for cid in window_objects(alg, lo + margin, hi - margin):
        if cid.family != "X":
            continue
        sub = check_almost_vanishing(alg, cid.m, cid.n, lo, hi)
        checked.append(str(cid))
        witnesses.extend(dict(w, object=str(cid)) for w in sub.witnesses)
    return window_report(alg, "almost-vanishing", lo, hi, "fail" if witnesses else "pass",
                         {"applicable": True, "objects": checked, "margin": margin}, witnesses)


def _unsupported(alg: PathAlgebra, name: str):
    if not alg.presentation.suites_supported:
        raise ValueError(f"✗ Error: suite {name!r} needs r < N, got {alg.presentation.name}")


def run_suite(alg: PathAlgebra, name: str, lo: int, hi: int, settings) -> WindowReport:
    """Dispatch one suite by name; `settings` supplies samples, seed, margins, scalars and workers."""
    _unsupported(alg, name)
    if name == "spanning":
        return check_spanning(alg, lo, hi, settings.spanning_margin, progress=settings.progress)
    if name == "homdim":
        return check_homdim(alg, lo, hi, settings.workers)
    if name == "almost-vanishing":
        return check_almost_vanishing_window(alg, lo, hi, settings.almost_vanishing_margin)
    if name == "rigidity":
        return check_rigidity(alg, lo, hi, settings.scalars, settings.samples, settings.enumeration_cap,
                              settings.seed, settings.progress)
    if name == "center":
        return check_center(alg, lo, hi)
    if name == "orbit":
        return check_orbit_window(alg, lo, hi)
    if name == "catalog":
        return check_catalog(alg, lo, hi, settings.samples, settings.seed, settings.progress)
    if name == "end":
        return check_end_rings(alg, lo, hi)
    if name == "cones":
        return check_cones(alg, lo, hi, settings.samples, settings.seed)
    if name == "restriction":
        return check_restriction(alg, lo, hi)
    raise ValueError(f"✗ Error: unknown suite {name!r}")


SUITES = ("spanning", "homdim", "almost-vanishing", "rigidity", "center", "orbit",
          "catalog", "end", "cones", "restriction")
