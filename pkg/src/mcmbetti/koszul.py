"""Koszul dual spaces B_m, Koszulity certification, and module models of
the diagonal-resolution sheaves R_m = Ker(B_m (x) O -> B_{m-1} (x) L).

B_m is stored in relative coordinates: a basis matrix over the product
basis (basis of B_{m-1}) x (variables), so both maps in the definition of
R_m are literal matrix compositions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fields
from .cohomology import euler_characteristic
from .errors import DegreeBoundExhausted
from .modules import (
    DEFAULT_BOUND,
    FreeModule,
    GradedMap,
    ModulePresentation,
    kernel_min_generators,
    map_from_generators,
)
from .polys import Polynomial
from .rings import GradedRing


class KoszulData:
    """dims[m] = dim B_m; basis[m] has one row per basis vector of B_m with
    coordinates over (basis of B_{m-1}) x (variables)."""

    def __init__(self, ring: GradedRing, m_max: int):
        self.ring = ring
        n = ring.nvars
        fld = ring.field
        self.dims = [1, ring.dim(1)]
        self.basis = [fld.identity(1), fld.identity(ring.dim(1))]
        mult11 = ring.multiplication_map(1, 1).matrix  # A_1 (x) A_1 -> A_2
        d2 = ring.dim(2)
        for m in range(2, m_max + 1):
            prev = self.basis[m - 1]  # (dim B_{m-1}) x (dim B_{m-2} * n)
            bprev = self.dims[m - 1]
            bprev2 = self.dims[m - 2]
            w = prev.reshape(bprev, bprev2, n)
            multr = mult11.reshape(d2, n, n)
            # (b (x) x_t) |-> sum_{c,s} w[b,c,s] * (c (x) x_s x_t)
            out = np.einsum("bcs,ust->cubt", w, multr)
            mat = fld.reduce(out.reshape(bprev2 * d2, bprev * n))
            ker = fields.kernel_basis(mat, fld)
            self.dims.append(ker.shape[1])
            self.basis.append(ker.T.copy())
        self.m_max = m_max

    def inclusion_matrix(self, m: int) -> np.ndarray:
        """B_m -> B_{m-1} (x) A_1 in product coordinates (one column per
        basis vector of B_m)."""
        return self.basis[m].T.copy()


def koszul_dual_spaces(ring: GradedRing, m_max: int) -> KoszulData:
    cache = getattr(ring, "_koszul_data", None)
    if cache is None or cache.m_max < m_max:
        cache = KoszulData(ring, m_max)
        ring._koszul_data = cache
    return cache


def _strand_differential(kd: KoszulData, k: int, e: int) -> np.ndarray:
    """B_k (x) A_e -> B_{k-1} (x) A_{e+1}: b (x) a |-> sum w[b,c,s] c (x) x_s a."""
    ring = kd.ring
    fld = ring.field
    n = ring.nvars
    bk, bk1 = kd.dims[k], kd.dims[k - 1]
    da, da1 = ring.dim(e), ring.dim(e + 1)
    if bk == 0 or da == 0 or bk1 == 0:
        return fld.zeros(bk1 * da1, bk * da)
    w = kd.basis[k].reshape(bk, kd.dims[k - 1], n)
    v = np.stack([ring.var_mult(s, e) for s in range(n)])  # (n, da1, da)
    out = np.einsum("bcs,sqa->cqba", w, v)
    return fld.reduce(out.reshape(bk1 * da1, bk * da))


@dataclass
class KoszulReport:
    passed: bool
    checked_to: int
    fail_degree: int | None = None
    fail_position: int | None = None
    witness: dict = field(default_factory=dict)
    dims: list = field(default_factory=list)


def certify_koszul(ring: GradedRing, bound: int) -> KoszulReport:
    """Exactness of every internal-degree strand of the Koszul complex
    ... -> B_k (x) A(-k) -> ... -> A -> k -> 0 for degrees 1..bound."""
    kd = koszul_dual_spaces(ring, bound)
    fld = ring.field
    for e in range(1, bound + 1):
        ranks = {}
        for k in range(1, min(e, bound) + 1):
            ranks[k] = fields.rank(_strand_differential(kd, k, e - k), fld)
        ranks[e + 1] = 0
        for k in range(0, min(e, bound) + 1):
            dim_ck = kd.dims[k] * ring.dim(e - k)
            ker = dim_ck - ranks[k] if k >= 1 else dim_ck
            if ker != ranks[k + 1]:
                return KoszulReport(
                    False, bound, fail_degree=e, fail_position=k,
                    witness={"kernel_dim": ker, "image_rank": ranks[k + 1]},
                    dims=list(kd.dims))
    return KoszulReport(True, bound, dims=list(kd.dims))


@dataclass
class RModuleModel:
    presentation: ModulePresentation
    m: int
    hilbert: list
    sheaf_rank: int | None = None
    sheaf_degree_intercept: object = None


def r_kernel_map(ring: GradedRing, m: int) -> GradedMap:
    """B_m (x) A -> B_{m-1} (x) A(1), the linear map whose kernel is R_m."""
    kd = koszul_dual_spaces(ring, max(m, 1))
    n = ring.nvars
    src = FreeModule((0,) * kd.dims[m])
    tgt = FreeModule((-1,) * kd.dims[m - 1])
    w = kd.basis[m].reshape(kd.dims[m], kd.dims[m - 1], n)
    entries = []
    for c in range(kd.dims[m - 1]):
        row = []
        for b in range(kd.dims[m]):
            terms = {}
            for s in range(n):
                if w[b, c, s] != 0:
                    ex = [0] * n
                    ex[s] = 1
                    terms[tuple(ex)] = w[b, c, s]
            row.append(Polynomial(n, terms) if terms else None)
        entries.append(row)
    return GradedMap(ring, src, tgt, entries)


def r_module(ring: GradedRing, m: int,
             degree_hi: int = DEFAULT_BOUND) -> RModuleModel:
    """Presentation of R_m^mod = Ker(B_m (x) A -> B_{m-1} (x) A(1))."""
    from .cohomology import sheaf_rank_degree

    if m == 0:
        pres = ModulePresentation.free(ring, (0,))
        rank, deg = sheaf_rank_degree(pres)
        return RModuleModel(pres, 0, [pres.piece_dim(j) for j in
                                      range(degree_hi + 1)], rank, deg)
    kmap = r_kernel_map(ring, m)
    gens = kernel_min_generators(ring, kmap.source, kmap.strand, degree_hi)
    gen_map = map_from_generators(ring, gens, kmap.source)
    rels = kernel_min_generators(ring, gen_map.source, gen_map.strand, degree_hi)
    pres = ModulePresentation(ring, map_from_generators(ring, rels,
                                                        gen_map.source))
    assert pres.piece_dim(0) == 0, "R_m must have no degree-0 sections"
    rank, deg = sheaf_rank_degree(pres)
    return RModuleModel(pres, m,
                        [pres.piece_dim(j) for j in range(degree_hi + 1)],
                        rank, deg)


def check_seq_sheaf(ring: GradedRing, m: int, bound: int,
                    degree_hi: int = DEFAULT_BOUND) -> dict:
    """Exactness of the module-level strands of
    0 -> R_m -> B_m (x) A -> B_{m-1} (x) A(1) -> ... -> A(m) -> 0
    in internal degrees m <= e <= bound."""
    kd = koszul_dual_spaces(ring, max(m, 1))
    fld = ring.field
    rm = r_module(ring, m, degree_hi)
    failures = []
    for e in range(m, bound + 1):
        # positions k = m .. 0 with term B_k (x) A_{e + m - k}
        ranks = {}
        for k in range(1, m + 1):
            ranks[k] = fields.rank(_strand_differential(kd, k, e + m - k), fld)
        ranks[m + 1] = None
        for k in range(0, m + 1):
            dim_ck = kd.dims[k] * ring.dim(e + m - k)
            ker = dim_ck - ranks[k] if k >= 1 else dim_ck
            if k < m:
                if ker != ranks[k + 1]:
                    failures.append({"e": e, "position": k,
                                     "kernel": ker, "image": ranks[k + 1]})
            else:
                # head: the kernel is R_m itself
                if ker != rm.presentation.piece_dim(e):
                    failures.append({"e": e, "position": m, "kernel": ker,
                                     "r_m_dim": rm.presentation.piece_dim(e)})
    return {"passed": not failures, "failures": failures,
            "m": m, "range": [m, bound]}


def check_ar_euler(ring: GradedRing, m: int, twist_range,
                   degree_hi: int = DEFAULT_BOUND) -> dict:
    """Euler-characteristic identity of the exact sequence
    0 -> A_0 (x) R_m -> A_1 (x) R_{m-1} -> ... -> A_m (x) R_0 -> L^m -> 0:
    sum_k (-1)^k dim A_k chi(R_{m-k}(j)) = (-1)^m chi(O(m + j))."""
    models = {i: r_module(ring, i, degree_hi) for i in range(m + 1)}
    o_model = models[0].presentation
    failures = []
    for j in twist_range:
        lhs = sum((-1) ** k * ring.dim(k)
                  * euler_characteristic(models[m - k].presentation, j)
                  for k in range(m + 1))
        rhs = (-1) ** m * euler_characteristic(o_model, m + j)
        if lhs != rhs:
            failures.append({"j": j, "lhs": lhs, "rhs": rhs})
    return {"passed": not failures, "failures": failures, "m": m}


def reciprocity_defect(ring: GradedRing, e: int, kd: KoszulData) -> int:
    """sum_k (-1)^k dim B_k dim A_{e-k}; zero on Koszul-certified rings."""
    return sum((-1) ** k * kd.dims[k] * ring.dim(e - k)
               for k in range(0, min(e, kd.m_max) + 1))
