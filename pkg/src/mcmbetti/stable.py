"""MCM models, Orlov-style stabilization, complete resolutions, stable Ext.

An McmModel wraps an MCM module together with a homological ledger: the
object it denotes is module[shift] in the stable category, and twist_log
records the accumulated internal twists for reporting.  Derived-category
shifts are realized on the stable side: [-1] = syzygy, [+1] = cosyzygy,
internal twists act directly on presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fields
from .errors import WindowTooSmall
from .homalg import DualModule, a_dual
from .modules import (
    DEFAULT_BOUND,
    FreeModule,
    GradedMap,
    BettiTable,
    ModulePresentation,
    depth_of,
    map_from_generators,
    minimize_presentation,
    minimized,
    resolve,
    syzygy,
    zero_map_into,
)
from .polys import Polynomial


# ---------------------------------------------------------------------------
# free summands


def _hom_into_twist_values(M: ModulePresentation, t: int):
    """All degree-0 maps M -> A(-t), as their scalar values on the degree-t
    generators of M; returns (matrix values[b][r], generator positions)."""
    ring = M.ring
    fld = ring.field
    pres = M.pres
    twists = pres.target.twists
    amb_dims = [ring.dim(tr - t) for tr in twists]
    amb_off = np.concatenate([[0], np.cumsum(amb_dims)]).astype(int)
    rows = []
    for c in range(pres.source.rank):
        dc = pres.source.twists[c]
        n_out = ring.dim(dc - t)
        if n_out == 0:
            continue
        row = fld.zeros(n_out, int(amb_off[-1]))
        for r in range(pres.target.rank):
            e = pres.entries[r][c]
            if e is None or e.is_zero() or amb_dims[r] == 0:
                continue
            row[:, amb_off[r]:amb_off[r + 1]] = ring.mult_matrix(e, twists[r] - t)
        rows.append(row)
    cons = np.concatenate(rows, axis=0) if rows else fld.zeros(0, int(amb_off[-1]))
    hom = fields.kernel_basis(cons, fld)
    scalar_rows = [r for r, tr in enumerate(twists) if tr == t]
    vals = fld.zeros(hom.shape[1], len(scalar_rows))
    for b in range(hom.shape[1]):
        for k, r in enumerate(scalar_rows):
            vals[b, k] = hom[amb_off[r], b] if amb_dims[r] else 0
    return vals, scalar_rows


def strip_free_summands(M: ModulePresentation) -> tuple[ModulePresentation, int]:
    """Split off free summands: a generator g of twist t lies in one iff some
    degree-0 map M -> A(-t) takes a unit value on g."""
    M = minimized(M)
    stripped = 0
    while M.f0.rank:
        hit = None
        for t in sorted(set(M.f0.twists)):
            vals, rows = _hom_into_twist_values(M, t)
            nz = np.argwhere(vals != 0)
            if len(nz):
                hit = rows[int(nz[0][1])]
                break
        if hit is None:
            break
        # ker(phi) = M / A*g: add the generator as a relation, then cancel
        pres = M.pres
        ring = M.ring
        unit_col = [None] * pres.target.rank
        unit_col[hit] = Polynomial.constant(ring.nvars, 1)
        entries = [row + [unit_col[r]] for r, row in enumerate(pres.entries)]
        src = FreeModule(pres.source.twists + (pres.target.twists[hit],))
        M = minimized(ModulePresentation(
            ring, GradedMap(ring, src, pres.target, entries, check=False)))
        stripped += 1
    return M, stripped


# ---------------------------------------------------------------------------
# MCM models


@dataclass
class McmModel:
    """An MCM representative; denotes the object module[shift]."""

    module: ModulePresentation
    shift: int = 0
    twist_log: int = 0
    depth_certificate: int | None = None

    @property
    def ring(self):
        return self.module.ring

    def is_zero(self) -> bool:
        return self.module.f0.rank == 0

    def twist(self, t: int) -> "McmModel":
        return McmModel(self.module.twist(t), self.shift,
                        self.twist_log + t, self.depth_certificate)


def cached_cr(module: ModulePresentation, lo: int, hi: int,
              degree_hi: int) -> "CompleteResolution":
    """Complete resolution cached on the presentation, widened on demand."""
    cur = getattr(module, "_cr_cache", None)
    if cur is None or cur.lo > lo or cur.hi < hi or cur.degree_hi < degree_hi:
        if cur is not None:
            lo, hi = min(lo, cur.lo), max(hi, cur.hi)
            degree_hi = max(degree_hi, cur.degree_hi)
        cur = complete_resolution(module, lo, hi, degree_hi)
        module._cr_cache = cur
    return cur


def certify_mcm(M: ModulePresentation, degree_hi: int = DEFAULT_BOUND) -> int:
    d = depth_of(M, degree_hi)
    if d != M.ring.krull_dim:
        raise ValueError(f"module is not MCM: depth {d} != dim {M.ring.krull_dim}")
    return d


def cosyzygy_module(N: ModulePresentation,
                    degree_hi: int = DEFAULT_BOUND) -> ModulePresentation:
    """cosyz(N) = (syz(N^v))^v for MCM N."""
    dual = a_dual(N, degree_hi)
    if dual.presentation.f0.rank == 0:
        return dual.presentation
    s = syzygy(dual.presentation, 1, degree_hi)
    back = a_dual(s, degree_hi)
    out, _ = strip_free_summands(back.presentation)
    return out


def stabilize(M: ModulePresentation, degree_hi: int = DEFAULT_BOUND) -> McmModel:
    """Orlov stabilization cosyz^c(syz^c(M)) with c = dim A; free summands
    are stripped at every step and the result carries a depth certificate."""
    ring = M.ring
    gp = ring.gorenstein_parameter()
    assert gp == 0, f"stabilization ledger assumes Gorenstein parameter 0, got {gp}"
    cur, _ = strip_free_summands(M)
    if cur.f0.rank == 0:
        return McmModel(cur, 0)
    c = ring.krull_dim
    cur = syzygy(cur, c, degree_hi)
    cur, _ = strip_free_summands(cur)
    if cur.f0.rank == 0:
        return McmModel(cur, 0)
    for _ in range(c):
        cur = cosyzygy_module(cur, degree_hi)
        if cur.f0.rank == 0:
            return McmModel(cur, 0)
    cert = certify_mcm(cur, degree_hi)
    return McmModel(cur, 0, depth_certificate=cert)


def model_syzygy(model: McmModel, k: int,
                 degree_hi: int = DEFAULT_BOUND) -> McmModel:
    """Model of obj[-k]; the ledger shift is realized by the module itself."""
    if k == 0 or model.is_zero():
        return model
    mod = syzygy(model.module, k, degree_hi)
    mod, _ = strip_free_summands(mod)
    return McmModel(mod, model.shift, model.twist_log)


def model_cosyzygy(model: McmModel, k: int,
                   degree_hi: int = DEFAULT_BOUND) -> McmModel:
    """Model of obj[+k]."""
    if k == 0 or model.is_zero():
        return model
    mod = model.module
    for _ in range(k):
        mod = cosyzygy_module(mod, degree_hi)
    return McmModel(mod, model.shift, model.twist_log)


# ---------------------------------------------------------------------------
# complete resolutions


class CompleteResolution:
    """Doubly infinite window: frees[i] for lo <= i <= hi, diffs[i]: P_i ->
    P_{i-1} for lo < i <= hi.  Right half is the minimal resolution; left
    half is the transpose-dual of the minimal resolution of N^v, glued by
    evaluating the dual generators on the generators of N."""

    def __init__(self, ring, frees: dict, diffs: dict, lo: int, hi: int,
                 degree_hi: int):
        self.ring = ring
        self.frees = frees
        self.diffs = diffs
        self.lo = lo
        self.hi = hi
        self.degree_hi = degree_hi

    def free(self, i: int) -> FreeModule:
        if i < self.lo or i > self.hi:
            raise WindowTooSmall(f"index {i} outside CR window [{self.lo}, {self.hi}]")
        return self.frees[i]

    def betti_cells(self, imin: int, imax: int) -> BettiTable:
        cells: dict = {}
        for i in range(imin, imax + 1):
            for t in self.free(i).twists:
                cells[(i, t)] = cells.get((i, t), 0) + 1
        return BettiTable(cells, degree_hi=self.degree_hi)

    def check(self):
        for i in self.diffs:
            assert self.diffs[i].is_minimal(), f"CR differential {i} not minimal"
            if i + 1 in self.diffs:
                lodeg = min(self.diffs[i + 1].source.twists, default=0)
                for j in range(lodeg, self.degree_hi + 1):
                    prod = self.ring.field.matmul(self.diffs[i].strand(j),
                                                  self.diffs[i + 1].strand(j))
                    assert not np.any(prod != 0), \
                        f"CR composition nonzero at index {i}, degree {j}"


def complete_resolution(N: ModulePresentation, lo: int, hi: int,
                        degree_hi: int = DEFAULT_BOUND) -> CompleteResolution:
    ring = N.ring
    Nmin = minimized(N)
    frees: dict = {}
    diffs: dict = {}
    res = resolve(Nmin, max(hi, 0), degree_hi)
    for i in range(0, max(hi, 0) + 1):
        frees[i] = res.frees[i]
    for i in range(1, max(hi, 0) + 1):
        diffs[i] = res.diffs[i - 1]
    if lo < 0:
        dual = a_dual(Nmin, degree_hi)
        dres = resolve(dual.presentation, -lo - 1, degree_hi)
        for i in range(0, -lo):
            frees[-1 - i] = FreeModule(tuple(-t for t in dres.frees[i].twists))
        for i in range(1, -lo):
            diffs[-i] = dres.diffs[i - 1].transpose_dual()
        # junction P_0 -> Q_0^v: generator g_r maps to (phi_b(g_r))_b
        vals = dual.gen_values()
        entries = [[vals[b][1][r] for r in range(Nmin.f0.rank)]
                   for b in range(len(vals))]
        diffs[0] = GradedMap(ring, frees[0], frees[-1], entries)
    return CompleteResolution(ring, frees, diffs, lo, hi, degree_hi)


# ---------------------------------------------------------------------------
# stable Ext


def _hom_strand_dim(ring, free: FreeModule, N2: ModulePresentation, j: int) -> int:
    return sum(N2.piece_dim(t + j) for t in free.twists)


def _hom_differential(ring, d: GradedMap, N2: ModulePresentation,
                      j: int) -> np.ndarray:
    """Hom(P_n, N2)_j -> Hom(P_{n+1}, N2)_j, phi |-> phi o d  (d: P_{n+1} -> P_n)."""
    fld = ring.field
    src_t = d.target.twists   # P_n generators index phi components
    tgt_t = d.source.twists   # P_{n+1} generators index the output
    rdims = [N2.piece_dim(t + j) for t in tgt_t]
    cdims = [N2.piece_dim(t + j) for t in src_t]
    out = fld.zeros(sum(rdims), sum(cdims))
    ro = np.concatenate([[0], np.cumsum(rdims)]).astype(int)
    co = np.concatenate([[0], np.cumsum(cdims)]).astype(int)
    for c_idx, tc in enumerate(tgt_t):
        for r_idx, tr in enumerate(src_t):
            e = d.entries[r_idx][c_idx]
            if e is None or e.is_zero() or not rdims[c_idx] or not cdims[r_idx]:
                continue
            out[ro[c_idx]:ro[c_idx + 1], co[r_idx]:co[r_idx + 1]] = \
                N2.poly_mult(e, tr + j)
    return out


class HomComplex:
    """Graded Hom(CR(N1), N2); cohomology dimensions per (position, strand)."""

    def __init__(self, cr: CompleteResolution, N2: ModulePresentation):
        self.cr = cr
        self.N2 = N2
        self._rank_cache: dict = {}

    def _rank(self, n: int, j: int) -> int:
        # rank of Hom(P_n, N2)_j -> Hom(P_{n+1}, N2)_j
        key = (n, j)
        if key not in self._rank_cache:
            d = self.cr.diffs.get(n + 1)
            if d is None:
                raise WindowTooSmall(
                    f"CR window [{self.cr.lo}, {self.cr.hi}] lacks index {n + 1}")
            mat = _hom_differential(self.cr.ring, d, self.N2, j)
            self._rank_cache[key] = fields.rank(mat, self.cr.ring.field)
        return self._rank_cache[key]

    def cohomology_dim(self, n: int, j: int) -> int:
        """dim of the degree-j strand of H^n(Hom(CR, N2))."""
        cn = _hom_strand_dim(self.cr.ring, self.cr.free(n), self.N2, j)
        return (cn - self._rank(n, j)) - self._rank(n - 1, j)


def stable_ext_dim(N1: ModulePresentation, N2: ModulePresentation, n: int,
                   j: int, degree_hi: int = DEFAULT_BOUND,
                   cr: CompleteResolution | None = None) -> int:
    """dim of the degree-j strand of Ext-underline^n(N1, N2), computed from a
    complete resolution of N1."""
    if minimize_presentation(N1.pres).target.rank == 0 or \
       minimize_presentation(N2.pres).target.rank == 0:
        return 0
    if cr is None:
        cr = cached_cr(N1, n - 1, n + 1, degree_hi)
    return HomComplex(cr, N2).cohomology_dim(n, j)


def model_stable_ext_dim(m1: McmModel, m2: McmModel, n: int, j: int,
                         degree_hi: int = DEFAULT_BOUND,
                         cr: CompleteResolution | None = None) -> int:
    """Hom(obj1, obj2[n]) in degree j, with the ledger shifts normalized:
    obj_i = module_i[shift_i], so the raw index is n + shift2 - shift1."""
    if m1.is_zero() or m2.is_zero():
        return 0
    return stable_ext_dim(m1.module, m2.module, n + m2.shift - m1.shift, j,
                          degree_hi, cr=cr)


def model_betti_table(model: McmModel, imin: int, imax: int,
                      degree_hi: int = DEFAULT_BOUND,
                      cr: CompleteResolution | None = None) -> BettiTable:
    """Betti cells of the denoted object obj = module[shift]: cell (i, j)
    counts twist-j generators of CR(module) at index i + shift."""
    if model.is_zero():
        return BettiTable({})
    if cr is None:
        cr = cached_cr(model.module, min(imin + model.shift, 0),
                       max(imax + model.shift, 0), degree_hi)
    raw = cr.betti_cells(imin + model.shift, imax + model.shift)
    return raw.shift(di=-model.shift)
