"""Sheaf cohomology of module models via graded local duality over S.

For a module M over A = S/I with N = #variables, the graded local
cohomology is read off the dual of a finite minimal S-free resolution:

    dim H^i_m(M)_j = dim Ext_S^{N-i}(M, S(-N))_{-j}

and the cohomology table of the sheafification F = M~ on X = Proj A is

    h^{0,j} = dim M_j - dim H^0_m(M)_j + dim H^1_m(M)_j
    h^{i,j} = dim H^{i+1}_m(M)_j            for i >= 1.

Everything stays in exact linear algebra on strands of the dualized
resolution; no Cech covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fields
from .errors import DegreeBoundExhausted
from .homalg import presentation_from_pieces, truncate
from .modules import (
    DEFAULT_BOUND,
    FreeModule,
    GradedMap,
    ModulePresentation,
    s_resolution,
)
from .specio import TableDocument


class LocalCohomology:
    """Strand data of the dual complex Hom(P., S(-N)) of an S-resolution."""

    def __init__(self, M: ModulePresentation):
        self.M = M
        self.ring = M.ring
        self.S = None
        self.res = s_resolution(M)
        self.S = self.res.ring
        self.N = self.S.nvars
        # dual complex D^k = Hom(P_k, S(-N)) = (+) S(-(N - t)): twists N - t
        self.dual_twists = [
            tuple(self.N - t for t in f.twists) for f in self.res.frees
        ]
        self._dims: dict = {}
        self._cache_ranks: dict = {}

    def dual_dim(self, k: int, e: int) -> int:
        if k < 0 or k > self.res.steps:
            return 0
        return sum(self.S.dim(e - t) for t in self.dual_twists[k])

    def _dual_map(self, k: int) -> GradedMap:
        """D^{k-1} -> D^k, right-composition with d_k: transpose the entries."""
        d = self.res.diffs[k - 1]
        src = FreeModule(tuple(self.N - t for t in d.target.twists))
        tgt = FreeModule(tuple(self.N - t for t in d.source.twists))
        ent = [[d.entries[r][c] for r in range(d.target.rank)]
               for c in range(d.source.rank)]
        return GradedMap(self.S, src, tgt, ent)

    def _rank(self, k: int, e: int) -> int:
        """rank of D^{k-1}_e -> D^k_e."""
        key = (k, e)
        if key not in self._cache_ranks:
            if k <= 0 or k > self.res.steps:
                self._cache_ranks[key] = 0
            else:
                mat = self._dual_map(k).strand(e)
                self._cache_ranks[key] = fields.rank(mat, self.S.field)
        return self._cache_ranks[key]

    def ext_dim(self, k: int, e: int) -> int:
        """dim Ext_S^k(M, S(-N))_e."""
        if k < 0 or k > self.res.steps:
            return 0
        return (self.dual_dim(k, e) - self._rank(k + 1, e)) - self._rank(k, e)

    def h_m_dim(self, i: int, j: int) -> int:
        """dim H^i_m(M)_j by graded local duality."""
        return self.ext_dim(self.N - i, -j)

    def vanishing_above(self, i: int) -> int:
        """Certified T with H^i_m(M)_j = 0 for all j > T: the strand of the
        dual complex at position N - i is empty once -j is below all its
        twist offsets, i.e. for j > max(P_{N-i} twists) - N."""
        k = self.N - i
        if k < 0 or k > self.res.steps or not self.res.frees[k].twists:
            return -(10**9)
        return max(self.res.frees[k].twists) - self.N


def local_cohomology_dims(M: ModulePresentation, i: int,
                          degree_window: tuple) -> list[int]:
    lc = LocalCohomology(M)
    lo, hi = degree_window
    return [lc.h_m_dim(i, j) for j in range(lo, hi + 1)]


@dataclass
class CohomologyTable:
    cells: dict  # (i, j) -> h^{i,j}
    jrange: tuple
    dim_x: int

    def __getitem__(self, key) -> int:
        return self.cells.get(key, 0)

    def to_document(self, metadata=None) -> TableDocument:
        rows = (0, self.dim_x)
        return TableDocument("cohomology", rows, self.jrange, dict(self.cells),
                             metadata or {})


def cohomology_table(M: ModulePresentation, jmin: int, jmax: int) -> CohomologyTable:
    ring = M.ring
    d = ring.dim_x
    lc = LocalCohomology(M)
    cells = {}
    for j in range(jmin, jmax + 1):
        h0 = M.piece_dim(j) - lc.h_m_dim(0, j) + lc.h_m_dim(1, j)
        cells[(0, j)] = h0
        for i in range(1, d + 1):
            cells[(i, j)] = lc.h_m_dim(i + 1, j)
    return CohomologyTable(cells, (jmin, jmax), d)


def hilbert_polynomial(M: ModulePresentation) -> list[Fraction]:
    """Coefficients (constant first) of the Hilbert polynomial of M, taken
    from dim M_j at certifiably stable degrees (all H^i_m vanish there)."""
    ring = M.ring
    d = ring.dim_x
    lc = LocalCohomology(M)
    start = max(lc.vanishing_above(i) for i in range(0, ring.krull_dim + 1)) + 1
    pts = [(j, M.piece_dim(j)) for j in range(start, start + d + 2)]
    # Lagrange interpolation, exact
    coeffs = [Fraction(0)] * (d + 2)
    for j0, val in pts:
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j1, _ in pts:
            if j1 == j0:
                continue
            denom *= (j0 - j1)
            new = [Fraction(0)] * (len(basis) + 1)
            for a, ca in enumerate(basis):
                new[a] -= ca * j1
                new[a + 1] += ca
            basis = new
        for a, ca in enumerate(basis):
            coeffs[a] += Fraction(val) * ca / denom
    assert coeffs[-1] == 0, "Hilbert polynomial has unexpected degree"
    return coeffs[:-1]


def euler_characteristic(M: ModulePresentation, j: int) -> int:
    """chi(F(j)) = the Hilbert polynomial of M at j (exact integer)."""
    coeffs = _hp_cached(M)
    val = sum(c * j**a for a, c in enumerate(coeffs))
    assert val.denominator == 1
    return int(val)


def _hp_cached(M: ModulePresentation):
    hp = getattr(M, "_hilbert_poly", None)
    if hp is None:
        hp = hilbert_polynomial(M)
        M._hilbert_poly = hp
    return hp


def euler_from_table(table: CohomologyTable, j: int) -> int:
    return sum((-1) ** i * table[(i, j)] for i in range(table.dim_x + 1))


def sheaf_rank_degree(M: ModulePresentation) -> tuple:
    """(rank, degree-like intercept) of the sheafification from the two
    leading Hilbert coefficients, normalized against the structure sheaf."""
    ring = M.ring
    coeffs = _hp_cached(M)
    o_coeffs = _hp_cached(ModulePresentation.free(ring, (0,)))
    lead = coeffs[-1] / o_coeffs[-1]
    assert lead.denominator == 1
    return int(lead), coeffs[0]


def serre_duality_check(M: ModulePresentation, jmin: int, jmax: int,
                        dual: ModulePresentation | None = None) -> dict:
    """Check h^{i,j}(F) = h^{d-i,-j}(F^v) on the window; F^v defaults to F
    (the self-dual structure-sheaf form).  Returns a report dict."""
    ring = M.ring
    d = ring.dim_x
    table = cohomology_table(M, jmin, jmax)
    dual_table = cohomology_table(dual, -jmax, -jmin) if dual is not None \
        else cohomology_table(M, -jmax, -jmin)
    failures = []
    for j in range(jmin, jmax + 1):
        for i in range(0, d + 1):
            lhs = table[(i, j)]
            rhs = dual_table[(d - i, -j)]
            if lhs != rhs:
                failures.append({"i": i, "j": j, "lhs": lhs, "rhs": rhs})
    return {"passed": not failures, "failures": failures,
            "window": [jmin, jmax]}


# ---------------------------------------------------------------------------
# saturation


class SectionPieces:
    """Degree pieces of Hom(A_{>=t}, M), the sections module once t is deep
    enough; multiplication acts through the values on the generators."""

    def __init__(self, M: ModulePresentation, t: int, degree_hi: int):
        self.ring = M.ring
        self.M = M
        self.trunc = truncate(ModulePresentation.free(M.ring, (0,)), t,
                              degree_hi)
        self._data: dict = {}

    def _hom(self, j: int):
        # phi: A_{>=t} -> M of degree j: values on generators subject to the
        # relation columns of the truncation presentation
        if j in self._data:
            return self._data[j]
        ring = self.ring
        fld = ring.field
        pres = self.trunc.pres
        twists = pres.target.twists
        amb = [self.M.piece_dim(tr + j) for tr in twists]
        off = np.concatenate([[0], np.cumsum(amb)]).astype(int)
        rows = []
        for c in range(pres.source.rank):
            dc = pres.source.twists[c]
            n_out = self.M.piece_dim(dc + j)
            if n_out == 0:
                continue
            row = fld.zeros(n_out, int(off[-1]))
            for r in range(pres.target.rank):
                e = pres.entries[r][c]
                if e is None or e.is_zero() or amb[r] == 0:
                    continue
                row[:, off[r]:off[r + 1]] = self.M.poly_mult(e, twists[r] + j)
            rows.append(row)
        cons = np.concatenate(rows, axis=0) if rows else fld.zeros(0, int(off[-1]))
        basis = fields.kernel_basis(cons, fld)
        self._data[j] = (basis, off)
        return self._data[j]

    def dim(self, j: int) -> int:
        return self._hom(j)[0].shape[1]

    def var_mult(self, v: int, j: int) -> np.ndarray:
        ring = self.ring
        fld = ring.field
        basis, off = self._hom(j)
        basis2, off2 = self._hom(j + 1)
        if basis.shape[1] == 0 or basis2.shape[1] == 0:
            return fld.zeros(basis2.shape[1], basis.shape[1])
        twists = self.trunc.pres.target.twists
        out = fld.zeros(int(off2[-1]), basis.shape[1])
        for r, tr in enumerate(twists):
            if off[r + 1] > off[r] and off2[r + 1] > off2[r]:
                out[off2[r]:off2[r + 1], :] = fld.matmul(
                    self.M.var_mult(v, tr + j), basis[off[r]:off[r + 1], :])
        return fields.solve_batch(basis2, out, fld)


def saturate_above(M: ModulePresentation, l: int,
                   degree_hi: int = DEFAULT_BOUND) -> ModulePresentation:
    """Presentation of (+)_{j >= l} H^0(X, M~(j)), zero below l.

    Uses the certified local-cohomology vanishing threshold: above it the
    sections agree with M itself and a plain truncation suffices; below it
    sections are computed as Hom(A_{>= t}, M) and checked degreewise against
    the dimension predicted by local duality.
    """
    ring = M.ring
    if M.piece_dim(degree_hi) == 0 and all(
            M.piece_dim(j) == 0 for j in range(l, degree_hi)):
        # finite-length or zero tail: the sheafification vanishes
        return ModulePresentation.free(ring, ())
    lc = LocalCohomology(M)
    threshold = max(lc.vanishing_above(0), lc.vanishing_above(1)) + 1
    if threshold <= l:
        return truncate(M, l, degree_hi)

    expected = {}
    for j in range(l, degree_hi + 1):
        expected[j] = M.piece_dim(j) - lc.h_m_dim(0, j) + lc.h_m_dim(1, j)

    t = max(threshold, l)
    while t <= degree_hi:
        pieces = SectionPieces(M, t, degree_hi)
        if all(pieces.dim(j) == expected[j] for j in range(l, degree_hi + 1)):
            full, _ = presentation_from_pieces(
                _WindowPieces(pieces, l), l, gen_hi=degree_hi,
                rel_hi=degree_hi, vanish_above=None)
            return full
        t += 1
    raise DegreeBoundExhausted(
        "section module did not stabilize within the degree bound",
        witness_degree=degree_hi)


class _WindowPieces:
    """Pieces restricted to degrees >= l (zero below)."""

    def __init__(self, pieces, l: int):
        self.ring = pieces.ring
        self.pieces = pieces
        self.l = l

    def dim(self, j: int) -> int:
        return self.pieces.dim(j) if j >= self.l else 0

    def var_mult(self, v: int, j: int) -> np.ndarray:
        if j < self.l:
            return self.ring.field.zeros(self.dim(j + 1), 0)
        return self.pieces.var_mult(v, j)


# ---------------------------------------------------------------------------
# graded dual of the top local cohomology (derived-sections correction)


class ExtStrandPieces:
    """Subquotient pieces of Ext_S^k(M, S(-N)) with the induced action."""

    def __init__(self, lc: LocalCohomology, k: int):
        self.lc = lc
        self.k = k
        self.ring = lc.M.ring  # action of A (descends: I kills Ext)
        self.S = lc.S
        self._basis: dict = {}

    def _span(self, e: int):
        if e in self._basis:
            return self._basis[e]
        lc, k = self.lc, self.k
        fld = self.S.field
        amb = lc.dual_dim(k, e)
        if amb == 0:
            self._basis[e] = (fld.zeros(0, 0), fld.zeros(0, 0))
            return self._basis[e]
        if k + 1 <= lc.res.steps:
            ker = fields.kernel_basis(lc._dual_map(k + 1).strand(e), fld)
        else:
            ker = fld.identity(amb)
        if k >= 1:
            img = lc._dual_map(k).strand(e)
            img = fields.column_space_basis(img, fld)
        else:
            img = fld.zeros(amb, 0)
        combined = np.concatenate([img, ker], axis=1)
        _, pivots = fields.rref(combined, fld)
        compl = combined[:, [p for p in pivots if p >= img.shape[1]]]
        self._basis[e] = (np.concatenate([img, compl], axis=1), compl)
        return self._basis[e]

    def dim(self, e: int) -> int:
        return self._span(e)[1].shape[1]

    def coords(self, e: int, vecs: np.ndarray) -> np.ndarray:
        solver, compl = self._span(e)
        if compl.shape[1] == 0 or vecs.shape[1] == 0:
            return self.S.field.zeros(compl.shape[1], vecs.shape[1])
        sol = fields.solve_batch(solver, vecs, self.S.field)
        return sol[solver.shape[1] - compl.shape[1]:, :]

    def var_mult_on_ext(self, v: int, e: int) -> np.ndarray:
        """x_v: Ext_e -> Ext_{e+1} in the chosen complement bases."""
        lc, k = self.lc, self.k
        fld = self.S.field
        _, compl = self._span(e)
        if compl.shape[1] == 0:
            return fld.zeros(self.dim(e + 1), 0)
        twists = lc.dual_twists[k]
        dims_e = [self.S.dim(e - t) for t in twists]
        dims_e1 = [self.S.dim(e + 1 - t) for t in twists]
        off = np.concatenate([[0], np.cumsum(dims_e)]).astype(int)
        off1 = np.concatenate([[0], np.cumsum(dims_e1)]).astype(int)
        out = fld.zeros(int(off1[-1]), compl.shape[1])
        for r in range(len(twists)):
            if dims_e[r] and dims_e1[r]:
                out[off1[r]:off1[r + 1], :] = fld.matmul(
                    self.S.var_mult(v, e - twists[r]),
                    compl[off[r]:off[r + 1], :])
        return self.coords(e + 1, out)


class DualTopCohomologyPieces:
    """Pieces of the graded dual of H^i_m(M): degree-j piece is the dual of
    Ext_S^{N-i}(M, S(-N))_{-j}; the action is the transpose of the Ext one."""

    def __init__(self, M: ModulePresentation, i: int):
        self.lc = LocalCohomology(M)
        self.ring = M.ring
        self.ext = ExtStrandPieces(self.lc, self.lc.N - i)

    def dim(self, j: int) -> int:
        return self.ext.dim(-j)

    def var_mult(self, v: int, j: int) -> np.ndarray:
        # transpose of x_v: Ext_{-j-1} -> Ext_{-j}
        return self.ext.var_mult_on_ext(v, -j - 1).T.copy()


def derived_sections_correction(M: ModulePresentation, i: int,
                                degree_hi: int = DEFAULT_BOUND,
                                low: int = 1) -> ModulePresentation:
    """The finite-length module (+)_{j >= low} H^i(X, M~(j)) (for i >= 1),
    realized as a truncation of the graded dual of H^{i+1}_m(M)."""
    pieces = DualTopCohomologyPieces(M, i + 1)
    top = max(pieces.lc.vanishing_above(i + 1), low - 1)
    if all(pieces.dim(j) == 0 for j in range(low, top + 1)):
        return ModulePresentation.free(M.ring, ())
    out, _ = presentation_from_pieces(
        _WindowPieces(pieces, low), low, gen_hi=top + 1, rel_hi=top + 2,
        vanish_above=top)
    return out
