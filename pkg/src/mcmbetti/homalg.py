"""Reconstruction of graded modules from degreewise data, and A-duals.

Two reconstruction routes:

* `presentation_from_pieces` rebuilds a presentation from any object that
  can produce its degree pieces and variable-multiplication matrices
  (truncations, section modules, graded duals of finite-length modules).

* `a_dual` computes Hom(M, A) as the kernel of the transposed-dual of the
  presentation, 0 -> M^v -> F0^v -> F1^v, which keeps everything inside
  the free-module kernel machinery and retains the values of each dual
  generator on the generators of M (needed to glue complete resolutions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields
from .errors import DegreeBoundExhausted
from .modules import (
    DEFAULT_BOUND,
    FreeModule,
    GradedMap,
    ModulePresentation,
    kernel_min_generators,
    map_from_generators,
    minimize_presentation,
    zero_map_into,
)
from .polys import Polynomial


class ModulePieces:
    """Degree pieces of a presented module."""

    def __init__(self, M: ModulePresentation):
        self.ring = M.ring
        self.M = M

    def dim(self, j: int) -> int:
        return self.M.piece_dim(j)

    def var_mult(self, v: int, j: int) -> np.ndarray:
        return self.M.var_mult(v, j)


class TruncationPieces:
    """Pieces of M_{>= t}: identical to M at and above t, zero below."""

    def __init__(self, M: ModulePresentation, t: int):
        self.ring = M.ring
        self.M = M
        self.t = t

    def dim(self, j: int) -> int:
        return self.M.piece_dim(j) if j >= self.t else 0

    def var_mult(self, v: int, j: int) -> np.ndarray:
        if j < self.t:
            return self.ring.field.zeros(self.dim(j + 1), 0)
        return self.M.var_mult(v, j)


def presentation_from_pieces(P, jlo: int, gen_hi: int, rel_hi: int,
                             vanish_above: int | None = None):
    """Reconstruct a ModulePresentation from degreewise pieces.

    Generators are complements of A_1 * (previous degree) chosen degree by
    degree; relations are the syzygies of those generators, searched up to
    rel_hi.  Raises DegreeBoundExhausted when new generators still appear at
    the top of the window, unless the pieces are known to vanish above
    `vanish_above` (finite length), which makes the search complete.

    Returns (presentation, gens) with gens a list of (degree, piece vector).
    """
    ring = P.ring
    fld = ring.field
    gens: list = []
    top = gen_hi if vanish_above is None else min(gen_hi, vanish_above)
    prev_dim = None
    for j in range(jlo, top + 1):
        d = P.dim(j)
        if d == 0:
            prev_dim = 0
            continue
        if prev_dim:
            grown = np.concatenate(
                [P.var_mult(v, j - 1) for v in range(ring.nvars)], axis=1)
            grow = fields.column_space_basis(grown, fld)
        else:
            grow = fld.zeros(d, 0)
        if grow.shape[1] < d:
            combined = np.concatenate([grow, fld.identity(d)], axis=1)
            _, pivots = fields.rref(combined, fld)
            for p in pivots:
                if p >= grow.shape[1]:
                    e = fld.zeros(d, 1)[:, 0]
                    e[p - grow.shape[1]] = fld.scalar(1)
                    gens.append((j, e))
            if j == top and vanish_above is None:
                raise DegreeBoundExhausted(
                    "module not reconstructible within the degree bound: "
                    f"new generators still appear at degree {j}",
                    witness_degree=j)
        prev_dim = d
    if not gens:
        M = ModulePresentation(ring, zero_map_into(ring, FreeModule(())))
        return M, gens

    free = FreeModule(tuple(d for d, _ in gens))

    # columns of mu * v_g over standard monomials mu, cached per generator
    vecs: list[dict] = [dict() for _ in gens]

    def gen_cols(gi: int, e: int) -> np.ndarray:
        dg, v = gens[gi]
        if e in vecs[gi]:
            return vecs[gi][e]
        if e == dg:
            out = v.reshape(-1, 1)
        else:
            prev = gen_cols(gi, e - 1)
            basis = ring.degree_piece(e - dg)
            lower_idx = ring.piece_index(e - 1 - dg)
            out = fld.zeros(P.dim(e), len(basis))
            for col, mono in enumerate(basis):
                var = next(i for i, x in enumerate(mono) if x > 0)
                mu = list(mono)
                mu[var] -= 1
                out[:, col] = fld.matmul(
                    P.var_mult(var, e - 1),
                    prev[:, lower_idx[tuple(mu)]].reshape(-1, 1))[:, 0]
        vecs[gi][e] = out
        return out

    def eval_strand(j: int) -> np.ndarray:
        blocks = []
        for gi, (dg, _) in enumerate(gens):
            n = ring.dim(j - dg)
            blocks.append(gen_cols(gi, j) if n else fld.zeros(P.dim(j), 0))
        return np.concatenate(blocks, axis=1) if blocks else fld.zeros(P.dim(j), 0)

    rels = kernel_min_generators(ring, free, eval_strand, rel_hi)
    pres = map_from_generators(ring, rels, free)
    return ModulePresentation(ring, pres), gens


def truncate(M: ModulePresentation, t: int,
             degree_hi: int = DEFAULT_BOUND) -> ModulePresentation:
    """Presentation of M_{>= t}."""
    out, _ = presentation_from_pieces(
        TruncationPieces(M, t), t, gen_hi=degree_hi, rel_hi=degree_hi,
        vanish_above=None if M.piece_dim(degree_hi) else degree_hi)
    return out


# ---------------------------------------------------------------------------
# duals


@dataclass
class DualModule:
    presentation: ModulePresentation
    gens: list  # (degree, vector in F0^v strand coordinates)
    source_twists: tuple  # generator twists of the module that was dualized

    def gen_values(self) -> list:
        """For each dual generator phi, its values (phi(g_r))_r as polynomials."""
        ring = self.presentation.ring
        out = []
        dual_free = FreeModule(tuple(-t for t in self.source_twists))
        for d, vec in self.gens:
            vals = []
            off = 0
            for t_dual in dual_free.twists:
                n = ring.dim(d - t_dual)
                chunk = vec[off:off + n]
                vals.append(ring.vec_to_poly(chunk, d - t_dual) if n else
                            Polynomial.zero(ring.nvars))
                off += n
            out.append((d, vals))
        return out


def a_dual(M: ModulePresentation, degree_hi: int = DEFAULT_BOUND,
           quiet: int = 2) -> DualModule:
    """Hom_A(M, A) with an explicit presentation.

    M^v is the kernel of F0^v -> F1^v; its generators are searched with a
    quiet tail (`quiet` consecutive degrees without new generators) so that
    an unexpectedly deep generator triggers DegreeBoundExhausted instead of
    a silently wrong dual.
    """
    pres = minimize_presentation(M.pres)
    ring = M.ring
    if pres.target.rank == 0:
        zero = ModulePresentation(ring, zero_map_into(ring, FreeModule(())))
        return DualModule(zero, [], ())
    dual_map = pres.transpose_dual()
    source = dual_map.source  # = F0^v

    hi = max(-min(pres.target.twists) + 2, min(source.twists) + 2)
    gens = None
    while True:
        gens = kernel_min_generators(ring, source, dual_map.strand, hi)
        tail = [d for d, _ in gens if d > hi - quiet]
        if not tail:
            break
        hi += 2
        if hi > degree_hi + max(0, max(pres.target.twists)):
            raise DegreeBoundExhausted(
                "dual generators keep appearing near the degree bound",
                witness_degree=hi)
    gen_map = map_from_generators(ring, gens, source)
    rels = kernel_min_generators(ring, gen_map.source, gen_map.strand, degree_hi)
    dual_pres = map_from_generators(ring, rels, gen_map.source)
    return DualModule(ModulePresentation(ring, dual_pres), gens,
                      pres.target.twists)
