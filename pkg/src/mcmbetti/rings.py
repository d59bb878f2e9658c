"""Degree-by-degree model of a graded quotient A = S/I.

Each degree piece A_m gets a basis of standard monomials (non-pivot columns
under grevlex) plus a normal-form projection S_m -> A_m.  Normal forms are
pure linear algebra on the span {g * mu}: no Groebner bases, exact for any
homogeneous ideal.
"""

from __future__ import annotations

import numpy as np

from . import fields
from .errors import DegreeBoundExhausted, NotCompleteIntersection
from .polys import Polynomial, grevlex_key, mono_mul, monomials_of_degree
from .specio import RingSpec


def series_product(a: list, b: list, n: int) -> list:
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
            for k in range(n + 1)]


def series_inverse(a: list, n: int) -> list:
    """Multiplicative inverse of a power series with a[0] = +-1."""
    inv = [1 // a[0]] + [0] * n
    for k in range(1, n + 1):
        s = sum(a[i] * inv[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        inv[k] = -s * inv[0]
    return inv


def ci_hilbert_series(nvars: int, gen_degrees: list, n: int) -> list:
    """Coefficients of prod(1 - t^d_i) / (1 - t)^nvars up to t^n."""
    num = [1] + [0] * n
    for d in gen_degrees:
        f = [0] * (n + 1)
        f[0] = 1
        if d <= n:
            f[d] = -1
        num = series_product(num, f, n)
    ones = [1] * (n + 1)
    denom_inv = ones
    for _ in range(nvars - 1):
        denom_inv = series_product(denom_inv, ones, n)
    return series_product(num, denom_inv, n) if nvars > 0 else num


class MultiplicationMap:
    """Matrix of A_a (x) A_b -> A_{a+b}; column (i, j) is i * dim(A_b) + j."""

    def __init__(self, ring, a, b, matrix):
        self.ring = ring
        self.degrees = (a, b)
        self.matrix = matrix


class GradedRing:
    def __init__(self, spec: RingSpec, field=None, krull_dim=None):
        self.spec = spec
        self.field = field if field is not None else fields.field_from_token(spec.prime)
        self.nvars = len(spec.variables)
        self.generators = tuple(
            g.map_coeffs(self.field.scalar) for g in spec.ideal_generators
        )
        if any(g.is_zero() for g in self.generators):
            raise ValueError("an ideal generator vanishes over the chosen field")
        self._monos: dict[int, list] = {}
        self._mono_index: dict[int, dict] = {}
        self._piece: dict[int, list] = {}
        self._piece_index: dict[int, dict] = {}
        self._nf: dict[int, np.ndarray] = {}
        self._mult: dict = {}
        self._ci_checked_to = 0
        self._explicit_dim = krull_dim

    def __repr__(self):
        return f"GradedRing({self.spec.canonical_text()!r})"

    # -- ambient monomials ---------------------------------------------------

    def monomials(self, m: int) -> list:
        if m not in self._monos:
            self._monos[m] = monomials_of_degree(self.nvars, m)
            self._mono_index[m] = {mo: i for i, mo in enumerate(self._monos[m])}
        return self._monos[m]

    def mono_index(self, m: int) -> dict:
        self.monomials(m)
        return self._mono_index[m]

    def poly_to_svec(self, f: Polynomial, m: int) -> np.ndarray:
        """Coefficient column of a degree-m polynomial over the S_m basis."""
        idx = self.mono_index(m)
        v = self.field.zeros(len(idx), 1)[:, 0]
        for mono, c in f.terms.items():
            v[idx[mono]] = self.field.scalar(c)
        return v

    # -- degree pieces of A --------------------------------------------------

    def _build_degree(self, m: int):
        monos = self.monomials(m)
        rows = []
        for g in self.generators:
            dg = g.degree()
            for mu in self.monomials(m - dg):
                rows.append(self.poly_to_svec(Polynomial.monomial(mu) * g, m))
        if rows:
            rel = np.stack(rows)
            r, pivots = fields.rref(rel, self.field)
        else:
            r, pivots = None, []
        pivot_set = set(pivots)
        std = [mo for i, mo in enumerate(monos) if i not in pivot_set]
        std_pos = [i for i in range(len(monos)) if i not in pivot_set]
        nf = self.field.zeros(len(std), len(monos))
        for k, pos in enumerate(std_pos):
            nf[k, pos] = self.field.scalar(1)
        if pivots and std_pos:
            # pivot monomial == -(sum of its standard tail) mod I
            block = -r[np.ix_(range(len(pivots)), std_pos)]
            nf[:, np.array(pivots)] = self.field.reduce(block).T
        self._piece[m] = std
        self._piece_index[m] = {mo: i for i, mo in enumerate(std)}
        self._nf[m] = nf

    def degree_piece(self, m: int) -> list:
        """Basis of A_m as standard monomials (descending grevlex)."""
        if m < 0:
            return []
        if m not in self._piece:
            self._build_degree(m)
        return self._piece[m]

    def piece_index(self, m: int) -> dict:
        self.degree_piece(m)
        return self._piece_index[m]

    def nf_matrix(self, m: int) -> np.ndarray:
        self.degree_piece(m)
        return self._nf[m]

    def hilbert_function(self, m: int) -> int:
        return len(self.degree_piece(m))

    def dim(self, m: int) -> int:
        return len(self.degree_piece(m))

    def nf_vec(self, f: Polynomial, m: int) -> np.ndarray:
        """Normal-form coordinates of a degree-m polynomial in the A_m basis."""
        return self.field.matmul(
            self.nf_matrix(m), self.poly_to_svec(f, m).reshape(-1, 1)
        )[:, 0]

    def vec_to_poly(self, v: np.ndarray, m: int) -> Polynomial:
        basis = self.degree_piece(m)
        return Polynomial(
            self.nvars, {basis[i]: v[i] for i in range(len(basis)) if v[i] != 0}
        )

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.is_zero():
            return f
        if not f.is_homogeneous():
            raise ValueError("normal form needs a homogeneous polynomial")
        return self.vec_to_poly(self.nf_vec(f, f.degree()), f.degree())

    # -- multiplication ------------------------------------------------------

    def mult_matrix(self, f: Polynomial, e: int) -> np.ndarray:
        """Matrix of multiplication by f: A_e -> A_{e + deg f} in standard bases."""
        d = f.degree()
        key = (f.key(), e)
        if key in self._mult:
            return self._mult[key]
        src = self.degree_piece(e)
        tgt_idx = self.mono_index(e + d)
        raw = self.field.zeros(len(tgt_idx), len(src))
        for j, mu in enumerate(src):
            for mono, c in f.terms.items():
                raw[tgt_idx[mono_mul(mono, mu)], j] += self.field.scalar(c)
        raw = self.field.reduce(raw)
        out = self.field.matmul(self.nf_matrix(e + d), raw)
        self._mult[key] = out
        return out

    def var_mult(self, v: int, e: int) -> np.ndarray:
        return self.mult_matrix(Polynomial.variable(v, self.nvars), e)

    def multiplication_map(self, a: int, b: int) -> MultiplicationMap:
        pa, pb = self.degree_piece(a), self.degree_piece(b)
        tgt_idx = self.mono_index(a + b)
        raw = self.field.zeros(len(tgt_idx), len(pa) * len(pb))
        for i, mu in enumerate(pa):
            for j, nu in enumerate(pb):
                raw[tgt_idx[mono_mul(mu, nu)], i * len(pb) + j] = self.field.scalar(1)
        return MultiplicationMap(
            self, a, b, self.field.matmul(self.nf_matrix(a + b), raw)
        )

    # -- global structure ----------------------------------------------------

    @property
    def generator_degrees(self) -> list:
        return [g.degree() for g in self.generators]

    def is_complete_intersection(self, bound: int = 12) -> bool:
        """Empirical regular-sequence test: Hilbert function must match the
        complete-intersection product formula through the given degree."""
        if self._ci_checked_to >= bound:
            return True
        expected = ci_hilbert_series(self.nvars, self.generator_degrees, bound)
        for m in range(bound + 1):
            if self.hilbert_function(m) != expected[m]:
                return False
        self._ci_checked_to = bound
        return True

    def gorenstein_parameter(self, bound: int = 12) -> int:
        if not self.is_complete_intersection(bound):
            raise NotCompleteIntersection(
                "ideal generators do not form a regular sequence "
                "(Hilbert series mismatch)"
            )
        return sum(self.generator_degrees) - self.nvars

    @property
    def krull_dim(self) -> int:
        if self._explicit_dim is not None:
            return self._explicit_dim
        if not self.is_complete_intersection():
            raise NotCompleteIntersection(
                "Krull dimension is only inferred for complete intersections"
            )
        return self.nvars - len(self.generators)

    @property
    def dim_x(self) -> int:
        return self.krull_dim - 1

    def ambient_ring(self) -> "GradedRing":
        """The polynomial ring S on the same variables (no relations)."""
        spec = RingSpec(self.spec.prime, self.spec.variables, ())
        ring = GradedRing(spec, field=self.field, krull_dim=self.nvars)
        return ring

    def content_hash(self) -> str:
        return self.spec.content_hash()

    # -- Veronese subring ----------------------------------------------------

    def veronese(self, d: int, bound: int = 6) -> "GradedRing":
        """Reconstruct A^(d) by presentation: generators are a basis of A_d,
        relations are the kernel of Sym(A_d) -> (+) A_{dm} found degreewise.

        Raises DegreeBoundExhausted if new relations still appear at the top
        degree of the search window, reporting the witness degree.
        """
        if d < 1:
            raise ValueError("veronese degree must be >= 1")
        gens_basis = self.degree_piece(d)
        k = len(gens_basis)
        names = tuple(f"v{i}" for i in range(k))

        # evaluation of new-variable monomials in A_{dm}
        def eval_matrix(m: int) -> tuple[list, np.ndarray]:
            vmonos = monomials_of_degree(k, m)
            cols = self.field.zeros(self.dim(d * m), len(vmonos))
            for j, vm in enumerate(vmonos):
                prod = Polynomial.constant(self.nvars, 1)
                for i, e in enumerate(vm):
                    for _ in range(e):
                        prod = prod * Polynomial.monomial(gens_basis[i])
                cols[:, j] = self.nf_vec(prod, d * m)
            return vmonos, cols

        relations: list[Polynomial] = []
        for m in range(2, bound + 1):
            vmonos, ev = eval_matrix(m)
            ker = fields.kernel_basis(ev, self.field)
            # span of lower relations in degree m
            old_cols = []
            vm_index = {vm: i for i, vm in enumerate(vmonos)}
            for rel in relations:
                rdeg = rel.degree()
                for mu in monomials_of_degree(k, m - rdeg):
                    col = self.field.zeros(len(vmonos), 1)[:, 0]
                    for mono, c in rel.terms.items():
                        col[vm_index[mono_mul(mono, mu)]] += self.field.scalar(c)
                    old_cols.append(self.field.reduce(col))
            if old_cols:
                old = fields.column_space_basis(
                    np.stack(old_cols, axis=1), self.field
                )
            else:
                old = self.field.zeros(len(vmonos), 0)
            if ker.shape[1] == 0:
                continue
            combined = np.concatenate([old, ker], axis=1)
            _, pivots = fields.rref(combined, self.field)
            new = [p - old.shape[1] for p in pivots if p >= old.shape[1]]
            if new and m == bound:
                raise DegreeBoundExhausted(
                    f"veronese relations not generated within degree {bound}",
                    witness_degree=m,
                )
            for c in new:
                vec = ker[:, c]
                relations.append(
                    Polynomial(k, {vmonos[i]: vec[i] for i in range(len(vmonos))
                                   if vec[i] != 0})
                )

        spec = RingSpec(self.spec.prime, names, tuple(relations))
        out = GradedRing(spec, field=self.field, krull_dim=self.krull_dim
                         if self._explicit_dim is not None or
                         self.is_complete_intersection() else None)
        # the presented ring must reproduce dim A_{dm} on the window
        for m in range(bound + 1):
            if out.hilbert_function(m) != self.hilbert_function(d * m):
                raise DegreeBoundExhausted(
                    f"veronese presentation wrong in degree {m}; "
                    f"increase the relation search bound",
                    witness_degree=m,
                )
        return out
