"""Exact dense linear algebra over a prime field F_p or over Q.

Matrices are numpy arrays: int64 with entries in [0, p) for the prime
backend, Fraction objects (dtype=object) for the rational backend.  All
routines are deterministic: the pivot is always the first nonzero entry in
row/column order, so results are reproducible bit for bit.

int64 is safe for p up to ~3e9: a single elimination step computes
a - f*b with |f|, |b| < p, so intermediates stay below p^2 < 2^63.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """F_p arithmetic on int64 numpy arrays."""

    is_rational = False

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p * p >= 2**62:
            raise ValueError(f"prime {p} too large for the int64 backend")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a % self.p

    def scalar(self, x) -> int:
        return int(x) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # float64 BLAS is exact here: entries < p, so every partial sum is an
        # integer below k * p^2 < 2^53 for any desk-scale inner dimension k
        if a.shape[0] * a.shape[1] * b.shape[1] > 8000 and a.shape[1] > 0:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return np.rint(prod % self.p).astype(np.int64) % self.p
        return (a @ b) % self.p


class RationalField:
    """Exact rational arithmetic on object arrays; slow, used for cross-checks."""

    is_rational = True
    p = 0

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        m = np.empty((rows, cols), dtype=object)
        m[:] = Fraction(0)
        return m

    def identity(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = Fraction(1)
        return m

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a

    def scalar(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, a) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return Fraction(1) / Fraction(a)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a @ b


def field_from_token(token) -> PrimeField | RationalField:
    """'rational' or a prime written as int/str."""
    if token == "rational":
        return RationalField()
    return PrimeField(int(token))


_PANEL = 64


def _rref_prime_small(m: np.ndarray, p: int, reduced: bool = True):
    """Unblocked int64 elimination; fastest below a few thousand entries."""
    m = m % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r, c:] = m[r, c:] * pow(int(m[r, c]), p - 2, p) % p
        if reduced:
            other = m[:, c].copy()
            other[r] = 0
        else:
            other = np.concatenate([np.zeros(r + 1, dtype=np.int64), m[r + 1:, c]])
        nzrows = np.nonzero(other)[0]
        if len(nzrows):
            m[np.ix_(nzrows, range(c, cols))] -= np.outer(other[nzrows], m[r, c:])
            m[np.ix_(nzrows, range(c, cols))] %= p
        pivots.append(c)
        r += 1
    return m, pivots


def _rref_prime(mat: np.ndarray, p: int, reduced: bool = True):
    """Row reduction mod p with panel-deferred updates.

    Pivot columns get per-column catch-up; the trailing submatrix receives
    each panel's combined update as one float64 GEMM, which is exact because
    every partial sum stays below PANEL * p^2 < 2^53.  Pivot choice (first
    nonzero, scanning top-down and left-right) matches the naive algorithm,
    so the output is bit-identical to unblocked elimination.
    """
    mat = np.asarray(mat, dtype=np.int64).reshape(mat.shape[0], -1)
    rows, cols = mat.shape
    if rows * cols <= 4096:
        return _rref_prime_small(mat, p, reduced)
    m = (mat % p).astype(np.float64)
    pivots: list[int] = []
    # deferred reductions keep values below PANEL*p^2; scaling them once more
    # by a factor < p must stay exact, hence PANEL * p^3 < 2^53
    panel = min(_PANEL, max(1, int(2**53 / (float(p) ** 3))))
    r0 = 0
    scan = 0
    while r0 < rows and scan < cols:
        R = rows - r0
        cap = min(panel, R)
        k = 0
        finv: list[float] = []
        F = np.zeros((R, cap))
        batch_start = scan
        batch_end = scan  # columns in [batch_start, batch_end) carry this panel's ops
        B = None
        while scan < cols and k < cap:
            if scan >= batch_end:
                batch_start = scan
                batch_end = min(scan + cap, cols)
                B = m[r0:, batch_start:batch_end]
                for i in range(k):
                    B[i] = (B[i] * finv[i]) % p
                    if i + 1 < k:
                        B[i + 1:k] -= np.outer(F[i + 1:k, i], B[i])
                if k and R > k:
                    B[k:] -= F[k:, :k] @ B[:k]
                B %= p
            w = scan - batch_start
            v = B[:, w] % p  # deferred tail updates may have left it unreduced
            nz = np.nonzero(v[k:])[0]
            if len(nz) == 0:
                B[:, w] = v
                scan += 1
                continue
            isel = k + int(nz[0])
            if isel != k:
                m[[r0 + k, r0 + isel]] = m[[r0 + isel, r0 + k]]
                F[[k, isel], :] = F[[isel, k], :]
                v[[k, isel]] = v[[isel, k]]
            finv.append(float(pow(int(v[k]), p - 2, p)))
            F[:, k] = v
            pivots.append(scan)
            B[:k, w] = v[:k]
            B[k, w] = 1.0
            B[k + 1:, w] = 0.0
            if w + 1 < batch_end - batch_start:
                tail = B[:, w + 1:]
                tail[k] = (tail[k] % p) * finv[k] % p
                tail[k + 1:] -= np.outer(F[k + 1:, k], tail[k])
            k += 1
            scan += 1
        if k and batch_end < cols:
            V = m[r0:, batch_end:]
            for i in range(k):
                V[i] = (V[i] * finv[i]) % p
                if i + 1 < k:
                    V[i + 1:k] -= np.outer(F[i + 1:k, i], V[i])
            if R > k:
                V[k:] -= F[k:, :k] @ V[:k]
            V %= p
        r0 += k
        if k == 0:
            break

    if reduced and pivots:
        b = len(pivots)
        while b > 0:
            a = max(0, b - panel)
            for i in range(b - 1, a - 1, -1):
                ci = pivots[i]
                m[i, ci:] %= p
                if i > a:
                    colv = m[a:i, ci] % p
                    if np.any(colv):
                        m[a:i, ci:] -= np.outer(colv, m[i, ci:])
            if a > 0:
                ca = pivots[a]
                coeff = m[:a, :][:, pivots[a:b]] % p
                if np.any(coeff):
                    m[:a, ca:] -= coeff @ m[a:b, ca:]
                    m[:a, ca:] %= p
            b = a
    return m.astype(np.int64) % p, pivots


def _rref_generic(mat: np.ndarray, field, reduced: bool = True):
    m = field.reduce(np.array(mat, copy=True))
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = field.reduce(m[r] * field.inv(m[r, c]))
        other = m[:, c].copy()
        if not reduced:
            other[: r + 1] = 0
        else:
            other[r] = 0
        nzrows = np.nonzero(other)[0]
        if len(nzrows):
            m[nzrows] = field.reduce(m[nzrows] - np.outer(other[nzrows], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rref(mat: np.ndarray, field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (R, pivot_columns)."""
    if field.is_rational:
        return _rref_generic(mat, field, reduced=True)
    return _rref_prime(mat, field.p, reduced=True)


def rank(mat: np.ndarray, field) -> int:
    """Rank by forward elimination (no back-substitution)."""
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return 0
    if field.is_rational:
        return len(_rref_generic(mat, field, reduced=False)[1])
    return len(_rref_prime(mat, field.p, reduced=False)[1])


def kernel_basis(mat: np.ndarray, field) -> np.ndarray:
    """Columns span the null space {x : mat @ x = 0}; deterministic basis."""
    rows, cols = mat.shape
    if cols == 0:
        return field.zeros(0, 0)
    if rows == 0:
        return field.identity(cols)
    r, pivots = rref(mat, field)
    free = [c for c in range(cols) if c not in set(pivots)]
    ker = field.zeros(cols, len(free))
    one = 1 if not field.is_rational else Fraction(1)
    for k, f in enumerate(free):
        ker[f, k] = one
    if pivots and free:
        block = -r[np.ix_(range(len(pivots)), free)]
        ker[np.array(pivots), :] = field.reduce(block)
    return ker


def column_reduce(mat: np.ndarray, field):
    """(rank, kernel_basis, image_pivot_columns) of a matrix.

    The pivot columns form a basis of the column space; the kernel basis
    columns are linearly independent with mat @ kernel = 0 exactly.
    """
    rows, cols = mat.shape
    if cols == 0 or rows == 0:
        return (0, kernel_basis(mat, field), [])
    r, pivots = rref(mat, field)
    ker = kernel_basis(mat, field)
    return (len(pivots), ker, pivots)


def column_space_basis(mat: np.ndarray, field) -> np.ndarray:
    """The subset of columns forming a basis of the column space."""
    if mat.shape[1] == 0 or mat.shape[0] == 0:
        return field.zeros(mat.shape[0], 0)
    _, pivots = rref(mat, field)
    return mat[:, pivots]


def solve_in_image(mat: np.ndarray, b: np.ndarray, field):
    """Solve mat @ x = b exactly; returns None when b is not in the image."""
    rows, cols = mat.shape
    b = np.asarray(b).reshape(rows)
    aug = field.zeros(rows, cols + 1)
    aug[:, :cols] = field.reduce(np.array(mat, copy=False))
    aug[:, cols] = field.reduce(b)
    r, pivots = rref(aug, field)
    if cols in pivots:
        return None
    x = field.zeros(cols, 1)[:, 0]
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def solve_batch(basis: np.ndarray, targets: np.ndarray, field) -> np.ndarray:
    """Coordinates of each target column in the span of basis columns.

    Raises ValueError if some target lies outside the span; used to express
    vectors in a previously computed kernel/subquotient basis.
    """
    rows, k = basis.shape
    t = targets.shape[1]
    aug = field.zeros(rows, k + t)
    aug[:, :k] = basis
    aug[:, k:] = field.reduce(np.array(targets, copy=False))
    r, pivots = rref(aug, field)
    if any(pc >= k for pc in pivots):
        raise ValueError("target vector outside the span of the basis")
    coords = field.zeros(k, t)
    for i, pc in enumerate(pivots):
        coords[pc, :] = r[i, k:]
    return coords
