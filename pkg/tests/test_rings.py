import pytest

from mcmbetti.errors import NotCompleteIntersection
from mcmbetti.fields import rank
from mcmbetti.rings import GradedRing
from mcmbetti.specio import parse_ring_spec

from conftest import series_coeffs


def test_e4_dims_match_series(e4):
    # oracle: expansion of (1-t^2)^2/(1-t)^4 by long division
    num = [1, 0, -2, 0, 1]
    den = [1, -4, 6, -4, 1]
    expected = series_coeffs(num, den, 8)
    assert expected[:5] == [1, 4, 8, 12, 16]
    for m in range(9):
        assert e4.hilbert_function(m) == expected[m]


def test_e4_dims_direct_monomial_count(e4):
    # cross-check: dim A_m = dim S_m - dim (I)_m by raw rank computation
    for m in range(2, 6):
        smonos = e4.monomials(m)
        rows = []
        for g in e4.generators:
            for mu in e4.monomials(m - 2):
                from mcmbetti.polys import Polynomial
                rows.append(e4.poly_to_svec(Polynomial.monomial(mu) * g, m))
        import numpy as np
        rel = np.stack(rows)
        assert e4.hilbert_function(m) == len(smonos) - rank(rel, e4.field)


def test_e3_dims(e3):
    assert e3.hilbert_function(2) == 6
    assert e3.hilbert_function(3) == 10 - 1
    assert [e3.hilbert_function(m) for m in range(6)] == [1, 3, 6, 9, 12, 15]


def test_degree_zero_connected(e4, e3):
    assert e4.hilbert_function(0) == 1
    assert e3.hilbert_function(0) == 1


def test_e4_linear_growth(e4):
    for m in range(1, 9):
        assert e4.hilbert_function(m) == 4 * m


def test_multiplication_map_e4(e4):
    mm = e4.multiplication_map(1, 1)
    assert mm.matrix.shape == (8, 16)
    assert rank(mm.matrix, e4.field) == 8


def test_multiplication_map_degree_zero_identity(e4):
    import numpy as np
    mm = e4.multiplication_map(0, 3)
    assert np.array_equal(mm.matrix, e4.field.identity(e4.dim(3)))


def test_multiplication_map_e3(e3):
    mm = e3.multiplication_map(1, 1)
    assert rank(mm.matrix, e3.field) == 6
    assert mm.matrix.shape[1] - rank(mm.matrix, e3.field) == 3


def test_multiplication_commutes(e4):
    import numpy as np
    a, b = 1, 2
    mab = e4.multiplication_map(a, b).matrix
    mba = e4.multiplication_map(b, a).matrix
    da, db = e4.dim(a), e4.dim(b)
    # map(a,b) equals map(b,a) composed with the swap of tensor factors
    for i in range(da):
        for j in range(db):
            assert np.array_equal(mab[:, i * db + j], mba[:, j * da + i])


def test_normal_form_idempotent_on_basis(e4):
    import numpy as np
    for m in (2, 3):
        nf = e4.nf_matrix(m)
        idx = e4.mono_index(m)
        for k, mono in enumerate(e4.degree_piece(m)):
            col = nf[:, idx[mono]]
            expected = e4.field.zeros(nf.shape[0], 1)[:, 0]
            expected[k] = 1
            assert np.array_equal(col, expected)


def test_mult_associativity(e4):
    # x_i * (x_j * mu) == x_j * (x_i * mu) on A_2
    import numpy as np
    for i, j in [(0, 1), (1, 3), (2, 3)]:
        a = e4.field.matmul(e4.var_mult(i, 3), e4.var_mult(j, 2))
        b = e4.field.matmul(e4.var_mult(j, 3), e4.var_mult(i, 2))
        assert np.array_equal(a, b)


def test_surjectivity_invariant(e4, e3):
    for ring in (e4, e3):
        for a in range(1, 4):
            for b in range(1, 4):
                assert ring.dim(a) * ring.dim(b) >= ring.dim(a + b)


def test_gorenstein_parameter(e4, e3):
    assert e4.gorenstein_parameter() == 0
    assert e3.gorenstein_parameter() == 0


def test_gorenstein_parameter_hypersurface():
    ring = GradedRing(parse_ring_spec("p=32003; vars=x,y; ideal=x^2"))
    assert ring.gorenstein_parameter() == 0
    assert ring.krull_dim == 1


def test_not_complete_intersection():
    ring = GradedRing(parse_ring_spec("p=32003; vars=x,y; ideal=x^2, x*y"))
    with pytest.raises(NotCompleteIntersection):
        ring.gorenstein_parameter()


def test_veronese_identity(e4):
    v = e4.veronese(1, bound=4)
    for m in range(5):
        assert v.hilbert_function(m) == e4.hilbert_function(m)


def test_veronese_e3(e3):
    v = e3.veronese(2, bound=5)
    # oracle: dim A_{2m} of the cubic, i.e. 6m for m >= 1
    expected = [e3.hilbert_function(2 * m) for m in range(4)]
    assert expected == [1, 6, 12, 18]
    for m in range(4):
        assert v.hilbert_function(m) == expected[m]


def test_veronese_polynomial_ring():
    ring = GradedRing(parse_ring_spec("p=32003; vars=x,y; ideal="))
    v = ring.veronese(2, bound=5)
    assert [v.hilbert_function(m) for m in range(4)] == [1, 3, 5, 7]


def test_krull_dim(e4, e3):
    assert e4.krull_dim == 2 and e4.dim_x == 1
    assert e3.krull_dim == 2 and e3.dim_x == 1
