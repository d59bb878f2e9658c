import numpy as np
import pytest

from mcmbetti.modules import (
    ModulePresentation,
    betti_from_hom_k,
    depth_of,
    direct_sum,
    irrelevant_ideal_module,
    is_mcm,
    minimized,
    residue_field_module,
    resolve,
    s_resolution,
    syzygy,
)
from mcmbetti.specio import parse_module_spec

from conftest import series_coeffs


def test_module_degree_pieces_of_ring(e4):
    A = ModulePresentation.free(e4, (0,))
    assert A.piece_dim(2) == 8
    assert A.piece_dim(0) == 1


def test_module_degree_pieces_of_k(e4):
    k = residue_field_module(e4)
    assert k.piece_dim(0) == 1
    assert k.piece_dim(1) == 0
    assert k.piece_dim(5) == 0


def test_twisted_free_piece(e4):
    M = ModulePresentation.free(e4, (2,))
    assert M.piece_dim(2) == 1
    assert M.piece_dim(1) == 0


def test_resolution_of_k_over_e4(e4):
    k = residue_field_module(e4)
    res = resolve(k, 4, degree_hi=8)
    table = res.betti_table()
    # oracle: Koszul linearity plus the series 1/H_A(-t) = (1+t)^4/(1-t^2)^2
    inv = series_coeffs([1, 4, 6, 4, 1], [1, 0, -2, 0, 1], 4)
    assert inv == [1, 4, 8, 12, 16]
    for i in range(5):
        assert table[(i, i)] == inv[i]
    for (i, j), v in table.nonzero().items():
        assert i == j, f"off-diagonal cell ({i},{j})={v}"
    res.check_minimal()
    res.check_exactness()


def test_resolution_of_k_via_hom_route(e4):
    res = resolve(residue_field_module(e4), 3, degree_hi=8)
    assert betti_from_hom_k(res) == res.betti_table()


def test_resolution_of_free(e4):
    M = ModulePresentation.free(e4, (0, 2))
    res = resolve(M, 3, degree_hi=8)
    table = res.betti_table()
    assert table.nonzero() == {(0, 0): 1, (0, 2): 1}


def test_resolution_of_k_over_e3(e3):
    res = resolve(residue_field_module(e3), 2, degree_hi=8)
    t = res.betti_table()
    assert t[(0, 0)] == 1
    assert t[(1, 1)] == 3
    assert t[(2, 2)] == 3
    assert t[(2, 3)] == 1  # the cubic enters at step 2
    assert sum(v for (i, j), v in t.nonzero().items() if i == 2) == 4


def test_syzygy_trivial(e4):
    k = residue_field_module(e4)
    s0 = syzygy(k, 0)
    assert s0.generator_twists == (0,)


def test_first_syzygy_is_irrelevant_ideal(e4):
    m = irrelevant_ideal_module(e4)
    assert m.generator_twists == (1, 1, 1, 1)
    # Hilbert function of m: dim A_j for j >= 1
    for j in range(1, 6):
        assert m.piece_dim(j) == e4.hilbert_function(j)
    assert m.piece_dim(0) == 0


def test_second_syzygy_generators(e4):
    s2 = syzygy(residue_field_module(e4), 2, degree_hi=8)
    assert s2.generator_twists == (2,) * 8


def test_module_from_spec_cokernel(e4):
    mod = parse_module_spec("twists = 0,0,0,0\nrel = x0, x1, x2, x3",
                            e4.spec)
    M = ModulePresentation.from_spec(e4, mod)
    assert M.piece_dim(0) == 4
    assert M.piece_dim(1) == 16 - 1


def test_minimize_cancels_units(e4):
    # presentation of A with a redundant generator: g1 = x0*g0, relation g1 - x0 g0
    from mcmbetti.modules import FreeModule, GradedMap
    from mcmbetti.polys import Polynomial
    f0 = FreeModule((0, 1))
    f1 = FreeModule((1,))
    x0 = Polynomial.variable(0, 4)
    one = Polynomial.constant(4, 1)
    pres = GradedMap(e4, f1, f0, [[x0], [-one]])
    M = minimized(ModulePresentation(e4, pres))
    assert M.generator_twists == (0,)
    assert M.pres.source.rank == 0


def test_depth_values(e4):
    k = residue_field_module(e4)
    assert depth_of(k) == 0
    A = ModulePresentation.free(e4, (0,))
    assert depth_of(A) == 2
    assert is_mcm(A)
    m = irrelevant_ideal_module(e4)
    assert depth_of(m) == 1
    assert not is_mcm(m)


def test_s_resolution_of_ring_is_koszul(e4):
    A = ModulePresentation.free(e4, (0,))
    res = s_resolution(A)
    assert res.steps == 2
    assert res.betti_table().nonzero() == {(0, 0): 1, (1, 2): 2, (2, 4): 1}


def test_direct_sum_pieces(e4):
    A = ModulePresentation.free(e4, (0,))
    k = residue_field_module(e4)
    s = direct_sum(A, k)
    assert s.piece_dim(0) == 2
    assert s.piece_dim(1) == 4


def test_resolution_exactness_checks(e3):
    res = resolve(residue_field_module(e3), 3, degree_hi=7)
    res.check_minimal()
    res.check_exactness()
