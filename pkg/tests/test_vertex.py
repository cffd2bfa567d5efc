import numpy as np
import pytest

from sixvertex import (SizeError, aux_matrix, build_L, build_R_fused,
                       dense_monodromy, fusion_matrix, make_root_of_unity,
                       partition_function, rel_residual, symmetry_ops,
                       trace_monodromy, transfer_matrix)
from sixvertex.vertex import SectorOperator, sector_basis, weight_from_sz
from tests.conftest import random_point


def test_r_fused_trivial_aux(root4, rng):
    z = random_point(rng)
    v = build_R_fused(root4, 0, z)
    assert v.aux_dim == 1
    assert abs(v.blocks[0, 0][0, 0] - (z * root4.q - 1)) < 1e-14
    assert abs(v.blocks[1, 1][0, 0] - (z * root4.q - 1)) < 1e-14
    assert abs(v.blocks[0, 1][0, 0]) == 0.0
    assert abs(v.blocks[1, 0][0, 0]) == 0.0


def test_r_fused_lowering_block(root6, rng):
    from sixvertex import eval_rep
    z = random_point(rng)
    v = build_R_fused(root6, 1, z)
    rep = eval_rep(root6, 1)
    expect = (root6.q - 1 / root6.q) * rep.e @ rep.qh_half_inv
    assert np.max(np.abs(v.blocks[1, 0] - expect)) < 1e-14


def test_r_fused_z_zero(root4):
    v = build_R_fused(root4, 2, 0.0)
    assert np.max(np.abs(v.blocks[0, 1])) == 0.0


def test_L_lower_triangular_at_z_zero(root6, rng):
    v = build_L(root6, "+", 0.0, 1.0, random_point(rng))
    assert np.max(np.abs(v.blocks[0, 1])) == 0.0


def test_L_sign_minus_is_block_swap(root6, rng):
    z, r, s = (random_point(rng) for _ in range(3))
    plus = build_L(root6, "+", z, r, s)
    minus = build_L(root6, "-", z, r, s)
    assert np.array_equal(minus.blocks[0, 0], plus.blocks[1, 1])
    assert np.array_equal(minus.blocks[0, 1], plus.blocks[1, 0])
    assert np.array_equal(minus.blocks[1, 0], plus.blocks[0, 1])
    assert np.array_equal(minus.blocks[1, 1], plus.blocks[0, 0])


def test_L_gamma_entry_hand_value(root4):
    # q = i, s = 0, r = 1: single raising entry equals 1
    v = build_L(root4, "+", 0.9 + 0.1j, 1.0, 0.0)
    gamma = v.blocks[1, 0]
    assert abs(gamma[0, 1] - 1.0) < 1e-14
    assert np.count_nonzero(np.abs(gamma) > 1e-14) == 1


def test_trace_trivial_aux(root6, rng):
    z = random_point(rng)
    v = build_R_fused(root6, 0, z)
    op = trace_monodromy(v, 4)
    expect = (z * root6.q - 1) ** 4
    for w, b in op.blocks.items():
        assert np.max(np.abs(b - expect * np.eye(len(b)))) < 1e-12 * abs(expect)


def test_trace_single_column_doublet(root6, rng):
    w = random_point(rng)
    op = trace_monodromy(build_R_fused(root6, 1, w), 1)
    expect = (w * root6.q - 1) * (root6.q_half + 1 / root6.q_half)
    for b in op.blocks.values():
        assert abs(b[0, 0] - expect) < 1e-13


@pytest.mark.parametrize("N", [3, 4, 5])
@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_oracle_equivalence(N, M, rng):
    root = make_root_of_unity(N)
    vertices = [
        build_R_fused(root, 1, random_point(rng)),
        build_R_fused(root, 2, random_point(rng)),
        build_L(root, "+", random_point(rng), random_point(rng), random_point(rng)),
        build_L(root, "-", random_point(rng), 1.0, random_point(rng)),
    ]
    for v in vertices:
        blocked = trace_monodromy(v, M).to_dense()
        dense = dense_monodromy(v, M)
        scale = 1 + np.max(np.abs(dense))
        assert np.max(np.abs(blocked - dense)) < 1e-12 * scale


def test_weight_conservation_is_structural(root4, rng):
    v = build_L(root4, "+", random_point(rng), 1.0, random_point(rng))
    dense = dense_monodromy(v, 3)
    op = trace_monodromy(v, 3)
    outside = dense.copy()
    for w in op.blocks:
        idx = sector_basis(3, w)
        outside[np.ix_(idx, idx)] = 0.0
    assert np.max(np.abs(outside)) < 1e-13 * (1 + np.max(np.abs(dense)))


@pytest.mark.parametrize("N", [3, 5, 6, 8])
def test_quantum_determinant(N, rng):
    root = make_root_of_unity(N)
    for M in (1, 3, 5):
        z = random_point(rng)
        op = fusion_matrix(root, 1, z, M)
        expect = (z * root.q ** 2 - 1) ** M
        for b in op.blocks.values():
            assert np.max(np.abs(b - expect * np.eye(len(b)))) \
                < 1e-12 * abs(expect)


def test_transfer_single_column(root4, rng):
    z = random_point(rng)
    T = transfer_matrix(root4, z, 1)
    expect = (z * root4.q - 1) * (root4.q_half + 1 / root4.q_half)
    for b in T.blocks.values():
        assert abs(b[0, 0] - expect) < 1e-13


def test_fusion_eigenvalues_vs_dense(root4, rng):
    z = random_point(rng)
    op = fusion_matrix(root4, 2, z, 2)
    dense = dense_monodromy(build_R_fused(root4, 1, z * root4.q ** 2), 2)
    lam_blocked = np.sort_complex(np.concatenate(
        [np.linalg.eigvals(b) for b in op.blocks.values()]))
    lam_dense = np.sort_complex(np.linalg.eigvals(dense))
    assert np.max(np.abs(lam_blocked - lam_dense)) < 1e-10


def test_aux_constant_term(root4, rng):
    s = random_point(rng)
    Q0 = aux_matrix(root4, 0.0, 3, s=s)
    b = Q0.block_by_sz(0.5)
    assert np.max(np.abs(b - (-(1 + 1j)) * np.eye(3))) < 1e-13


def test_aux_r_extraction(rng):
    root = make_root_of_unity(6)
    z, s, r = (random_point(rng) for _ in range(3))
    Qr = aux_matrix(root, z, 4, r=r, s=s)
    Q1 = aux_matrix(root, z, 4, s=s)
    rh = np.sqrt(r)
    res, _ = rel_residual(Qr, Q1.scale_by_sector(lambda t: rh ** (-t)))
    assert res < 1e-12


def test_aux_sign_minus_spin_flip(rng):
    root = make_root_of_unity(5)
    z, s, r = (random_point(rng) for _ in range(3))
    sym = symmetry_ops(3)
    Qm = aux_matrix(root, z, 3, r=r, s=s, sign="-")
    Qp = aux_matrix(root, z, 3, r=r, s=s, sign="+")
    res, _ = rel_residual(Qm, sym.spin_flip_conjugate(Qp))
    assert res < 1e-13


def test_s_zero_limit_pins_parameters(root4, rng):
    z = random_point(rng)
    a = aux_matrix(root4, z, 2, r=5.0, s=3.0, s_zero_limit=True)
    b = aux_matrix(root4, z, 2, r=1.0, s=0.0)
    res, _ = rel_residual(a, b)
    assert res == 0.0


def test_transposition_symmetry(rng):
    for N in (3, 4, 6, 8):
        root = make_root_of_unity(N)
        z = random_point(rng)
        lhs = transfer_matrix(root, z, 3)
        rhs = transfer_matrix(root.inverse(), z * root.q_pow(2), 3).transpose()
        res, _ = rel_residual(lhs, rhs)
        assert res < 1e-12


def test_symmetry_ops_small():
    sym = symmetry_ops(2)
    sz = sym.sz_operator()
    values = sorted(float(sz.blocks[w][i, i].real)
                    for w in sz.blocks for i in range(len(sz.blocks[w])))
    assert values == [-1.0, 0.0, 0.0, 1.0]

    sym1 = symmetry_ops(1)
    flip = np.zeros((2, 2), dtype=complex)
    # sector 0 = |0>, sector 1 = |1>: the flip exchanges them like sigma^x
    assert sym1.flip_index[0][0] == 0 and sym1.flip_index[1][0] == 0
    par = sym1.parity_operator()
    assert par.blocks[0][0, 0] == 1.0 and par.blocks[1][0, 0] == -1.0


def test_spin_flip_involution(root6, rng):
    sym = symmetry_ops(3)
    Q = aux_matrix(root6, random_point(rng), 3, s=random_point(rng))
    twice = sym.spin_flip_conjugate(sym.spin_flip_conjugate(Q))
    res, _ = rel_residual(twice, Q)
    assert res == 0.0


def test_parity_eigenvalues():
    sym = symmetry_ops(4)
    for w in range(5):
        assert sym.parity_value(w) == (-1.0) ** w


def test_partition_function(root4, rng):
    z = random_point(rng)
    expect = 2 * (z * root4.q - 1) * (root4.q_half + 1 / root4.q_half)
    assert abs(partition_function(root4, z, 1, 1) - expect) < 1e-12 * abs(expect)
    assert partition_function(root4, z, 3, 0) == 8.0
    # torus trace against the dense oracle
    T = transfer_matrix(root4, z, 2).to_dense()
    expect = np.trace(T @ T)
    got = partition_function(root4, z, 2, 2)
    assert abs(got - expect) < 1e-10 * (1 + abs(expect))


def test_resource_guard():
    root = make_root_of_unity(4)
    v = build_R_fused(root, 0, 1.2)
    with pytest.raises(SizeError):
        trace_monodromy(v, 30)


def test_weight_from_sz():
    assert weight_from_sz(3, 0.5) == 1
    assert weight_from_sz(3, -1.5) == 3
    with pytest.raises(ValueError):
        weight_from_sz(3, 0.0)


def test_sector_operator_algebra(root4, rng):
    A = aux_matrix(root4, random_point(rng), 2, s=random_point(rng))
    eye = SectorOperator.identity(2)
    res, _ = rel_residual(A @ eye, A)
    assert res == 0.0
    assert abs((A - A).frobenius()) == 0.0
    assert abs((2.0 * A).frobenius() - 2 * A.frobenius()) < 1e-12
    assert abs(A.trace() - np.trace(A.to_dense())) < 1e-12
