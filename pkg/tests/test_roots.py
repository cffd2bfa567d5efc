import numpy as np
import pytest

from sixvertex import (PrimitivityError, borel_rep, eval_rep,
                       make_root_of_unity, q_integer)
from tests.conftest import random_point


def test_root_4_1():
    root = make_root_of_unity(4, 1)
    assert abs(root.q - 1j) < 1e-15
    assert root.N_prime == 2
    assert abs(root.q_half ** 2 - root.q) == 0.0


def test_root_6_1():
    root = make_root_of_unity(6, 1)
    assert abs(root.q - np.exp(1j * np.pi / 3)) < 1e-15
    assert root.N_prime == 3


def test_non_coprime_rejected():
    with pytest.raises(PrimitivityError):
        make_root_of_unity(4, 2)
    with pytest.raises(PrimitivityError):
        make_root_of_unity(9, 6)


def test_domain_errors():
    with pytest.raises(ValueError):
        make_root_of_unity(2, 1)
    with pytest.raises(ValueError):
        make_root_of_unity(5, 0)
    with pytest.raises(ValueError):
        make_root_of_unity(5, 5)


@pytest.mark.parametrize("N,n", [(3, 1), (4, 1), (5, 2), (6, 1), (7, 3), (8, 3)])
def test_primitivity(N, n):
    root = make_root_of_unity(N, n)
    assert abs(root.q ** N - 1) < 1e-12
    for k in range(1, N):
        assert abs(root.q ** k - 1) > 1e-12


def test_inverse_branch():
    root = make_root_of_unity(6, 1)
    inv = root.inverse()
    assert abs(root.q * inv.q - 1) < 1e-15
    assert abs(root.q_half * inv.q_half - 1) < 1e-15
    assert inv.N_prime == root.N_prime


def test_eval_rep_entries():
    root = make_root_of_unity(5, 1)
    rep = eval_rep(root, 1)
    assert abs(rep.e[0, 1] - 1) < 1e-15          # [1]_q = 1
    rep = eval_rep(make_root_of_unity(4), 2)
    assert abs(rep.e[0, 1]) < 1e-15              # [2]_q = q + 1/q = 0 at q = i
    rep = eval_rep(root, 3)
    assert abs(rep.qh[0, 0] - root.q ** 3) < 1e-15


@pytest.mark.parametrize("N", [3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize("n_spin", range(7))
def test_eval_rep_algebra(N, n_spin):
    root = make_root_of_unity(N)
    rep = eval_rep(root, n_spin)
    q = root.q
    comm = rep.e @ rep.f - rep.f @ rep.e
    expect = (rep.qh - np.linalg.inv(rep.qh)) / (q - 1 / q)
    assert np.max(np.abs(comm - expect)) < 1e-12
    assert np.max(np.abs(rep.qh_half @ rep.qh_half - rep.qh)) < 1e-12


@pytest.mark.parametrize("N", [3, 5, 7, 8])
@pytest.mark.parametrize("n_spin", range(5))
def test_eval_rep_serre(N, n_spin):
    root = make_root_of_unity(N)
    rep = eval_rep(root, n_spin)
    three = q_integer(root.q, 3)
    for A, B in ((rep.e, rep.f), (rep.f, rep.e)):
        lhs = A @ A @ A @ B - three * (A @ A @ B @ A) \
            + three * (A @ B @ A @ A) - B @ A @ A @ A
        assert np.max(np.abs(lhs)) < 1e-10


def test_borel_rep_action(rng):
    root = make_root_of_unity(4)
    s = random_point(rng)
    rep = borel_rep(root, "+", 1.3 + 0.4j, 1.0, s)
    # lowering coefficient at q = i reduces to -(1+s)/2
    assert abs(rep.e1[0, 1] + (1 + s) / 2) < 1e-14
    assert np.max(np.abs(rep.e1[:, 0])) == 0.0       # kills |0>
    assert np.max(np.abs(rep.e0[:, rep.dim - 1])) == 0.0  # kills top state


def test_borel_rep_s_zero():
    root = make_root_of_unity(6)
    rep = borel_rep(root, "+", 0.7, 1.0, 0.0)
    q = root.q
    for k in range(1, rep.dim):
        expect = (1 - q ** (2 * k)) / (q - 1 / q) ** 2
        assert abs(rep.e1[k - 1, k] - expect) < 1e-14


@pytest.mark.parametrize("N", [3, 4, 5, 6, 8])
def test_borel_cartan_relations(N, rng):
    root = make_root_of_unity(N)
    rep = borel_rep(root, "+", random_point(rng), random_point(rng),
                    random_point(rng))
    hs = {0: rep.qh0, 1: rep.qh1}
    es = {0: rep.e0, 1: rep.e1}
    cartan = ((2, -2), (-2, 2))
    for i in (0, 1):
        hi_inv = np.linalg.inv(hs[i])
        for j in (0, 1):
            lhs = hs[i] @ es[j] @ hi_inv
            assert np.max(np.abs(lhs - root.q_pow(cartan[i][j]) * es[j])) < 1e-12
    assert np.max(np.abs(rep.qh1_half @ rep.qh1_half - rep.qh1)) < 1e-12


def test_borel_sign_swap(rng):
    root = make_root_of_unity(5)
    z, r, s = (random_point(rng) for _ in range(3))
    plus = borel_rep(root, "+", z, r, s)
    minus = borel_rep(root, "-", z, r, s)
    assert np.array_equal(minus.e0, plus.e1)
    assert np.array_equal(minus.e1, plus.e0)
    assert np.array_equal(minus.qh0, plus.qh1)
    assert np.array_equal(minus.qh1_half, plus.qh0_half)


def test_z_zero_degenerate():
    root = make_root_of_unity(6)
    rep = borel_rep(root, "+", 0.0, 1.0, 0.4)
    assert np.max(np.abs(rep.e0)) == 0.0
