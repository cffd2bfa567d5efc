"""Local vertex weights and the traced row operators built from them.

A LocalVertex is an operator on (auxiliary space) x C^2 stored as four
auxiliary-space blocks, one per pair of quantum indices.  Tracing a
product of M copies over the auxiliary space yields a row operator on
(C^2)^{x M}.  Every vertex used here shifts auxiliary and quantum weight
oppositely, so the traced operator conserves total spin and is stored
block-diagonally, one dense block per S^z sector.

Conventions: quantum basis |0> = spin up (sigma^z = +1); site 1 is the
rightmost tensor factor, so the bit at position m-1 of a basis-state
integer is the state of site m, and the monodromy product runs from
site M down to site 1.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import SizeError
from .roots import borel_rep, eval_rep

GUARD_ENTRIES = 10 ** 8


# ---------------------------------------------------------------------------
# local vertices


@dataclass(frozen=True)
class LocalVertex:
    """Vertex weights: blocks[a, b] acts on the auxiliary space for the
    quantum transition |b> -> |a| (a, b in {0, 1})."""

    aux_dim: int
    blocks: np.ndarray  # shape (2, 2, aux_dim, aux_dim)


def build_R_fused(root, n_spin, z):
    """Fused six-vertex weight with spin n_spin/2 auxiliary space.

    The four quantum blocks, written with the module generators, are

        <0|R|0> = z q q^(h/2) - q^(-h/2)
        <0|R|1> = z q (q - q^-1) q^(h/2) f
        <1|R|0> = (q - q^-1) e q^(-h/2)
        <1|R|1> = z q q^(-h/2) - q^(h/2)
    """
    rep = eval_rep(root, n_spin)
    q = root.q
    z = complex(z)
    comm = q - 1.0 / q
    blocks = np.empty((2, 2, rep.dim, rep.dim), dtype=complex)
    blocks[0, 0] = z * q * rep.qh_half - rep.qh_half_inv
    blocks[0, 1] = z * q * comm * (rep.qh_half @ rep.f)
    blocks[1, 0] = comm * (rep.e @ rep.qh_half_inv)
    blocks[1, 1] = z * q * rep.qh_half_inv - rep.qh_half
    return LocalVertex(aux_dim=rep.dim, blocks=blocks)


def build_L(root, sign, z, r=1.0, s=0.0):
    """Auxiliary vertex built on the cyclic Borel module pi^+(z; r, s).

    Blocks for sign '+':

        alpha = (z s / r) q^(h1/2) - q^(-h1/2)      (up-up)
        beta  = (q - q^-1) e0 q^(-h0/2)             (up-down)
        gamma = (q - q^-1) e1 q^(-h1/2)             (down-up)
        delta = z r q^2 q^(-h1/2) - q^(h1/2)        (down-down)

    Sign '-' applies the spin-reversal permutation
    {alpha, beta, gamma, delta} -> {delta, gamma, beta, alpha}, i.e.
    conjugation by sigma^x on the quantum factor.
    """
    rep = borel_rep(root, "+", z, r, s)
    q = root.q
    z = complex(z)
    r = complex(r)
    s = complex(s)
    comm = q - 1.0 / q
    alpha = (z * s / r) * rep.qh1_half - rep.qh1_half_inv
    beta = comm * (rep.e0 @ rep.qh0_half_inv)
    gamma = comm * (rep.e1 @ rep.qh1_half_inv)
    delta = z * r * q ** 2 * rep.qh1_half_inv - rep.qh1_half
    blocks = np.empty((2, 2, rep.dim, rep.dim), dtype=complex)
    if sign == "+":
        blocks[0, 0], blocks[0, 1] = alpha, beta
        blocks[1, 0], blocks[1, 1] = gamma, delta
    elif sign == "-":
        blocks[0, 0], blocks[0, 1] = delta, gamma
        blocks[1, 0], blocks[1, 1] = beta, alpha
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return LocalVertex(aux_dim=rep.dim, blocks=blocks)


# ---------------------------------------------------------------------------
# sector bookkeeping


@lru_cache(maxsize=None)
def sector_basis(M, weight):
    """Basis states (integers, ascending) with `weight` down spins."""
    states = []
    for downs in combinations(range(M), weight):
        v = 0
        for pos in downs:
            v |= 1 << pos
        states.append(v)
    return np.array(sorted(states), dtype=np.int64)


def weight_from_sz(M, sz):
    """Sector weight (number of down spins) for a total-spin value."""
    two_sz = int(round(2 * float(sz)))
    w2 = M - two_sz
    if w2 % 2 or not 0 <= w2 // 2 <= M:
        raise ValueError(f"S^z = {sz} is not a sector of an M = {M} chain")
    return w2 // 2


@dataclass
class SectorOperator:
    """Block-diagonal operator on (C^2)^{x M}, one block per S^z sector.

    blocks[w] is the dense matrix on the weight-w sector (w down spins,
    S^z = M/2 - w), in the lexicographic bitstring basis.
    """

    M: int
    blocks: dict

    # -- structure ---------------------------------------------------------
    def weights(self):
        return sorted(self.blocks)

    def two_sz(self, weight):
        return self.M - 2 * weight

    def block_by_sz(self, sz):
        return self.blocks[weight_from_sz(self.M, sz)]

    def copy(self):
        return SectorOperator(self.M, {w: b.copy() for w, b in self.blocks.items()})

    @classmethod
    def identity(cls, M):
        return cls(M, {w: np.eye(comb(M, w), dtype=complex) for w in range(M + 1)})

    @classmethod
    def zero(cls, M):
        return cls(M, {w: np.zeros((comb(M, w), comb(M, w)), dtype=complex)
                       for w in range(M + 1)})

    # -- algebra -----------------------------------------------------------
    def __matmul__(self, other):
        return SectorOperator(self.M, {w: self.blocks[w] @ other.blocks[w]
                                       for w in self.blocks})

    def __add__(self, other):
        return SectorOperator(self.M, {w: self.blocks[w] + other.blocks[w]
                                       for w in self.blocks})

    def __sub__(self, other):
        return SectorOperator(self.M, {w: self.blocks[w] - other.blocks[w]
                                       for w in self.blocks})

    def __rmul__(self, scalar):
        return SectorOperator(self.M, {w: scalar * b for w, b in self.blocks.items()})

    def __neg__(self):
        return (-1.0) * self

    def scale_by_sector(self, factor):
        """Multiply each block by factor(two_sz)."""
        return SectorOperator(self.M, {w: factor(self.two_sz(w)) * b
                                       for w, b in self.blocks.items()})

    def transpose(self):
        return SectorOperator(self.M, {w: b.T.copy() for w, b in self.blocks.items()})

    def conj(self):
        return SectorOperator(self.M, {w: b.conj() for w, b in self.blocks.items()})

    def conj_transpose(self):
        return SectorOperator(self.M, {w: b.conj().T.copy()
                                       for w, b in self.blocks.items()})

    # -- numbers -----------------------------------------------------------
    def frobenius(self):
        return float(np.sqrt(sum(np.sum(np.abs(b) ** 2) for b in self.blocks.values())))

    def max_abs(self):
        return float(max(np.max(np.abs(b)) if b.size else 0.0
                         for b in self.blocks.values()))

    def trace(self):
        return complex(sum(np.trace(b) for b in self.blocks.values()))

    def eigenvalues(self):
        """Eigenvalues per sector: dict weight -> 1d array."""
        return {w: np.linalg.eigvals(b) for w, b in self.blocks.items()}

    def to_dense(self):
        """Scatter the blocks into the full 2^M-dimensional matrix."""
        dim = 2 ** self.M
        out = np.zeros((dim, dim), dtype=complex)
        for w, b in self.blocks.items():
            idx = sector_basis(self.M, w)
            out[np.ix_(idx, idx)] = b
        return out


def commutator(a, b):
    return a @ b - b @ a


def rel_residual(lhs, rhs):
    """Scale-free deviation max_w |L_w - R_w|_F / (1 + |L_w|_F + |R_w|_F).

    Returns (residual, witness) where witness identifies the worst
    sector and matrix element.
    """
    worst = 0.0
    witness = None
    for w in lhs.blocks:
        L, R = lhs.blocks[w], rhs.blocks[w]
        diff = L - R
        denom = 1.0 + np.linalg.norm(L) + np.linalg.norm(R)
        res = np.linalg.norm(diff) / denom
        if res >= worst:
            worst = float(res)
            if diff.size:
                i, j = np.unravel_index(np.argmax(np.abs(diff)), diff.shape)
                witness = {"weight": w, "two_sz": lhs.two_sz(w),
                           "entry": [int(i), int(j)]}
    return worst, witness


# ---------------------------------------------------------------------------
# symmetry operators


@dataclass
class SymmetryOps:
    """Total spin S^z, spin reversal, and the diagonal parity product.

    S^z is a scalar per sector; the parity product is the scalar
    (-1)^weight per sector; spin reversal is the bit-flip permutation
    mapping the weight-w basis onto the weight-(M-w) basis.
    """

    M: int
    flip_index: dict  # weight -> array: position of flipped state in sector M-w

    def sz_value(self, weight):
        return 0.5 * (self.M - 2 * weight)

    def parity_value(self, weight):
        return -1.0 if weight % 2 else 1.0

    def sz_operator(self):
        op = SectorOperator.identity(self.M)
        return op.scale_by_sector(lambda two_sz: 0.5 * two_sz)

    def parity_operator(self):
        op = SectorOperator.identity(self.M)
        return op.scale_by_sector(lambda two_sz: (-1.0) ** ((self.M - two_sz) // 2))

    def spin_flip_conjugate(self, op):
        """Conjugate a SectorOperator by the global spin flip."""
        out = {}
        for w in op.blocks:
            fi = self.flip_index[w]
            out[w] = op.blocks[self.M - w][np.ix_(fi, fi)].copy()
        return SectorOperator(op.M, out)

    def spin_flip_matrix(self, weight):
        """Dense spin-flip block mapping sector `weight` to M - weight."""
        fi = self.flip_index[weight]
        size = len(fi)
        mat = np.zeros((size, size), dtype=complex)
        for j, i in enumerate(fi):
            mat[i, j] = 1.0
        return mat


def symmetry_ops(M):
    if M < 1:
        raise ValueError("M must be >= 1")
    mask = (1 << M) - 1
    flip_index = {}
    for w in range(M + 1):
        src = sector_basis(M, w)
        dst = sector_basis(M, M - w)
        lookup = {int(s): i for i, s in enumerate(dst)}
        flip_index[w] = np.array([lookup[int(s) ^ mask] for s in src], dtype=np.int64)
    return SymmetryOps(M=M, flip_index=flip_index)


# ---------------------------------------------------------------------------
# traced row operators


def trace_monodromy(vertex, M, guard_override=False):
    """Trace an M-fold product of a vertex over its auxiliary space.

    The element between bitstrings sigma, rho is
    Tr_aux[ V^(sigma_M rho_M) ... V^(sigma_1 rho_1) ]; only
    weight-preserving elements are nonzero, so the result is assembled
    sector by sector.  All same-sector pairs are propagated through the
    sites together as a batch of auxiliary-space matrices.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    a = vertex.aux_dim
    if not guard_override and (2 ** M) * a * a > GUARD_ENTRIES:
        raise SizeError(
            f"2^{M} * {a}^2 exceeds the {GUARD_ENTRIES:.0e}-entry guard; "
            "pass guard_override=True to proceed anyway")
    blocks = {}
    for w in range(M + 1):
        states = sector_basis(M, w)
        size = len(states)
        rows = np.repeat(states, size)
        cols = np.tile(states, size)
        npairs = size * size
        acc = np.empty((npairs, a, a), dtype=complex)
        bit_r = (rows >> 0) & 1
        bit_c = (cols >> 0) & 1
        for sb in (0, 1):
            for tb in (0, 1):
                mask = (bit_r == sb) & (bit_c == tb)
                if mask.any():
                    acc[mask] = vertex.blocks[sb, tb]
        for m in range(1, M):
            bit_r = (rows >> m) & 1
            bit_c = (cols >> m) & 1
            for sb in (0, 1):
                for tb in (0, 1):
                    mask = (bit_r == sb) & (bit_c == tb)
                    if mask.any():
                        acc[mask] = vertex.blocks[sb, tb] @ acc[mask]
        blocks[w] = np.einsum("pii->p", acc).reshape(size, size)
    return SectorOperator(M=M, blocks=blocks)


def dense_monodromy(vertex, M):
    """Brute-force oracle: the same trace built on the full product space.

    Multiplies M matrices of size (aux_dim * 2^M) and partial-traces the
    auxiliary factor.  Exponential in M; intended for cross-checks only.
    """
    a = vertex.aux_dim
    dim = 2 ** M
    unit = {}
    for sb in (0, 1):
        for tb in (0, 1):
            e = np.zeros((2, 2), dtype=complex)
            e[sb, tb] = 1.0
            unit[sb, tb] = e
    total = np.eye(a * dim, dtype=complex)
    for m in range(M, 0, -1):
        site = np.zeros((a * dim, a * dim), dtype=complex)
        left = np.eye(2 ** (M - m), dtype=complex)
        right = np.eye(2 ** (m - 1), dtype=complex)
        for sb in (0, 1):
            for tb in (0, 1):
                emb = np.kron(left, np.kron(unit[sb, tb], right))
                site += np.kron(vertex.blocks[sb, tb], emb)
        total = total @ site
    reshaped = total.reshape(a, dim, a, dim)
    return np.einsum("aiaj->ij", reshaped)


# ---------------------------------------------------------------------------
# the operator families


def fusion_matrix(root, n, z, M, guard_override=False):
    """Fusion operator of degree n: trace of fused weights at argument z*q^n.

    Degree 1 is the quantum determinant (z*q^2 - 1)^M * id; degree 0 is
    the zero operator, the natural seed of the fusion recursion.
    """
    n = int(n)
    if n < 0:
        raise ValueError("fusion degree must be >= 0")
    if n == 0:
        return SectorOperator.zero(M)
    vertex = build_R_fused(root, n - 1, complex(z) * root.q_pow(n))
    return trace_monodromy(vertex, M, guard_override=guard_override)


def transfer_matrix(root, z, M, guard_override=False):
    """Row-to-row transfer operator T(z) (degree-2 fusion at z*q^-2)."""
    return fusion_matrix(root, 2, complex(z) * root.q_pow(-2), M,
                         guard_override=guard_override)


def aux_matrix(root, z, M, r=1.0, s=0.0, sign="+", s_zero_limit=False,
               guard_override=False):
    """Auxiliary operator Q(z; r, s): traced product of Borel vertices.

    With s_zero_limit=True the parameters are pinned to (r, s) = (1, 0),
    the limit in which the two Baxter-type solutions emerge.
    """
    if s_zero_limit:
        r, s = 1.0, 0.0
    vertex = build_L(root, sign, z, r, s)
    return trace_monodromy(vertex, M, guard_override=guard_override)


def partition_function(root, z, M, M_rows, guard_override=False):
    """Torus partition function: trace of the M_rows-th transfer power."""
    if M < 1 or M_rows < 0:
        raise ValueError("need M >= 1 and M_rows >= 0")
    if M_rows == 0:
        return complex(2 ** M)
    T = transfer_matrix(root, z, M, guard_override=guard_override)
    total = 0.0 + 0.0j
    for w, lam in T.eigenvalues().items():
        total += np.sum(lam ** M_rows)
    return complex(total)
