"""Root-of-unity arithmetic and the finite-dimensional modules built on it.

Everything downstream is parameterized by a primitive root of unity
q = exp(2*pi*i*n/N).  Two families of representations are provided:

* spin-n/2 evaluation modules on C^(n+1) (generators e, f, q^h), used to
  assemble the fused six-vertex weights, and
* cyclic modules of the upper Borel half on C^(N') with free parameters
  (z, r, s), used to assemble the auxiliary (Q) operator.

Here N' = N for odd N and N' = N/2 for even N.  Fractional powers are
fixed once and for all: q^(1/2) = exp(pi*i*n/N) and r^(1/2) is the
principal square root, so repeated runs are bit-for-bit reproducible.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import PrimitivityError

PRIMITIVITY_TOL = 1e-12


def q_integer(q, m):
    """The q-integer [m]_q = (q^m - q^-m) / (q - q^-1)."""
    m = int(m)
    return (q ** m - q ** (-m)) / (q - 1.0 / q)


@dataclass(frozen=True)
class RootOfUnity:
    """A primitive N-th root of unity with a fixed square-root branch.

    Attributes
    ----------
    N : order of the root (q^N = 1, q^k != 1 for 0 < k < N)
    n : exponent selecting q = exp(2*pi*i*n/N), gcd(n, N) = 1
    q : the root itself
    q_half : fixed branch of q^(1/2); q_half**2 == q exactly
    N_prime : N for odd N, N/2 for even N (cyclic module dimension)
    """

    N: int
    n: int
    q: complex
    q_half: complex
    N_prime: int

    def q_pow(self, k):
        """q**k for integer k."""
        return self.q ** int(k)

    def half_pow(self, k):
        """q_half**k for integer k, i.e. q**(k/2) in the fixed branch."""
        return self.q_half ** int(k)

    def sz_factor(self, two_sz, scale=1):
        """q**(scale * Sz) for a sector with 2*Sz = two_sz (scale integer)."""
        return self.q_half ** int(scale * two_sz)

    def inverse(self):
        """The root q^(-1) with the matching half branch q_half^(-1).

        Identities relating data at q and at q^(-1) only close when the
        two half branches are inverse to each other, so this is *not*
        the same object as make_root_of_unity(N, N - n), whose half
        branch would differ by a sign.
        """
        return RootOfUnity(
            N=self.N,
            n=(self.N - self.n) % self.N,
            q=np.conj(self.q),
            q_half=np.conj(self.q_half),
            N_prime=self.N_prime,
        )


def make_root_of_unity(N, n=1):
    """Construct the primitive root q = exp(2*pi*i*n/N).

    Raises
    ------
    ValueError for N < 3 or n out of range, PrimitivityError when
    gcd(n, N) != 1.
    """
    N = int(N)
    n = int(n)
    if N < 3:
        raise ValueError(f"order N must be >= 3, got {N}")
    if not 1 <= n < N:
        raise ValueError(f"exponent n must satisfy 1 <= n < N, got {n}")
    if math.gcd(n, N) != 1:
        raise PrimitivityError(
            f"gcd({n}, {N}) = {math.gcd(n, N)} != 1: q would not be primitive"
        )
    q_half = complex(np.exp(1j * np.pi * n / N))
    q = q_half * q_half  # bit-exact square of the fixed branch
    # belt and braces: the gcd test above already guarantees this
    for k in range(1, N):
        if abs(q ** k - 1.0) < PRIMITIVITY_TOL:
            raise PrimitivityError(f"q^{k} = 1 although k < N = {N}")
    return RootOfUnity(N=N, n=n, q=q, q_half=q_half,
                       N_prime=N if N % 2 else N // 2)


# ---------------------------------------------------------------------------
# spin-n/2 evaluation modules


@dataclass(frozen=True)
class EvalRep:
    """Spin n_spin/2 module on C^(n_spin+1).

    Basis |0>, ..., |n_spin>.  The ladder actions are
        e|m> = [n_spin - m + 1]_q |m-1>,   f|m> = [m + 1]_q |m+1>,
        q^h |m> = q^(n_spin - 2m) |m>,
    with kets outside the range mapped to the zero vector.
    """

    root: RootOfUnity
    n_spin: int
    dim: int
    e: np.ndarray
    f: np.ndarray
    qh: np.ndarray
    qh_half: np.ndarray
    qh_half_inv: np.ndarray


def eval_rep(root, n_spin):
    """Build the spin n_spin/2 evaluation module for the given root."""
    n_spin = int(n_spin)
    if n_spin < 0:
        raise ValueError("n_spin must be >= 0")
    d = n_spin + 1
    q = root.q
    e = np.zeros((d, d), dtype=complex)
    f = np.zeros((d, d), dtype=complex)
    for m in range(1, d):
        e[m - 1, m] = q_integer(q, n_spin - m + 1)
    for m in range(d - 1):
        f[m + 1, m] = q_integer(q, m + 1)
    weights = n_spin - 2 * np.arange(d)
    qh = np.diag(np.array([root.q_pow(w) for w in weights]))
    qh_half = np.diag(np.array([root.half_pow(w) for w in weights]))
    qh_half_inv = np.diag(np.array([root.half_pow(-w) for w in weights]))
    return EvalRep(root=root, n_spin=n_spin, dim=d, e=e, f=f,
                   qh=qh, qh_half=qh_half, qh_half_inv=qh_half_inv)


# ---------------------------------------------------------------------------
# cyclic Borel modules


@dataclass(frozen=True)
class BorelRep:
    """N'-dimensional module of the upper Borel half, parameters (z, r, s).

    For sign '+' the action on the basis |0>, ..., |N'-1> is

        q^(h1)|k> = q^(-h0)|k> = r q^(-2k) |k>,
        e0|k> = z |k+1>            (e0 kills the top state),
        e1|k> = (s + 1 - q^(2k) - s q^(-2k)) / (q - q^(-1))^2 |k-1>
                                   (e1 kills |0>).

    Sign '-' is the same module with the roles of the index-0 and
    index-1 generators exchanged.  Half powers of the Cartan elements
    use the fixed branches r^(1/2) (principal) and q^(1/2) from the
    root; they satisfy (q^(h/2))^2 = q^h exactly.
    """

    root: RootOfUnity
    sign: str
    z: complex
    r: complex
    s: complex
    dim: int
    e0: np.ndarray
    e1: np.ndarray
    qh0: np.ndarray
    qh1: np.ndarray
    qh0_half: np.ndarray
    qh0_half_inv: np.ndarray
    qh1_half: np.ndarray
    qh1_half_inv: np.ndarray


def borel_rep(root, sign, z, r=1.0, s=0.0):
    """Build the cyclic Borel module pi^sign(z; r, s)."""
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    d = root.N_prime
    q = root.q
    z = complex(z)
    r = complex(r)
    s = complex(s)
    r_half = complex(np.sqrt(r))

    e0 = np.zeros((d, d), dtype=complex)
    for k in range(d - 1):
        e0[k + 1, k] = z
    e1 = np.zeros((d, d), dtype=complex)
    denom = (q - 1.0 / q) ** 2
    for k in range(1, d):
        e1[k - 1, k] = (s + 1 - root.q_pow(2 * k) - s * root.q_pow(-2 * k)) / denom

    ks = np.arange(d)
    qh1 = np.diag(r * np.array([root.q_pow(-2 * k) for k in ks]))
    qh0 = np.diag((1.0 / r) * np.array([root.q_pow(2 * k) for k in ks]))
    qh1_half = np.diag(r_half * np.array([root.q_pow(-k) for k in ks]))
    qh1_half_inv = np.diag((1.0 / r_half) * np.array([root.q_pow(k) for k in ks]))
    # q^(h0) = q^(-h1) in this module, and the half branches are tied together
    qh0_half = qh1_half_inv
    qh0_half_inv = qh1_half

    if sign == "-":
        e0, e1 = e1, e0
        qh0, qh1 = qh1, qh0
        qh0_half, qh1_half = qh1_half, qh0_half
        qh0_half_inv, qh1_half_inv = qh1_half_inv, qh0_half_inv

    return BorelRep(root=root, sign=sign, z=z, r=r, s=s, dim=d,
                    e0=e0, e1=e1, qh0=qh0, qh1=qh1,
                    qh0_half=qh0_half, qh0_half_inv=qh0_half_inv,
                    qh1_half=qh1_half, qh1_half_inv=qh1_half_inv)
