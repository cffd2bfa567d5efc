"""Joint eigenbases, polynomial eigenvalues of Q, and their zero sets.

The commuting family (fusion operators, auxiliary operators at all
parameter points) is diagonalized once per spin sector, using a Schur
decomposition of a generic normal member with degeneracy refinement by
further members.  Against that basis, eigenvalues of the auxiliary
operator are interpolated in z into polynomials of degree at most M,
and their zeroes are split into an s-independent group and a group
scaling linearly in s by comparing root sets at two (or three) values
of s.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import FamilyError, ReconstructionError
from .identities import annulus_sample, seeded_rng
from .vertex import aux_matrix, transfer_matrix, weight_from_sz

OFFDIAG_TOL = 1e-8
COMM_TOL = 1e-9


@dataclass
class EigenFamily:
    """Joint eigenbasis of commuting operators on one spin sector.

    basis columns are orthonormal (Schur vectors); labels[k] holds the
    eigenvalues of the k-th registered operator along the basis.
    """

    M: int
    weight: int
    two_sz: int
    basis: np.ndarray
    labels: list = field(default_factory=list)
    offdiag_residuals: list = field(default_factory=list)
    degenerate: bool = False
    degeneracy_report: list = field(default_factory=list)
    seed: int = 0
    root: object = None

    @property
    def sz(self):
        return 0.5 * self.two_sz

    @property
    def size(self):
        return self.basis.shape[0]

    def label(self, block, tol=OFFDIAG_TOL):
        """Eigenvalues of a commuting operator block in this basis."""
        rotated = self.basis.conj().T @ block @ self.basis
        diag = np.diag(rotated).copy()
        off = rotated - np.diag(diag)
        scale = 1.0 + np.linalg.norm(block)
        res = np.linalg.norm(off) / scale
        if res > tol:
            raise FamilyError(
                f"operator is not diagonal in the joint basis "
                f"(off-diagonal residual {res:.2e} > {tol:.0e})")
        return diag


def _cluster(values, tol):
    """Group indices of nearly equal complex values."""
    order = np.lexsort((values.imag.round(12), values.real.round(12)))
    groups = []
    for idx in order:
        if groups and abs(values[idx] - values[groups[-1][-1]]) < tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def joint_eigenbasis(sector_ops, sector, seed=0, comm_tol=COMM_TOL,
                     offdiag_tol=OFFDIAG_TOL):
    """Diagonalize a list of commuting SectorOperators on one sector.

    sector may be an S^z value (half-integer).  The first operator is
    taken as the designated (generically nondegenerate) normal member;
    remaining operators refine degenerate clusters, two rounds at most.
    Degeneracies surviving refinement are flagged, not fatal.
    """
    if not sector_ops:
        raise ValueError("need at least one operator")
    M = sector_ops[0].M
    w = weight_from_sz(M, sector)
    blocks = [op.blocks[w] for op in sector_ops]

    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            c = blocks[i] @ blocks[j] - blocks[j] @ blocks[i]
            denom = 1.0 + np.linalg.norm(blocks[i]) * np.linalg.norm(blocks[j])
            if np.linalg.norm(c) / denom > comm_tol:
                raise FamilyError(
                    f"operators {i} and {j} do not commute on sector "
                    f"S^z={sector}: residual {np.linalg.norm(c) / denom:.2e}")

    T, V = scipy.linalg.schur(blocks[0], output="complex")
    eigs = np.diag(T).copy()
    order = np.lexsort((eigs.imag.round(12), eigs.real.round(12)))
    V = V[:, order]
    eigs = eigs[order]

    family = EigenFamily(M=M, weight=w, two_sz=M - 2 * w, basis=V, seed=seed)
    cluster_tol = 1e-8 * (1.0 + float(np.max(np.abs(eigs))))
    groups = [g for g in _cluster(eigs, cluster_tol) if len(g) > 1]
    for refiner in blocks[1:3]:
        if not groups:
            break
        still = []
        for g in groups:
            cols = np.array(g)
            sub = V[:, cols].conj().T @ refiner @ V[:, cols]
            Ts, W = scipy.linalg.schur(sub, output="complex")
            V[:, cols] = V[:, cols] @ W
            sub_eigs = np.diag(Ts)
            sub_tol = 1e-8 * (1.0 + float(np.max(np.abs(sub_eigs))))
            for sg in _cluster(sub_eigs, sub_tol):
                if len(sg) > 1:
                    still.append([int(cols[i]) for i in sg])
        groups = still
    if groups:
        family.degenerate = True
        family.degeneracy_report = [{"indices": g} for g in groups]

    family.basis = V
    for k, B in enumerate(blocks):
        rotated = V.conj().T @ B @ V
        diag = np.diag(rotated).copy()
        res = np.linalg.norm(rotated - np.diag(diag)) / (1.0 + np.linalg.norm(B))
        if res > offdiag_tol and not family.degenerate:
            raise FamilyError(
                f"operator {k} not diagonalized: residual {res:.2e}")
        family.labels.append(diag)
        family.offdiag_residuals.append(float(res))
    return family


def build_eigen_family(root, M, weight=None, sector=None, seed=0,
                       extra_ops=None, guard_override=False):
    """Standard joint basis: generic auxiliary operators plus a transfer.

    The designated normal member is Q at a seeded generic (z, s); a
    second Q at independent parameters and one transfer operator come
    along for degeneracy resolution and validation.
    """
    if weight is None:
        weight = weight_from_sz(M, sector)
    sz = 0.5 * (M - 2 * weight)
    rng = seeded_rng(seed, "eigenfamily", root.N, root.n, M, weight)
    z0, s0 = annulus_sample(rng, root), annulus_sample(rng, root)
    z1, s1 = annulus_sample(rng, root), annulus_sample(rng, root)
    z2 = annulus_sample(rng, root)
    ops = [aux_matrix(root, z0, M, s=s0, guard_override=guard_override),
           aux_matrix(root, z1, M, s=s1, guard_override=guard_override),
           transfer_matrix(root, z2, M, guard_override=guard_override)]
    if extra_ops:
        ops.extend(extra_ops)
    family = joint_eigenbasis(ops, sz, seed=seed)
    family.root = root
    return family


# ---------------------------------------------------------------------------
# polynomial eigenvalues


@dataclass
class QPolynomial:
    """Per-eigenvector polynomial eigenvalue of the auxiliary operator.

    coeffs maps each sampled s to the coefficient array (degree 0..M).
    zeroes_plus holds the s-independent inverse zeroes x_j^+ and
    zeroes_minus the linear-in-s ones x_j^- (eigenvalue factorizes as
    N * prod(1 - z x_j^+) * prod(1 - z s x_j^-) when the sector theory
    applies).
    """

    M: int
    weight: int
    two_sz: int
    eigen_index: int
    coeffs: dict = field(default_factory=dict)
    zeroes_plus: list = field(default_factory=list)
    zeroes_minus: list = field(default_factory=list)
    strings: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    normalization: complex = 0.0
    norm_residual: float = 0.0
    zero_eigenvalue: bool = False
    root: object = None

    def evaluate(self, z, s):
        c = self.coeffs[s]
        return np.polynomial.polynomial.polyval(z, c)


def expected_constant_term(root, M, two_sz):
    """Closed form of the z=0 value of the auxiliary eigenvalues."""
    return (-1) ** M * sum(root.q_pow(ell * two_sz)
                           for ell in range(root.N_prime))


def polynomial_eigenvalues(family, q_aux_builder, s, sample_radius=1.0,
                           cond_cap=1e10, max_retries=6, polys=None):
    """Interpolate the auxiliary eigenvalues into polynomials in z.

    Samples Q(z_j; s) at the M+1 points z_j = radius e^{2 pi i j/(M+1)},
    labels each sample against the family basis and solves the
    Vandermonde system.  Returns one QPolynomial per eigenvector; pass
    the result back via `polys` to accumulate coefficients at further
    values of s.
    """
    M = family.M
    s = complex(s)
    radius = float(sample_radius)
    for _ in range(max_retries):
        zs = radius * np.exp(2j * np.pi * np.arange(M + 1) / (M + 1))
        V = np.vander(zs, M + 1, increasing=True)
        if np.linalg.cond(V) > cond_cap:
            radius *= 1.37
            continue
        try:
            rows = [family.label(q_aux_builder(z, s).blocks[family.weight])
                    for z in zs]
        except FamilyError:
            radius *= 1.37
            continue
        data = np.array(rows)  # (M+1, n_vec)
        coeff = np.linalg.solve(V, data)
        break
    else:
        raise ReconstructionError(
            f"could not reconstruct polynomial eigenvalues at s={s}")

    if polys is None:
        polys = [QPolynomial(M=M, weight=family.weight, two_sz=family.two_sz,
                             eigen_index=k, root=family.root)
                 for k in range(family.size)]
    expected = None
    if family.root is not None:
        expected = expected_constant_term(family.root, M, family.two_sz)
    for k, poly in enumerate(polys):
        c = coeff[:, k].copy()
        poly.coeffs[s] = c
        scale = np.max(np.abs(c))
        if scale < 1e-10:
            poly.zero_eigenvalue = True
        if expected is not None and not poly.zero_eigenvalue:
            poly.normalization = complex(expected)
            poly.norm_residual = max(
                poly.norm_residual,
                float(abs(c[0] - expected) / (1 + abs(expected))))
    return polys


def _polished_roots(coeffs, tol=1e-9):
    """Roots of a coefficient array (low degree first), Newton-polished."""
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.array([], dtype=complex)
    trimmed = c.copy()
    keep = np.nonzero(np.abs(trimmed) > 1e-12 * scale)[0]
    if len(keep) == 0:
        return np.array([], dtype=complex)
    trimmed = trimmed[: keep[-1] + 1]
    if len(trimmed) <= 1:
        return np.array([], dtype=complex)
    roots = np.polynomial.polynomial.polyroots(trimmed)
    dp = np.polynomial.polynomial.polyder(trimmed)
    vals = np.polynomial.polynomial.polyval(roots, trimmed)
    bad = np.abs(vals) > tol * scale
    if bad.any():
        deriv = np.polynomial.polynomial.polyval(roots[bad], dp)
        safe = np.abs(deriv) > 1e-14
        step = np.zeros_like(roots[bad])
        step[safe] = vals[bad][safe] / deriv[safe]
        roots[bad] = roots[bad] - step
    return roots


def detect_strings(zeroes, root, rel_tol=1e-6):
    """Complete geometric chains x, x q^2, ..., x q^{2(N'-1)} in a zero set."""
    NP = root.N_prime
    pool = list(zeroes)
    found = []
    while pool:
        x = pool[0]
        chain_idx = [0]
        for j in range(1, NP):
            target = x * root.q_pow(2 * j)
            hit = None
            for i, y in enumerate(pool):
                if i in chain_idx:
                    continue
                if abs(y - target) <= rel_tol * (1 + abs(target)):
                    hit = i
                    break
            if hit is None:
                break
            chain_idx.append(hit)
        if len(chain_idx) == NP and NP > 1:
            found.append(complex(x))
            for i in sorted(chain_idx, reverse=True):
                pool.pop(i)
        else:
            pool.pop(0)
    return found


def extract_and_classify_zeroes(poly, s_samples, ratio_tol=1e-6):
    """Split the inverse zeroes of a QPolynomial into the two groups.

    Requires coefficients at >= 2 of the s_samples.  Roots z0 of the
    polynomial give inverse zeroes y = 1/z0; those stable across s go
    to zeroes_plus, those scaling linearly in s go (divided by s) to
    zeroes_minus.  A third sample, when present, arbitrates ambiguous
    roots; leftovers become warnings carrying both residuals.
    """
    avail = [s for s in s_samples if s in poly.coeffs]
    if len(avail) < 2:
        raise ValueError("polynomial must be reconstructed at >= 2 s values")
    if poly.zero_eigenvalue:
        poly.warnings.append({"kind": "zero_eigenvalue"})
        return poly
    s1, s2 = avail[0], avail[1]
    s3 = avail[2] if len(avail) > 2 else None

    def inverse_zeroes(s):
        roots = _polished_roots(poly.coeffs[s])
        roots = roots[np.abs(roots) > 1e-12]
        return 1.0 / roots

    y1 = inverse_zeroes(s1)
    y2 = list(inverse_zeroes(s2))
    y3 = list(inverse_zeroes(s3)) if s3 is not None else None

    plus, minus, warnings = [], [], []
    for y in y1:
        best = {}
        for kind, target in (("plus", y), ("minus", y * s2 / s1)):
            if y2:
                dists = [abs(c - target) / (1 + abs(target)) for c in y2]
                best[kind] = (min(dists), int(np.argmin(dists)))
            else:
                best[kind] = (np.inf, -1)
        kind = min(best, key=lambda k: best[k][0])
        res, idx = best[kind]
        if res > ratio_tol and y3 is not None:
            # third sample arbitrates
            alt = {}
            for k2, target in (("plus", y), ("minus", y * s3 / s1)):
                dists = [abs(c - target) / (1 + abs(target)) for c in y3]
                alt[k2] = min(dists) if dists else np.inf
            kind = min(alt, key=alt.get)
            res = alt[kind]
        if res > ratio_tol:
            warnings.append({"kind": "unclassified", "inverse_zero": complex(y),
                             "plus_residual": float(best["plus"][0]),
                             "minus_residual": float(best["minus"][0])})
            continue
        if idx >= 0 and idx < len(y2):
            y2.pop(idx)
        if kind == "plus":
            plus.append(complex(y))
        else:
            minus.append(complex(y / s1))

    poly.zeroes_plus = plus
    poly.zeroes_minus = minus
    poly.warnings.extend(warnings)
    if poly.root is not None:
        poly.strings = [detect_strings(plus, poly.root),
                        detect_strings(minus, poly.root)]
    return poly


def sector_spectrum(root, M, weight, seed=0, s_base=None, sample_radius=1.0,
                    guard_override=False):
    """Family + polynomials + zero classification for one sector."""
    rng = seeded_rng(seed, "spectrumpipeline", root.N, root.n, M, weight)
    family = build_eigen_family(root, M, weight=weight, seed=seed,
                                guard_override=guard_override)
    if s_base is None:
        s_base = annulus_sample(rng, root)
    s_base = complex(s_base)
    builder = lambda z, s: aux_matrix(root, z, M, s=s,
                                      guard_override=guard_override)
    samples = [s_base, 2 * s_base, 3 * s_base]
    polys = None
    for s in samples:
        polys = polynomial_eigenvalues(family, builder, s,
                                       sample_radius=sample_radius,
                                       polys=polys)
    for poly in polys:
        extract_and_classify_zeroes(poly, samples)
    return family, polys
