"""Numerical certification of the functional identities of the model.

Every identity is checked as a residual in the scale-free metric
|LHS - RHS|_F / (1 + |LHS|_F + |RHS|_F), sector by sector, at seeded
random parameter points on the annulus 0.5 <= |z| <= 2 (steering clear
of the degenerate points 1 and q^{+-2}).  Operator-level identities are
evaluated on sector blocks; the ones involving ratios of eigenvalues
(SUMQP and the fusion-from-Q formulas) are evaluated per joint
eigenvector.

Identity ids
------------
FUS     fusion recursion  T^n(z) T^2(zq^-2) = (zq^2-1)^M T^{n+1}(zq^-2)
                                             + (z-1)^M T^{n-1}(zq^2)
TCOMM   [T^m(z), T^n(w)] = 0
QSYM    [Q(z;s), T^n(w)] = [Q, S^z] = [Q, parity] = 0
QCOMM   [Q(z;s), Q(w;t)] = 0
RQ      spin-reversal transformation of Q (three equalities)
QCT     conjugate transpose of Q (two equalities)
TTRANS  T(z,q) = T(zq^2, q^-1)^t
TQ0     Q(z;s) T(z) = (z-1)^M q^{Sz} Q(zq^2;sq^-2)
                     + (zq^2-1)^M q^{-Sz} Q(zq^-2;sq^2)
TQPM    the s->0 limits of TQ0 for both spin-reversal partners
FUNC    Q(zq^2/s;s) Q(z;t) = Q(zq^2/s;stq^-2)
                              [(zq^2-1)^M + q^{N'(M-Sz)} T^{N'-1}(zq^2)]
SUMQP   Q^-(z) as a telescoping sum over Q^+ (eigenvalue level)
COEFF   reflection relation of the z-expansion coefficients of Q,
        together with the closed form of the constant term
ALG     defining relations of the representations themselves

Two spin prefactors are implemented in their exact form, which differs
from the commonly quoted q^{+-2Sz} by a sector sign at even root order:
the direct spin-reversal equality carries q^{-2(N'-1)Sz} and the direct
adjoint relation q^{2(N'+1)Sz}.  Both reduce to q^{+-2Sz} for odd N and
in integer-spin sectors.
"""

import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularSampleError
from .roots import borel_rep, eval_rep, q_integer
from .vertex import (SectorOperator, aux_matrix, fusion_matrix,
                     rel_residual, symmetry_ops, transfer_matrix)

IDENTITY_IDS = ("FUS", "TCOMM", "QSYM", "QCOMM", "RQ", "QCT", "TTRANS",
                "TQ0", "TQPM", "FUNC", "SUMQP", "COEFF", "ALG")

_WORKING_HYPOTHESIS_NOTE = (
    "commutation of the auxiliary family is proved only for small orders; "
    "this residual is numerical evidence, not proof")


@dataclass
class IdentityReport:
    """Outcome of one identity check over a set of parameter samples."""

    identity_id: str
    N: int
    n: int
    M: int
    tol: float
    samples: list = field(default_factory=list)
    max_residual: float = 0.0
    status: str = "pass"
    witness: dict | None = None
    notes: str = ""

    def record(self, params, residual, witness=None):
        self.samples.append({"params": params, "residual": float(residual)})
        if residual >= self.max_residual:
            self.max_residual = float(residual)
            if witness is not None:
                self.witness = witness

    def finalize(self):
        if self.status != "skipped":
            self.status = "pass" if self.max_residual < self.tol else "fail"
        return self

    def to_dict(self):
        return {
            "identity_id": self.identity_id,
            "N": self.N, "n": self.n, "M": self.M,
            "tol": self.tol,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "status": self.status,
            "witness": self.witness,
            "notes": self.notes,
        }


def seeded_rng(seed, tag, *ints):
    """Deterministic generator derived from a base seed and a text tag."""
    crc = zlib.crc32(tag.encode())
    return np.random.default_rng(np.random.SeedSequence([seed, crc, *ints]))


def annulus_sample(rng, root=None, avoid_radius=5e-2):
    """Random point with 0.5 <= |z| <= 2, away from 1 and q^{+-2}."""
    special = [1.0]
    if root is not None:
        special += [root.q_pow(2), root.q_pow(-2)]
    while True:
        z = (0.5 + 1.5 * rng.random()) * np.exp(2j * np.pi * rng.random())
        if all(abs(z - p) > avoid_radius for p in special):
            return complex(z)


class ParamStream:
    """Draws sample parameters: explicit values first, then seeded random."""

    def __init__(self, rng, explicit=None):
        self.rng = rng
        self._queue = list(explicit) if explicit else []

    def draw(self, root, name):
        if self._queue and name in self._queue[0]:
            return complex(self._queue[0][name])
        return annulus_sample(self.rng, root)

    def advance(self):
        if self._queue:
            self._queue.pop(0)

    def subseed(self):
        return int(self.rng.integers(2 ** 31))


def _commutation_residual(A, B):
    """Scale-free residual of [A, B] = 0, read as A B = B A."""
    return rel_residual(A @ B, B @ A)


def _rel(A, B):
    return np.linalg.norm(A - B) / (1 + np.linalg.norm(A) + np.linalg.norm(B))


# ---------------------------------------------------------------------------
# individual checks


def _check_fus(root, M, ps, report, samples, guard):
    q = root.q
    for _ in range(samples):
        z = ps.draw(root, "z")
        ps.advance()
        worst, wit = 0.0, None
        for deg in range(1, root.N_prime + 1):
            lhs = fusion_matrix(root, deg, z, M, guard) \
                @ fusion_matrix(root, 2, z * q ** -2, M, guard)
            rhs = (z * q ** 2 - 1) ** M * fusion_matrix(root, deg + 1, z * q ** -2, M, guard) \
                + (z - 1) ** M * fusion_matrix(root, deg - 1, z * q ** 2, M, guard)
            res, w = rel_residual(lhs, rhs)
            if res > worst:
                worst, wit = res, dict(w or {}, degree=deg)
        report.record({"z": z}, worst, wit)


def _check_tcomm(root, M, ps, report, samples, guard):
    for _ in range(samples):
        z, w = ps.draw(root, "z"), ps.draw(root, "w")
        ps.advance()
        A = fusion_matrix(root, 2, z, M, guard)
        B = fusion_matrix(root, 3, w, M, guard)
        res, wit = _commutation_residual(A, B)
        report.record({"z": z, "w": w, "m": 2, "n": 3}, res, wit)


def _check_qsym(root, M, ps, report, samples, guard):
    sym = symmetry_ops(M)
    sz_dense = sym.sz_operator().to_dense()
    par_dense = sym.parity_operator().to_dense()
    for _ in range(samples):
        z, w, s = ps.draw(root, "z"), ps.draw(root, "w"), ps.draw(root, "s")
        ps.advance()
        Q = aux_matrix(root, z, M, s=s, guard_override=guard)
        worst, wit = 0.0, None
        for deg in (2, 3):
            T = fusion_matrix(root, deg, w, M, guard)
            res, wt = _commutation_residual(Q, T)
            if res > worst:
                worst, wit = res, dict(wt or {}, against=f"fusion_{deg}")
        dense = Q.to_dense()
        for name, other in (("Sz", sz_dense), ("parity", par_dense)):
            d = dense @ other - other @ dense
            res = np.linalg.norm(d) / (1 + 2 * np.linalg.norm(dense @ other))
            if res > worst:
                worst, wit = res, {"against": name}
        report.record({"z": z, "w": w, "s": s, "q_norm": Q.frobenius()},
                      worst, wit)


def _check_qcomm(root, M, ps, report, samples, guard):
    for _ in range(samples):
        z, w = ps.draw(root, "z"), ps.draw(root, "w")
        s, t = ps.draw(root, "s"), ps.draw(root, "t")
        ps.advance()
        A = aux_matrix(root, z, M, s=s, guard_override=guard)
        B = aux_matrix(root, w, M, s=t, guard_override=guard)
        res, wit = _commutation_residual(A, B)
        report.record({"z": z, "w": w, "s": s, "t": t,
                       "q_norm": min(A.frobenius(), B.frobenius())}, res, wit)
    report.notes = _WORKING_HYPOTHESIS_NOTE


def _check_rq(root, M, ps, report, samples, guard):
    q = root.q
    NP = root.N_prime
    sym = symmetry_ops(M)
    for _ in range(samples):
        z, s = ps.draw(root, "z"), ps.draw(root, "s")
        ps.advance()
        Q = aux_matrix(root, z, M, s=s, guard_override=guard)
        lhs = sym.spin_flip_conjugate(Q)
        # reflection through 1/(z q^2 s), transposed
        rhs1 = ((-z) ** M) * aux_matrix(
            root, 1 / (z * q ** 2 * s), M, s=s, guard_override=guard
        ).transpose().scale_by_sector(
            lambda tsz: root.sz_factor(tsz, 2) * q ** M * s ** ((M - tsz) // 2))
        # same trace at the inverse root, transposed
        rhs2 = aux_matrix(root.inverse(), z * q ** 2 * s, M, s=1 / s,
                          guard_override=guard).transpose()
        # direct form; exact spin prefactor q^{-2(N'-1) Sz}
        rhs3 = aux_matrix(root, z * s, M, s=1 / s, guard_override=guard) \
            .scale_by_sector(lambda tsz: root.sz_factor(tsz, -2 * (NP - 1)))
        worst, wit = 0.0, None
        for tag, rhs in (("reflect", rhs1), ("inverse_root", rhs2),
                         ("direct", rhs3)):
            res, w = rel_residual(lhs, rhs)
            if res > worst:
                worst, wit = res, dict(w or {}, equality=tag)
        report.record({"z": z, "s": s}, worst, wit)


def _check_qct(root, M, ps, report, samples, guard):
    q = root.q
    NP = root.N_prime
    for _ in range(samples):
        z, s = ps.draw(root, "z"), ps.draw(root, "s")
        ps.advance()
        Q = aux_matrix(root, z, M, s=s, guard_override=guard)
        lhs = Q.conj_transpose()
        rhs1 = aux_matrix(root.inverse(), np.conj(z), M, s=np.conj(s),
                          guard_override=guard).transpose()
        # exact spin prefactor q^{2(N'+1) Sz}
        rhs2 = aux_matrix(root, np.conj(z) * q ** -2, M, s=np.conj(s),
                          guard_override=guard) \
            .scale_by_sector(lambda tsz: root.sz_factor(tsz, 2 * (NP + 1)))
        worst, wit = 0.0, None
        for tag, rhs in (("inverse_root", rhs1), ("direct", rhs2)):
            res, w = rel_residual(lhs, rhs)
            if res > worst:
                worst, wit = res, dict(w or {}, equality=tag)
        report.record({"z": z, "s": s}, worst, wit)


def _check_ttrans(root, M, ps, report, samples, guard):
    rinv = root.inverse()
    for _ in range(samples):
        z = ps.draw(root, "z")
        ps.advance()
        lhs = transfer_matrix(root, z, M, guard)
        rhs = transfer_matrix(rinv, z * root.q_pow(2), M, guard).transpose()
        res, wit = rel_residual(lhs, rhs)
        report.record({"z": z}, res, wit)


def _check_tq0(root, M, ps, report, samples, guard):
    q = root.q
    for _ in range(samples):
        z, s = ps.draw(root, "z"), ps.draw(root, "s")
        ps.advance()
        Q = aux_matrix(root, z, M, s=s, guard_override=guard)
        lhs = Q @ transfer_matrix(root, z, M, guard)
        up = aux_matrix(root, z * q ** 2, M, s=s * q ** -2, guard_override=guard)
        dn = aux_matrix(root, z * q ** -2, M, s=s * q ** 2, guard_override=guard)
        rhs = (z - 1) ** M * up.scale_by_sector(lambda tsz: root.sz_factor(tsz, 1)) \
            + (z * q ** 2 - 1) ** M * dn.scale_by_sector(lambda tsz: root.sz_factor(tsz, -1))
        res, wit = rel_residual(lhs, rhs)
        report.record({"z": z, "s": s, "q_norm": Q.frobenius()}, res, wit)


def _check_tqpm(root, M, ps, report, samples, guard):
    q = root.q
    for _ in range(samples):
        z = ps.draw(root, "z")
        ps.advance()
        T = transfer_matrix(root, z, M, guard)
        worst, wit = 0.0, None
        for sign, pm in (("+", 1), ("-", -1)):
            Q = aux_matrix(root, z, M, sign=sign, s_zero_limit=True,
                           guard_override=guard)
            up = aux_matrix(root, z * q ** 2, M, sign=sign, s_zero_limit=True,
                            guard_override=guard)
            dn = aux_matrix(root, z * q ** -2, M, sign=sign, s_zero_limit=True,
                            guard_override=guard)
            rhs = (z - 1) ** M * up.scale_by_sector(
                lambda tsz: root.sz_factor(tsz, pm)) \
                + (z * q ** 2 - 1) ** M * dn.scale_by_sector(
                    lambda tsz: root.sz_factor(tsz, -pm))
            res, w = rel_residual(Q @ T, rhs)
            if res > worst:
                worst, wit = res, dict(w or {}, sign=sign)
        report.record({"z": z}, worst, wit)


def _check_func(root, M, ps, report, samples, guard):
    q = root.q
    NP = root.N_prime
    for _ in range(samples):
        z, s, t = ps.draw(root, "z"), ps.draw(root, "s"), ps.draw(root, "t")
        ps.advance()
        lhs = aux_matrix(root, z * q ** 2 / s, M, s=s, guard_override=guard) \
            @ aux_matrix(root, z, M, s=t, guard_override=guard)
        Tm = fusion_matrix(root, NP - 1, z * q ** 2, M, guard)
        bracket = SectorOperator.identity(M).scale_by_sector(
            lambda _: (z * q ** 2 - 1) ** M) \
            + Tm.scale_by_sector(lambda tsz: root.half_pow(NP * (2 * M - tsz)))
        rhs = aux_matrix(root, z * q ** 2 / s, M, s=s * t * q ** -2,
                         guard_override=guard) @ bracket
        res, wit = rel_residual(lhs, rhs)
        report.record({"z": z, "s": s, "t": t}, res, wit)


def _check_sumqp(root, M, ps, report, samples, guard):
    from .spectra import build_eigen_family

    if root.N % 2 or M % 2 == 0:
        report.status = "skipped"
        report.notes = "requires even root order and odd M"
        return
    q = root.q
    NP = root.N_prime
    for w in range(M + 1):
        family = build_eigen_family(root, M, weight=w, seed=ps.subseed(),
                                    guard_override=guard)
        two_sz = M - 2 * w
        for _ in range(samples):
            z = ps.draw(root, "z")
            ps.advance()
            lhs = family.label(aux_matrix(root, z, M, sign="-",
                                          s_zero_limit=True,
                                          guard_override=guard).blocks[w])
            q0 = family.label(aux_matrix(root, 0.0, M, sign="-",
                                         s_zero_limit=True,
                                         guard_override=guard).blocks[w])
            ladder = [family.label(aux_matrix(root, z * q ** (2 * ell), M,
                                              s_zero_limit=True,
                                              guard_override=guard).blocks[w])
                      for ell in range(NP + 1)]
            if min(np.min(np.abs(l)) for l in ladder) < 1e-10:
                continue  # vanishing eigenvalue: formula inapplicable here
            total = np.zeros_like(lhs)
            for ell in range(1, NP + 1):
                total += root.q_pow(-ell * two_sz) * (z * q ** (2 * ell) - 1) ** M \
                    / (ladder[ell] * ladder[ell - 1])
            rhs = root.q_pow(NP * M) * q0 * ladder[0] * total
            res = float(np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs) + np.abs(rhs))))
            report.record({"z": z, "two_sz": two_sz}, res,
                          {"eigen_index": int(np.argmax(np.abs(lhs - rhs)))})


def _coefficient_operators(root, M, s, radius, guard):
    """Operator coefficients of the z-expansion of Q(z;s), by z-sampling."""
    zs = radius * np.exp(2j * np.pi * np.arange(M + 1) / (M + 1))
    ops = [aux_matrix(root, z, M, s=s, guard_override=guard) for z in zs]
    Vinv = np.linalg.inv(np.vander(zs, M + 1, increasing=True))
    coeffs = []
    for m in range(M + 1):
        acc = SectorOperator.zero(M)
        for j in range(M + 1):
            acc = acc + Vinv[m, j] * ops[j]
        coeffs.append(acc)
    return coeffs


def _check_coeff(root, M, ps, report, samples, guard):
    q = root.q
    for _ in range(samples):
        s = ps.draw(root, "s")
        ps.advance()
        radius = 0.8 + 0.4 * ps.rng.random()
        here = _coefficient_operators(root, M, s, radius, guard)
        there = _coefficient_operators(root.inverse(), M, 1 / s, radius, guard)
        worst, wit = 0.0, None
        for m in range(M + 1):
            rhs = ((-1) ** M) * there[m].scale_by_sector(
                lambda tsz: root.sz_factor(tsz, -2) * q ** M * s ** ((M + tsz) // 2))
            res, w = rel_residual(here[M - m], rhs)
            if res > worst:
                worst, wit = res, dict(w or {}, coefficient=m)
        expect = SectorOperator.identity(M).scale_by_sector(
            lambda tsz: (-1) ** M * sum(root.q_pow(ell * tsz)
                                        for ell in range(root.N_prime)))
        res, w = rel_residual(here[0], expect)
        if res > worst:
            worst, wit = res, dict(w or {}, coefficient="constant")
        report.record({"s": s}, worst, wit)


def _check_alg(root, M, ps, report, samples, guard):
    q = root.q
    comm = q - 1 / q
    worst, wit = 0.0, None
    for n_spin in range(7):
        rep = eval_rep(root, n_spin)
        qh_inv = np.linalg.inv(rep.qh)
        checks = {
            "ef_commutator": _rel(rep.e @ rep.f - rep.f @ rep.e,
                                  (rep.qh - qh_inv) / comm),
            "cartan_e": _rel(rep.qh @ rep.e @ qh_inv, q ** 2 * rep.e),
            "cartan_f": _rel(rep.qh @ rep.f @ qh_inv, q ** -2 * rep.f),
            "half_square": _rel(rep.qh_half @ rep.qh_half, rep.qh),
        }
        for tag, res in checks.items():
            if res > worst:
                worst, wit = res, {"n_spin": n_spin, "relation": tag}
    three = q_integer(q, 3)
    for n_spin in range(5):
        rep = eval_rep(root, n_spin)
        for tag, A, B in (("serre_e", rep.e, rep.f), ("serre_f", rep.f, rep.e)):
            lhs = A @ A @ A @ B - three * (A @ A @ B @ A) \
                + three * (A @ B @ A @ A) - B @ A @ A @ A
            res = np.linalg.norm(lhs) / (1 + np.linalg.norm(A) ** 3
                                         * np.linalg.norm(B))
            if res > worst:
                worst, wit = res, {"n_spin": n_spin, "relation": tag}
    report.record({"scope": "evaluation_modules"}, worst, wit)

    cartan = ((2, -2), (-2, 2))
    for _ in range(samples):
        z, r, s = ps.draw(root, "z"), ps.draw(root, "r"), ps.draw(root, "s")
        ps.advance()
        plus = borel_rep(root, "+", z, r, s)
        minus = borel_rep(root, "-", z, r, s)
        hs = {0: plus.qh0, 1: plus.qh1}
        es = {0: plus.e0, 1: plus.e1}
        worst, wit = 0.0, None
        for i in (0, 1):
            hi_inv = np.linalg.inv(hs[i])
            for j in (0, 1):
                res = _rel(hs[i] @ es[j] @ hi_inv,
                           root.q_pow(cartan[i][j]) * es[j])
                if res > worst:
                    worst, wit = res, {"relation": f"borel_cartan_{i}{j}"}
        swap = max(np.max(np.abs(minus.e0 - plus.e1)),
                   np.max(np.abs(minus.e1 - plus.e0)),
                   np.max(np.abs(minus.qh0 - plus.qh1)),
                   np.max(np.abs(minus.qh1 - plus.qh0)))
        if swap > worst:
            worst, wit = float(swap), {"relation": "sign_swap"}
        report.record({"z": z, "r": r, "s": s}, worst, wit)


_DISPATCH = {
    "FUS": _check_fus,
    "TCOMM": _check_tcomm,
    "QSYM": _check_qsym,
    "QCOMM": _check_qcomm,
    "RQ": _check_rq,
    "QCT": _check_qct,
    "TTRANS": _check_ttrans,
    "TQ0": _check_tq0,
    "TQPM": _check_tqpm,
    "FUNC": _check_func,
    "SUMQP": _check_sumqp,
    "COEFF": _check_coeff,
    "ALG": _check_alg,
}


def check_identity(identity_id, root, M, params=None, samples=5, seed=0,
                   tol=1e-8, guard_override=False):
    """Evaluate one identity and return its report.

    params, if given, is a list of dicts of named complex points (keys
    from {"z", "w", "s", "t", "r"} as used by the particular identity);
    missing entries fall back to seeded draws.  Without params, all
    points come from a generator seeded deterministically in
    (identity_id, N, n, M, seed).
    """
    identity_id = identity_id.upper()
    if identity_id not in _DISPATCH:
        raise ValueError(f"unknown identity id {identity_id!r}; "
                         f"known: {', '.join(IDENTITY_IDS)}")
    rng = seeded_rng(seed, identity_id, root.N, root.n, M)
    ps = ParamStream(rng, explicit=params)
    report = IdentityReport(identity_id=identity_id, N=root.N, n=root.n,
                            M=M, tol=tol)
    count = len(params) if params else samples
    _DISPATCH[identity_id](root, M, ps, report, count, guard_override)
    return report.finalize()


# ---------------------------------------------------------------------------
# fusion eigenvalues from the two distinguished solutions


def fusion_from_Q(method, root, M, n, z_samples, family, seed=0,
                  guard_override=False, max_resample=8):
    """Rebuild fusion eigenvalues from the s->0 auxiliary solutions.

    method "WRONSKI": the bilinear two-solution formula (even root
    order, odd M), with both solutions renormalized by their values at
    z = 0.  method "SPEC": the telescoping sum in a single solution,
    evaluated for both spin-reversal partners.  Each result is compared
    per eigenvector with the directly constructed fusion operator in
    the joint eigenbasis `family`.
    """
    method = method.upper()
    if method not in ("WRONSKI", "SPEC"):
        raise ValueError("method must be WRONSKI or SPEC")
    q = root.q
    w = family.weight
    two_sz = family.two_sz
    report = IdentityReport(identity_id=method, N=root.N, n=root.n, M=M,
                            tol=1e-7)
    if method == "WRONSKI" and (root.N % 2 or M % 2 == 0):
        report.status = "skipped"
        report.notes = "requires even root order and odd M"
        return report

    rng = seeded_rng(seed, "fusionfromq" + method, root.N, root.n, M, n)

    def labels_at(z, sign):
        op = aux_matrix(root, z, M, sign=sign, s_zero_limit=True,
                        guard_override=guard_override)
        return family.label(op.blocks[w])

    for z0 in z_samples:
        z = complex(z0)
        for _attempt in range(max_resample):
            if method == "WRONSKI":
                qp0, qm0 = labels_at(0.0, "+"), labels_at(0.0, "-")
                vals = {
                    "p0": labels_at(z, "+") / qp0,
                    "pn": labels_at(z * q ** (2 * n), "+") / qp0,
                    "m0": labels_at(z, "-") / qm0,
                    "mn": labels_at(z * q ** (2 * n), "-") / qm0,
                }
                ok = min(np.min(np.abs(qp0)), np.min(np.abs(qm0))) > 1e-12
            else:
                ladders = {}
                ok = True
                for sign in ("+", "-"):
                    ladders[sign] = [labels_at(z * q ** (2 * ell), sign)
                                     for ell in range(n + 1)]
                    ok = ok and min(np.min(np.abs(v))
                                    for v in ladders[sign]) > 1e-10
            if ok:
                break
            z = annulus_sample(rng, root)
        else:
            raise SingularSampleError(
                f"no sample with nonvanishing eigenvalues for {method} "
                f"at N={root.N}, M={M}, two_sz={two_sz}")

        direct = family.label(fusion_matrix(root, n, z, M,
                                            guard_override).blocks[w])
        if method == "WRONSKI":
            denom = root.sz_factor(two_sz, 1) - root.sz_factor(two_sz, -1)
            formula = -(root.sz_factor(two_sz, n) * vals["pn"] * vals["m0"]
                        - root.sz_factor(two_sz, -n) * vals["p0"] * vals["mn"]) / denom
            res = float(np.max(np.abs(formula - direct)
                               / (1 + np.abs(formula) + np.abs(direct))))
            report.record({"z": z, "degree": n, "two_sz": two_sz}, res,
                          {"eigen_index": int(np.argmax(np.abs(formula - direct)))})
        else:
            worst, wit = 0.0, None
            for sign, pm in (("+", 1), ("-", -1)):
                lad = ladders[sign]
                total = np.zeros_like(direct)
                for ell in range(1, n + 1):
                    total += root.q_pow(-pm * ell * two_sz) \
                        * (z * q ** (2 * ell) - 1) ** M / (lad[ell] * lad[ell - 1])
                formula = root.sz_factor(two_sz, pm * (n + 1)) \
                    * lad[0] * lad[n] * total
                res = float(np.max(np.abs(formula - direct)
                                   / (1 + np.abs(formula) + np.abs(direct))))
                if res > worst:
                    worst = res
                    wit = {"sign": sign,
                           "eigen_index": int(np.argmax(np.abs(formula - direct)))}
            report.record({"z": z, "degree": n, "two_sz": two_sz}, worst, wit)
    return report.finalize()
