"""Quadratic Wronskian system and Bethe-equation certification.

For an odd number of columns M the bilinear relation between the two
distinguished auxiliary solutions turns, coefficient by coefficient,
into M quadratic equations

    binom(M, m) = sum_k  [2 Sz - 2m + 4k]-type weight  *  e_k^+ e_{m-k}^-

for the elementary symmetric polynomials e_k^{+-} of the (q^-1-scaled)
zeroes of the two solutions.  This module forms that system, solves it
with damped Newton iterations from random restarts, rebuilds the zeroes
from any solution, converts them to Bethe parameters through the
trigonometric substitution, and evaluates the Bethe-equation residuals
above and below the equator.
"""

from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from .errors import BranchError
from .identities import seeded_rng
from .vertex import weight_from_sz


@dataclass
class BetheSolution:
    """One solution of the quadratic system in a fixed spin sector.

    e_plus has length M/2 - Sz + 1 with e_plus[0] = 1 (same for
    e_minus with M/2 + Sz); k arrays and the Bethe residual are filled
    by bethe_certify.
    """

    M: int
    two_sz: int
    e_plus: np.ndarray
    e_minus: np.ndarray
    residual_wronskian: float
    k_plus: np.ndarray | None = None
    k_minus: np.ndarray | None = None
    residual_bae: float | None = None
    source: str = "newton"

    @property
    def sz(self):
        return 0.5 * self.two_sz

    def key(self):
        """Canonical sort/dedup key."""
        flat = np.concatenate([self.e_plus[1:], self.e_minus[1:]])
        return tuple(np.round(flat.view(float), 8))

    def to_dict(self):
        out = {
            "M": self.M, "two_sz": self.two_sz, "sz": self.sz,
            "e_plus": list(self.e_plus), "e_minus": list(self.e_minus),
            "residual_wronskian": self.residual_wronskian,
            "source": self.source,
        }
        if self.k_plus is not None:
            out["k_plus"] = list(self.k_plus)
            out["k_minus"] = list(self.k_minus)
            out["residual_bae"] = self.residual_bae
        return out


def elementary_symmetric(zeroes, q):
    """e_k of the inputs scaled by q^-1, k = 0..len (product recurrence)."""
    e = np.zeros(len(zeroes) + 1, dtype=complex)
    e[0] = 1.0
    for n, x in enumerate(zeroes, start=1):
        xq = complex(x) / q
        e[1:n + 1] = e[1:n + 1] + xq * e[0:n]
    return e


def _weight_table(root, M, two_sz):
    """c[m][k] = (q^{Sz-m+2k} - q^{-Sz+m-2k}) / (q^{Sz} - q^{-Sz})."""
    denom = root.sz_factor(two_sz, 1) - root.sz_factor(two_sz, -1)
    if abs(denom) < 1e-13:
        raise ZeroDivisionError(
            "spin prefactor q^{Sz} - q^{-Sz} vanishes; the quadratic "
            "system is only defined for half-odd Sz at even root order")
    table = []
    for m in range(M + 1):
        row = [(root.half_pow(two_sz - 2 * m + 4 * k)
                - root.half_pow(-(two_sz - 2 * m + 4 * k))) / denom
               for k in range(m + 1)]
        table.append(np.array(row, dtype=complex))
    return table


def wronskian_residual(e_plus, e_minus, sz, M, root):
    """max_m |binom(M,m) - quadratic form| over m = 0..M."""
    two_sz = int(round(2 * float(sz)))
    e_plus = np.asarray(e_plus, dtype=complex)
    e_minus = np.asarray(e_minus, dtype=complex)
    table = _weight_table(root, M, two_sz)

    def ep(k):
        return e_plus[k] if 0 <= k < len(e_plus) else 0.0

    def em(k):
        return e_minus[k] if 0 <= k < len(e_minus) else 0.0

    worst = 0.0
    for m in range(M + 1):
        acc = sum(table[m][k] * ep(k) * em(m - k) for k in range(m + 1))
        worst = max(worst, abs(acc - comb(M, m)))
    return float(worst)


def _system(root, M, two_sz):
    """Residual vector and Jacobian of the quadratic system.

    Unknowns x = (e^+_1..e^+_{n_plus}, e^-_1..e^-_{n_minus}).
    """
    n_plus = (M - two_sz) // 2
    n_minus = M - n_plus
    table = _weight_table(root, M, two_sz)

    def unpack(x):
        ep = np.concatenate([[1.0 + 0j], x[:n_plus]])
        em = np.concatenate([[1.0 + 0j], x[n_plus:]])
        return ep, em

    def F(x):
        ep, em = unpack(x)
        out = np.empty(M, dtype=complex)
        for m in range(1, M + 1):
            acc = 0.0 + 0.0j
            for k in range(m + 1):
                if k <= n_plus and m - k <= n_minus:
                    acc += table[m][k] * ep[k] * em[m - k]
            out[m - 1] = acc - comb(M, m)
        return out

    def J(x):
        ep, em = unpack(x)
        out = np.zeros((M, M), dtype=complex)
        for m in range(1, M + 1):
            for j in range(1, n_plus + 1):
                if 0 <= m - j <= n_minus:
                    out[m - 1, j - 1] = table[m][j] * em[m - j]
            for j in range(1, n_minus + 1):
                if 0 <= m - j <= n_plus:
                    out[m - 1, n_plus + j - 1] = table[m][m - j] * ep[m - j]
        return out

    return F, J, n_plus, n_minus, unpack


def _newton(F, J, x0, tol, max_iter=60):
    x = x0.copy()
    fx = F(x)
    norm = np.linalg.norm(fx)
    for _ in range(max_iter):
        if norm < tol:
            return x, norm
        try:
            step = np.linalg.solve(J(x), -fx)
        except np.linalg.LinAlgError:
            return x, np.inf
        lam = 1.0
        for _bt in range(40):
            cand = x + lam * step
            fc = F(cand)
            nc = np.linalg.norm(fc)
            if nc < (1 - 0.25 * lam) * norm:
                x, fx, norm = cand, fc, nc
                break
            lam *= 0.5
        else:
            return x, norm
    return x, norm


def solve_wronskian_system(root, M, sz, restarts=200, seed=0, tol=1e-9,
                           extra_starts=None):
    """Newton-with-restarts solver for the quadratic system in one sector.

    Returns deduplicated solutions sorted canonically; an empty list
    (with no exception) when nothing converges.  extra_starts may carry
    known starting vectors, e.g. from spectrum-derived zero sets.
    """
    if M % 2 == 0:
        raise ValueError("the quadratic system requires odd M")
    two_sz = int(round(2 * float(sz)))
    F, J, n_plus, n_minus, unpack = _system(root, M, two_sz)
    rng = seeded_rng(seed, "wronskisolver", root.N, root.n, M, two_sz)
    radius = comb(M, (M + 1) // 2)
    starts = []
    if extra_starts:
        starts.extend(np.asarray(s, dtype=complex) for s in extra_starts)
    for _ in range(restarts):
        starts.append(radius * np.sqrt(rng.random(M))
                      * np.exp(2j * np.pi * rng.random(M)))
    found = {}
    for x0 in starts:
        x, norm = _newton(F, J, x0, tol)
        if norm >= tol:
            continue
        ep, em = unpack(x)
        sol = BetheSolution(M=M, two_sz=two_sz, e_plus=ep, e_minus=em,
                            residual_wronskian=float(np.max(np.abs(F(x)))))
        key = sol.key()
        dup = False
        for other in found:
            if max(abs(a - b) for a, b in zip(key, other)) < 1e-8:
                dup = True
                break
        if not dup:
            found[key] = sol
    return [found[k] for k in sorted(found)]


def solution_from_zeroes(root, M, sz, zeroes_plus, zeroes_minus):
    """Build a solution record from explicit zero sets (spectrum oracle)."""
    two_sz = int(round(2 * float(sz)))
    ep = elementary_symmetric(zeroes_plus, root.q)
    em = elementary_symmetric(zeroes_minus, root.q)
    res = wronskian_residual(ep, em, sz, M, root)
    return BetheSolution(M=M, two_sz=two_sz, e_plus=ep, e_minus=em,
                         residual_wronskian=res, source="spectra")


def _roots_from_elementary(e):
    """Zeroes y_i with elementary symmetric values e_k (so e_k = e_k(y))."""
    n = len(e) - 1
    if n == 0:
        return np.array([], dtype=complex)
    coeffs = np.array([(-1) ** k * e[k] for k in range(n + 1)], dtype=complex)
    # coeffs are for y^{n-k}; polyroots wants ascending order
    return np.polynomial.polynomial.polyroots(coeffs[::-1])


def bethe_certify(solution, root, M, pole_tol=1e-10):
    """Fill Bethe parameters and the Bethe-equation residual.

    The scaled zeroes y = x q^-1 are recovered from the elementary
    symmetric values; each converts to u = e^{i pi k} by the Moebius map
    u = (y q - 1)/(y - q), with k the principal logarithm (branch index
    recorded implicitly: only u enters the equations).  The residual is

        max_i | u_i^M prod_j B_ij - (-1)^{n-1} prod_j B_ji |,
        B_ij = 1 - (q + q^-1) u_j + u_i u_j,

    evaluated separately above and below the equator.
    """
    q = root.q
    cos2 = q + 1 / q  # 2 cos(2 pi n / N), real up to rounding
    out = {}
    worst = 0.0
    for tag, e in (("plus", solution.e_plus), ("minus", solution.e_minus)):
        ys = _roots_from_elementary(np.asarray(e, dtype=complex))
        us = np.empty(len(ys), dtype=complex)
        ks = np.empty(len(ys), dtype=complex)
        for i, y in enumerate(ys):
            if abs(y - q) < pole_tol:
                raise BranchError(
                    f"zero {y} sits at the Moebius pole (x q^-1 = q)")
            u = (y * q - 1) / (y - q)
            if abs(u) < pole_tol:
                raise BranchError(
                    f"zero {y} maps to u = 0; Bethe parameter diverges")
            us[i] = u
            ks[i] = np.log(u) / (1j * np.pi)
        n = len(us)
        for i in range(n):
            B_i_dot = np.prod(1 - cos2 * us + us[i] * us)
            B_dot_i = np.prod(1 - cos2 * us[i] + us * us[i])
            res = abs(us[i] ** M * B_i_dot - (-1) ** (n - 1) * B_dot_i)
            worst = max(worst, float(res))
        out[tag] = ks
    return replace(solution, k_plus=out["plus"], k_minus=out["minus"],
                   residual_bae=worst)


def sector_bethe(root, M, sz, restarts=200, seed=0, tol=1e-9,
                 oracle_zero_sets=None):
    """Solve and certify one sector; optionally merge oracle solutions."""
    extra = []
    oracle = []
    if oracle_zero_sets:
        for zp, zm in oracle_zero_sets:
            sol = solution_from_zeroes(root, M, sz, zp, zm)
            oracle.append(sol)
            extra.append(np.concatenate([sol.e_plus[1:], sol.e_minus[1:]]))
    solutions = solve_wronskian_system(root, M, sz, restarts=restarts,
                                       seed=seed, tol=tol, extra_starts=extra)
    certified = [bethe_certify(s, root, M) for s in solutions]
    return certified, [bethe_certify(s, root, M) for s in oracle]
