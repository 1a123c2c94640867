"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: products of primitives are expanded in
Hermite Gaussians (coefficients ``E``), Coulomb-type integrals reduce to
Hermite Coulomb integrals ``R`` built on the Boys function.  The code is
written for arbitrary angular momentum even though STO-3G needs s and p
only; that keeps the recursions testable against closed forms and
finite differences.
"""

from math import pi, sqrt

import numpy as np
from scipy.special import hyp1f1

from .basis import BasisFunction


def boys(m: int, t: float) -> float:
    """F_m(t) = integral_0^1 u^{2m} exp(-t u^2) du."""
    return float(hyp1f1(m + 0.5, m + 1.5, -t)) / (2.0 * m + 1.0)


def hermite_expansion(i: int, j: int, t: int, qx: float, a: float, b: float) -> float:
    """E_t^{ij}: Hermite coefficient for x^i (on A) times x^j (on B).

    ``qx`` is Ax - Bx.  Zero outside 0 <= t <= i + j.
    """
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return float(np.exp(-mu * qx * qx))
    if j == 0:
        # decrement i
        return (
            hermite_expansion(i - 1, j, t - 1, qx, a, b) / (2.0 * p)
            - (mu * qx / a) * hermite_expansion(i - 1, j, t, qx, a, b)
            + (t + 1) * hermite_expansion(i - 1, j, t + 1, qx, a, b)
        )
    return (
        hermite_expansion(i, j - 1, t - 1, qx, a, b) / (2.0 * p)
        + (mu * qx / b) * hermite_expansion(i, j - 1, t, qx, a, b)
        + (t + 1) * hermite_expansion(i, j - 1, t + 1, qx, a, b)
    )


def hermite_coulomb_table(lmax: int, p: float, pc, t_arg: float) -> np.ndarray:
    """R^0_{tuv} for t+u+v <= lmax over the displacement ``pc``."""
    fm = np.array([boys(m, t_arg) for m in range(lmax + 1)])
    size = lmax + 1
    # r[n, t, u, v]; filled by increasing t+u+v, consuming one n order per step
    r = np.zeros((size, size, size, size))
    for n in range(lmax + 1):
        r[n, 0, 0, 0] = (-2.0 * p) ** n * fm[n]
    for total in range(1, lmax + 1):
        for t in range(total + 1):
            for u in range(total - t + 1):
                v = total - t - u
                for n in range(lmax - total + 1):
                    if t > 0:
                        val = pc[0] * r[n + 1, t - 1, u, v]
                        if t > 1:
                            val += (t - 1) * r[n + 1, t - 2, u, v]
                    elif u > 0:
                        val = pc[1] * r[n + 1, t, u - 1, v]
                        if u > 1:
                            val += (u - 1) * r[n + 1, t, u - 2, v]
                    else:
                        val = pc[2] * r[n + 1, t, u, v - 1]
                        if v > 1:
                            val += (v - 1) * r[n + 1, t, u, v - 2]
                    r[n, t, u, v] = val
    return r[0]


def primitive_overlap(a, lmn1, ra, b, lmn2, rb) -> float:
    p = a + b
    out = (pi / p) ** 1.5
    for d in range(3):
        out *= hermite_expansion(lmn1[d], lmn2[d], 0, ra[d] - rb[d], a, b)
    return out


def _overlap_1d(i, j, qx, a, b):
    return hermite_expansion(i, j, 0, qx, a, b) * sqrt(pi / (a + b))


def primitive_kinetic(a, lmn1, ra, b, lmn2, rb) -> float:
    """-1/2 <a|laplacian|b> via overlap ladders in each direction."""

    def t_1d(i, j, qx):
        term = b * (2 * j + 1) * _overlap_1d(i, j, qx, a, b)
        term -= 2.0 * b * b * _overlap_1d(i, j + 2, qx, a, b)
        if j >= 2:
            term -= 0.5 * j * (j - 1) * _overlap_1d(i, j - 2, qx, a, b)
        return term

    q = [ra[d] - rb[d] for d in range(3)]
    s = [_overlap_1d(lmn1[d], lmn2[d], q[d], a, b) for d in range(3)]
    t = [t_1d(lmn1[d], lmn2[d], q[d]) for d in range(3)]
    return t[0] * s[1] * s[2] + s[0] * t[1] * s[2] + s[0] * s[1] * t[2]


def primitive_nuclear(a, lmn1, ra, b, lmn2, rb, rc) -> float:
    """<a| 1/|r - rc| |b> (positive; caller applies the -Z charge)."""
    p = a + b
    rp = [(a * ra[d] + b * rb[d]) / p for d in range(3)]
    pc = [rp[d] - rc[d] for d in range(3)]
    lmax = sum(lmn1) + sum(lmn2)
    r_table = hermite_coulomb_table(lmax, p, pc, p * sum(c * c for c in pc))
    e = [
        [
            hermite_expansion(lmn1[d], lmn2[d], t, ra[d] - rb[d], a, b)
            for t in range(lmn1[d] + lmn2[d] + 1)
        ]
        for d in range(3)
    ]
    total = 0.0
    for t, et in enumerate(e[0]):
        for u, eu in enumerate(e[1]):
            for v, ev in enumerate(e[2]):
                total += et * eu * ev * r_table[t, u, v]
    return 2.0 * pi / p * total


def primitive_eri(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd) -> float:
    """Chemist-notation (ab|cd) over primitives."""
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = [(a * ra[i] + b * rb[i]) / p for i in range(3)]
    rq = [(c * rc[i] + d * rd[i]) / q for i in range(3)]
    pq = [rp[i] - rq[i] for i in range(3)]
    l1 = [lmn1[i] + lmn2[i] for i in range(3)]
    l2 = [lmn3[i] + lmn4[i] for i in range(3)]
    lmax = sum(l1) + sum(l2)
    r_table = hermite_coulomb_table(
        lmax, alpha, pq, alpha * sum(x * x for x in pq)
    )
    e_bra = [
        [
            hermite_expansion(lmn1[i], lmn2[i], t, ra[i] - rb[i], a, b)
            for t in range(l1[i] + 1)
        ]
        for i in range(3)
    ]
    e_ket = [
        [
            hermite_expansion(lmn3[i], lmn4[i], t, rc[i] - rd[i], c, d)
            for t in range(l2[i] + 1)
        ]
        for i in range(3)
    ]
    total = 0.0
    for t, et in enumerate(e_bra[0]):
        for u, eu in enumerate(e_bra[1]):
            for v, ev in enumerate(e_bra[2]):
                braw = et * eu * ev
                if braw == 0.0:
                    continue
                for tt, ett in enumerate(e_ket[0]):
                    for uu, euu in enumerate(e_ket[1]):
                        for vv, evv in enumerate(e_ket[2]):
                            ketw = ett * euu * evv
                            if ketw == 0.0:
                                continue
                            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
                            total += (
                                braw * ketw * sign
                                * r_table[t + tt, u + uu, v + vv]
                            )
    return 2.0 * pi ** 2.5 / (p * q * sqrt(p + q)) * total


def _contract2(fn, f1: BasisFunction, f2: BasisFunction, *extra) -> float:
    out = 0.0
    for a, ca in zip(f1.exps, f1.coefs):
        for b, cb in zip(f2.exps, f2.coefs):
            out += ca * cb * fn(a, f1.lmn, f1.center, b, f2.lmn, f2.center, *extra)
    return out


def overlap_matrix(basis) -> np.ndarray:
    n = len(basis)
    s = np.zeros((n, n))
    for p in range(n):
        for q in range(p, n):
            s[p, q] = s[q, p] = _contract2(primitive_overlap, basis[p], basis[q])
    return s


def kinetic_matrix(basis) -> np.ndarray:
    n = len(basis)
    t = np.zeros((n, n))
    for p in range(n):
        for q in range(p, n):
            t[p, q] = t[q, p] = _contract2(primitive_kinetic, basis[p], basis[q])
    return t


def nuclear_matrix(basis, atoms) -> np.ndarray:
    n = len(basis)
    v = np.zeros((n, n))
    for p in range(n):
        for q in range(p, n):
            acc = 0.0
            for z, rc in atoms:
                acc -= z * _contract2(
                    primitive_nuclear, basis[p], basis[q], tuple(rc)
                )
            v[p, q] = v[q, p] = acc
    return v


def eri_tensor(basis) -> np.ndarray:
    """Chemist-notation (pq|rs) with the full 8-fold symmetry filled in."""
    n = len(basis)
    eri = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_max = q if r == p else r
                for s in range(s_max + 1):
                    val = 0.0
                    fp, fq, fr, fs = basis[p], basis[q], basis[r], basis[s]
                    for a, ca in zip(fp.exps, fp.coefs):
                        for b, cb in zip(fq.exps, fq.coefs):
                            for c, cc in zip(fr.exps, fr.coefs):
                                for d, cd in zip(fs.exps, fs.coefs):
                                    val += ca * cb * cc * cd * primitive_eri(
                                        a, fp.lmn, fp.center,
                                        b, fq.lmn, fq.center,
                                        c, fr.lmn, fr.center,
                                        d, fs.lmn, fs.center,
                                    )
                    for i, j in ((p, q), (q, p)):
                        for k, l in ((r, s), (s, r)):
                            eri[i, j, k, l] = val
                            eri[k, l, i, j] = val
    return eri
