#!/usr/bin/env python3
"""Generate the bundled molecular-integral fixtures (FCIDUMP + sidecars).

Computes STO-3G RHF orbitals and MO-basis integrals for H2 (R = 1.4011 a0,
the experimental equilibrium bond length) and LiH (R = 3.0802 a0 = 1.63 A,
Li at the origin, H on +z) with a McMurchie-Davidson Gaussian integral
scheme, then writes, per molecule:

    <name>.fcidump     core energy, h_pq, (pq|rs) in chemists' notation
    <name>.dipole.<a>  electronic dipole integrals (-r) per axis + nuclear term
    <name>.orben       canonical RHF orbital energies

Run with --check to also diagonalize the FCI problem in the Sz = 0
determinant space and print the spectroscopic quantities the fixtures are
expected to reproduce.
"""

import argparse
import itertools
import math
import os

import numpy as np
from scipy.special import hyp1f1

# ---------------------------------------------------------------------------
# STO-3G basis data (Hehre/Stewart/Pople parametrization, as distributed by
# the Basis Set Exchange).

STO3G = {
    "H": [
        ("S", [3.42525091, 0.62391373, 0.16885540],
              [0.15432897, 0.53532814, 0.44463454]),
    ],
    "Li": [
        ("S", [16.1195750, 2.9362007, 0.7946505],
              [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [0.6362897, 0.1478601, 0.0480887],
               [-0.09996723, 0.39951283, 0.70011547],
               [0.15591627, 0.60768372, 0.39195739]),
    ],
}

CHARGES = {"H": 1.0, "Li": 3.0}


class Primitive:
    __slots__ = ("exp", "coef", "center", "lmn")

    def __init__(self, exp, coef, center, lmn):
        self.exp = exp
        self.coef = coef
        self.center = np.asarray(center, dtype=float)
        self.lmn = lmn


def primitive_norm(alpha, lmn):
    l, m, n = lmn
    num = (2.0 * alpha / math.pi) ** 0.75 * (4.0 * alpha) ** ((l + m + n) / 2.0)
    den = math.sqrt(
        math.factorial(2 * l) * math.factorial(2 * m) * math.factorial(2 * n)
        / (math.factorial(l) ** 2 * math.factorial(m) ** 2 * math.factorial(n) ** 2)
        / 4.0 ** (l + m + n)
    )
    # double factorial form: norm = (2a/pi)^(3/4) (4a)^(L/2) / sqrt((2l-1)!!(2m-1)!!(2n-1)!!)
    def dfact(k):
        r = 1
        while k > 1:
            r *= k
            k -= 2
        return r
    den = math.sqrt(dfact(2 * l - 1) * dfact(2 * m - 1) * dfact(2 * n - 1))
    return num / den


def build_basis(atoms):
    """atoms: list of (symbol, xyz). Returns list of contracted functions,
    each a list of Primitives (with primitive norms folded into coef)."""
    basis = []
    for sym, xyz in atoms:
        for shell in STO3G[sym]:
            if shell[0] == "S":
                _, exps, coefs = shell
                prims = [Primitive(a, c * primitive_norm(a, (0, 0, 0)), xyz, (0, 0, 0))
                         for a, c in zip(exps, coefs)]
                basis.append(prims)
            elif shell[0] == "SP":
                _, exps, s_coefs, p_coefs = shell
                prims = [Primitive(a, c * primitive_norm(a, (0, 0, 0)), xyz, (0, 0, 0))
                         for a, c in zip(exps, s_coefs)]
                basis.append(prims)
                for lmn in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
                    prims = [Primitive(a, c * primitive_norm(a, lmn), xyz, lmn)
                             for a, c in zip(exps, p_coefs)]
                    basis.append(prims)
    return basis


# ---------------------------------------------------------------------------
# McMurchie-Davidson integrals.

def hermite_E(i, j, t, Qx, a, b):
    """Hermite expansion coefficient E_t^{ij} for one Cartesian direction."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return (hermite_E(i - 1, j, t - 1, Qx, a, b) / (2 * p)
                - q * Qx / a * hermite_E(i - 1, j, t, Qx, a, b)
                + (t + 1) * hermite_E(i - 1, j, t + 1, Qx, a, b))
    return (hermite_E(i, j - 1, t - 1, Qx, a, b) / (2 * p)
            + q * Qx / b * hermite_E(i, j - 1, t, Qx, a, b)
            + (t + 1) * hermite_E(i, j - 1, t + 1, Qx, a, b))


def overlap_prim(a, lmn1, A, b, lmn2, B):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    S1 = hermite_E(l1, l2, 0, A[0] - B[0], a, b)
    S2 = hermite_E(m1, m2, 0, A[1] - B[1], a, b)
    S3 = hermite_E(n1, n2, 0, A[2] - B[2], a, b)
    return S1 * S2 * S3 * (math.pi / p) ** 1.5


def kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(a, lmn1, A, b, lmn2, B)
    term1 = -2 * b * b * (
        overlap_prim(a, lmn1, A, b, (l2 + 2, m2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2 + 2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2, n2 + 2), B))
    term2 = -0.5 * (
        l2 * (l2 - 1) * overlap_prim(a, lmn1, A, b, (l2 - 2, m2, n2), B)
        + m2 * (m2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2 - 2, n2), B)
        + n2 * (n2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2, n2 - 2), B))
    return term0 + term1 + term2


def boys(n, T):
    return hyp1f1(n + 0.5, n + 1.5, -T) / (2.0 * n + 1.0)


def hermite_R(t, u, v, n, p, PCx, PCy, PCz, RPC):
    """Hermite Coulomb auxiliary integrals R^n_{tuv}."""
    T = p * RPC * RPC
    val = 0.0
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, T)
    if t == u == 0:
        if v > 1:
            val += (v - 1) * hermite_R(t, u, v - 2, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCz * hermite_R(t, u, v - 1, n + 1, p, PCx, PCy, PCz, RPC)
        return val
    if t == 0:
        if u > 1:
            val += (u - 1) * hermite_R(t, u - 2, v, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCy * hermite_R(t, u - 1, v, n + 1, p, PCx, PCy, PCz, RPC)
        return val
    if t > 1:
        val += (t - 1) * hermite_R(t - 2, u, v, n + 1, p, PCx, PCy, PCz, RPC)
    val += PCx * hermite_R(t - 1, u, v, n + 1, p, PCx, PCy, PCz, RPC)
    return val


def nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    RPC = float(np.linalg.norm(P - C))
    val = 0.0
    for t in range(l1 + l2 + 1):
        for u in range(m1 + m2 + 1):
            for v in range(n1 + n2 + 1):
                val += (hermite_E(l1, l2, t, A[0] - B[0], a, b)
                        * hermite_E(m1, m2, u, A[1] - B[1], a, b)
                        * hermite_E(n1, n2, v, A[2] - B[2], a, b)
                        * hermite_R(t, u, v, 0, p,
                                    P[0] - C[0], P[1] - C[1], P[2] - C[2], RPC))
    return 2.0 * math.pi / p * val


def eri_prim(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    Q = (c * np.asarray(C) + d * np.asarray(D)) / q
    RPQ = float(np.linalg.norm(P - Q))
    val = 0.0
    for t in range(l1 + l2 + 1):
        for u in range(m1 + m2 + 1):
            for v in range(n1 + n2 + 1):
                E1 = (hermite_E(l1, l2, t, A[0] - B[0], a, b)
                      * hermite_E(m1, m2, u, A[1] - B[1], a, b)
                      * hermite_E(n1, n2, v, A[2] - B[2], a, b))
                if E1 == 0.0:
                    continue
                for tau in range(l3 + l4 + 1):
                    for nu in range(m3 + m4 + 1):
                        for phi in range(n3 + n4 + 1):
                            E2 = (hermite_E(l3, l4, tau, C[0] - D[0], c, d)
                                  * hermite_E(m3, m4, nu, C[1] - D[1], c, d)
                                  * hermite_E(n3, n4, phi, C[2] - D[2], c, d))
                            if E2 == 0.0:
                                continue
                            val += (E1 * E2 * (-1.0) ** (tau + nu + phi)
                                    * hermite_R(t + tau, u + nu, v + phi, 0, alpha,
                                                P[0] - Q[0], P[1] - Q[1], P[2] - Q[2], RPQ))
    val *= 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    return val


def contracted(fn, bf1, bf2, *rest):
    val = 0.0
    for p1 in bf1:
        for p2 in bf2:
            val += p1.coef * p2.coef * fn(p1, p2, *rest)
    return val


def normalize_contracted(basis):
    for bf in basis:
        s = 0.0
        for p1 in bf:
            for p2 in bf:
                s += p1.coef * p2.coef * overlap_prim(p1.exp, p1.lmn, p1.center,
                                                      p2.exp, p2.lmn, p2.center)
        scale = 1.0 / math.sqrt(s)
        for p in bf:
            p.coef *= scale


def ao_integrals(atoms):
    basis = build_basis(atoms)
    normalize_contracted(basis)
    nb = len(basis)
    S = np.zeros((nb, nb))
    T = np.zeros((nb, nb))
    V = np.zeros((nb, nb))
    D = np.zeros((3, nb, nb))  # <a| r |b> position integrals
    for i in range(nb):
        for j in range(nb):
            S[i, j] = contracted(
                lambda p1, p2: overlap_prim(p1.exp, p1.lmn, p1.center,
                                            p2.exp, p2.lmn, p2.center),
                basis[i], basis[j])
            T[i, j] = contracted(
                lambda p1, p2: kinetic_prim(p1.exp, p1.lmn, p1.center,
                                            p2.exp, p2.lmn, p2.center),
                basis[i], basis[j])
            for sym, xyz in atoms:
                V[i, j] += -CHARGES[sym] * contracted(
                    lambda p1, p2: nuclear_prim(p1.exp, p1.lmn, p1.center,
                                                p2.exp, p2.lmn, p2.center,
                                                np.asarray(xyz)),
                    basis[i], basis[j])
            # dipole via angular momentum raise: x * x_B^j = x_B^{j+1} + Bx x_B^j
            for ax in range(3):
                def dip(p1, p2, ax=ax):
                    lmn_raised = list(p2.lmn)
                    lmn_raised[ax] += 1
                    return (overlap_prim(p1.exp, p1.lmn, p1.center,
                                         p2.exp, tuple(lmn_raised), p2.center)
                            + p2.center[ax] * overlap_prim(p1.exp, p1.lmn, p1.center,
                                                           p2.exp, p2.lmn, p2.center))
                D[ax, i, j] = contracted(dip, basis[i], basis[j])
    eri = np.zeros((nb, nb, nb, nb))
    for i in range(nb):
        for j in range(i + 1):
            for k in range(nb):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    val = 0.0
                    for p1 in basis[i]:
                        for p2 in basis[j]:
                            for p3 in basis[k]:
                                for p4 in basis[l]:
                                    val += (p1.coef * p2.coef * p3.coef * p4.coef
                                            * eri_prim(p1.exp, p1.lmn, p1.center,
                                                       p2.exp, p2.lmn, p2.center,
                                                       p3.exp, p3.lmn, p3.center,
                                                       p4.exp, p4.lmn, p4.center))
                    for (a, b) in ((i, j), (j, i)):
                        for (c, d) in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val
    return S, T, V, D, eri


# ---------------------------------------------------------------------------
# RHF.

def rhf(S, Hcore, eri, nelec, e_nuc, maxiter=200, tol=1e-12):
    nb = S.shape[0]
    nocc = nelec // 2
    w, U = np.linalg.eigh(S)
    X = U @ np.diag(w ** -0.5) @ U.T
    F = Hcore.copy()
    Dm = np.zeros_like(S)
    e_old = 0.0
    for it in range(maxiter):
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        # deterministic orbital phases: largest-|coefficient| entry positive
        for k in range(nb):
            j = int(np.argmax(np.abs(C[:, k])))
            if C[j, k] < 0:
                C[:, k] = -C[:, k]
        Cocc = C[:, :nocc]
        Dm = 2.0 * Cocc @ Cocc.T
        J = np.einsum("pqrs,rs->pq", eri, Dm)
        K = np.einsum("prqs,rs->pq", eri, Dm)
        F = Hcore + J - 0.5 * K
        e_el = 0.5 * np.sum(Dm * (Hcore + F))
        if abs(e_el - e_old) < tol and it > 2:
            break
        e_old = e_el
    return e_el + e_nuc, eps, C


# ---------------------------------------------------------------------------
# FCI oracle in the Sz = 0 determinant space (spin orbital 2p = p-alpha,
# 2p+1 = p-beta; occupation bitmasks; ladder-operator parity signs).

def enumerate_dets(K, N):
    dets = []
    for mask in range(1 << (2 * K)):
        if bin(mask).count("1") != N:
            continue
        na = bin(mask & 0x5555555555555555).count("1")
        if 2 * na == N:
            dets.append(mask)
    return dets


def apply_ladder(mask, ops):
    """ops: list of (index, is_creation) applied right-to-left. Returns
    (sign, mask) or None."""
    sign = 1
    for idx, create in reversed(ops):
        bit = 1 << idx
        occ = mask & bit
        if create:
            if occ:
                return None
            below = bin(mask & (bit - 1)).count("1")
            sign *= (-1) ** below
            mask |= bit
        else:
            if not occ:
                return None
            below = bin(mask & (bit - 1)).count("1")
            sign *= (-1) ** below
            mask &= ~bit
    return sign, mask


def build_op_matrix(terms, dets):
    index = {d: i for i, d in enumerate(dets)}
    n = len(dets)
    M = np.zeros((n, n))
    for coef, ops in terms:
        for j, d in enumerate(dets):
            res = apply_ladder(d, ops)
            if res is None:
                continue
            sign, out = res
            i = index.get(out)
            if i is not None:
                M[i, j] += coef * sign
    return M


def hamiltonian_terms(h_mo, eri_mo):
    K = h_mo.shape[0]
    terms = []
    for p in range(K):
        for q in range(K):
            if abs(h_mo[p, q]) > 1e-14:
                for s in (0, 1):
                    terms.append((h_mo[p, q], [(2 * p + s, True), (2 * q + s, False)]))
    for p in range(K):
        for q in range(K):
            for r in range(K):
                for s_ in range(K):
                    v = eri_mo[p, q, r, s_]
                    if abs(v) > 1e-14:
                        for s1 in (0, 1):
                            for s2 in (0, 1):
                                terms.append((0.5 * v,
                                              [(2 * p + s1, True), (2 * r + s2, True),
                                               (2 * s_ + s2, False), (2 * q + s1, False)]))
    return terms


def s2_terms(K):
    terms = []
    # S- S+ + Sz(Sz+1); Sz diagonal contributions expanded below
    for p in range(K):
        for q in range(K):
            terms.append((1.0, [(2 * p + 1, True), (2 * p, False),
                                (2 * q, True), (2 * q + 1, False)]))
    for p in range(K):
        for s in (0, 1):
            terms.append((0.5 * (1 if s == 0 else -1) * 1.0,
                          [(2 * p + s, True), (2 * p + s, False)]))
    for p in range(K):
        for q in range(K):
            for s1 in (0, 1):
                for s2 in (0, 1):
                    sign = (1 if s1 == 0 else -1) * (1 if s2 == 0 else -1)
                    terms.append((0.25 * sign,
                                  [(2 * p + s1, True), (2 * p + s1, False),
                                   (2 * q + s2, True), (2 * q + s2, False)]))
    return terms


def fci_check(name, K, nelec, e_core, h_mo, eri_mo, dip_mo, nuc_dip, eps):
    dets = enumerate_dets(K, nelec)
    H = build_op_matrix(hamiltonian_terms(h_mo, eri_mo), dets) + e_core * np.eye(len(dets))
    S2 = build_op_matrix(s2_terms(K), dets)
    E, C = np.linalg.eigh(H)
    # rotate degenerate blocks to S2 eigenstates
    i = 0
    while i < len(E):
        j = i
        while j + 1 < len(E) and abs(E[j + 1] - E[i]) < 1e-9:
            j += 1
        if j > i:
            blk = C[:, i:j + 1]
            s2blk = blk.T @ S2 @ blk
            _, R = np.linalg.eigh(s2blk)
            C[:, i:j + 1] = blk @ R
        i = j + 1
    s2 = np.einsum("di,de,ei->i", C, S2, C)
    singlets = [i for i in range(len(E)) if s2[i] < 1e-6]
    mu = [build_op_matrix([(dip_mo[a][p, q], [(2 * p + s, True), (2 * q + s, False)])
                           for p in range(K) for q in range(K) for s in (0, 1)
                           if abs(dip_mo[a][p, q]) > 1e-14], dets)
          + nuc_dip[a] * np.eye(len(dets)) for a in range(3)]
    print(f"--- {name}: dets={len(dets)} singlets={len(singlets)} E0={E[0]:+.6f}")
    print(f"    orbital energies: {np.array2string(eps, precision=4)}")
    s = singlets
    for k in range(min(7, len(s))):
        i = s[k]
        mu0 = [C[:, s[0]] @ mu[a] @ C[:, i] for a in range(3)]
        perm = [C[:, i] @ mu[a] @ C[:, i] for a in range(3)]
        print(f"    S{k}: E-E0={E[i]-E[s[0]]:8.4f}  <S2>={s2[i]:6.3f}  "
              f"mu0k=({mu0[0]:+.3f},{mu0[1]:+.3f},{mu0[2]:+.3f})  "
              f"perm=({perm[0]:+.3f},{perm[1]:+.3f},{perm[2]:+.3f})")


# ---------------------------------------------------------------------------
# File emission.

def write_fcidump(path, K, nelec, e_core, h_mo, eri_mo, thresh=1e-12):
    with open(path, "w") as f:
        f.write(f"&FCI NORB={K},NELEC={nelec},MS2=0,\n")
        f.write("  ORBSYM=" + "1," * K + "\n")
        f.write("  ISYM=1,\n")
        f.write("&END\n")
        for p in range(K):
            for q in range(p + 1):
                for r in range(p + 1):
                    smax = q if r == p else r
                    for s in range(smax + 1):
                        v = eri_mo[p, q, r, s]
                        if abs(v) > thresh:
                            f.write(f"{v:23.16e} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}\n")
        for p in range(K):
            for q in range(p + 1):
                if abs(h_mo[p, q]) > thresh:
                    f.write(f"{h_mo[p, q]:23.16e} {p+1:3d} {q+1:3d}   0   0\n")
        f.write(f"{e_core:23.16e}   0   0   0   0\n")


def write_dipole(path, dmat, nuc, thresh=1e-12):
    with open(path, "w") as f:
        K = dmat.shape[0]
        for p in range(K):
            for q in range(p + 1):
                if abs(dmat[p, q]) > thresh:
                    f.write(f"{dmat[p, q]:23.16e} {p+1:3d} {q+1:3d}\n")
        f.write(f"{nuc:23.16e}   0   0\n")


def write_orben(path, eps):
    with open(path, "w") as f:
        for p, e in enumerate(eps):
            f.write(f"{e:23.16e} {p+1:3d}\n")


def make(name, atoms, nelec, outdir, check):
    S, T, V, D, eri = ao_integrals(atoms)
    e_nuc = 0.0
    for (s1, x1), (s2, x2) in itertools.combinations(atoms, 2):
        e_nuc += CHARGES[s1] * CHARGES[s2] / np.linalg.norm(np.asarray(x1) - np.asarray(x2))
    Hcore = T + V
    e_hf, eps, C = rhf(S, Hcore, eri, nelec, e_nuc)
    print(f"{name}: E_HF = {e_hf:.8f}")
    h_mo = C.T @ Hcore @ C
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, eri, optimize=True)
    # electronic dipole integrals are -<p|r|q>
    dip_mo = [-(C.T @ D[a] @ C) for a in range(3)]
    nuc_dip = np.zeros(3)
    for sym, xyz in atoms:
        nuc_dip += CHARGES[sym] * np.asarray(xyz)
    K = S.shape[0]
    os.makedirs(outdir, exist_ok=True)
    write_fcidump(os.path.join(outdir, f"{name}.fcidump"), K, nelec, e_nuc, h_mo, eri_mo)
    for a, ax in enumerate("xyz"):
        write_dipole(os.path.join(outdir, f"{name}.dipole.{ax}"), dip_mo[a], nuc_dip[a])
    write_orben(os.path.join(outdir, f"{name}.orben"), eps)
    if check:
        fci_check(name, K, nelec, e_nuc, h_mo, eri_mo, dip_mo, nuc_dip, eps)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="fixtures")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    make("h2_sto3g", [("H", (0.0, 0.0, -0.70055)), ("H", (0.0, 0.0, 0.70055))], 2,
         args.out, args.check)
    make("lih_sto3g", [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 3.0802))], 4,
         args.out, args.check)


if __name__ == "__main__":
    main()
