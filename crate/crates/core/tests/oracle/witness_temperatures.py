"""Independent reference values for the tetramer witness temperatures.

Dense numpy diagonalization of the full 16x16 Hamiltonian, thermal averages
from the eigenbasis, partial traces by reshaping and concurrence from the
non-Hermitian product rho * rho_tilde. Roots by scipy's brentq.

    python3 witness_temperatures.py
"""
import numpy as np
from scipy.optimize import brentq

sx = np.array([[0, 1], [1, 0]]) / 2
sy = np.array([[0, -1j], [1j, 0]]) / 2
sz = np.array([[1, 0], [0, -1]]) / 2


def op(o, site, n=4):
    mats = [np.eye(2)] * n
    mats[site] = o
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


S = [[op(o, i) for o in (sx, sy, sz)] for i in range(4)]


def dot(i, j):
    return sum(S[i][a] @ S[j][a] for a in range(3))


def tetramer(alpha, j):
    return j * (dot(0, 1) + alpha * dot(1, 2) + dot(2, 3))


def thermal(h, t):
    w, v = np.linalg.eigh(h)
    p = np.exp(-(w - w[0]) / t)
    p /= p.sum()
    return (v * p) @ v.conj().T


def pair(rho, k, l):
    r = rho.reshape([2] * 8)
    keep = [k, l]
    gone = [s for s in range(4) if s not in keep]
    for s in sorted(gone, reverse=True):
        r = np.trace(r, axis1=s, axis2=s + r.ndim // 2)
    return r.reshape(4, 4)


YY = np.kron(2 * sy, 2 * sy)


def raw_concurrence(r):
    lam = np.sqrt(np.abs(np.linalg.eigvals(r @ YY @ r.conj() @ YY).real))
    lam = np.sort(lam)[::-1]
    return lam[0] - lam[1] - lam[2] - lam[3]


def t_c(alpha, j, k, l):
    h = tetramer(alpha, j)
    ts = np.geomspace(1e-3 * j, 10 * j, 2000)
    vals = [raw_concurrence(pair(thermal(h, t), k, l)) for t in ts]
    pos = [i for i, v in enumerate(vals) if v > 0]
    if not pos:
        return None
    i = pos[-1]
    return brentq(lambda t: raw_concurrence(pair(thermal(h, t), k, l)), ts[i], ts[i + 1], xtol=1e-12)


def t_chi(alpha, j):
    h = tetramer(alpha, j)
    s2 = sum((sum(S[i][a] for i in range(4))) @ (sum(S[i][a] for i in range(4))) for a in range(3))
    return brentq(lambda t: np.trace(thermal(h, t) @ s2).real - 2.0, 1e-2 * j, 10 * j, xtol=1e-12)


def t_e(alpha, j):
    h = tetramer(alpha, j)
    e_sep = -(2 + alpha) * j / 4
    return brentq(lambda t: np.trace(thermal(h, t) @ h).real - e_sep, 1e-2 * j, 10 * j, xtol=1e-12)


if __name__ == "__main__":
    j = 92.7
    for alpha in (0.2, 0.4, 0.7, 1.0, 1.5, 2.0):
        print(alpha, t_e(alpha, j), t_chi(alpha, j), t_c(alpha, j, 0, 1), t_c(alpha, j, 1, 2))
