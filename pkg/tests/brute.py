"""Brute-force references that share no code path with the package."""

import itertools
import math

import numpy as np


def shells_by_sorting(coords, n):
    d2 = set()
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            dx, dy = coords[a] - coords[b]
            d2.add(int(dx * dx + dy * dy))
    return sorted(d2)[:n]


def pair_list(coords, J, shells):
    """All (i, j, J_ij) with i < j from explicit coordinate distances."""
    out = []
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            dx, dy = coords[a] - coords[b]
            D = int(dx * dx + dy * dy)
            if D in shells:
                m = shells.index(D)
                if m < len(J) and J[m] != 0:
                    out.append((a, b, J[m]))
    return out


def energy(spins, pairs):
    return -sum(w * spins[i] * spins[j] for i, j, w in pairs)


def restricted_states(geom):
    """Every +/-1 assignment with all star parities +1 (feasible for N <= 13)."""
    N = geom.n_qubits
    stars = [list(s) for s in geom.stars]
    for bits in itertools.product((1, -1), repeat=N):
        s = np.array(bits)
        if all(np.prod(s[st]) == 1 for st in stars):
            yield s


def exact(geom, J, beta, string=(), shells=None):
    coords = geom.coords
    shells = shells or [2, 4, 8, 10]
    pairs = pair_list(coords, J, shells)
    col = list(geom.logical_x_columns[0])
    Z = c = S = Sc = E = E2 = 0.0
    n = 0
    for s in restricted_states(geom):
        n += 1
        e = energy(s, pairs)
        w = math.exp(-beta * e)
        cls = np.prod(s[col])
        sv = np.prod(s[list(string)]) if len(string) else 1
        Z += w
        c += w * cls
        S += w * sv
        Sc += w * sv * cls
        E += w * e
        E2 += w * e * e
    E, E2 = E / Z, E2 / Z
    return dict(n=n, c=c / Z, S=S / Z, Sc=Sc / Z, E=E, E2=E2,
                C=beta ** 2 * (E2 - E * E) / geom.n_qubits)


def gf2_rank(M):
    M = (np.array(M, dtype=np.uint8) % 2).copy()
    r = 0
    rows, cols = M.shape
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if M[i, c]:
                piv = i
                break
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
        if r == rows:
            break
    return r
