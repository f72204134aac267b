"""Compiled inner loops shared by the state, sampler and oracle modules."""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def delta_flip(spins, qs, nq, indptr, indices, weights, mark):
    """E(after) - E(before) for negating spins[qs[:nq]]; only boundary pairs count."""
    for k in range(nq):
        mark[qs[k]] = 1
    d = 0.0
    for k in range(nq):
        q = qs[k]
        acc = 0.0
        for t in range(indptr[q], indptr[q + 1]):
            j = indices[t]
            if mark[j] == 0:
                acc += weights[t] * spins[j]
        d += spins[q] * acc
    for k in range(nq):
        mark[qs[k]] = 0
    return 2.0 * d


@njit(cache=True, nogil=True)
def apply_flip(spins, qs, nq):
    for k in range(nq):
        spins[qs[k]] = -spins[qs[k]]


@njit(cache=True, nogil=True)
def string_product(spins, qs, nq):
    s = 1
    for k in range(nq):
        s *= spins[qs[k]]
    return s


@njit(cache=True, nogil=True)
def total_energy(spins, pair_i, pair_j, pair_J):
    e = 0.0
    for k in range(pair_i.shape[0]):
        e -= pair_J[k] * spins[pair_i[k]] * spins[pair_j[k]]
    return e


@njit(cache=True, nogil=True)
def delta_move(spins, k, ptr, a, b, w):
    """Energy change of move ``k`` from its precomputed boundary pairs."""
    d = 0.0
    for t in range(ptr[k], ptr[k + 1]):
        d += w[t] * spins[a[t]] * spins[b[t]]
    return 2.0 * d


@njit(cache=True, nogil=True)
def run_sweeps(spins, scal, plaq, plaq_n, rows, ptr, pa, pb, pw,
               beta, n_sweeps, measure_every, line_attempts, random_order,
               rng, strings, string_n, centre, out_c, out_E, out_S, out_m,
               counts):
    """Run ``n_sweeps`` Metropolis sweeps in place.

    Moves 0..P-1 are plaquettes, P..P+L-1 logical-Z rows; their boundary
    pairs live in (ptr, pa, pb, pw).  scal = [energy, class_label];
    counts = [plaq tried, plaq accepted, line tried, line accepted].  When
    the output arrays are non-empty a measurement is written every
    ``measure_every`` sweeps.
    """
    P = plaq.shape[0]
    L = rows.shape[0]
    energy = scal[0]
    cls = scal[1]
    order = np.arange(P)
    n_str = strings.shape[0]
    record = out_c.shape[0] > 0
    k_meas = 0
    for t in range(n_sweeps):
        if random_order:
            for a in range(P - 1, 0, -1):
                b = rng.integers(0, a + 1)
                tmp = order[a]
                order[a] = order[b]
                order[b] = tmp
        for a in range(P):
            p = order[a]
            qs = plaq[p]
            nq = plaq_n[p]
            dE = delta_move(spins, p, ptr, pa, pb, pw)
            counts[0] += 1
            if dE <= 0.0 or rng.random() < math.exp(-beta * dE):
                apply_flip(spins, qs, nq)
                energy += dE
                counts[1] += 1
        for _ in range(line_attempts):
            r = rng.integers(0, L)
            qs = rows[r]
            dE = delta_move(spins, P + r, ptr, pa, pb, pw)
            counts[2] += 1
            if dE <= 0.0 or rng.random() < math.exp(-beta * dE):
                apply_flip(spins, qs, L)
                energy += dE
                cls = -cls
                counts[3] += 1
        if record and (t + 1) % measure_every == 0:
            out_c[k_meas] = cls
            out_E[k_meas] = energy
            out_m[k_meas] = spins[centre]
            for s in range(n_str):
                out_S[k_meas, s] = string_product(spins, strings[s], string_n[s])
            k_meas += 1
    scal[0] = energy
    scal[1] = cls
    return k_meas


@njit(cache=True, nogil=True)
def gray_enumerate(spins, plaq, plaq_n, rows, indptr, indices, weights,
                   energy0, strings, string_n, centre, out_E, out_c, out_S,
                   out_m, mark):
    """Visit every plaquette subset (Gray-code order) with and without a line flip.

    Starts from the vacuum held in ``spins``; class I states fill the
    first half of the output arrays, class II the second.
    """
    P = plaq.shape[0]
    L = rows.shape[0]
    n = 1 << P
    n_str = strings.shape[0]
    for branch in range(2):
        energy = energy0
        cls = 1
        if branch == 1:
            energy += delta_flip(spins, rows[0], L, indptr, indices, weights, mark)
            apply_flip(spins, rows[0], L)
            cls = -1
        base = branch * n
        for k in range(n):
            if k > 0:
                # bit that changes between gray(k-1) and gray(k)
                p = 0
                while ((k >> p) & 1) == 0:
                    p += 1
                energy += delta_flip(spins, plaq[p], plaq_n[p], indptr, indices,
                                     weights, mark)
                apply_flip(spins, plaq[p], plaq_n[p])
            out_E[base + k] = energy
            out_c[base + k] = cls
            out_m[base + k] = spins[centre]
            for s in range(n_str):
                out_S[base + k, s] = string_product(spins, strings[s], string_n[s])
        # undo: final gray code is 1 << (P-1)
        apply_flip(spins, plaq[P - 1], plaq_n[P - 1])
        if branch == 1:
            apply_flip(spins, rows[0], L)
