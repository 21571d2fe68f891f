"""Numba kernel for the collapsed Gibbs sampler.

Kept in its own module so importing the package stays fast; the jit
compilation cost is paid on first use and cached on disk afterwards.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def run_gibbs(doc_ids, word_ids, n_docs, n_words, k, alpha, beta, iterations, seed):
    """Run ``iterations`` full Gibbs sweeps over all token assignments.

    Sampling probability for topic t of token (d, w):
        (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + V * beta)

    All randomness (including the initial assignment) comes from the seeded
    generator, so results are bit-identical for a given seed.
    """
    np.random.seed(seed)
    n = doc_ids.shape[0]
    z = np.empty(n, dtype=np.int64)
    ndk = np.zeros((n_docs, k), dtype=np.int64)
    nkw = np.zeros((k, n_words), dtype=np.int64)
    nk = np.zeros(k, dtype=np.int64)
    for i in range(n):
        t = np.random.randint(0, k)
        z[i] = t
        ndk[doc_ids[i], t] += 1
        nkw[t, word_ids[i]] += 1
        nk[t] += 1

    vbeta = n_words * beta
    p = np.empty(k, dtype=np.float64)
    sweep_totals = np.empty(iterations, dtype=np.int64)
    for sweep in range(iterations):
        for i in range(n):
            d = doc_ids[i]
            w = word_ids[i]
            t = z[i]
            ndk[d, t] -= 1
            nkw[t, w] -= 1
            nk[t] -= 1
            cumulative = 0.0
            for kk in range(k):
                cumulative += (ndk[d, kk] + alpha) * (nkw[kk, w] + beta) / (nk[kk] + vbeta)
                p[kk] = cumulative
            u = np.random.random() * cumulative
            t = 0
            while t < k - 1 and p[t] < u:
                t += 1
            z[i] = t
            ndk[d, t] += 1
            nkw[t, w] += 1
            nk[t] += 1
        total = 0
        for kk in range(k):
            total += nk[kk]
        sweep_totals[sweep] = total
    return z, ndk, nkw, nk, sweep_totals
