"""Compiled inner loops for the sampler and the held-out evaluator.

Both kernels consume pre-drawn uniforms instead of owning generator
state, so all randomness stays with numpy's PCG64 streams in the
calling code and results are reproducible bit for bit. Categorical
draws walk the running cumulative sum and pick the first bucket whose
cumulative weight reaches u * total, which matches searchsorted on the
left.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def gibbs_sweep_kernel(words, doc_ids, z, n_dk, n_kw, n_k, alpha_k, beta, uniforms):
    """Resample every token once, in array order. Mutates z and counts."""
    n_topics, vocab_size = n_kw.shape
    vbeta = vocab_size * beta
    cum = np.empty(n_topics, dtype=np.float64)
    for t in range(words.shape[0]):
        w = words[t]
        d = doc_ids[t]
        old = z[t]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1
        total = 0.0
        for k in range(n_topics):
            total += (n_dk[d, k] + alpha_k) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
            cum[k] = total
        target = uniforms[t] * total
        new = 0
        while new < n_topics - 1 and cum[new] < target:
            new += 1
        z[t] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


@njit(cache=True)
def left_to_right_kernel(doc, phi, alpha_k, alpha_sum, particles, uniforms):
    """Sequential held-out log-likelihood of one document.

    For each position n, every particle first resamples its prefix
    assignments from p(z | phi, alpha), then contributes the prior
    predictive probability of word n; finally each particle samples an
    assignment for position n from the posterior given that word.
    Consumes exactly particles * N * (N + 1) / 2 uniforms.
    """
    n_words = doc.shape[0]
    n_topics = phi.shape[0]
    z = np.zeros((particles, n_words), dtype=np.int32)
    n_rk = np.zeros((particles, n_topics), dtype=np.int64)
    cum = np.empty(n_topics, dtype=np.float64)
    total_ll = 0.0
    c = 0
    for n in range(n_words):
        w = doc[n]
        p_n = 0.0
        for r in range(particles):
            for j in range(n):
                wj = doc[j]
                n_rk[r, z[r, j]] -= 1
                total = 0.0
                for k in range(n_topics):
                    total += phi[k, wj] * (n_rk[r, k] + alpha_k)
                    cum[k] = total
                target = uniforms[c] * total
                c += 1
                new = 0
                while new < n_topics - 1 and cum[new] < target:
                    new += 1
                z[r, j] = new
                n_rk[r, new] += 1
            denom = n + alpha_sum
            for k in range(n_topics):
                p_n += (n_rk[r, k] + alpha_k) / denom * phi[k, w]
        p_n /= particles
        total_ll += np.log(p_n)
        for r in range(particles):
            total = 0.0
            for k in range(n_topics):
                total += phi[k, w] * (n_rk[r, k] + alpha_k)
                cum[k] = total
            target = uniforms[c] * total
            c += 1
            new = 0
            while new < n_topics - 1 and cum[new] < target:
                new += 1
            z[r, n] = new
            n_rk[r, new] += 1
    return total_ll
