"""Independent reference implementations used to check the package.

Everything here is written directly from the model definitions with
stdlib tools (itertools enumeration, math.lgamma), deliberately sharing
no code with the package under test.
"""

from __future__ import annotations

import itertools
import math


def collapsed_joint_log(docs, z_by_doc, k, vocab_size, alpha_k, beta):
    """log p(z, w) with theta and phi integrated out.

    docs is a list of token-id lists, z_by_doc the matching topic
    assignments. Uses the Polya urn form: a product of Dirichlet
    normalizer ratios over documents and over topics.
    """
    total = 0.0
    alpha_sum = alpha_k * k
    for doc, z in zip(docs, z_by_doc):
        n_dk = [0] * k
        for t in z:
            n_dk[t] += 1
        total += math.lgamma(alpha_sum) - math.lgamma(len(doc) + alpha_sum)
        for c in n_dk:
            total += math.lgamma(c + alpha_k) - math.lgamma(alpha_k)
    n_kw = [[0] * vocab_size for _ in range(k)]
    n_k = [0] * k
    for doc, z in zip(docs, z_by_doc):
        for w, t in zip(doc, z):
            n_kw[t][w] += 1
            n_k[t] += 1
    vbeta = vocab_size * beta
    for t in range(k):
        total += math.lgamma(vbeta) - math.lgamma(n_k[t] + vbeta)
        for w in range(vocab_size):
            total += math.lgamma(n_kw[t][w] + beta) - math.lgamma(beta)
    return total


def enumerate_posterior(docs, k, vocab_size, alpha_k, beta):
    """Exact posterior over complete assignments, as {flat tuple: prob}.

    Enumerates all k**N joint assignments of the corpus, so it is only
    usable when k**N is small.
    """
    lengths = [len(d) for d in docs]
    n_tokens = sum(lengths)
    logs = {}
    for flat in itertools.product(range(k), repeat=n_tokens):
        z_by_doc = []
        pos = 0
        for n in lengths:
            z_by_doc.append(list(flat[pos : pos + n]))
            pos += n
        logs[flat] = collapsed_joint_log(docs, z_by_doc, k, vocab_size, alpha_k, beta)
    m = max(logs.values())
    weights = {z: math.exp(v - m) for z, v in logs.items()}
    total = sum(weights.values())
    return {z: w / total for z, w in weights.items()}


def exact_marginal_loglik(doc, phi, alpha_k, alpha_sum):
    """log p(w | phi, alpha) for one document by full enumeration.

    p(w) = sum over assignments z of p(z | alpha) * prod_n phi[z_n, w_n]
    where p(z | alpha) follows the Polya urn: the n-th draw has
    probability (count_so_far + alpha_k) / (n + alpha_sum).
    """
    n_topics = len(phi)
    n = len(doc)
    total = 0.0
    for z in itertools.product(range(n_topics), repeat=n):
        counts = [0] * n_topics
        p = 1.0
        for i, (t, w) in enumerate(zip(z, doc)):
            p *= (counts[t] + alpha_k) / (i + alpha_sum)
            p *= phi[t][w]
            counts[t] += 1
        total += p
    return math.log(total)


def brute_force_score(tokens, pos_terms, neg_terms):
    """(pos, neg) counts by a naive double loop over (token, term).

    Terms ending in '*' match by prefix. Each token adds at most one to
    one counter; negative wins when a token matches both sides, which
    mirrors the check order under test.
    """

    def hits(token, terms):
        for term in terms:
            if term.endswith("*"):
                if token.startswith(term[:-1]):
                    return True
            elif token == term:
                return True
        return False

    pos = 0
    neg = 0
    for tok in tokens:
        if hits(tok, neg_terms):
            neg += 1
        elif hits(tok, pos_terms):
            pos += 1
    return pos, neg


def count_label(top_words, seed_map):
    """Labeling oracle: category names whose hit count exceeds half.

    seed_map maps category -> list of plain stems; a word hits when it
    starts with a stem or contains a stem right after a non-letter
    character. Returns (label_or_None, hits dict).
    """

    def word_hits(word, stem):
        if word.startswith(stem):
            return True
        for i in range(1, len(word) - len(stem) + 1):
            if word[i : i + len(stem)] == stem and not word[i - 1].isalpha():
                return True
        return False

    n = len(top_words)
    hits = {}
    for cat, stems in seed_map.items():
        hits[cat] = sum(1 for w in top_words if any(word_hits(w, s) for s in stems))
    winners = [c for c, h in hits.items() if h * 2 > n]
    return (winners[0] if len(winners) == 1 else None), hits
