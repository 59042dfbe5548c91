"""
Choosing the number of topics
=============================

Splits a corpus, trains one model per candidate K on the train part,
and scores each on the held-out part with the left-to-right estimator.
The winner is the K with the best per-token held-out log-likelihood.
"""

import numpy as np

from negtopics.corpus import WordDocument
from negtopics.lda import Hyperparams, generate_corpus
from negtopics.model_selection import EvalConfig, SplitSpec, select_k
from negtopics.pipeline import _block_phi

K_TRUE, V = 5, 50
token_docs, _ = generate_corpus(_block_phi(K_TRUE, V), alpha=0.3,
                                doc_count=1200, mean_len=10.0, seed=21)
names = [f"w{i:02d}" for i in range(V)]
docs = [WordDocument(f"d{i}", tuple(names[t] for t in toks))
        for i, toks in enumerate(token_docs)]

hyper = Hyperparams(k=2, alpha_sum=5.0, beta=0.01, iterations=200, seed=3)
best, curve = select_k(
    docs,
    k_grid=[2, 5, 10],
    hyper_template=hyper,
    split_spec=SplitSpec(train_fraction=0.8, seed=4),
    eval_config=EvalConfig(particles=10, seed=5),
    min_count=1,
)

print(f"{'K':>4} {'heldout_ll':>14} {'per_token_ll':>14}")
for r in curve:
    print(f"{r.k:>4} {r.heldout_ll:>14.2f} {r.per_token_ll:>14.5f}")
print(f"\nselected K = {best} (generating K was {K_TRUE})")
print(f"test tokens scored: {curve[0].test_tokens}, "
      f"out-of-vocabulary dropped: {curve[0].oov_dropped}")
