#!/usr/bin/env python3
"""Per-patch false-positive rate of the chunk detector on static Bernoulli
patches with an identity feature matrix, as a function of the threshold.
Independent numpy implementation (count-based, ghost-sampled variance).

usage: chunk_threshold.py
"""
import numpy as np

m, q, chunks, trials = 32, 16, 128, 4000
rng = np.random.default_rng(99)
for p in (0.05, 0.3, 0.6, 0.9):
    counts = rng.binomial(m, p, size=(trials, chunks, q)).astype(float)
    for tau in (5.0, 6.0, 7.0, 8.0):
        fired = np.zeros(trials, dtype=int)
        S = counts[:, 0, :].copy(); n = np.ones(trials)
        for c in range(1, chunks):
            phi = counts[:, c, :]
            nn = n[:, None]
            phat = (S + phi + 4) / (m * (nn + 1) + 8)
            cc = np.sqrt(phat * (1 - phat) * (1 / m) * (1 + 1 / nn))
            z = (phi / m - S / (nn * m)) / cc
            ev = np.sqrt((z * z).sum(1)) >= tau
            fired += ev
            S = np.where(ev[:, None], phi, S + phi)
            n = np.where(ev, 1, n + 1)
        print(f"p={p:.2f} tau={tau}: mean false events per patch per {chunks} chunks = {fired.mean():.4f}")
