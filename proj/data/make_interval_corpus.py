"""Regenerates interval_corpus.csv: random polynomials of degree k+1 on [-1,1]
whose k-th derivative keeps one sign, with eta = 0.9 min |f^(k)|."""
import math

import numpy as np

rng = np.random.default_rng(20260101)
rows = []
for k in (1, 2, 3):
    kept = 0
    while kept < 100:
        c = np.zeros(5)
        c[: k + 2] = rng.uniform(-1.0, 1.0, k + 2)
        # f^(k)(x) = k! c_k + (k+1)! c_{k+1} x is linear
        lo = math.factorial(k) * c[k] - math.factorial(k + 1) * c[k + 1]
        hi = math.factorial(k) * c[k] + math.factorial(k + 1) * c[k + 1]
        if lo * hi <= 0.0:
            continue
        eta = 0.9 * min(abs(lo), abs(hi))
        if eta < 0.05:
            continue
        eps = 10.0 ** rng.uniform(-4.0, -1.0)
        rows.append((k, eta, eps, *c))
        kept += 1

with open("interval_corpus.csv", "w") as out:
    out.write("k,eta,eps,c0,c1,c2,c3,c4\n")
    for r in rows:
        out.write(f"{r[0]}," + ",".join(f"{v:.17g}" for v in r[1:]) + "\n")
