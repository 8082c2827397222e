"""Pure-Python versions of the exhaustive sweeps in ``_kernels.pyx``."""

from __future__ import annotations


def quartic_zero_count(pow4, add, fiber, neg, q, start, stop):
    total = 0
    pow4 = list(pow4)
    fiber_neg = [fiber[neg[s]] for s in range(q)]
    rows = [list(add[i * q:(i + 1) * q]) for i in range(q)]
    for a in range(start, stop):
        row0 = rows[pow4[a]]
        for b in range(q):
            row1 = rows[row0[pow4[b]]]
            total += sum(fiber_neg[row1[t]] for t in pow4)
    return total


def kernel_violations(mat, ell, n, m):
    mod_src = ell**n
    mod_tgt = ell**m
    a = list(mat)
    count = 0
    witness = None
    rng = range(mod_src)
    for x in rng:
        for y in rng:
            r0 = (a[0] * x + a[1] * y) % mod_tgt
            r1 = (a[3] * x + a[4] * y) % mod_tgt
            r2 = (a[6] * x + a[7] * y) % mod_tgt
            for z in rng:
                if (r0 + a[2] * z) % mod_tgt or (r1 + a[5] * z) % mod_tgt or (r2 + a[8] * z) % mod_tgt:
                    continue
                if not ((ell * x) % mod_src or (ell * y) % mod_src or (ell * z) % mod_src):
                    continue
                if count == 0:
                    witness = (x, y, z)
                count += 1
    return count, witness
