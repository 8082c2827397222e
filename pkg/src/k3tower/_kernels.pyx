# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the two exhaustive sweeps.

Signatures and results match ``_pykernels`` exactly; ``kernels`` picks one
at import time.
"""


def quartic_zero_count(const long long[:] pow4, const long long[:] add,
                       const long long[:] fiber, const long long[:] neg,
                       long long q, long long start, long long stop):
    """Count (x0, x1, x2, x3) with x0 in [start, stop) and sum of fourth powers 0.

    The last coordinate is summed through ``fiber[c] = #{x : x^4 = c}``.
    """
    cdef long long a, b, c, s0, s1, s2
    cdef long long total = 0
    with nogil:
        for a in range(start, stop):
            s0 = pow4[a]
            for b in range(q):
                s1 = add[s0 * q + pow4[b]]
                for c in range(q):
                    s2 = add[s1 * q + pow4[c]]
                    total += fiber[neg[s2]]
    return total


def kernel_violations(const long long[:] mat, long long ell, long long n, long long m):
    """Count v in (Z/ell^n)^3 with mat.v = 0 mod ell^m but ell.v != 0 mod ell^n.

    Returns ``(count, first_witness)``; the witness is ``None`` when count is 0.
    """
    cdef long long mod_src = 1, mod_tgt = 1, i
    for i in range(n):
        mod_src *= ell
    for i in range(m):
        mod_tgt *= ell
    cdef long long x, y, z, r0, r1, r2
    cdef long long count = 0
    cdef long long wx = -1, wy = -1, wz = -1
    with nogil:
        for x in range(mod_src):
            for y in range(mod_src):
                for z in range(mod_src):
                    r0 = (mat[0] * x + mat[1] * y + mat[2] * z) % mod_tgt
                    if r0 != 0:
                        continue
                    r1 = (mat[3] * x + mat[4] * y + mat[5] * z) % mod_tgt
                    if r1 != 0:
                        continue
                    r2 = (mat[6] * x + mat[7] * y + mat[8] * z) % mod_tgt
                    if r2 != 0:
                        continue
                    if (ell * x) % mod_src == 0 and (ell * y) % mod_src == 0 and (ell * z) % mod_src == 0:
                        continue
                    if count == 0:
                        wx = x
                        wy = y
                        wz = z
                    count += 1
    if count == 0:
        return 0, None
    return count, (wx, wy, wz)
