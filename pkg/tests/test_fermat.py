from collections import Counter
from itertools import product

import numpy as np
import pytest
import sympy as sp

from k3tower.errors import NotOdd, NotPrime, TooLarge
from k3tower.fermat import (
    affine_zero_count,
    build_extension,
    count_quartic,
    fermat_in_good_locus,
    is_irreducible,
    k3_identity_count,
    smallest_irreducible,
    supersingular_certificate,
)


def quadratic_field_fourth_powers(p, nonsquare):
    """F_{p^2} as pairs (a, b) = a + b r with r^2 = nonsquare; returns x^4 for every x."""
    a, b = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    a, b = a.ravel(), b.ravel()
    # (a + b r)^2 = a^2 + n b^2 + 2ab r
    a2, b2 = (a * a + nonsquare * b * b) % p, (2 * a * b) % p
    a4, b4 = (a2 * a2 + nonsquare * b2 * b2) % p, (2 * a2 * b2) % p
    return a4, b4


def brute_affine_zeros(p, nonsquare):
    """Oracle: every q^4 tuple, summed via pairwise sums of fourth powers."""
    a4, b4 = quadratic_field_fourth_powers(p, nonsquare)
    pa = ((a4[:, None] + a4[None, :]) % p).ravel()
    pb = ((b4[:, None] + b4[None, :]) % p).ravel()
    pair = Counter(zip(pa.tolist(), pb.tolist()))
    return sum(c * pair.get(((-x) % p, (-y) % p), 0) for (x, y), c in pair.items())


def naive_count_f9():
    """Literal four-fold loop over F_9 = F_3[i]."""
    elems = [(a, b) for a in range(3) for b in range(3)]

    def mul(u, v):
        return ((u[0] * v[0] - u[1] * v[1]) % 3, (u[0] * v[1] + u[1] * v[0]) % 3)

    def fourth(u):
        s = mul(u, u)
        return mul(s, s)

    f4 = {e: fourth(e) for e in elems}
    zeros = 0
    for t in product(elems, repeat=4):
        s = [sum(f4[e][k] for e in t) % 3 for k in (0, 1)]
        zeros += s == [0, 0]
    return zeros


def test_quartic_count_q9():
    zeros = naive_count_f9()
    assert zeros == brute_affine_zeros(3, 2)
    c = count_quartic(3, 1)
    assert c.affine_nonzero == zeros - 1
    assert c.count == (zeros - 1) // 8 == 280 == k3_identity_count(9, 1)
    assert c.epsilon == 1


def test_quartic_count_q49():
    zeros = brute_affine_zeros(7, 6)  # -1 is a non-square mod 7
    c = count_quartic(7, 1)
    assert c.affine_nonzero == zeros - 1
    assert c.count == 3480 == k3_identity_count(49, 1)


def test_quartic_count_q25_breaks_identity():
    zeros = brute_affine_zeros(5, 2)  # 2 is a non-square mod 5
    c = count_quartic(5, 1)
    assert c.affine_nonzero == zeros - 1
    assert c.count == 1112
    assert c.count != 1251
    assert c.count not in (k3_identity_count(25, 1), k3_identity_count(25, -1))  # 1176, 76
    assert c.epsilon is None


@pytest.mark.parametrize("p, m", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_count_invariants(p, m):
    c = count_quartic(p, m)
    q = c.q
    assert c.affine_nonzero % (q - 1) == 0
    assert 0 <= c.count <= q**3 + q**2 + q + 1
    assert abs(c.count - (1 + q * q)) <= 22 * q


@pytest.mark.parametrize("p, k, modulus", [(3, 2, (1, 0, 1)), (7, 2, (1, 0, 1)), (5, 2, (2, 0, 1))])
def test_build_extension(p, k, modulus):
    assert build_extension(p, k).modulus == modulus


def test_build_extension_errors():
    with pytest.raises(NotPrime):
        build_extension(4, 2)
    with pytest.raises(NotOdd):
        build_extension(2, 2)
    with pytest.raises(TooLarge):
        build_extension(101, 2)


def sympy_first_irreducible(p, k):
    t = sp.symbols("t")
    for code in range(p**k):
        coeffs = [(code // p**i) % p for i in range(k)]
        f = t**k + sum(c * t**i for i, c in enumerate(coeffs))
        if sp.Poly(f, t, modulus=p).is_irreducible:
            return coeffs + [1]


@pytest.mark.parametrize("p, k", [(3, 2), (3, 3), (3, 4), (5, 2), (5, 4), (7, 2), (11, 2), (13, 3)])
def test_irreducible_search_matches_sympy(p, k):
    assert smallest_irreducible(p, k) == sympy_first_irreducible(p, k)


def test_is_irreducible_against_sympy():
    t = sp.symbols("t")
    p = 3
    for code in range(p**4):
        coeffs = [(code // p**i) % p for i in range(4)] + [1]
        f = sum(c * t**i for i, c in enumerate(coeffs))
        assert is_irreducible(coeffs, p) == sp.Poly(f, t, modulus=p).is_irreducible


def test_field_arithmetic():
    F = build_extension(3, 2)
    i = F.element([0, 1])
    one = F.element([1])
    assert (i * i + one).is_zero()
    assert (i**8).coeffs == (1, 0)
    assert all(F.pow(x, 8) == 1 for x in range(1, 9))


def test_certificates():
    c3 = supersingular_certificate(3, 1)
    assert c3.holds and c3.epsilon == 1 and c3.per_m[0].count == 280
    c5 = supersingular_certificate(5, 1)
    assert not c5.holds and "1112" in c5.reason
    assert supersingular_certificate(7, 1).holds
    assert all(fermat_in_good_locus(p) for p in (3, 5, 7, 11, 13))


def test_certificate_depth_two_for_p3():
    c = supersingular_certificate(3, 2)
    assert c.holds and c.epsilon == 1
    assert [x.count for x in c.per_m] == [280, 8344]


def test_threaded_count_matches():
    F = build_extension(7, 2)
    assert affine_zero_count(F, threads=3) == affine_zero_count(F, threads=1)


def test_count_guard():
    with pytest.raises(TooLarge):
        count_quartic(11, 1)
