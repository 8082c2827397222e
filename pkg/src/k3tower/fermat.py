"""Finite fields F_{p^k} and brute-force point counts of the Fermat quartic surface.

A K3 surface over F_q whose Frobenius acts on H^2 as the scalar eps*q has
exactly 1 + 22*eps*q + q^2 points. ``supersingular_certificate`` checks that
identity for x0^4 + x1^4 + x2^4 + x3^4 = 0 over F_{p^2}, F_{p^4}, ...
"""

from __future__ import annotations

from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import kernels
from .errors import ConfigError, MissingCertificate, TooLarge
from .zmod import require_odd_prime

# Ceiling on q^4, the number of affine tuples swept by count_quartic.
AFFINE_GUARD = 10**8

Poly = list[int]  # coefficients, lowest degree first


def _trim(f: Poly) -> Poly:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mod(f: Poly, g: Poly, p: int) -> Poly:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        shift = len(f) - len(g)
        coef = f[-1] * inv % p
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * c) % p
        _trim(f)
    return f


def poly_mulmod(f: Poly, g: Poly, mod: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return poly_mod(out, mod, p)


def poly_gcd(f: Poly, g: Poly, p: int) -> Poly:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, poly_mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def is_irreducible(f: Poly, p: int) -> bool:
    """Ben-Or test: gcd(t^(p^i) - t, f) = 1 for i <= deg f / 2."""
    f = _trim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    t = [0, 1]
    power = t
    for _ in range(k // 2):
        # power <- power^p mod f
        result = [1]
        base = power
        e = p
        while e:
            if e & 1:
                result = poly_mulmod(result, base, f, p)
            base = poly_mulmod(base, base, f, p)
            e >>= 1
        power = result
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, k: int) -> Poly:
    """Monic irreducible of degree k, first in lexicographic order of
    (a_{k-1}, ..., a_0)."""
    for code in range(p**k):
        coeffs = []
        x = code
        for _ in range(k):
            coeffs.append(x % p)
            x //= p
        f = coeffs + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class ExtField:
    """F_{p^k} = F_p[t]/(modulus). Element i encodes sum(d_j t^j) for base-p digits d_j of i."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(list(self.modulus), self.p):
            raise ValueError(f"{self.modulus} is reducible over F_{self.p}")

    @property
    def size(self) -> int:
        return self.p**self.k

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def encode(self, coeffs: Sequence[int]) -> int:
        x = 0
        for c in reversed(list(coeffs) + [0] * (self.k - len(coeffs))):
            x = x * self.p + c % self.p
        return x

    def add(self, x: int, y: int) -> int:
        return self.encode([a + b for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x: int) -> int:
        return self.encode([-a for a in self.digits(x)])

    def mul(self, x: int, y: int) -> int:
        return self.encode(poly_mulmod(self.digits(x), self.digits(y), list(self.modulus), self.p))

    def pow(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element(self, coeffs: Sequence[int]) -> "ExtFieldElement":
        return ExtFieldElement(self, tuple(c % self.p for c in coeffs) + (0,) * (self.k - len(coeffs)))


@dataclass(frozen=True)
class ExtFieldElement:
    ext: ExtField = field(repr=False)
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.ext.encode(self.coeffs)

    def _wrap(self, code: int) -> "ExtFieldElement":
        return ExtFieldElement(self.ext, tuple(self.ext.digits(code)))

    def __add__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return self._wrap(self.ext.add(self.code, other.code))

    def __neg__(self) -> "ExtFieldElement":
        return self._wrap(self.ext.neg(self.code))

    def __sub__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return self + (-other)

    def __mul__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return self._wrap(self.ext.mul(self.code, other.code))

    def __pow__(self, e: int) -> "ExtFieldElement":
        return self._wrap(self.ext.pow(self.code, e))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def build_extension(p: int, k: int, limit: int = AFFINE_GUARD) -> ExtField:
    """Deterministic model of F_{p^k}; the guard bounds p^(4k), the cost of a quartic sweep."""
    require_odd_prime(p)
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** (4 * k) > limit:
        raise TooLarge(f"F_{p}^{k}: {p}^{4 * k} exceeds the size guard {limit}")
    return ExtField(p, k, tuple(smallest_irreducible(p, k)))


@dataclass(frozen=True)
class QuarticTables:
    """Flat lookup tables consumed by the counting kernels."""

    q: int
    pow4: array
    add: array
    fiber: array
    neg: array


@lru_cache(maxsize=8)
def quartic_tables(F: ExtField) -> QuarticTables:
    q, p = F.size, F.p
    digits = [F.digits(x) for x in range(q)]
    add = array("q", bytes(8 * q * q))
    for x in range(q):
        dx = digits[x]
        for y in range(q):
            add[x * q + y] = F.encode([a + b for a, b in zip(dx, digits[y])])
    pow4 = array("q", (F.pow(x, 4) for x in range(q)))
    fiber = array("q", bytes(8 * q))
    for v in pow4:
        fiber[v] += 1
    neg = array("q", (F.encode([(-a) % p for a in digits[x]]) for x in range(q)))
    return QuarticTables(q, pow4, add, fiber, neg)


def affine_zero_count(F: ExtField, threads: int | None = None) -> int:
    """Number of (x0, x1, x2, x3) in F^4, zero included, with sum x_i^4 = 0."""
    tab = quartic_tables(F)
    q = tab.q
    threads = threads or kernels.thread_count()
    if threads <= 1:
        return kernels.quartic_zero_count(tab.pow4, tab.add, tab.fiber, tab.neg, q, 0, q)
    bounds = [q * i // threads for i in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda lo_hi: kernels.quartic_zero_count(tab.pow4, tab.add, tab.fiber, tab.neg, q, *lo_hi),
            zip(bounds[:-1], bounds[1:]),
        )
        return sum(parts)


def k3_identity_count(q: int, epsilon: int) -> int:
    return 1 + 22 * epsilon * q + q * q


@dataclass(frozen=True)
class SurfaceCount:
    p: int
    m: int
    q: int
    count: int
    affine_nonzero: int
    epsilon: int | None

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "q": self.q,
            "count": self.count,
            "affine_nonzero": self.affine_nonzero,
            "epsilon": self.epsilon,
            "identity_plus": k3_identity_count(self.q, 1),
            "identity_minus": k3_identity_count(self.q, -1),
        }


def count_quartic(p: int, m: int = 1, limit: int = AFFINE_GUARD, threads: int | None = None) -> SurfaceCount:
    """Projective points of x0^4 + x1^4 + x2^4 + x3^4 = 0 over F_{p^(2m)}."""
    require_odd_prime(p)
    if m < 1:
        raise ConfigError("m must be >= 1")
    q = p ** (2 * m)
    if q**4 > limit:
        raise TooLarge(f"{q}^4 affine tuples exceed the guard {limit}")
    F = build_extension(p, 2 * m, limit)
    nonzero = affine_zero_count(F, threads) - 1
    count, rem = divmod(nonzero, q - 1)
    if rem:
        raise AssertionError(f"{nonzero} nonzero solutions not divisible by q - 1 = {q - 1}")
    eps = next((e for e in (1, -1) if count == k3_identity_count(q, e)), None)
    return SurfaceCount(p, m, q, count, nonzero, eps)


def fermat_in_good_locus(p: int) -> bool:
    """lambda = 0 lies in the smooth locus: 2(lambda^4 - 1) = -2 is a unit mod p."""
    return (-2) % p != 0


@dataclass(frozen=True)
class Certificate:
    p: int
    m_max: int
    holds: bool
    epsilon: int | None
    per_m: tuple[SurfaceCount, ...]
    good_locus: bool
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "m_max": self.m_max,
            "holds": self.holds,
            "epsilon": self.epsilon,
            "good_locus": self.good_locus,
            "reason": self.reason,
            "per_m": [c.as_dict() for c in self.per_m],
        }

    def require(self) -> None:
        if not self.holds:
            raise MissingCertificate(self.reason)


def supersingular_certificate(p: int, m_max: int = 1, limit: int = AFFINE_GUARD) -> Certificate:
    """Check count(m) = 1 + 22 eps^m q^m + q^(2m) with q = p^2 for all m <= m_max.

    This is a finite-depth necessary condition, not a proof.
    """
    require_odd_prime(p)
    if m_max < 1:
        raise ConfigError("m_max must be >= 1")
    counts = tuple(count_quartic(p, m, limit) for m in range(1, m_max + 1))
    q = p * p
    good = fermat_in_good_locus(p)
    for eps in (1, -1):
        if all(c.count == k3_identity_count(q**c.m, eps**c.m) for c in counts):
            return Certificate(p, m_max, good, eps, counts, good, "" if good else "lambda = 0 is singular")
    bad = next(c for c in counts if c.epsilon is None) if any(c.epsilon is None for c in counts) else counts[-1]
    reason = (
        f"Fermat quartic over F_{bad.q} has {bad.count} points, not "
        f"{k3_identity_count(bad.q, 1)} or {k3_identity_count(bad.q, -1)}"
    )
    return Certificate(p, m_max, False, None, counts, good, reason)
