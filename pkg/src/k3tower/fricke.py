"""The rank-3 lattice of binary forms a x^2 + 2 sqrt2 b xy + c y^2 and its monodromy.

Forms are stored by their coordinates (alpha, beta, gamma) with quadratic
form Q = 2(2 beta^2 - alpha gamma). The Fricke group of level 2 acts on them
through a twisted substitution action; the images of its generators are
computed exactly over Z[sqrt2, 1/2] and then rescaled to integer matrices.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    ConventionSearchFailed,
    InternalInconsistency,
    LevelMismatch,
    NotIntegralizable,
)
from .projective import ProjPoint, canonical_coords, enumerate_points, SIZE_GUARD
from .zmod import Level, inverse_mod, matvec

Grid3 = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

# Gram matrix of Q: Q(v) = v^T GRAM v.
GRAM = ((0, 0, -1), (0, 4, 0), (-1, 0, 0))
IDENTITY: Grid3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class QuadForm:
    alpha: int
    beta: int
    gamma: int

    def __iter__(self):
        return iter((self.alpha, self.beta, self.gamma))


def q_value(f: QuadForm | Sequence[int]) -> int:
    a, b, c = f
    return 2 * (2 * b * b - a * c)


# --- Z[sqrt2, 1/2] ---------------------------------------------------------


@dataclass(frozen=True)
class Sqrt2Scalar:
    """(a + b sqrt2) / 2^k, kept reduced: k > 0 only if a or b is odd."""

    a: int
    b: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        a, b, k = self.a, self.b, self.k
        if a == 0 and b == 0:
            k = 0
        while k > 0 and a % 2 == 0 and b % 2 == 0:
            a //= 2
            b //= 2
            k -= 1
        while k < 0:
            a *= 2
            b *= 2
            k += 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    @classmethod
    def coerce(cls, x) -> "Sqrt2Scalar":
        if isinstance(x, Sqrt2Scalar):
            return x
        if isinstance(x, int):
            return cls(x, 0, 0)
        if isinstance(x, Fraction):
            den = x.denominator
            k = den.bit_length() - 1
            if den != 1 << k:
                raise NotIntegralizable(f"{x} has a denominator that is not a power of 2")
            return cls(x.numerator, 0, k)
        raise TypeError(f"cannot coerce {x!r} to Sqrt2Scalar")

    def _align(self, other: "Sqrt2Scalar") -> tuple[int, int, int, int, int]:
        k = max(self.k, other.k)
        s, t = k - self.k, k - other.k
        return self.a << s, self.b << s, other.a << t, other.b << t, k

    def __add__(self, other):
        other = Sqrt2Scalar.coerce(other)
        a1, b1, a2, b2, k = self._align(other)
        return Sqrt2Scalar(a1 + a2, b1 + b2, k)

    __radd__ = __add__

    def __neg__(self):
        return Sqrt2Scalar(-self.a, -self.b, self.k)

    def __sub__(self, other):
        return self + (-Sqrt2Scalar.coerce(other))

    def __rsub__(self, other):
        return Sqrt2Scalar.coerce(other) - self

    def __mul__(self, other):
        other = Sqrt2Scalar.coerce(other)
        a = self.a * other.a + 2 * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return Sqrt2Scalar(a, b, self.k + other.k)

    __rmul__ = __mul__

    def times_sqrt2(self, power: int = 1) -> "Sqrt2Scalar":
        """Multiply by sqrt2^power for any integer power."""
        x = self
        if power >= 0:
            for _ in range(power):
                x = Sqrt2Scalar(2 * x.b, x.a, x.k)
        else:
            for _ in range(-power):
                x = Sqrt2Scalar(2 * x.b, x.a, x.k + 1)
        return x

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, 1 << self.k)

    @property
    def sqrt2_part(self) -> Fraction:
        return Fraction(self.b, 1 << self.k)

    def __float__(self) -> float:
        return (self.a + self.b * 2**0.5) / 2**self.k

    def __repr__(self) -> str:
        return f"({self.a}{self.b:+d}*sqrt2)/2^{self.k}" if self.k else f"({self.a}{self.b:+d}*sqrt2)"


S = Sqrt2Scalar
SQRT2 = S(0, 1)


class Coset(enum.Enum):
    EVEN = "even"  # inside Gamma_0(2)
    ODD = "odd"  # the Fricke coset


@dataclass(frozen=True)
class FrickeElement:
    entries: tuple[tuple[Sqrt2Scalar, Sqrt2Scalar], tuple[Sqrt2Scalar, Sqrt2Scalar]]
    coset: Coset = Coset.EVEN

    def __post_init__(self) -> None:
        rows = tuple(tuple(S.coerce(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if self.det().is_zero():
            raise ValueError("FrickeElement must have nonzero determinant")

    @classmethod
    def from_ints(cls, rows: Sequence[Sequence[int]], coset: Coset = Coset.EVEN) -> "FrickeElement":
        return cls(tuple(tuple(S(x) for x in r) for r in rows), coset)  # type: ignore[arg-type]

    def det(self) -> Sqrt2Scalar:
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def adjugate(self) -> "FrickeElement":
        """Inverse up to the scalar det, which acts trivially on projective space."""
        (a, b), (c, d) = self.entries
        return FrickeElement(((d, -b), (-c, a)), self.coset)


T_GEN = FrickeElement.from_ints(((1, 1), (0, 1)))
U_GEN = FrickeElement.from_ints(((1, 0), (2, 1)))
W_GEN = FrickeElement(((S(0), S(0, -1, 1)), (SQRT2, S(0))), Coset.ODD)


class Substitution(enum.Enum):
    LEFT = "left-sub"  # f(x, y) -> f(a x + b y, c x + d y)
    RIGHT = "right-sub"  # f(x, y) -> f(a x + c y, b x + d y)


class Conjugation(enum.Enum):
    D = "D"  # g -> D g D^-1 with D = diag(2^-1/4, 2^1/4)
    D_INVERSE = "D-inverse"  # g -> D^-1 g D


@dataclass(frozen=True)
class Convention:
    substitution: Substitution
    conjugation: Conjugation

    def __str__(self) -> str:
        return f"{self.substitution.value}/{self.conjugation.value}"


CONVENTIONS = tuple(
    Convention(s, c) for s, c in itertools.product(Substitution, Conjugation)
)


def _conjugate(g: FrickeElement, conj: Conjugation) -> tuple[Sqrt2Scalar, ...]:
    # D g D^-1 scales the upper-right entry by 2^-1/2 and the lower-left by 2^1/2.
    (a, b), (c, d) = g.entries
    sign = -1 if conj is Conjugation.D else 1
    return a, b.times_sqrt2(sign), c.times_sqrt2(-sign), d


def twisted_image(g: FrickeElement, convention: Convention) -> tuple[tuple[Sqrt2Scalar, ...], ...]:
    """Exact 3x3 matrix of the twisted substitution action on (alpha, beta, gamma)."""
    a, b, c, d = _conjugate(g, convention.conjugation)
    if convention.substitution is Substitution.RIGHT:
        b, c = c, b
    # (a x + b y, c x + d y) substituted into alpha x^2 + 2 sqrt2 beta xy + gamma y^2;
    # rows give the new (alpha, beta, gamma) in terms of the old ones.
    two_sqrt2 = SQRT2 * 2
    inv_sqrt2 = S(1).times_sqrt2(-1)
    return (
        (a * a, two_sqrt2 * a * c, c * c),
        (a * b * inv_sqrt2, a * d + b * c, c * d * inv_sqrt2),
        (b * b, two_sqrt2 * b * d, d * d),
    )


# --- integral similitudes --------------------------------------------------


def _mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Grid3:
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )  # type: ignore[return-value]


def _transpose(A: Sequence[Sequence[int]]) -> Grid3:
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def _det3(a: Sequence[Sequence[int]]) -> int:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def _adjugate3(a: Sequence[Sequence[int]]) -> Grid3:
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]]
            cof[i][j] = (-1) ** (i + j) * minor
    return _transpose(cof)


def similitude_factor(M: Sequence[Sequence[int]]) -> Fraction | None:
    """c with M^T GRAM M = c GRAM, or None if M is not a similitude of Q.

    Equality of Gram matrices is the polynomial identity Q(Mv) = c Q(v)
    on all six monomials.
    """
    pulled = _mat_mul(_transpose(M), _mat_mul(GRAM, M))
    c = Fraction(pulled[1][1], 4)
    if c == 0:
        return None
    for i in range(3):
        for j in range(3):
            if pulled[i][j] != c * GRAM[i][j]:
                return None
    return c


@dataclass(frozen=True)
class SimilitudeMatrix:
    """Integer 3x3 matrix with Q(M v) = factor * Q(v); meaningful up to sign."""

    rows: Grid3
    factor: int = field(default=None)  # type: ignore[assignment]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("similitude matrices are 3x3")
        object.__setattr__(self, "rows", rows)
        c = similitude_factor(rows)
        if c is None:
            raise ValueError(f"{rows} is not a similitude of Q")
        if c.denominator != 1:
            raise ValueError(f"similitude factor {c} is not an integer")
        if self.factor is not None and self.factor != c:
            raise ValueError(f"declared factor {self.factor} but Q(Mv) = {c} Q(v)")
        object.__setattr__(self, "factor", int(c))

    def __matmul__(self, other: "SimilitudeMatrix") -> "SimilitudeMatrix":
        return SimilitudeMatrix(_mat_mul(self.rows, other.rows))

    def det(self) -> int:
        return _det3(self.rows)

    def is_invertible_mod(self, ell: int) -> bool:
        return self.det() % ell != 0

    def apply(self, v: Sequence[int], modulus: int | None = None) -> tuple[int, int, int]:
        if modulus is None:
            return tuple(sum(r[j] * v[j] for j in range(3)) for r in self.rows)  # type: ignore[return-value]
        return matvec(self.rows, v, modulus)

    def act(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(p.level, canonical_coords(matvec(self.rows, p.coords, p.level.modulus), p.level))

    def inverse_mod(self, level: Level) -> Grid3:
        """Integer matrix representing M^-1 over Z/l^n."""
        m = level.modulus
        d_inv = inverse_mod(self.det(), level)
        return tuple(tuple((d_inv * x) % m for x in r) for r in _adjugate3(self.rows))  # type: ignore[return-value]

    def reduced(self, level: Level) -> Grid3:
        m = level.modulus
        return tuple(tuple(x % m for x in r) for r in self.rows)  # type: ignore[return-value]


def is_mum(M: Sequence[Sequence[int]]) -> bool:
    """(M - I)^3 = 0 != (M - I)^2 over Z, allowing the global sign of M."""
    for sign in (1, -1):
        N = tuple(tuple(sign * M[i][j] - IDENTITY[i][j] for j in range(3)) for i in range(3))
        N2 = _mat_mul(N, N)
        if any(any(r) for r in N2) and not any(any(r) for r in _mat_mul(N2, N)):
            return True
    return False


def is_projective_involution(M: Sequence[Sequence[int]]) -> bool:
    """M^2 is a nonzero scalar matrix."""
    M2 = _mat_mul(M, M)
    s = M2[0][0]
    return s != 0 and all(M2[i][j] == (s if i == j else 0) for i in range(3) for j in range(3))


def _normalize_sign(rows: Grid3) -> Grid3:
    for r in rows:
        for x in r:
            if x:
                if x < 0:
                    return tuple(tuple(-y for y in row) for row in rows)  # type: ignore[return-value]
                return rows
    return rows


def normalize_integral(grid: Sequence[Sequence[Sqrt2Scalar]]) -> SimilitudeMatrix:
    """Rescale an exact grid by +-2^(j/2) to a primitive integer similitude.

    The scalar is chosen so the entries are integers with odd content and the
    first nonzero entry is positive.
    """
    entries = [S.coerce(x) for row in grid for x in row]
    if all(x.is_zero() for x in entries):
        raise NotIntegralizable("zero grid")
    if all(x.b == 0 for x in entries):
        values = [x.rational_part for x in entries]
    elif all(x.a == 0 for x in entries):
        # sqrt2 * rational: divide out sqrt2, an admissible half-power of 2.
        values = [x.sqrt2_part for x in entries]
    else:
        raise NotIntegralizable("entries mix rational and sqrt2 parts; no +-2^(j/2) scalar works")
    for v in values:
        den = v.denominator
        if den & (den - 1):
            raise NotIntegralizable(f"entry {v} has a denominator that is not a power of 2")
    two_adic = min(
        (v.numerator & -v.numerator).bit_length() - 1 - (v.denominator.bit_length() - 1)
        for v in values
        if v
    )
    scale = Fraction(1, 2**two_adic) if two_adic >= 0 else Fraction(2 ** (-two_adic))
    ints = [v * scale for v in values]
    assert all(x.denominator == 1 for x in ints)
    rows = tuple(tuple(int(ints[3 * i + j]) for j in range(3)) for i in range(3))
    rows = _normalize_sign(rows)  # type: ignore[arg-type]
    if similitude_factor(rows) is None:
        raise NotIntegralizable(f"{rows} is integral but not a similitude of Q")
    return SimilitudeMatrix(rows)


@dataclass(frozen=True)
class DefaultGenerators:
    t: SimilitudeMatrix
    u: SimilitudeMatrix
    w: SimilitudeMatrix
    convention: Convention

    def as_list(self) -> list[SimilitudeMatrix]:
        return [self.t, self.u, self.w]


def _unipotent_mum(M: Grid3) -> bool:
    N = tuple(tuple(M[i][j] - IDENTITY[i][j] for j in range(3)) for i in range(3))
    N2 = _mat_mul(N, N)
    return any(any(r) for r in N2) and not any(any(r) for r in _mat_mul(N2, N))


def _passes(t: SimilitudeMatrix, u: SimilitudeMatrix, w: SimilitudeMatrix) -> bool:
    # Checked over Z with the normalized sign, not merely projectively.
    if (t.factor, u.factor, w.factor) != (1, 1, 1):
        return False
    return _unipotent_mum(t.rows) and _unipotent_mum(u.rows) and _mat_mul(w.rows, w.rows) == IDENTITY


def search_convention(conventions: Iterable[Convention] = CONVENTIONS) -> DefaultGenerators:
    """First convention whose generator images are integral isometries with the
    expected local types (unipotent t and u, involutive w)."""
    rejected = []
    for conv in conventions:
        try:
            t, u, w = (normalize_integral(twisted_image(g, conv)) for g in (T_GEN, U_GEN, W_GEN))
        except NotIntegralizable as exc:
            rejected.append(f"{conv}: {exc}")
            continue
        if _passes(t, u, w):
            return DefaultGenerators(
                SimilitudeMatrix(t.rows, label="t"),
                SimilitudeMatrix(u.rows, label="u"),
                SimilitudeMatrix(w.rows, label="w"),
                conv,
            )
        rejected.append(f"{conv}: postconditions failed")
    raise ConventionSearchFailed("; ".join(rejected))


@lru_cache(maxsize=None)
def default_generators() -> DefaultGenerators:
    return search_convention()


# --- the degenerate cone D_n ------------------------------------------------


def cone_size(level: Level) -> int:
    return (level.ell + 1) * level.ell ** (level.n - 1)


def _cone_brute(level: Level, limit: int) -> list[ProjPoint]:
    m = level.modulus
    return [p for p in enumerate_points(level, limit) if q_value(p.coords) % m == 0]


def _gradient(coords: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = coords
    return (-2 * c, 8 * b, -2 * a)


def _cone_hensel(level: Level) -> list[ProjPoint]:
    ell = level.ell
    base = Level(ell, 1)
    points = [c.coords for c in _cone_brute(base, SIZE_GUARD)]
    for n in range(2, level.n + 1):
        step = ell ** (n - 1)
        mod = step * ell
        lifted = []
        for coords in points:
            grad = [g % ell for g in _gradient(coords)]
            if not any(grad):
                raise InternalInconsistency(f"singular cone point {coords} mod {ell}")
            pivot = next(i for i, x in enumerate(coords) if x % ell)
            free = [i for i in range(3) if i != pivot]
            # Q(p + step w) = Q(p) + step grad.w mod l^n, since 2(n-1) >= n.
            q0 = q_value(coords)
            if q0 % step:
                raise InternalInconsistency(f"{coords} is not on the cone mod {step}")
            rhs = (-(q0 // step)) % ell
            i, j = free
            if grad[i] == 0 and grad[j] == 0:
                # Euler's identity grad.p = 2Q(p) = 0 mod l forbids this.
                raise InternalInconsistency(f"gradient vanishes off the pivot at {coords}")
            if grad[i] == 0:
                i, j = j, i
            inv = pow(grad[i], -1, ell)
            for t in range(ell):
                w = [0, 0, 0]
                w[j] = t
                w[i] = (rhs - grad[j] * t) * inv % ell
                lift = tuple((coords[k] + step * w[k]) % mod for k in range(3))
                lifted.append(lift)
        points = lifted
    out = [ProjPoint(level, canonical_coords(c, level)) for c in points]
    return sorted(out)


def degenerate_cone(level: Level, method: str = "hensel", limit: int = SIZE_GUARD) -> list[ProjPoint]:
    """Canonical points of P_n with Q = 0 mod l^n, sorted lexicographically."""
    if method == "brute":
        pts = _cone_brute(level, limit)
    elif method == "hensel":
        pts = _cone_hensel(level)
    else:
        raise ValueError(f"unknown cone method {method!r}")
    if len(pts) != cone_size(level):
        raise InternalInconsistency(f"|D_n| = {len(pts)}, expected {cone_size(level)}")
    return pts


def check_level(p: ProjPoint, level: Level) -> None:
    if p.level != level:
        raise LevelMismatch(f"{p.level} vs {level}")
