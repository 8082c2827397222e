"""Exact arithmetic in Z/l^n for an odd prime l, plus rank-3 vectors and matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigError, InvalidEll, LevelMismatch, NotAUnit, NotOdd, NotPrime, TooLarge

# Products of two residues must stay inside a signed 64-bit word.
MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True, order=True)
class Level:
    """The ring Z/ell^n. Rejects ell = 2 and moduli that could overflow."""

    ell: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.ell, int) or not isinstance(self.n, int):
            raise TypeError("ell and n must be integers")
        if self.ell == 2:
            raise InvalidEll("ell = 2 is excluded: the conic Q = 0 degenerates mod 2")
        if not is_prime(self.ell):
            raise InvalidEll(f"ell = {self.ell} is not a prime")
        if self.n < 1:
            raise ConfigError(f"level exponent must be >= 1, got {self.n}")
        if self.ell**self.n >= MAX_MODULUS:
            raise TooLarge(f"{self.ell}^{self.n} does not fit the machine-word guard")

    @property
    def modulus(self) -> int:
        return self.ell**self.n

    def lower(self) -> "Level":
        return Level(self.ell, self.n - 1)

    def __str__(self) -> str:
        return f"Z/{self.ell}^{self.n}"


def valuation_mod(value: int, level: Level) -> int:
    """Valuation of a residue, with the convention val(0) = n."""
    value %= level.modulus
    if value == 0:
        return level.n
    return vp(value, level.ell)


def is_unit(value: int, level: Level) -> bool:
    return value % level.ell != 0


def inverse_mod(value: int, level: Level) -> int:
    if value % level.ell == 0:
        raise NotAUnit(f"{value % level.modulus} is not a unit in {level}")
    return pow(value, -1, level.modulus)


@dataclass(frozen=True)
class ResidueInt:
    level: Level
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.level.modulus:
            object.__setattr__(self, "value", self.value % self.level.modulus)

    def _check(self, other: "ResidueInt | int") -> int:
        if isinstance(other, ResidueInt):
            if other.level != self.level:
                raise LevelMismatch(f"{self.level} vs {other.level}")
            return other.value
        return other

    def __add__(self, other):
        return ResidueInt(self.level, self.value + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueInt(self.level, self.value - self._check(other))

    def __mul__(self, other):
        return ResidueInt(self.level, self.value * self._check(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueInt(self.level, -self.value)

    def __int__(self) -> int:
        return self.value

    @property
    def valuation(self) -> int:
        return valuation_mod(self.value, self.level)

    def is_unit(self) -> bool:
        return is_unit(self.value, self.level)


def residue(value: int, level: Level) -> ResidueInt:
    return ResidueInt(level, value % level.modulus)


def valuation(x: ResidueInt) -> int:
    return x.valuation


def invert(x: ResidueInt) -> ResidueInt:
    return ResidueInt(x.level, inverse_mod(x.value, x.level))


@dataclass(frozen=True)
class ResidueVector:
    level: Level
    coords: tuple[int, int, int]

    def __post_init__(self) -> None:
        m = self.level.modulus
        coords = tuple(int(c) % m for c in self.coords)
        if len(coords) != 3:
            raise ValueError("vectors have rank 3")
        object.__setattr__(self, "coords", coords)

    def __getitem__(self, i: int) -> ResidueInt:
        return ResidueInt(self.level, self.coords[i])

    def scale(self, a: int) -> "ResidueVector":
        return ResidueVector(self.level, tuple(a * c for c in self.coords))

    def __add__(self, other: "ResidueVector") -> "ResidueVector":
        if other.level != self.level:
            raise LevelMismatch(f"{self.level} vs {other.level}")
        return ResidueVector(self.level, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def is_zero(self) -> bool:
        return not any(self.coords)


def vector(coords: Iterable[int], level: Level) -> ResidueVector:
    return ResidueVector(level, tuple(coords))


def matvec(rows: Sequence[Sequence[int]], v: Sequence[int], modulus: int) -> tuple[int, int, int]:
    """Integer matrix times integer vector, reduced mod ``modulus``."""
    return tuple(
        (r[0] * v[0] + r[1] * v[1] + r[2] * v[2]) % modulus for r in rows
    )  # type: ignore[return-value]


@dataclass(frozen=True)
class ResidueMatrix:
    level: Level
    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        m = self.level.modulus
        rows = tuple(tuple(int(x) % m for x in row) for row in self.entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("matrices are 3x3")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, level: Level) -> "ResidueMatrix":
        return cls(level, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def det(self) -> int:
        a = self.entries
        d = (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
        return d % self.level.modulus


def matrix(rows: Sequence[Sequence[int]], level: Level) -> ResidueMatrix:
    return ResidueMatrix(level, tuple(tuple(r) for r in rows))


def apply(M: ResidueMatrix, v: ResidueVector) -> ResidueVector:
    if M.level != v.level:
        raise LevelMismatch(f"matrix over {M.level}, vector over {v.level}")
    return ResidueVector(v.level, matvec(M.entries, v.coords, v.level.modulus))


def require_odd_prime(p: int, name: str = "p") -> int:
    """Validation used for the characteristic ``p`` of the finite fields."""
    if not isinstance(p, int):
        raise TypeError(f"{name} must be an integer")
    if p == 2:
        raise NotOdd(f"{name} = 2 is not odd")
    if not is_prime(p):
        raise NotPrime(f"{name} = {p} is not a prime")
    return p
