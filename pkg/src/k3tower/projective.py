"""Projectivization P_n(V) of the free module V = (Z/l^n)^3.

A point is a class of vectors with at least one unit coordinate, modulo
multiplication by units. The canonical representative scales the
lowest-index unit coordinate to 1.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from . import kernels
from .errors import BottomLevel, KernelTooLarge, LevelMismatch, NotPrimitive, TooLarge
from .zmod import Level, ResidueVector, matvec

# Default ceiling on l^(3n) for sweeps over the whole module.
SIZE_GUARD = 10**7

Coords = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class ProjPoint:
    level: Level
    coords: Coords

    def __repr__(self) -> str:
        return f"ProjPoint{self.coords} mod {self.level.ell}^{self.level.n}"

    def as_list(self) -> list[int]:
        return list(self.coords)


def canonical_coords(coords: Sequence[int], level: Level) -> Coords:
    """Normal form of a primitive coordinate triple; raises NotPrimitive otherwise."""
    ell, mod = level.ell, level.modulus
    for i, c in enumerate(coords):
        if c % ell:
            inv = pow(c, -1, mod)
            return tuple((inv * x) % mod for x in coords)  # type: ignore[return-value]
    raise NotPrimitive(f"{tuple(coords)} has no unit coordinate in {level}")


def canonicalize(v: ResidueVector | Sequence[int], level: Level | None = None) -> ProjPoint:
    if isinstance(v, ResidueVector):
        if level is not None and level != v.level:
            raise LevelMismatch(f"{v.level} vs {level}")
        level, coords = v.level, v.coords
    else:
        if level is None:
            raise TypeError("a level is required for raw coordinates")
        coords = tuple(v)
    return ProjPoint(level, canonical_coords(coords, level))


def point(coords: Sequence[int], level: Level) -> ProjPoint:
    return canonicalize(coords, level)


def point_count(level: Level) -> int:
    ell, n = level.ell, level.n
    return ell ** (2 * (n - 1)) * (ell * ell + ell + 1)


def _check_guard(level: Level, limit: int) -> None:
    if level.ell ** (3 * level.n) > limit:
        raise TooLarge(f"{level.ell}^{3 * level.n} exceeds the size guard {limit}")


def iter_points(level: Level) -> Iterator[ProjPoint]:
    """Canonical points in lexicographic order of coordinates, generated directly."""
    ell, mod = level.ell, level.modulus
    units = range(mod)
    for a in units:
        if a == 1:
            for b, c in product(units, units):
                yield ProjPoint(level, (1, b, c))
        elif a % ell == 0:
            for b in units:
                if b == 1:
                    for c in units:
                        yield ProjPoint(level, (a, 1, c))
                elif b % ell == 0:
                    yield ProjPoint(level, (a, b, 1))


def enumerate_points(level: Level, limit: int = SIZE_GUARD) -> list[ProjPoint]:
    _check_guard(level, limit)
    return list(iter_points(level))


def reduce_point(p: ProjPoint) -> ProjPoint:
    if p.level.n == 1:
        raise BottomLevel("cannot reduce below level 1")
    lower = p.level.lower()
    m = lower.modulus
    return ProjPoint(lower, canonical_coords(tuple(c % m for c in p.coords), lower))


reduce = reduce_point


@dataclass(frozen=True)
class ModuleHom:
    """Homomorphism (Z/l^n)^3 -> (Z/l^m)^3 given by an integer matrix mod l^m."""

    source: Level
    target: Level
    matrix: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.source.ell != self.target.ell:
            raise LevelMismatch("source and target must share ell")
        if self.target.n > self.source.n:
            raise LevelMismatch("target level must not exceed source level")
        m = self.target.modulus
        rows = tuple(tuple(int(x) % m for x in row) for row in self.matrix)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("matrices are 3x3")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def reduction(cls, source: Level) -> "ModuleHom":
        if source.n == 1:
            raise BottomLevel("no reduction map out of level 1")
        return cls(source, source.lower(), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __call__(self, coords: Sequence[int]) -> Coords:
        return matvec(self.matrix, coords, self.target.modulus)


def kernel_witness(phi: ModuleHom, limit: int = SIZE_GUARD) -> Coords | None:
    """A vector v with phi(v) = 0 and l*v != 0, or None if there is none."""
    _check_guard(phi.source, limit)
    flat = array("q", [x for row in phi.matrix for x in row])
    _, witness = kernels.kernel_violations(flat, phi.source.ell, phi.source.n, phi.target.n)
    return witness


def kernel_condition(phi: ModuleHom, limit: int = SIZE_GUARD) -> bool:
    """True iff l * ker(phi) = 0, checked over every vector of the source."""
    return kernel_witness(phi, limit) is None


def induced_map(phi: ModuleHom, p: ProjPoint, *, check_kernel: bool = True) -> ProjPoint:
    if p.level != phi.source:
        raise LevelMismatch(f"point over {p.level}, map from {phi.source}")
    if check_kernel:
        witness = kernel_witness(phi)
        if witness is not None:
            raise KernelTooLarge(f"{witness} lies in ker(phi) but l*v != 0")
    return ProjPoint(phi.target, canonical_coords(phi(p.coords), phi.target))
