"""Orbits of finitely generated matrix actions on sets of projective points."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from .errors import LevelMismatch, NotAUnit, NotClosed
from .fricke import Grid3, SimilitudeMatrix
from .projective import ProjPoint, canonical_coords
from .zmod import Level, matvec


def _permutation(rows: Grid3, points: Sequence[ProjPoint], level: Level, index: dict) -> list[int]:
    mod = level.modulus
    perm = []
    for p in points:
        image = canonical_coords(matvec(rows, p.coords, mod), level)
        j = index.get(image)
        if j is None:
            raise NotClosed(f"{p.coords} maps to {image}, outside the point set")
        perm.append(j)
    return perm


@dataclass(frozen=True)
class ActionSpec:
    """Generators acting on a finite point set they must preserve."""

    level: Level
    generators: tuple[SimilitudeMatrix, ...]
    points: tuple[ProjPoint, ...]
    _perms: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        pts = tuple(self.points)
        if not gens:
            raise ValueError("an action needs at least one generator")
        for p in pts:
            if p.level != self.level:
                raise LevelMismatch(f"{p} is not over {self.level}")
        for g in gens:
            if not g.is_invertible_mod(self.level.ell):
                raise NotAUnit(f"generator {g.rows} is singular mod {self.level.ell}")
        index = {p.coords: i for i, p in enumerate(pts)}
        if len(index) != len(pts):
            raise ValueError("point set contains duplicates")
        perms = tuple(tuple(_permutation(g.rows, pts, self.level, index)) for g in gens)
        for perm in perms:
            if len(set(perm)) != len(perm):
                raise NotClosed("a generator is not injective on the point set")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_perms", perms)

    @property
    def permutations(self) -> tuple[tuple[int, ...], ...]:
        return self._perms


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple[tuple[ProjPoint, ...], ...]
    index: dict[ProjPoint, int] = field(compare=False)

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def __len__(self) -> int:
        return len(self.orbits)


def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


def orbit_decomposition(action: ActionSpec) -> OrbitDecomposition:
    """Breadth-first closure under every generator and its inverse.

    Orbits are sorted internally and ordered by their smallest point so the
    output is reproducible.
    """
    pts = action.points
    moves = []
    for perm in action.permutations:
        moves.append(perm)
        moves.append(_inverse(perm))
    label = [-1] * len(pts)
    groups: list[list[int]] = []
    for start in range(len(pts)):
        if label[start] >= 0:
            continue
        gid = len(groups)
        label[start] = gid
        members = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for mv in moves:
                j = mv[i]
                if label[j] < 0:
                    label[j] = gid
                    members.append(j)
                    queue.append(j)
        groups.append(members)
    orbits = sorted((tuple(sorted(pts[i] for i in g)) for g in groups), key=lambda o: o[0])
    index = {p: k for k, orbit in enumerate(orbits) for p in orbit}
    return OrbitDecomposition(tuple(orbits), index)


@dataclass(frozen=True)
class Transitivity:
    transitive: bool
    witness: tuple[ProjPoint, ProjPoint] | None
    decomposition: OrbitDecomposition

    def __bool__(self) -> bool:
        return self.transitive


def is_transitive(action: ActionSpec) -> Transitivity:
    dec = orbit_decomposition(action)
    if len(dec) <= 1:
        return Transitivity(True, None, dec)
    return Transitivity(False, (dec.orbits[0][0], dec.orbits[1][0]), dec)


@dataclass(frozen=True)
class CycleProfile:
    """Orbit sizes of a cyclic group, largest first."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s <= 0 for s in self.sizes):
            raise ValueError("orbit sizes are positive")
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def ramification(self) -> int:
        """Sum of (e - 1) over the orbits."""
        return self.total - len(self.sizes)

    @property
    def fixed_points(self) -> int:
        return sum(1 for s in self.sizes if s == 1)

    @property
    def order(self) -> int:
        return lcm(*self.sizes) if self.sizes else 1

    def counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items(), reverse=True))


def _level_of(points: Sequence[ProjPoint]) -> Level:
    if not points:
        raise ValueError("empty point set")
    return points[0].level


def cyclic_profile(M: SimilitudeMatrix, points: Sequence[ProjPoint]) -> CycleProfile:
    if not points:
        return CycleProfile(())
    action = ActionSpec(_level_of(points), (M,), tuple(points))
    perm = action.permutations[0]
    seen = [False] * len(perm)
    sizes = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        size = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            size += 1
        sizes.append(size)
    return CycleProfile(tuple(sizes))


def fixed_point_count(M: SimilitudeMatrix, points: Sequence[ProjPoint]) -> int:
    return cyclic_profile(M, points).fixed_points


def component_degrees(action: ActionSpec) -> list[int]:
    """Orbit sizes, i.e. the degrees of the components of the covering."""
    return orbit_decomposition(action).sizes
