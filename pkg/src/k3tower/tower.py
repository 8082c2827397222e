"""Degrees, ramification and genera of the curves C_n, and the tower classification.

C_n covers the lambda-line with monodromy acting on the cone D_n. One
branch point has maximal unipotent monodromy and four carry involutions;
Riemann-Hurwitz over P^1 then gives 2g - 2 = -2 deg + R0 + R.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ConfigError, InconsistentRamification, MissingCertificate, TooLarge
from .fermat import Certificate, supersingular_certificate
from .fricke import SimilitudeMatrix, cone_size, default_generators, degenerate_cone, is_mum, is_projective_involution
from .orbits import CycleProfile, cyclic_profile
from .projective import ProjPoint
from .zmod import Level, require_odd_prime


class BranchKind(str, enum.Enum):
    MUM = "MUM"
    INVOLUTION = "involution"
    CUSTOM = "custom"


@dataclass(frozen=True)
class BranchSpec:
    label: str
    kind: BranchKind
    matrix: SimilitudeMatrix

    def __post_init__(self) -> None:
        kind = BranchKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is BranchKind.MUM and not is_mum(self.matrix.rows):
            raise ConfigError(f"branch {self.label!r}: MUM matrix needs (M-I)^3 = 0 != (M-I)^2")
        if kind is BranchKind.INVOLUTION and not is_projective_involution(self.matrix.rows):
            raise ConfigError(f"branch {self.label!r}: involution matrix needs M^2 scalar")

    @classmethod
    def make(cls, label: str, kind: str | BranchKind, matrix: Sequence[Sequence[int]] | None = None) -> "BranchSpec":
        kind = BranchKind(kind)
        if matrix is None:
            gens = default_generators()
            if kind is BranchKind.MUM:
                M = gens.t
            elif kind is BranchKind.INVOLUTION:
                M = gens.w
            else:
                raise ConfigError(f"branch {label!r}: custom branches need an explicit matrix")
        else:
            M = matrix if isinstance(matrix, SimilitudeMatrix) else SimilitudeMatrix(matrix)
        return cls(label, kind, M)


def default_branches() -> list[BranchSpec]:
    """Maximal unipotent monodromy at infinity, involutions over lambda^4 = 1."""
    out = [BranchSpec.make("lambda=inf", BranchKind.MUM)]
    for root in ("1", "i", "-1", "-i"):
        out.append(BranchSpec.make(f"lambda={root}", BranchKind.INVOLUTION))
    return out


def covering_degree(ell: int, n: int) -> int:
    return cone_size(Level(ell, n))


@dataclass(frozen=True)
class Ramification:
    label: str
    kind: BranchKind
    profile: CycleProfile

    @property
    def total(self) -> int:
        return self.profile.ramification


def ramification_at(branch: BranchSpec, level: Level, cone: Sequence[ProjPoint] | None = None) -> Ramification:
    points = degenerate_cone(level) if cone is None else cone
    return Ramification(branch.label, branch.kind, cyclic_profile(branch.matrix, points))


def hurwitz_genus(degree: int, sums: Sequence[int]) -> int:
    """Genus of a degree-``degree`` cover of P^1 with the given ramification sums."""
    chi = -2 * degree + sum(sums)
    if chi % 2:
        raise InconsistentRamification(f"2g - 2 = {chi} is odd")
    if chi < -2:
        raise InconsistentRamification(f"2g - 2 = {chi} < -2")
    return chi // 2 + 1


def genus_bounds(ell: int, n: int) -> tuple[Fraction, int]:
    """(bound as stated, bound implied by R0 <= D and R <= 2D): D/2 and D//2 + 1."""
    D = covering_degree(ell, n)
    return Fraction(D, 2), D // 2 + 1


@dataclass(frozen=True)
class LevelReport:
    n: int
    degree: int
    ramification: tuple[Ramification, ...]
    R0: int
    R: int
    genus_exact: int
    genus_paper_bound: Fraction
    genus_safe_bound: int
    n_points_lower: int | None
    ratio_lower: Fraction | None
    ratio_infinite: bool

    @property
    def exceeds_paper_bound(self) -> bool:
        return self.genus_exact > self.genus_paper_bound

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "R0": self.R0,
            "R": self.R,
            "genus_exact": self.genus_exact,
            "genus_paper_bound": _num(self.genus_paper_bound),
            "genus_safe_bound": self.genus_safe_bound,
            "exceeds_paper_bound": self.exceeds_paper_bound,
            "n_points_lower": self.n_points_lower,
            "ratio_lower": None if self.ratio_lower is None else _num(self.ratio_lower),
            "ratio_lower_infinite": self.ratio_infinite,
            "ramification": [
                {
                    "label": r.label,
                    "kind": r.kind.value,
                    "profile": list(r.profile.sizes),
                    "sum": r.total,
                }
                for r in self.ramification
            ],
        }


def _num(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Classification(str, enum.Enum):
    OPTIMAL = "optimal"
    GOOD = "good"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TowerReport:
    ell: int
    p: int
    levels: tuple[LevelReport, ...]
    dv_bound: int
    asymptotic_ratio_lower: Fraction
    classification: Classification
    certificate: Certificate | None
    missing_certificate: str | None = None
    warnings: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "p": self.p,
            "dv_bound": self.dv_bound,
            "asymptotic_ratio_lower": _num(self.asymptotic_ratio_lower),
            "classification": self.classification.value,
            "missing_certificate": self.missing_certificate,
            "warnings": list(self.warnings),
            "certificate": None if self.certificate is None else self.certificate.as_dict(),
            "levels": [lv.as_dict() for lv in self.levels],
        }


def level_report(
    ell: int,
    n: int,
    branches: Sequence[BranchSpec],
    split_fiber: bool,
) -> LevelReport:
    level = Level(ell, n)
    cone = degenerate_cone(level)
    D = len(cone)
    rams = tuple(ramification_at(b, level, cone) for b in branches)
    R0 = sum(r.total for r in rams if r.kind is BranchKind.MUM)
    R = sum(r.total for r in rams if r.kind is not BranchKind.MUM)
    g = hurwitz_genus(D, [r.total for r in rams])
    stated, safe = genus_bounds(ell, n)
    # Only the split supersingular fiber is counted: it contributes D points over F_{p^2}.
    pts = D if split_fiber else None
    if pts is None:
        ratio, infinite = None, False
    elif g == 0:
        ratio, infinite = None, True
    else:
        ratio, infinite = Fraction(pts, g), False
    return LevelReport(n, D, rams, R0, R, g, stated, safe, pts, ratio, infinite)


def asymptotic_ratio_lower() -> Fraction:
    """lim D / (D/2 + 1) as D -> infinity: the ratio of leading coefficients."""
    points_leading = Fraction(1)
    genus_leading = Fraction(1, 2)
    return points_leading / genus_leading


def tower_report(
    ell: int,
    p: int,
    n_max: int = 2,
    branches: Sequence[BranchSpec] | None = None,
    certificate: Certificate | None = None,
    m_max: int = 1,
    strict: bool = False,
) -> TowerReport:
    """Per-level data for C_1, ..., C_{n_max} over F_{p^2} and the classification.

    Without a strong-supersingularity certificate the classification is
    "unknown"; ``strict=True`` raises MissingCertificate instead.
    """
    require_odd_prime(p)
    Level(ell, 1)
    if n_max < 1:
        raise ConfigError("n_max must be >= 1")
    branches = default_branches() if branches is None else list(branches)
    warnings = []
    if ell == p:
        warnings.append(f"ell = p = {p}: the level structure is not etale in characteristic p")
    missing = None
    if p % 4 != 3:
        missing = f"p = {p} is not 3 mod 4; no supersingular fiber is known"
    if certificate is None:
        try:
            certificate = supersingular_certificate(p, m_max)
        except TooLarge as exc:
            missing = missing or f"certificate not computable: {exc}"
    if missing is None and certificate is not None and not certificate.holds:
        missing = certificate.reason
    if missing is not None and strict:
        raise MissingCertificate(missing)
    split = missing is None
    levels = tuple(level_report(ell, n, branches, split) for n in range(1, n_max + 1))
    dv = p - 1
    limit = asymptotic_ratio_lower()
    if not split:
        cls = Classification.UNKNOWN
    elif limit == dv:
        cls = Classification.OPTIMAL
    elif limit > 0:
        cls = Classification.GOOD
    else:
        cls = Classification.UNKNOWN
    return TowerReport(ell, p, levels, dv, limit, cls, certificate, missing, tuple(warnings))
