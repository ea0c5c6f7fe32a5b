"""Tangential 2-blocks of PG(3, 2) by exhaustive scan of all 2^15 point sets.

A point set S is a tangential 2-block when every line meets S and every point
of S lies on a tangent, i.e. a line meeting S in that point alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .desargues import DesarguesConfiguration
from .enumeration import brute_force_spatial_configs
from .geometry import ProjectiveSpace, enumerate_lines, projective_space


class WrongSpace(ValueError):
    pass


@lru_cache(maxsize=None)
def _tables() -> tuple[ProjectiveSpace, tuple[int, ...], tuple[tuple[int, ...], ...]]:
    space = projective_space(2, 3)
    lines = tuple(L.point_mask for L in enumerate_lines(space))
    through = tuple(tuple(m for m in lines if m >> p & 1) for p in range(space.point_count))
    return space, lines, through


@dataclass(frozen=True)
class PointSet:
    """Subset of PG(3, 2) as a bitmask over the 15 canonical point indices."""

    space: ProjectiveSpace
    members: int

    def __post_init__(self):
        if self.space != projective_space(2, 3):
            raise WrongSpace(f"tangential 2-blocks are tested in PG(3,2), not {self.space}")
        if not 0 <= self.members < 1 << 15:
            raise ValueError("bitmask must fit in 15 bits")

    @classmethod
    def of(cls, points) -> PointSet:
        points = list(points)
        space = points[0].space if points else projective_space(2, 3)
        m = 0
        for P in points:
            m |= 1 << P.index
        return cls(space, m)

    def __len__(self) -> int:
        return bin(self.members).count("1")


def _is_tangential(S: int, lines, through) -> bool:
    for L in lines:
        if not L & S:
            return False
    rest = S
    while rest:
        low = rest & -rest
        p = low.bit_length() - 1
        rest ^= low
        for L in through[p]:
            if L & S == low:
                break
        else:
            return False
    return True


def is_tangential_two_block(S: PointSet) -> bool:
    _, lines, through = _tables()
    return _is_tangential(S.members, lines, through)


@dataclass
class TwoBlockReport:
    total_subsets: int
    hyperplane: list[int] = field(default_factory=list)
    spatial_desargues: list[int] = field(default_factory=list)
    other: list[int] = field(default_factory=list)

    @property
    def definition_gap(self) -> bool:
        """Set when some tangential 2-block is neither a plane nor a Desargues configuration."""
        return bool(self.other)

    def to_json(self) -> dict:
        return {
            "total_subsets": self.total_subsets,
            "hyperplane": len(self.hyperplane),
            "spatial_desargues": len(self.spatial_desargues),
            "other": len(self.other),
            "other_examples": [f"{m:#06x}" for m in self.other[:10]],
            "definition_gap": self.definition_gap,
        }


def spatial_point_sets() -> set[int]:
    """Point-set bitmasks of every spatial Desargues configuration of PG(3, 2)."""
    keys = brute_force_spatial_configs(2).keys
    out = set()
    for pts, _ in keys:
        m = 0
        for i in pts:
            m |= 1 << i
        out.add(m)
    return out


def classify_two_blocks() -> TwoBlockReport:
    space, lines, through = _tables()
    planes = {sum(1 << P.index for P in space.points if not sum(a * b for a, b in zip(h, P.coords)) % 2)
              for h in space.coords}
    desargues = spatial_point_sets()
    report = TwoBlockReport(total_subsets=1 << space.point_count)
    for S in range(report.total_subsets):
        if not _is_tangential(S, lines, through):
            continue
        if S in planes:
            report.hyperplane.append(S)
        elif S in desargues:
            report.spatial_desargues.append(S)
        else:
            report.other.append(S)
    return report


def config_point_set(D: DesarguesConfiguration) -> PointSet:
    return PointSet(D.host, D.point_mask)
