"""Incidence kernel for PG(n, q), n <= 4, and its affine charts.

Points are canonical coordinate tuples (first nonzero entry equal to 1) and are
numbered by their rank in lexicographic order.  Flats are stored as reduced
row-echelon bases.  For the enumeration loops each space also keeps a lazily
filled table of lines keyed by point-index pairs, with every line's point set
held as an int bitmask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .field import Field, make_field


class GeometryError(ValueError):
    pass


class ZeroVector(GeometryError):
    pass


class MixedSpaces(GeometryError):
    pass


Vector = tuple[int, ...]


def rref(rows: Iterable[Sequence[int]], F: Field) -> tuple[Vector, ...]:
    """Reduced row-echelon form of ``rows`` with zero rows dropped."""
    M = [list(r) for r in rows]
    if not M:
        return ()
    A, Mu, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = inv[M[r][c]]
        if s != 1:
            M[r] = [Mu[s][x] for x in M[r]]
        pivot_row = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = neg[M[i][c]]
                row_f = Mu[f]
                M[i] = [A[x][row_f[y]] for x, y in zip(M[i], pivot_row)]
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, F: Field) -> tuple[Vector, ...]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    R = rref(rows, F)
    pivots = [next(c for c, x in enumerate(row) if x) for row in R]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg_table[row[fc]]
        basis.append(tuple(v))
    return tuple(basis)


def normalize_vector(raw: Sequence[int], F: Field) -> Vector:
    for x in raw:
        if x:
            if x == 1:
                return tuple(raw)
            s = F.inv_table[x]
            row = F.mul_table[s]
            return tuple(row[y] for y in raw)
    raise ZeroVector("the zero vector is not a projective point")


class ProjectiveSpace:
    """PG(n, q).  Obtain instances through :func:`projective_space`."""

    def __init__(self, field: Field, n: int):
        if n < 1:
            raise GeometryError(f"dimension must be positive, got {n}")
        self.field = field
        self.n = n
        self.q = field.q
        self._hash = hash((field.spec, n))
        self._join: dict[tuple[int, int], int] = {}
        self._line_ids: dict[tuple[Vector, ...], int] = {}
        self._lines: list[Subspace] = []
        self._line_masks: list[int] = []

    def __eq__(self, other: object) -> bool:
        return (
            self is other
            or isinstance(other, ProjectiveSpace)
            and other.n == self.n
            and other.field == self.field
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PG({self.n},{self.q})"

    def __reduce__(self):
        return (projective_space, (self.field.spec, self.n))

    @property
    def point_count(self) -> int:
        return (self.q ** (self.n + 1) - 1) // (self.q - 1)

    @cached_property
    def coords(self) -> tuple[Vector, ...]:
        """All canonical coordinate tuples in lexicographic order."""
        q, n = self.q, self.n
        out = []
        for lead in range(n + 1):
            for tail in itertools.product(range(q), repeat=n - lead):
                out.append((0,) * lead + (1,) + tail)
        out.sort()
        return tuple(out)

    @cached_property
    def index_of(self) -> dict[Vector, int]:
        return {c: i for i, c in enumerate(self.coords)}

    @cached_property
    def points(self) -> tuple[ProjPoint, ...]:
        return tuple(ProjPoint(self, c, i) for i, c in enumerate(self.coords))

    def point(self, index: int) -> ProjPoint:
        return self.points[index]

    def normalize(self, raw: Sequence[int]) -> ProjPoint:
        if len(raw) != self.n + 1:
            raise GeometryError(f"expected {self.n + 1} coordinates, got {len(raw)}")
        if any(not 0 <= x < self.q for x in raw):
            raise GeometryError(f"coordinates must lie in range({self.q})")
        return self.points[self.index_of[normalize_vector(raw, self.field)]]

    def parse_point(self, text: str) -> ProjPoint:
        return self.normalize([int(x) for x in text.split(",")])

    @cached_property
    def whole(self) -> Subspace:
        ident = tuple(tuple(int(i == j) for j in range(self.n + 1)) for i in range(self.n + 1))
        return Subspace(self, ident)

    # -- integer incidence tables -------------------------------------------

    def join(self, i: int, j: int) -> int:
        """Id of the line through distinct points with indices i and j."""
        key = (i, j) if i < j else (j, i)
        lid = self._join.get(key)
        if lid is None:
            if i == j:
                raise GeometryError("join of a point with itself is not a line")
            basis = rref((self.coords[i], self.coords[j]), self.field)
            lid = self._register_line(basis)
            self._join[key] = lid
        return lid

    def _register_line(self, basis: tuple[Vector, ...]) -> int:
        lid = self._line_ids.get(basis)
        if lid is None:
            line = Subspace(self, basis)
            lid = len(self._lines)
            self._line_ids[basis] = lid
            self._lines.append(line)
            self._line_masks.append(line.point_mask)
        return lid

    def line(self, lid: int) -> Subspace:
        return self._lines[lid]

    def line_id(self, line: Subspace) -> int:
        if line.dim != 1:
            raise GeometryError("not a line")
        return self._register_line(line.basis)

    def line_mask(self, lid: int) -> int:
        return self._line_masks[lid]

    def meet_lines(self, l1: int, l2: int) -> int | None:
        """Index of the common point of two distinct lines, or None if skew."""
        m = self._line_masks[l1] & self._line_masks[l2]
        if not m or l1 == l2:
            return None
        return m.bit_length() - 1

    def collinear(self, i: int, j: int, k: int) -> bool:
        return i == j or bool(self._line_masks[self.join(i, j)] >> k & 1)

    def rank(self, indices: Iterable[int]) -> int:
        return len(rref([self.coords[i] for i in indices], self.field))


@lru_cache(maxsize=None)
def _cached_space(field: Field, n: int) -> ProjectiveSpace:
    return ProjectiveSpace(field, n)


def projective_space(field, n: int) -> ProjectiveSpace:
    """Shared PG(n, q); ``field`` may be a Field, an order, a FieldSpec or a spec string."""
    if not isinstance(field, Field):
        field = make_field(field)
    return _cached_space(field, n)


@dataclass(frozen=True)
class ProjPoint:
    space: ProjectiveSpace
    coords: Vector
    index: int

    def __hash__(self) -> int:
        return hash((self.space._hash, self.index))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ProjPoint)
            and self.index == other.index
            and self.space == other.space
        )

    def __lt__(self, other: ProjPoint) -> bool:
        return self.index < other.index

    def __repr__(self) -> str:
        return f"ProjPoint({self})"

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.coords)


@dataclass(frozen=True)
class Subspace:
    """A flat given by a reduced row-echelon basis (no zero rows)."""

    space: ProjectiveSpace
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @cached_property
    def points(self) -> tuple[ProjPoint, ...]:
        F, space = self.field, self.space
        A, M = F.add_table, F.mul_table
        seen = set()
        for coeffs in itertools.product(range(self.space.q), repeat=len(self.basis)):
            if not any(coeffs):
                continue
            v = [0] * (space.n + 1)
            for c, row in zip(coeffs, self.basis):
                if c:
                    mc = M[c]
                    v = [A[x][mc[y]] for x, y in zip(v, row)]
            seen.add(space.index_of[normalize_vector(v, F)])
        return tuple(space.points[i] for i in sorted(seen))

    @cached_property
    def point_mask(self) -> int:
        m = 0
        for P in self.points:
            m |= 1 << P.index
        return m

    @property
    def field(self) -> Field:
        return self.space.field

    def __contains__(self, P: ProjPoint) -> bool:
        return incident(P, self)

    def __str__(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.basis)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.basis]


def normalize_point(space: ProjectiveSpace, raw: Sequence[int]) -> ProjPoint:
    return space.normalize(raw)


def _as_rows(items: Iterable[ProjPoint | Subspace]) -> tuple[ProjectiveSpace, list[Vector]]:
    space = None
    rows: list[Vector] = []
    for it in items:
        if space is None:
            space = it.space
        elif it.space != space:
            raise MixedSpaces(f"{it.space} differs from {space}")
        rows.extend(it.basis if isinstance(it, Subspace) else (it.coords,))
    if space is None:
        raise GeometryError("span of an empty set")
    return space, rows


def span(items: Iterable[ProjPoint | Subspace]) -> Subspace:
    """Smallest flat containing all the given points and flats."""
    space, rows = _as_rows(items)
    return Subspace(space, rref(rows, space.field))


def rank(items: Iterable[ProjPoint | Subspace]) -> int:
    space, rows = _as_rows(items)
    return len(rref(rows, space.field))


def annihilator(S: Subspace) -> tuple[Vector, ...]:
    """Dual coordinates of the hyperplanes containing S."""
    return nullspace(S.basis, S.space.n + 1, S.field)


def meet(a: Subspace, b: Subspace) -> Subspace | None:
    """Intersection flat, or None when the intersection is empty."""
    if a.space != b.space:
        raise MixedSpaces(f"{a.space} differs from {b.space}")
    if a == b:
        return a
    space = a.space
    eqs = annihilator(a) + annihilator(b)
    basis = rref(nullspace(eqs, space.n + 1, space.field), space.field)
    if not basis:
        return None
    return Subspace(space, basis)


def reduce_against(v: Sequence[int], S: Subspace) -> list[int]:
    F = S.field
    A, M, neg = F.add_table, F.mul_table, F.neg_table
    v = list(v)
    for row in S.basis:
        c = next(i for i, x in enumerate(row) if x)
        if v[c]:
            f = M[neg[v[c]]]
            v = [A[x][f[y]] for x, y in zip(v, row)]
    return v


def incident(P: ProjPoint, S: Subspace) -> bool:
    if P.space != S.space:
        raise MixedSpaces(f"{P.space} differs from {S.space}")
    return not any(reduce_against(P.coords, S))


def enumerate_points(S: Subspace | ProjectiveSpace) -> tuple[ProjPoint, ...]:
    if isinstance(S, ProjectiveSpace):
        return S.points
    return S.points


def enumerate_lines(space: ProjectiveSpace) -> list[Subspace]:
    ids = set()
    N = space.point_count
    covered = [0] * N
    for i in range(N):
        for j in range(i + 1, N):
            if covered[i] >> j & 1:
                continue
            lid = space.join(i, j)
            ids.add(lid)
            m = space.line_mask(lid)
            for k in range(N):
                if m >> k & 1:
                    covered[k] |= m
    return sorted((space.line(l) for l in ids), key=lambda L: L.basis)


def hyperplane(space: ProjectiveSpace, equation: Sequence[int]) -> Subspace:
    """The hyperplane ``sum(equation[i] * x_i) = 0``."""
    if len(equation) != space.n + 1 or not any(equation):
        raise GeometryError("a hyperplane needs a nonzero equation of length n+1")
    return Subspace(space, rref(nullspace([tuple(equation)], space.n + 1, space.field), space.field))


def standard_hyperplane(space: ProjectiveSpace) -> Subspace:
    """The hyperplane at infinity: last coordinate zero."""
    return hyperplane(space, (0,) * space.n + (1,))


@dataclass(frozen=True)
class AffineChart:
    space: ProjectiveSpace
    hyperplane_at_infinity: Subspace

    @classmethod
    def standard(cls, space: ProjectiveSpace) -> AffineChart:
        return cls(space, standard_hyperplane(space))

    def __post_init__(self):
        if self.hyperplane_at_infinity.dim != self.space.n - 1:
            raise GeometryError("the removed flat must be a hyperplane")

    def is_affine(self, P: ProjPoint) -> bool:
        return not self.hyperplane_at_infinity.point_mask >> P.index & 1

    def affine_coords(self, P: ProjPoint) -> Vector:
        """Coordinates scaled so the last entry is 1 (standard chart only)."""
        last = P.coords[-1]
        if not last:
            raise GeometryError(f"{P} lies at infinity")
        F = self.space.field
        s = F.inv(last)
        return tuple(F.mul(s, x) for x in P.coords)


def affine_points(chart: AffineChart) -> tuple[ProjPoint, ...]:
    m = chart.hyperplane_at_infinity.point_mask
    return tuple(P for P in chart.space.points if not m >> P.index & 1)


def embed(P: ProjPoint, target: ProjectiveSpace) -> ProjPoint:
    """Image of P under (x_0..x_n) -> (x_0..x_n, 0, ..., 0)."""
    pad = target.n - P.space.n
    if pad < 0 or target.field != P.space.field:
        raise MixedSpaces(f"cannot embed {P.space} in {target}")
    return target.points[target.index_of[P.coords + (0,) * pad]]


def coordinates_in(P: ProjPoint, S: Subspace) -> Vector:
    """Coordinates of P relative to the row-echelon basis of S.

    For the standard hyperplane at infinity this simply drops the last coordinate.
    """
    if not incident(P, S):
        raise GeometryError(f"{P} does not lie in the given flat")
    pivots = [next(c for c, x in enumerate(row) if x) for row in S.basis]
    return tuple(P.coords[c] for c in pivots)
