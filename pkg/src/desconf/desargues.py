"""Desargues configurations, 5-compressors and the label polarity.

Configuration points are labelled by pairs ``(i, j)`` and blocks by triples
``(i, j, k)`` drawn from ``{1, ..., 5}``; block ``(i, j, k)`` holds the points
``(i, j)``, ``(i, k)`` and ``(j, k)``.  A configuration built from two
triangles in perspective from ``V`` uses

    V=(1,2)  A=(1,3)  A'=(2,3)  B=(1,4)  B'=(2,4)  C=(1,5)  C'=(2,5)
    P=(3,4)  Q=(4,5)  R=(3,5)

so that the two 5-compressors above it are indexed the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .geometry import (
    GeometryError,
    ProjectiveSpace,
    ProjPoint,
    Subspace,
    annihilator,
    coordinates_in,
    embed,
    meet,
    projective_space,
    rank,
    span,
    standard_hyperplane,
)

PairLabel = tuple[int, int]
TripleLabel = tuple[int, int, int]

SYMBOLS = (1, 2, 3, 4, 5)
PAIRS: tuple[PairLabel, ...] = tuple(itertools.combinations(SYMBOLS, 2))
TRIPLES: tuple[TripleLabel, ...] = tuple(itertools.combinations(SYMBOLS, 3))
PAIR_POS = {p: i for i, p in enumerate(PAIRS)}
TRIPLE_POS = {t: i for i, t in enumerate(TRIPLES)}
# BLOCK_PAIRS[t] = positions (in PAIRS) of the three points of block TRIPLES[t]
BLOCK_PAIRS = tuple(
    tuple(PAIR_POS[p] for p in itertools.combinations(t, 2)) for t in TRIPLES
)


class ConfigurationError(ValueError):
    pass


class NotInPerspective(ConfigurationError):
    pass


class Degenerate(ConfigurationError):
    pass


class CompressorMeetsHyperplane(ConfigurationError):
    pass


class BadApexLine(ConfigurationError):
    pass


class WrongDimension(ConfigurationError):
    pass


class DesarguesViolation(AssertionError):
    """P, Q, R came out non-collinear: the field arithmetic is broken."""


def pair(i: int, j: int) -> PairLabel:
    if i == j or not {i, j} <= set(SYMBOLS):
        raise ValueError(f"bad pair label ({i}{j})")
    return (i, j) if i < j else (j, i)


def parse_label(text: str) -> PairLabel | TripleLabel:
    digits = tuple(sorted(int(c) for c in text.strip("()[] ")))
    if len(digits) == 2 and digits in PAIR_POS:
        return digits
    if len(digits) == 3 and digits in TRIPLE_POS:
        return digits
    raise ValueError(f"bad label {text!r}")


def label_str(label: Sequence[int]) -> str:
    return "".join(str(x) for x in label)


def polarity(label: PairLabel | TripleLabel) -> PairLabel | TripleLabel:
    """Complement in {1..5}: points go to blocklines and blocklines to points."""
    if tuple(sorted(label)) not in PAIR_POS and tuple(sorted(label)) not in TRIPLE_POS:
        raise ValueError(f"bad label {label!r}")
    return tuple(s for s in SYMBOLS if s not in label)


@dataclass(frozen=True)
class Triangle:
    a: ProjPoint
    b: ProjPoint
    c: ProjPoint

    def __post_init__(self):
        if rank((self.a, self.b, self.c)) != 3:
            raise Degenerate(f"triangle {self.a}, {self.b}, {self.c} is collinear")

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True, eq=False)
class DesarguesConfiguration:
    """Ten labelled points and their ten blocklines in PG(2, q) or PG(3, q).

    ``point_indices[m]`` is the point labelled ``PAIRS[m]`` and ``line_ids[t]``
    the host's line id for the blockline of ``TRIPLES[t]``.
    """

    host: ProjectiveSpace
    point_indices: tuple[int, ...]
    line_ids: tuple[int, ...]
    spatial: bool

    @property
    def points(self) -> dict[PairLabel, ProjPoint]:
        pts = self.host.points
        return {lab: pts[i] for lab, i in zip(PAIRS, self.point_indices)}

    @property
    def blocklines(self) -> dict[TripleLabel, Subspace]:
        return {t: self.host.line(l) for t, l in zip(TRIPLES, self.line_ids)}

    @property
    def blocks(self) -> dict[TripleLabel, tuple[PairLabel, PairLabel, PairLabel]]:
        return {t: tuple(itertools.combinations(t, 2)) for t in TRIPLES}

    def point(self, label: PairLabel) -> ProjPoint:
        return self.host.points[self.point_indices[PAIR_POS[label]]]

    def blockline(self, label: TripleLabel) -> Subspace:
        return self.host.line(self.line_ids[TRIPLE_POS[label]])

    @cached_property
    def label_of(self) -> dict[int, PairLabel]:
        return {i: lab for lab, i in zip(PAIRS, self.point_indices)}

    @cached_property
    def point_mask(self) -> int:
        m = 0
        for i in self.point_indices:
            m |= 1 << i
        return m

    def relabel(self, perm: Mapping[int, int]) -> DesarguesConfiguration:
        """Same points and blocks with every symbol s renamed to perm[s]."""
        idx = [0] * 10
        lids = [0] * 10
        for lab, i in zip(PAIRS, self.point_indices):
            idx[PAIR_POS[pair(perm[lab[0]], perm[lab[1]])]] = i
        for lab, l in zip(TRIPLES, self.line_ids):
            lids[TRIPLE_POS[tuple(sorted(perm[s] for s in lab))]] = l
        return DesarguesConfiguration(self.host, tuple(idx), tuple(lids), self.spatial)

    def swap_triangles(self) -> DesarguesConfiguration:
        """Exchange ABC with A'B'C' (relabel 1 <-> 2)."""
        return self.relabel({1: 2, 2: 1, 3: 3, 4: 4, 5: 5})

    def __repr__(self) -> str:
        body = " ".join(f"{label_str(l)}:{p}" for l, p in self.points.items())
        return f"<Desargues {self.host} {body}>"


def build_configuration(host: ProjectiveSpace, point_indices: Sequence[int]) -> DesarguesConfiguration:
    """Validate ten labelled point indices (ordered as PAIRS) as a configuration.

    Raises Degenerate on repeated points or repeated blocklines and
    ConfigurationError when some block is not collinear.
    """
    idx = tuple(point_indices)
    if len(set(idx)) != 10:
        raise Degenerate("the ten points are not distinct")
    lids = []
    for a, b, c in BLOCK_PAIRS:
        l = host.join(idx[a], idx[b])
        if not host.line_mask(l) >> idx[c] & 1:
            raise ConfigurationError("a block is not collinear")
        lids.append(l)
    if len(set(lids)) != 10:
        raise Degenerate("the ten blocklines are not distinct")
    spatial = host.n >= 3 and host.rank(idx) == 4
    return DesarguesConfiguration(host, idx, tuple(lids), spatial)


def configuration_from_points(points: Mapping[PairLabel, ProjPoint]) -> DesarguesConfiguration:
    if set(points) != set(PAIRS):
        raise ConfigurationError("need exactly the ten pair labels")
    host = next(iter(points.values())).space
    return build_configuration(host, [points[p].index for p in PAIRS])


# positions in PAIRS of V, A, A', B, B', C, C', P, Q, R
_V, _A, _A2, _B, _B2, _C, _C2, _P, _Q, _R = (
    PAIR_POS[p] for p in [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5), (3, 4), (4, 5), (3, 5)]
)


def perspective_indices(
    host: ProjectiveSpace, v: int, a: int, b: int, c: int, a2: int, b2: int, c2: int
) -> DesarguesConfiguration:
    """Index-level core of :func:`perspective_config` (no triangle checks)."""
    if len({v, a, b, c, a2, b2, c2}) != 7:
        raise Degenerate("vertex and triangle vertices must be distinct")
    for x, y in ((a, a2), (b, b2), (c, c2)):
        if not host.collinear(v, x, y):
            raise NotInPerspective(f"line through points {x} and {y} misses the vertex")
    meet_points = []
    for (x, y), (x2, y2) in (((a, b), (a2, b2)), ((b, c), (b2, c2)), ((c, a), (c2, a2))):
        l1, l2 = host.join(x, y), host.join(x2, y2)
        if l1 == l2:
            raise Degenerate("corresponding sides coincide")
        m = host.meet_lines(l1, l2)
        if m is None:
            raise Degenerate("corresponding sides do not meet")
        meet_points.append(m)
    p, q, r = meet_points
    idx = [0] * 10
    for pos, val in ((_V, v), (_A, a), (_A2, a2), (_B, b), (_B2, b2), (_C, c), (_C2, c2), (_P, p), (_Q, q), (_R, r)):
        idx[pos] = val
    if len(set(idx)) != 10:
        raise Degenerate("the ten points are not distinct")
    if not host.collinear(p, q, r):
        raise DesarguesViolation(f"P, Q, R not collinear in {host}")
    return build_configuration(host, idx)


def perspective_config(V: ProjPoint, t1: Triangle, t2: Triangle) -> DesarguesConfiguration:
    """The configuration of triangles ``t1 = ABC`` and ``t2 = A'B'C'`` in perspective from V."""
    host = V.space
    pts = [V, *t1, *t2]
    if any(P.space != host for P in pts):
        raise GeometryError("points from different spaces")
    return perspective_indices(host, *(P.index for P in pts))


def perspective_triangles(D: DesarguesConfiguration, vertex: PairLabel) -> tuple[tuple[PairLabel, ...], tuple[PairLabel, ...]]:
    """Labels of the two triangles in perspective from ``vertex``.

    For vertex (i, j) these are (i,k) and (j,k) for the three k outside {i, j}.
    """
    i, j = vertex
    ks = [k for k in SYMBOLS if k not in vertex]
    return tuple(pair(i, k) for k in ks), tuple(pair(j, k) for k in ks)


# -- 5-compressors ------------------------------------------------------------


def is_five_compressor(pts: Sequence[ProjPoint]) -> bool:
    if len(pts) != 5:
        raise ValueError("need exactly five points")
    n = pts[0].space.n
    if n not in (3, 4):
        raise WrongDimension(f"5-compressors live in PG(3,q) or PG(4,q), not dimension {n}")
    if len(set(pts)) != 5:
        return False
    return all(rank(four) == 4 for four in itertools.combinations(pts, 4))


def is_five_arc(pts: Sequence[ProjPoint]) -> bool:
    if pts[0].space.n != 4:
        raise WrongDimension("5-arcs live in PG(4,q)")
    return is_five_compressor(pts) and rank(pts) == 5


@dataclass(frozen=True, eq=False)
class FiveCompressor:
    """Five points, no four coplanar.  Order matters only for labelling."""

    points: tuple[ProjPoint, ...]

    def __post_init__(self):
        if not is_five_compressor(self.points):
            raise ConfigurationError("four of the five points are coplanar")

    @property
    def space(self) -> ProjectiveSpace:
        return self.points[0].space

    @cached_property
    def arc(self) -> bool:
        return self.space.n == 4 and rank(self.points) == 5

    @property
    def point_set(self) -> frozenset[ProjPoint]:
        return frozenset(self.points)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiveCompressor) and self.point_set == other.point_set

    def __hash__(self) -> int:
        return hash(self.point_set)

    def __repr__(self) -> str:
        return "FiveCompressor(" + "; ".join(str(P) for P in self.points) + ")"

    def to_json(self) -> dict:
        return {
            "q": self.space.q,
            "n": self.space.n,
            "field": str(self.space.field.spec),
            "points": [str(P) for P in self.points],
            "arc": self.arc,
        }


def section_compressor(S: FiveCompressor, pi: Subspace | None = None) -> DesarguesConfiguration:
    """Section of S by the hyperplane ``pi`` (default: last coordinate zero).

    The result lives in PG(n-1, q) via coordinates relative to the row-echelon
    basis of ``pi``; for the default hyperplane that means dropping the last
    coordinate.  Point (ij) is line P_iP_j meet pi and blockline [ijk] is the
    plane <P_i, P_j, P_k> meet pi.
    """
    space = S.space
    if pi is None:
        pi = standard_hyperplane(space)
    if pi.space != space or pi.dim != space.n - 1:
        raise GeometryError("pi must be a hyperplane of the compressor's space")
    if any(pi.point_mask >> P.index & 1 for P in S.points):
        raise CompressorMeetsHyperplane("a compressor point lies on the hyperplane")
    F = space.field
    A, M, neg = F.add_table, F.mul_table, F.neg_table
    (h,) = annihilator(pi)

    def dot(v):
        s = 0
        for x, y in zip(h, v):
            s = A[s][M[x][y]]
        return s

    target = projective_space(F, space.n - 1)
    idx = []
    for i, j in PAIRS:
        u, v = S.points[i - 1].coords, S.points[j - 1].coords
        # (h.v) u - (h.u) v lies on the line and on pi
        hv, hu = M[dot(v)], M[neg[dot(u)]]
        w = [A[hv[x]][hu[y]] for x, y in zip(u, v)]
        P = space.normalize(w)
        idx.append(target.normalize(coordinates_in(P, pi)).index)
    D = build_configuration(target, idx)
    for t, lid in zip(TRIPLES, D.line_ids):
        plane = span(S.points[s - 1] for s in t)
        line = meet(plane, pi)
        image = span(target.normalize(coordinates_in(P, pi)) for P in line.points)
        assert image == target.line(lid), "blockline disagrees with plane section"
    return D


def lift_to_compressors(
    D: DesarguesConfiguration, vertex: PairLabel, P1: ProjPoint, P2: ProjPoint
) -> tuple[FiveCompressor, FiveCompressor]:
    """The two 5-compressors through P1, P2 whose standard section is D.

    D lives in PG(n, q), identified with the hyperplane x_{n+1} = 0 of the
    PG(n+1, q) holding P1 and P2; the line P1P2 must pass through the point
    labelled ``vertex``.  The returned compressors are ordered so that
    ``section_compressor`` reproduces D's labels exactly.
    """
    host = D.host
    big = P1.space
    if big != P2.space or big.n != host.n + 1 or big.field != host.field:
        raise GeometryError(f"apex points must lie in PG({host.n + 1},{host.q})")
    pi = standard_hyperplane(big)
    if P1 == P2 or any(pi.point_mask >> P.index & 1 for P in (P1, P2)):
        raise BadApexLine("apex points must be distinct and off the hyperplane")
    i, j = vertex
    v = embed(D.point(vertex), big)
    if not big.collinear(P1.index, P2.index, v.index):
        raise BadApexLine(f"P1, P2 and ({i}{j}) are not collinear")
    first: list[ProjPoint | None] = [None] * 5
    second: list[ProjPoint | None] = [None] * 5
    first[i - 1], first[j - 1] = P1, P2
    second[i - 1], second[j - 1] = P2, P1
    for k in SYMBOLS:
        if k in vertex:
            continue
        a = embed(D.point(pair(i, k)), big).index
        a2 = embed(D.point(pair(j, k)), big).index
        x = big.meet_lines(big.join(P1.index, a), big.join(P2.index, a2))
        y = big.meet_lines(big.join(P1.index, a2), big.join(P2.index, a))
        first[k - 1] = big.points[x]
        second[k - 1] = big.points[y]
    return FiveCompressor(tuple(first)), FiveCompressor(tuple(second))


# -- polarity, SC points, blockline structure --------------------------------


def self_conjugate_points(D: DesarguesConfiguration) -> set[PairLabel]:
    """Labels (uv) whose point lies on the blockline of the complementary triple."""
    out = set()
    for lab, i in zip(PAIRS, D.point_indices):
        lid = D.line_ids[TRIPLE_POS[polarity(lab)]]
        if D.host.line_mask(lid) >> i & 1:
            out.add(lab)
    return out


@dataclass(frozen=True)
class BlocklineStructure:
    """Points of D together with the full trace of each blockline on them."""

    points: tuple[ProjPoint, ...]
    subsets: dict[TripleLabel, frozenset[PairLabel]]
    labels: dict[PairLabel, ProjPoint]

    def point_subsets(self) -> list[frozenset[ProjPoint]]:
        return [frozenset(self.labels[l] for l in s) for s in self.subsets.values()]

    def key(self) -> tuple:
        """Label-free identity: point set and the set of subsets."""
        return (
            tuple(sorted(P.index for P in self.points)),
            tuple(sorted(tuple(sorted(self.labels[l].index for l in s)) for s in self.subsets.values())),
        )


def blockline_structure(D: DesarguesConfiguration) -> BlocklineStructure:
    labels = D.label_of
    subsets = {}
    for t, lid in zip(TRIPLES, D.line_ids):
        on = D.host.line_mask(lid) & D.point_mask
        subsets[t] = frozenset(labels[i] for i in range(on.bit_length()) if on >> i & 1)
    return BlocklineStructure(tuple(D.points.values()), subsets, D.points)


def canonical_key(D: DesarguesConfiguration) -> tuple:
    """(sorted point indices, sorted blocks as sorted index triples)."""
    idx = D.point_indices
    blocks = sorted(tuple(sorted(idx[m] for m in bp)) for bp in BLOCK_PAIRS)
    return (tuple(sorted(idx)), tuple(blocks))


# -- JSON ---------------------------------------------------------------------


def config_to_json(D: DesarguesConfiguration) -> dict:
    return {
        "q": D.host.q,
        "n": D.host.n,
        "field": str(D.host.field.spec),
        "points": {label_str(l): str(P) for l, P in D.points.items()},
        "blocks": [[label_str(p) for p in itertools.combinations(t, 2)] for t in TRIPLES],
        "blocklines": {label_str(t): L.to_json() for t, L in D.blocklines.items()},
        "self_conjugate": [label_str(l) for l in sorted(self_conjugate_points(D))],
        "spatial": D.spatial,
    }


def config_from_json(doc: Mapping) -> DesarguesConfiguration:
    host = projective_space(doc.get("field", doc["q"]), int(doc["n"]))
    points = {parse_label(k): host.parse_point(v) for k, v in doc["points"].items()}
    return configuration_from_points(points)
