"""Closed-form counts and the brute-force oracles that must reproduce them.

The oracles never touch the formulas: they enumerate 5-compressors, 5-arcs
and Desargues configurations directly and validate every candidate with the
geometry and desargues modules.
"""

from __future__ import annotations

import enum
import itertools
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Iterator

from .desargues import (
    PAIRS,
    TRIPLE_POS,
    ConfigurationError,
    DesarguesConfiguration,
    FiveCompressor,
    blockline_structure,
    canonical_key,
    is_five_compressor,
    perspective_indices,
    polarity,
    self_conjugate_points,
)
from .field import InvalidOrder, prime_power
from .geometry import AffineChart, ProjectiveSpace, ProjPoint, affine_points, projective_space, span


class ScaleLimit(ValueError):
    pass


class Quantity(str, enum.Enum):
    P5_CHOICES = "P5_CHOICES"
    THETA_PLANAR = "THETA_PLANAR"
    TOTAL_PLANAR = "TOTAL_PLANAR"
    THETA_SPATIAL = "THETA_SPATIAL"
    TOTAL_SPATIAL = "TOTAL_SPATIAL"
    SPATIAL_THROUGH_POINT = "SPATIAL_THROUGH_POINT"
    NAIVE_PLANAR_THROUGH_POINT = "NAIVE_PLANAR_THROUGH_POINT"


@dataclass
class ScaleLimits:
    """Largest q each exhaustive mode accepts."""

    planar_global: int = 4
    planar_through: int = 5
    spatial_global: int = 2
    spatial_through: int = 3
    compressors: int = 4
    arcs: int = 3
    p5_choices: int = 9

    @classmethod
    def from_file(cls, path: str) -> ScaleLimits:
        """Read ``key=value`` lines; blank lines and ``#`` comments are skipped."""
        limits = cls()
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, value = line.partition("=")
                key = key.strip()
                if not hasattr(limits, key):
                    raise ValueError(f"unknown scale limit {key!r}")
                setattr(limits, key, int(value))
        return limits

    def check(self, name: str, q: int) -> None:
        limit = getattr(self, name)
        if q > limit:
            raise ScaleLimit(f"{name} oracle is limited to q <= {limit}, got q={q}")


DEFAULT_LIMITS = ScaleLimits()


# -- closed forms -------------------------------------------------------------


def _order(q: int) -> int:
    prime_power(q)
    return q


def _exact(num: int, den: int) -> int:
    quo, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return quo


def count_p5_choices(q: int) -> int:
    """Affine points completing four points in general position to a 5-compressor."""
    q = _order(q)
    # four planes, six pairwise lines, four triple points, no common point
    union = 4 * q**2 - 6 * q + 4
    return q**3 - union


def theta_planar(q: int) -> int:
    q = _order(q)
    return _exact((q**3 - q) * (q**3 - q**2) * (q - 2) * (q**2 - 2 * q + 2), 6)


def total_planar(q: int) -> int:
    q = _order(q)
    return _exact(q**3 * (q**3 - 1) * (q**2 - 1) * (q - 2) * (q**2 - 2 * q + 2), 120)


def theta_spatial(q: int) -> int:
    q = _order(q)
    return _exact((q**4 - q) * (q**4 - q**2) * (q**4 - q**3), 6)


def total_spatial(q: int) -> int:
    q = _order(q)
    return _exact((q**3 + q**2 + q + 1) * (q**4 - q) * (q**4 - q**2) * (q**4 - q**3), 120)


def spatial_through_point_direct(q: int) -> int:
    """Count by choosing three non-coplanar lines through the point, then point pairs."""
    q = _order(q)
    lines = (q**2 + q + 1) * (q**2 + q) * q**2
    return _exact(lines * comb(q, 2) ** 3 * 4, 6)


def naive_planar_through_point(q: int) -> int:
    """The plausible-looking plane-only count through a point.

    It is wrong for q >= 3: subtracting a fixed number of forbidden positions
    for C and C' ignores the cases where a chosen point is self-conjugate.
    """
    q = _order(q)
    return comb(q + 1, 3) * comb(q, 2) ** 2 * 2 * (q - 1) * (q - 2)


CLOSED_FORMS: dict[Quantity, Callable[[int], int]] = {
    Quantity.P5_CHOICES: count_p5_choices,
    Quantity.THETA_PLANAR: theta_planar,
    Quantity.TOTAL_PLANAR: total_planar,
    Quantity.THETA_SPATIAL: theta_spatial,
    Quantity.TOTAL_SPATIAL: total_spatial,
    Quantity.SPATIAL_THROUGH_POINT: spatial_through_point_direct,
    Quantity.NAIVE_PLANAR_THROUGH_POINT: naive_planar_through_point,
}


def prime_powers(upto: int) -> list[int]:
    out = []
    for q in range(2, upto + 1):
        try:
            prime_power(q)
        except InvalidOrder:
            continue
        out.append(q)
    return out


# -- parallel helper ------------------------------------------------------------


def _run(func, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


# -- compressor oracles ---------------------------------------------------------


def standard_frame(space: ProjectiveSpace) -> list[ProjPoint]:
    """Affine origin and unit points: (0,..,0,1), e_0 + e_n, ..., e_{n-1} + e_n."""
    n = space.n
    pts = [space.normalize((0,) * n + (1,))]
    for i in range(n):
        v = [0] * (n + 1)
        v[i] = v[n] = 1
        pts.append(space.normalize(v))
    return pts


def brute_force_p5_choices(q: int, limits: ScaleLimits = DEFAULT_LIMITS) -> int:
    """Affine P5 completing a fixed general-position affine P1..P4 to a 5-compressor."""
    limits.check("p5_choices", q)
    space = projective_space(q, 3)
    base = standard_frame(space)
    chart = AffineChart.standard(space)
    return sum(
        1 for P in affine_points(chart) if P not in base and is_five_compressor(base + [P])
    )


def default_apex(space: ProjectiveSpace) -> tuple[ProjPoint, ProjPoint]:
    """Two affine points: the origin and the first unit point."""
    frame = standard_frame(space)
    return frame[0], frame[1]


@dataclass
class CompressorCount:
    count: int
    compressors: list[FiveCompressor] | None = None


def brute_force_compressors(
    q: int,
    P1: ProjPoint | None = None,
    P2: ProjPoint | None = None,
    *,
    spanning: bool = False,
    dim: int | None = None,
    collect: bool = False,
    limits: ScaleLimits = DEFAULT_LIMITS,
) -> CompressorCount:
    """Unordered affine {P3, P4, P5} making {P1, ..., P5} a 5-compressor.

    The search runs in AG(dim, q) (default 3, or 4 when ``spanning``).  Every
    four-subset is tested for coplanarity; with ``spanning=True`` only 5-arcs
    (five points spanning PG(4, q)) are counted.
    """
    n = dim or (4 if spanning else 3)
    if spanning and n != 4:
        raise ValueError("5-arcs live in PG(4, q)")
    limits.check("arcs" if n == 4 else "compressors", q)
    space = projective_space(q, n)
    if P1 is None or P2 is None:
        P1, P2 = default_apex(space)
    chart = AffineChart.standard(space)
    if P1 == P2 or not (chart.is_affine(P1) and chart.is_affine(P2)):
        raise ConfigurationError("P1, P2 must be distinct affine points")
    rest = [P for P in affine_points(chart) if P != P1 and P != P2]
    line12 = space.line_mask(space.join(P1.index, P2.index))
    flat_cache: dict[frozenset, int] = {}

    def flat_mask(*pts: ProjPoint) -> int:
        key = frozenset(P.index for P in pts)
        m = flat_cache.get(key)
        if m is None:
            m = flat_cache[key] = span(pts).point_mask
        return m

    found: list[FiveCompressor] = []
    count = 0
    usable = [a for a in rest if not line12 >> a.index & 1]
    for ia, a in enumerate(usable):
        plane_a = flat_mask(P1, P2, a)
        for ib in range(ia + 1, len(usable)):
            b = usable[ib]
            if plane_a >> b.index & 1:
                continue
            if spanning:
                forbidden = flat_mask(P1, P2, a, b)
            else:
                forbidden = (
                    plane_a | flat_mask(P1, P2, b) | flat_mask(P1, a, b) | flat_mask(P2, a, b)
                )
            for c in usable[ib + 1:]:
                if forbidden >> c.index & 1:
                    continue
                count += 1
                if collect:
                    found.append(FiveCompressor((P1, P2, a, b, c)))
    return CompressorCount(count, found if collect else None)


# -- configuration oracles -----------------------------------------------------


def lines_through(space: ProjectiveSpace, v: int) -> list[tuple[int, list[int]]]:
    """(line id, other points on it) for every line through point v, sorted by id."""
    seen: dict[int, list[int]] = {}
    for x in range(space.point_count):
        if x == v:
            continue
        lid = space.join(v, x)
        seen.setdefault(lid, []).append(x)
    return sorted(seen.items())


def _triangle_choices(a, a2, b, b2, c, c2):
    # A is pinned to the first point of its pair: the swap ABC <-> A'B'C' is the same configuration
    yield (a, b, c, a2, b2, c2)
    yield (a, b, c2, a2, b2, c)
    yield (a, b2, c, a2, b, c2)
    yield (a, b2, c2, a2, b, c)


def _candidates_for_triple(space: ProjectiveSpace, v: int, triple) -> Iterator[DesarguesConfiguration]:
    (_, p1), (_, p2), (_, p3) = triple
    for a, a2 in itertools.combinations(p1, 2):
        for b, b2 in itertools.combinations(p2, 2):
            for c, c2 in itertools.combinations(p3, 2):
                for tri in _triangle_choices(a, a2, b, b2, c, c2):
                    A, B, C, A2, B2, C2 = tri
                    try:
                        yield perspective_indices(space, v, A, B, C, A2, B2, C2)
                    except ConfigurationError:
                        continue


def line_triples(space: ProjectiveSpace, v: int, spatial: bool) -> list:
    """Unordered triples of lines through v: coplanar (PG(2,q)) or spanning (PG(3,q))."""
    lines = lines_through(space, v)
    out = []
    for triple in itertools.combinations(lines, 3):
        if spatial and space.rank([v] + [pts[0] for _, pts in triple]) != 4:
            continue
        out.append(triple)
    return out


def iter_configs_through(space: ProjectiveSpace, v: int, spatial: bool = False) -> Iterator[DesarguesConfiguration]:
    """Every valid configuration with vertex v, built from the search skeleton.

    In PG(2, q) (``spatial=False``) all configurations through v; in PG(3, q)
    with ``spatial=True`` the spatial ones.
    """
    for triple in line_triples(space, v, spatial):
        for D in _candidates_for_triple(space, v, triple):
            if D.spatial == spatial:
                yield D


def _keys_for_triples(args) -> set:
    spec, n, v, triples, spatial = args
    space = projective_space(spec, n)
    keys = set()
    for triple in triples:
        for D in _candidates_for_triple(space, v, triple):
            if D.spatial == spatial:
                keys.add(canonical_key(D))
    return keys


def _keys_through(space: ProjectiveSpace, v: int, spatial: bool, jobs: int) -> set:
    spec = str(space.field.spec)
    triples = line_triples(space, v, spatial)
    if jobs <= 1:
        return _keys_for_triples((spec, space.n, v, triples, spatial))
    chunks = [triples[i::jobs * 4] for i in range(jobs * 4)]
    parts = _run(_keys_for_triples, [(spec, space.n, v, c, spatial) for c in chunks if c], jobs)
    return set().union(*parts)


def _keys_through_task(args) -> set:
    spec, n, v, spatial = args
    return _keys_through(projective_space(spec, n), v, spatial, 1)


@dataclass
class OracleResult:
    count: int
    keys: set | None = None


def _global_keys(space: ProjectiveSpace, spatial: bool, jobs: int) -> set:
    spec = str(space.field.spec)
    tasks = [(spec, space.n, v, spatial) for v in range(space.point_count)]
    keys: set = set()
    for part in _run(_keys_through_task, tasks, jobs):
        keys |= part
    return keys


def _resolve_point(space: ProjectiveSpace, through) -> int:
    if isinstance(through, ProjPoint):
        if through.space != space:
            raise ConfigurationError(f"{through} is not a point of {space}")
        return through.index
    return int(through)


def brute_force_planar_configs(
    q: int, through: ProjPoint | int | None = None, *, jobs: int = 1, limits: ScaleLimits = DEFAULT_LIMITS
) -> OracleResult:
    """Configurations of PG(2, q), deduplicated by canonical key.

    With ``through`` set, only those containing that point.
    """
    plane = projective_space(q, 2)
    if through is None:
        limits.check("planar_global", q)
        keys = _global_keys(plane, False, jobs)
    else:
        limits.check("planar_through", q)
        keys = _keys_through(plane, _resolve_point(plane, through), False, jobs)
    return OracleResult(len(keys), keys)


def brute_force_spatial_configs(
    q: int, through: ProjPoint | int | None = None, *, jobs: int = 1, limits: ScaleLimits = DEFAULT_LIMITS
) -> OracleResult:
    """Spatial configurations of PG(3, q), deduplicated by canonical key."""
    space = projective_space(q, 3)
    if through is None:
        limits.check("spatial_global", q)
        keys = _global_keys(space, True, jobs)
    else:
        limits.check("spatial_through", q)
        keys = _keys_through(space, _resolve_point(space, through), True, jobs)
    return OracleResult(len(keys), keys)


# -- blockline injectivity ------------------------------------------------------


@dataclass
class InjectivityReport:
    q: int
    through: int
    configurations: int
    groups: int
    blockline_structures: int
    collisions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.collisions and self.blockline_structures == self.configurations

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "through": self.through,
            "configurations": self.configurations,
            "groups": self.groups,
            "blockline_structures": self.blockline_structures,
            "collisions": self.collisions[:10],
            "ok": self.ok,
        }


def blockline_injectivity_check(
    q: int, through: ProjPoint | int = 0, *, limits: ScaleLimits = DEFAULT_LIMITS
) -> InjectivityReport:
    """Group configurations through a point by (point set, blockline set).

    A group holding two different block sets would be two configurations with
    the same points and blocklines.  Also counts distinct blockline structures.
    """
    if q < 3:
        raise ScaleLimit("no planar configurations exist for q < 3")
    limits.check("planar_through", q)
    plane = projective_space(q, 2)
    v = _resolve_point(plane, through)
    groups: dict[tuple, set] = defaultdict(set)
    structures = set()
    n = 0
    for D in iter_configs_through(plane, v):
        n += 1
        pts, blocks = canonical_key(D)
        groups[(pts, tuple(sorted(D.line_ids)))].add(blocks)
        structures.add(blockline_structure(D).key())
    collisions = [
        {"points": list(k[0]), "block_sets": [list(map(list, b)) for b in sorted(v)]}
        for k, v in groups.items()
        if len(v) > 1
    ]
    return InjectivityReport(q, v, n, len(groups), len(structures), collisions)


# -- per-configuration invariants -----------------------------------------------


@dataclass
class Census:
    """Invariant tallies over a stream of configurations."""

    configurations: int = 0
    max_blockline_points: int = 0
    sc_histogram: Counter = field(default_factory=Counter)
    pole_violations: list = field(default_factory=list)
    sc_pair_violations: list = field(default_factory=list)
    bound_violations: list = field(default_factory=list)

    def add(self, D: DesarguesConfiguration) -> None:
        self.configurations += 1
        structure = blockline_structure(D)
        sc = self_conjugate_points(D)
        self.sc_histogram[len(sc)] += 1
        extras = set()
        for t, subset in structure.subsets.items():
            self.max_blockline_points = max(self.max_blockline_points, len(subset))
            if len(subset) > 4:
                self.bound_violations.append(canonical_key(D))
            extra = subset - set(itertools.combinations(t, 2))
            if extra and extra != {polarity(t)}:
                self.pole_violations.append(canonical_key(D))
            extras |= extra
        if extras != sc:
            self.pole_violations.append(canonical_key(D))
        for x, y in itertools.combinations(sorted(sc), 2):
            if not set(x) & set(y):
                self.sc_pair_violations.append(canonical_key(D))

    def extend(self, configs: Iterable[DesarguesConfiguration]) -> Census:
        for D in configs:
            self.add(D)
        return self

    def merge(self, other: Census) -> Census:
        self.configurations += other.configurations
        self.max_blockline_points = max(self.max_blockline_points, other.max_blockline_points)
        self.sc_histogram.update(other.sc_histogram)
        self.pole_violations += other.pole_violations
        self.sc_pair_violations += other.sc_pair_violations
        self.bound_violations += other.bound_violations
        return self

    @property
    def max_sc(self) -> int:
        return max(self.sc_histogram, default=0)

    def to_json(self) -> dict:
        return {
            "configurations": self.configurations,
            "max_blockline_points": self.max_blockline_points,
            "sc_histogram": {str(k): v for k, v in sorted(self.sc_histogram.items())},
            "pole_violations": len(self.pole_violations),
            "sc_pair_violations": len(self.sc_pair_violations),
            "bound_violations": len(self.bound_violations),
        }


def _census_task(args) -> Census:
    spec, n, v, spatial = args
    space = projective_space(spec, n)
    census = Census()
    seen = set()
    for D in iter_configs_through(space, v, spatial):
        # each configuration is tallied only at its lowest point
        if min(D.point_indices) != v:
            continue
        key = canonical_key(D)
        if key not in seen:
            seen.add(key)
            census.add(D)
    return census


def global_census(
    q: int, *, spatial: bool = False, jobs: int = 1, limits: ScaleLimits = DEFAULT_LIMITS
) -> Census:
    """Census over every configuration of PG(2, q), or every spatial one of PG(3, q)."""
    limits.check("spatial_global" if spatial else "planar_global", q)
    space = projective_space(q, 3 if spatial else 2)
    spec = str(space.field.spec)
    tasks = [(spec, space.n, v, spatial) for v in range(space.point_count)]
    census = Census()
    for part in _run(_census_task, tasks, jobs):
        census.merge(part)
    return census


# -- reports ---------------------------------------------------------------------


@dataclass
class CountReport:
    quantity: Quantity
    q: int
    closed_form: int
    brute_force: int | None = None
    elapsed_ms: float | None = None

    @property
    def agree(self) -> bool | None:
        if self.brute_force is None:
            return None
        return self.brute_force == self.closed_form

    def to_json(self, timing: bool = True) -> dict:
        doc = {
            "quantity": self.quantity.value,
            "q": self.q,
            "closed_form": str(self.closed_form),
            "brute_force": None if self.brute_force is None else str(self.brute_force),
            "agree": self.agree,
        }
        if timing:
            doc["elapsed_ms"] = None if self.elapsed_ms is None else round(self.elapsed_ms, 3)
        return doc


def count_report(quantity: Quantity | str, q: int) -> CountReport:
    quantity = Quantity(quantity)
    t0 = time.perf_counter()
    value = CLOSED_FORMS[quantity](q)
    return CountReport(quantity, q, value, None, (time.perf_counter() - t0) * 1000)


def run_oracle(
    quantity: Quantity | str,
    q: int,
    through: ProjPoint | int | None = None,
    *,
    jobs: int = 1,
    limits: ScaleLimits = DEFAULT_LIMITS,
) -> CountReport:
    """Evaluate the closed form and the matching brute-force count."""
    quantity = Quantity(quantity)
    closed = CLOSED_FORMS[quantity](q)
    t0 = time.perf_counter()
    if quantity is Quantity.P5_CHOICES:
        brute = brute_force_p5_choices(q, limits)
    elif quantity is Quantity.THETA_PLANAR:
        brute = brute_force_compressors(q, limits=limits).count
    elif quantity is Quantity.THETA_SPATIAL:
        brute = brute_force_compressors(q, spanning=True, limits=limits).count
    elif quantity is Quantity.TOTAL_PLANAR:
        brute = brute_force_planar_configs(q, jobs=jobs, limits=limits).count
    elif quantity is Quantity.NAIVE_PLANAR_THROUGH_POINT:
        brute = brute_force_planar_configs(q, 0 if through is None else through, jobs=jobs, limits=limits).count
    elif quantity is Quantity.TOTAL_SPATIAL:
        brute = brute_force_spatial_configs(q, jobs=jobs, limits=limits).count
    elif quantity is Quantity.SPATIAL_THROUGH_POINT:
        brute = brute_force_spatial_configs(q, 0 if through is None else through, jobs=jobs, limits=limits).count
    else:  # pragma: no cover
        raise ValueError(quantity)
    return CountReport(quantity, q, closed, brute, (time.perf_counter() - t0) * 1000)


# -- lift uniqueness -------------------------------------------------------------


def apex_over(point: ProjPoint) -> tuple[ProjPoint, ProjPoint]:
    """Affine P1, P2 one dimension up whose line meets the hyperplane in ``point``.

    P1 = (v, 1) and P2 = (0, ..., 0, 1).
    """
    big = projective_space(point.space.field, point.space.n + 1)
    return big.normalize(point.coords + (1,)), big.normalize((0,) * (big.n) + (1,))


@dataclass
class LiftReport:
    q: int
    spatial: bool
    configurations: int
    compressors: int
    exceptions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.exceptions and self.compressors == 2 * self.configurations

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "spatial": self.spatial,
            "configurations": self.configurations,
            "compressors": self.compressors,
            "exceptions": self.exceptions[:10],
            "ok": self.ok,
        }


def lift_uniqueness_check(
    q: int, through: ProjPoint | int = 0, *, spatial: bool = False, limits: ScaleLimits = DEFAULT_LIMITS
) -> LiftReport:
    """Exhaustive check that exactly two compressors through a fixed apex pair lie over each configuration.

    Every 5-compressor {P1, P2, X, Y, Z} with X, Y, Z affine is found by brute
    force and sectioned; the sections are grouped by canonical key.  Each
    configuration through the fixed point must own exactly two of them, equal
    to the pair built by ``lift_to_compressors``, and both must section back to
    it.  Planar mode works over PG(2, q) inside PG(3, q); spatial mode over
    PG(3, q) inside PG(4, q), where both lifts must also be 5-arcs.
    """
    from .desargues import lift_to_compressors, section_compressor

    host = projective_space(q, 3 if spatial else 2)
    v = _resolve_point(host, through)
    P1, P2 = apex_over(host.points[v])
    search = brute_force_compressors(q, P1, P2, dim=host.n + 1, collect=True, limits=limits)
    groups: dict[tuple, list[FiveCompressor]] = defaultdict(list)
    exceptions = []
    for S in search.compressors:
        D = section_compressor(S)
        if D.spatial != spatial:
            continue
        groups[canonical_key(D)].append(S)
    n_configs = 0
    used = 0
    for D in iter_configs_through(host, v, spatial):
        n_configs += 1
        key = canonical_key(D)
        found = groups.get(key, [])
        used += len(found)
        S1, S2 = lift_to_compressors(D, D.label_of[v], P1, P2)
        problems = []
        if len(found) != 2:
            problems.append(f"search found {len(found)} compressors")
        if set(found) != {S1, S2}:
            problems.append("search result differs from constructed lifts")
        for S in (S1, S2):
            if canonical_key(section_compressor(S)) != key:
                problems.append("a lift does not section back to the configuration")
            if spatial and not S.arc:
                problems.append("a lift is not a 5-arc")
        if problems:
            exceptions.append({"key": [list(key[0]), [list(b) for b in key[1]]], "problems": problems})
    compressors = sum(len(g) for g in groups.values())
    if used != compressors:
        exceptions.append({"problems": [f"{compressors - used} compressors section to configurations missed by the skeleton"]})
    return LiftReport(q, spatial, n_configs, compressors, exceptions)
