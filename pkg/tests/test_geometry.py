import itertools

import pytest
from hypothesis import given, strategies as st

from desconf.geometry import (
    AffineChart,
    GeometryError,
    MixedSpaces,
    ZeroVector,
    affine_points,
    coordinates_in,
    embed,
    enumerate_lines,
    enumerate_points,
    hyperplane,
    incident,
    meet,
    projective_space,
    rank,
    span,
    standard_hyperplane,
)


def pg(q, n):
    return projective_space(q, n)


def test_normalize_examples():
    P3 = pg(3, 2)
    assert P3.normalize((0, 2, 1)).coords == (0, 1, 2)
    assert pg(5, 2).normalize((1, 4, 3)).coords == (1, 4, 3)
    with pytest.raises(ZeroVector):
        P3.normalize((0, 0, 0))


def test_scalar_multiples_normalize_together():
    space = pg(5, 2)
    F = space.field
    for v in [(1, 2, 3), (0, 3, 4), (0, 0, 2)]:
        pts = {space.normalize([F.mul(s, x) for x in v]) for s in range(1, 5)}
        assert len(pts) == 1


@pytest.mark.parametrize("q,n,count", [(3, 2, 13), (2, 3, 15), (4, 2, 21), (3, 4, 121), (5, 4, 781)])
def test_point_counts(q, n, count):
    space = pg(q, n)
    assert len(enumerate_points(space)) == count == space.point_count


def test_points_in_canonical_order():
    coords = pg(3, 2).coords
    assert list(coords) == sorted(coords)
    assert all(next(x for x in c if x) == 1 for c in coords)


@pytest.mark.parametrize("q,n,count", [(2, 2, 7), (2, 3, 35), (3, 2, 13), (3, 3, 130)])
def test_line_counts(q, n, count):
    assert len(enumerate_lines(pg(q, n))) == count


def test_line_over_gf4_has_five_points():
    space = pg(4, 2)
    line = span(space.points[:2])
    assert line.dim == 1 and len(enumerate_points(line)) == 5


def test_span_examples():
    space = pg(2, 3)
    P, Q = space.points[3], space.points[9]
    assert span([P]).dim == 0
    assert span([P, Q]).dim == 1
    frame = [space.normalize(v) for v in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 0)]]
    assert span(frame).dim == 2
    four = frame[:3] + [space.normalize((0, 0, 0, 1))]
    assert span(four) == space.whole


def test_meet_examples():
    space = pg(3, 3)
    a = hyperplane(space, (0, 0, 0, 1))
    b = hyperplane(space, (1, 0, 0, 0))
    assert meet(a, b).dim == 1
    plane = pg(3, 2)
    l1, l2 = enumerate_lines(plane)[:2]
    assert meet(l1, l2).dim == 0
    assert meet(a, a) == a


def test_skew_lines_meet_empty():
    space = pg(2, 3)
    e = [space.normalize(v) for v in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]]
    assert meet(span(e[:2]), span(e[2:])) is None


def test_incidence_examples():
    space = pg(3, 2)
    x2_zero = hyperplane(space, (0, 0, 1))
    assert incident(space.normalize((1, 0, 0)), x2_zero)
    assert not incident(space.normalize((0, 0, 1)), x2_zero)
    P, Q = space.points[2], space.points[7]
    assert incident(P, span([P, Q]))


def test_mixed_spaces():
    with pytest.raises(MixedSpaces):
        span([pg(3, 2).points[0], pg(3, 3).points[0]])


def test_affine_points():
    chart = AffineChart.standard(pg(3, 3))
    pts = affine_points(chart)
    assert len(pts) == 27
    assert not any(incident(P, chart.hyperplane_at_infinity) for P in pts)
    assert len(affine_points(AffineChart.standard(pg(2, 4)))) == 16
    assert all(chart.affine_coords(P)[-1] == 1 for P in pts)


def test_affine_chart_needs_hyperplane():
    space = pg(3, 3)
    with pytest.raises(GeometryError):
        AffineChart(space, span(space.points[:2]))


def test_embedding_and_coordinates():
    small, big = pg(3, 2), pg(3, 3)
    pi = standard_hyperplane(big)
    for P in small.points:
        E = embed(P, big)
        assert incident(E, pi)
        assert coordinates_in(E, pi) == P.coords


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_plane_axioms(q):
    space = pg(q, 2)
    lines = enumerate_lines(space)
    masks = [L.point_mask for L in lines]
    for i, j in itertools.combinations(range(space.point_count), 2):
        assert sum(1 for m in masks if m >> i & 1 and m >> j & 1) == 1
    for m1, m2 in itertools.combinations(masks, 2):
        assert bin(m1 & m2).count("1") == 1


@pytest.mark.parametrize("q,n", [(2, 3), (3, 3), (2, 4), (4, 3)])
def test_dimension_closed_forms(q, n):
    space = pg(q, n)
    assert space.point_count == (q ** (n + 1) - 1) // (q - 1)
    if n == 3 and q <= 3:
        assert len(enumerate_lines(space)) == (q**2 + 1) * (q**2 + q + 1)


spaces = st.sampled_from([(2, 3), (3, 3), (4, 2), (5, 2), (2, 4), (3, 4)])


@given(spaces, st.data())
def test_span_permutation_invariant_and_monotone(qn, data):
    space = pg(*qn)
    idx = data.draw(st.lists(st.integers(0, space.point_count - 1), min_size=1, max_size=4))
    pts = [space.points[i] for i in idx]
    perm = data.draw(st.permutations(pts))
    S = span(pts)
    assert span(perm) == S
    extra = space.points[data.draw(st.integers(0, space.point_count - 1))]
    bigger = span(pts + [extra])
    assert all(incident(P, bigger) for P in enumerate_points(S))
    assert rank(pts) == S.dim + 1


@given(spaces, st.data())
def test_meet_is_contained_and_satisfies_dimension_formula(qn, data):
    space = pg(*qn)
    draw_pts = st.lists(st.integers(0, space.point_count - 1), min_size=1, max_size=3)
    a = span(space.points[i] for i in data.draw(draw_pts))
    b = span(space.points[i] for i in data.draw(draw_pts))
    m = meet(a, b)
    lower = a.dim + b.dim - space.n
    if m is None:
        assert lower < 0
        assert not a.point_mask & b.point_mask
    else:
        assert m.dim >= lower
        assert m.point_mask == a.point_mask & b.point_mask
        assert span([a, b]).dim == a.dim + b.dim - m.dim


@given(spaces, st.data())
def test_join_table_matches_span(qn, data):
    space = pg(*qn)
    i, j = data.draw(st.lists(st.integers(0, space.point_count - 1), min_size=2, max_size=2, unique=True))
    line = span([space.points[i], space.points[j]])
    assert space.line(space.join(i, j)) == line
    assert space.line_mask(space.join(i, j)) == line.point_mask
