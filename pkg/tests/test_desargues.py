import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from desconf.desargues import (
    PAIRS,
    TRIPLES,
    BadApexLine,
    CompressorMeetsHyperplane,
    ConfigurationError,
    Degenerate,
    FiveCompressor,
    NotInPerspective,
    Triangle,
    WrongDimension,
    blockline_structure,
    canonical_key,
    config_from_json,
    config_to_json,
    is_five_arc,
    is_five_compressor,
    lift_to_compressors,
    parse_label,
    perspective_config,
    perspective_indices,
    polarity,
    section_compressor,
    self_conjugate_points,
)
from desconf.enumeration import apex_over, iter_configs_through, standard_frame
from desconf.geometry import embed, hyperplane, incident, projective_space, rank, span
from desconf.suites import PerspectiveSampler


def pts(space, *vecs):
    return [space.normalize(v) for v in vecs]


def some_compressor(space):
    frame = standard_frame(space)[:4]
    for P in space.points:
        if P.coords[-1] and P not in frame and is_five_compressor(frame + [P]):
            return frame + [P]
    raise AssertionError("no completion")


def translation_config(q=5):
    plane = projective_space(q, 2)
    A, B, C = pts(plane, (0, 0, 1), (1, 0, 1), (0, 1, 1))
    A2, B2, C2 = pts(plane, (1, 1, 1), (2, 1, 1), (1, 2, 1))
    V = plane.normalize((1, 1, 0))
    return perspective_config(V, Triangle(A, B, C), Triangle(A2, B2, C2))


def test_polarity():
    assert polarity((1, 2)) == (3, 4, 5)
    assert polarity((3, 5)) == (1, 2, 4)
    for lab in PAIRS + TRIPLES:
        assert polarity(polarity(lab)) == lab


def test_translation_gives_configuration_with_vertex_self_conjugate():
    D = translation_config()
    plane = D.host
    at_infinity = hyperplane(plane, (0, 0, 1))
    P, Q, R = (D.point(l) for l in [(3, 4), (4, 5), (3, 5)])
    assert all(incident(X, at_infinity) for X in (P, Q, R))
    assert D.blockline((3, 4, 5)) == at_infinity
    assert (1, 2) in self_conjugate_points(D)


def test_perspective_pqr_collinear_example():
    plane = projective_space(7, 2)
    V = plane.normalize((0, 0, 1))
    A, B, C = pts(plane, (1, 0, 1), (0, 1, 1), (1, 1, 1))
    A2, B2, C2 = pts(plane, (2, 0, 1), (0, 3, 1), (3, 3, 1))
    D = perspective_config(V, Triangle(A, B, C), Triangle(A2, B2, C2))
    assert rank([D.point(l) for l in [(3, 4), (4, 5), (3, 5)]]) == 2
    assert len({P for P in D.points.values()}) == 10


def test_collinear_triangle_is_degenerate():
    plane = projective_space(5, 2)
    with pytest.raises(Degenerate):
        Triangle(*pts(plane, (1, 0, 0), (0, 1, 0), (1, 1, 0)))


def test_not_in_perspective():
    plane = projective_space(5, 2)
    V = plane.normalize((0, 0, 1))
    t1 = Triangle(*pts(plane, (1, 0, 1), (0, 1, 1), (1, 1, 1)))
    t2 = Triangle(*pts(plane, (2, 1, 1), (0, 3, 1), (3, 3, 1)))
    with pytest.raises(NotInPerspective):
        perspective_config(V, t1, t2)


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_sampled_perspective_pairs_satisfy_desargues(seed):
    plane = projective_space(5, 2)
    idx = PerspectiveSampler(plane, random.Random(seed)).sample()
    try:
        D = perspective_indices(plane, *idx)
    except ConfigurationError:
        return
    assert plane.collinear(*(D.point(l).index for l in [(3, 4), (4, 5), (3, 5)]))
    for t in TRIPLES:
        assert all(incident(D.point(p), D.blockline(t)) for p in itertools.combinations(t, 2))


def test_compressor_predicates():
    space = projective_space(3, 3)
    frame = some_compressor(space)
    assert is_five_compressor(frame)
    coplanar = frame[:3] + pts(space, (1, 1, 0, 1), (0, 0, 1, 1))
    assert not is_five_compressor(coplanar)
    with pytest.raises(WrongDimension):
        is_five_compressor(pts(projective_space(3, 2), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 1)))
    P4 = projective_space(2, 4)
    arc = standard_frame(P4)[:4] + [P4.normalize((1, 1, 1, 1, 1))]
    assert is_five_arc(arc)
    in_solid = pts(P4, (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (1, 1, 1, 1, 0))
    assert is_five_compressor(in_solid) and not is_five_arc(in_solid)


def test_compressor_equality_ignores_order():
    frame = some_compressor(projective_space(3, 3))
    assert FiveCompressor(tuple(frame)) == FiveCompressor(tuple(reversed(frame)))


def test_section_of_frame_in_pg3_3():
    space = projective_space(3, 3)
    S = FiveCompressor(tuple(some_compressor(space)))
    D = section_compressor(S)
    assert D.host.n == 2 and not D.spatial
    P = S.points
    for (i, j) in PAIRS:
        assert incident(embed(D.point((i, j)), space), span([P[i - 1], P[j - 1]]))


def test_section_of_arc_is_spatial():
    space = projective_space(2, 4)
    arc = pts(space, (1, 0, 0, 0, 1), (0, 1, 0, 0, 1), (0, 0, 1, 0, 1), (0, 0, 0, 1, 1), (1, 1, 1, 1, 1))
    S = FiveCompressor(tuple(arc))
    assert S.arc
    D = section_compressor(S)
    assert D.spatial and D.host.n == 3


def test_section_of_compressor_inside_a_solid_is_planar():
    space = projective_space(3, 4)
    solid = some_compressor(projective_space(3, 3))
    in_solid = FiveCompressor(tuple(space.normalize(P.coords[:3] + (0, 1)) for P in solid))
    assert not in_solid.arc
    D = section_compressor(in_solid)
    assert not D.spatial and rank(list(D.points.values())) == 3


def test_section_with_custom_hyperplane():
    space = projective_space(3, 3)
    S = FiveCompressor(tuple(pts(space, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1))))
    D = section_compressor(S, hyperplane(space, (1, 1, 1, 2)))
    assert D.host.n == 2
    with pytest.raises(CompressorMeetsHyperplane):
        section_compressor(S)


def test_lift_reproduces_configuration():
    D = translation_config(5)
    big = projective_space(5, 3)
    P1, P2 = apex_over(D.point((1, 2)))
    S1, S2 = lift_to_compressors(D, (1, 2), P1, P2)
    assert S1 != S2
    for S in (S1, S2):
        back = section_compressor(S)
        assert back.point_indices == D.point_indices
        assert back.line_ids == D.line_ids
    assert S1.space == big


def test_lift_rejects_bad_apex():
    D = translation_config(5)
    big = projective_space(5, 3)
    with pytest.raises(BadApexLine):
        lift_to_compressors(D, (1, 2), big.normalize((0, 0, 0, 1)), big.normalize((0, 1, 0, 1)))


def test_lift_and_section_in_every_vertex_position():
    D = next(iter_configs_through(projective_space(4, 2), 0))
    for vertex in PAIRS:
        for S in lift_to_compressors(D, vertex, *apex_over(D.point(vertex))):
            assert section_compressor(S).point_indices == D.point_indices


def find_with_self_conjugate(label, q=5):
    plane = projective_space(q, 2)
    for D in iter_configs_through(plane, 0):
        if label in self_conjugate_points(D):
            return D
    raise AssertionError("no such configuration")


def test_self_conjugate_35_extends_blockline_124():
    D = find_with_self_conjugate((3, 5))
    subset = blockline_structure(D).subsets[(1, 2, 4)]
    assert subset == {(1, 2), (1, 4), (2, 4), (3, 5)}


def test_sc_points_on_blocklines_are_poles():
    D = find_with_self_conjugate((3, 5))
    structure = blockline_structure(D)
    for t, subset in structure.subsets.items():
        extra = subset - set(itertools.combinations(t, 2))
        assert extra <= {polarity(t)}


def test_canonical_key_invariant_under_relabeling():
    D = translation_config(5)
    key = canonical_key(D)
    structure = blockline_structure(D).key()
    for perm in itertools.permutations(range(1, 6)):
        E = D.relabel(dict(zip(range(1, 6), perm)))
        assert canonical_key(E) == key
        assert blockline_structure(E).key() == structure
    assert canonical_key(D.swap_triangles()) == key


def test_distinct_configurations_have_distinct_keys():
    plane = projective_space(3, 2)
    configs = list(itertools.islice(iter_configs_through(plane, 0), 200))
    keys = {canonical_key(D) for D in configs}
    assert len(keys) > 1


def test_json_roundtrip():
    D = translation_config(5)
    doc = config_to_json(D)
    E = config_from_json(doc)
    assert E.point_indices == D.point_indices
    assert doc["self_conjugate"] == ["12"] or "12" in doc["self_conjugate"]
    D4 = next(iter_configs_through(projective_space(4, 2), 3))
    assert config_from_json(config_to_json(D4)).point_indices == D4.point_indices


def test_labels():
    assert parse_label("35") == (3, 5)
    assert parse_label("124") == (1, 2, 4)
    with pytest.raises(ValueError):
        parse_label("11")
