import dataclasses

from desconf.field import make_field
from desconf.suites import desargues_theorem_suite, identities_suite, sc_bound, sc_bounds_suite


def corrupt(F, a, b, value):
    table = [list(row) for row in F.mul_table]
    table[a][b] = table[b][a] = value
    return dataclasses.replace(F, mul_table=tuple(tuple(r) for r in table))


def test_desargues_suite_passes_on_real_fields():
    for q in (3, 4, 5, 7):
        assert desargues_theorem_suite(q, samples=500, seed=q).passed


def test_corrupted_multiplication_is_caught():
    bad = corrupt(make_field(5), 2, 3, 4)
    result = desargues_theorem_suite(bad, samples=2000)
    assert not result.passed and result.counterexample


def test_corruption_caught_without_axiom_precheck():
    bad = corrupt(make_field(5), 2, 3, 4)
    result = desargues_theorem_suite(bad, samples=2000, check_field=False)
    assert not result.passed and result.counterexample["q"] == 5


def test_sc_bound_by_characteristic():
    assert [sc_bound(p) for p in (2, 3, 5, 7)] == [3, 4, 3, 3]


def test_sc_suite_q5_through_point():
    result = sc_bounds_suite(5)
    assert result.passed and result.details["max_blockline_points"] == 4


def test_identities():
    assert identities_suite(64).passed
