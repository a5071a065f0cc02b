import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from modelglass.filters import (
    Filter,
    FilterError,
    SetFamily,
    enumerate_ultrafilters,
    generated_filter,
    is_filter,
    is_ultrafilter,
    limit_points,
    parse_family,
    principal_point,
    to_mask,
    to_set,
)


def all_subsets(n):
    return [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)]


def test_mask_round_trip():
    assert to_mask([0, 3]) == 0b1001
    assert to_set(0b1001) == {0, 3}
    assert to_set(0) == frozenset()


def test_generated_filter_is_principal_at_three():
    f = generated_filter(SetFamily.of([{2, 3}, {3, 4}], 5))
    expected = {s for s in all_subsets(5) if 3 in s}
    assert set(f.sets()) == expected
    assert limit_points(f) == {3}
    assert f == Filter.principal(5, 3)


def test_generated_from_base():
    f = generated_filter(SetFamily.of([range(4)], 4))
    assert f.sets() == [frozenset(range(4))]


def test_disjoint_generators_rejected():
    with pytest.raises(FilterError) as info:
        generated_filter(SetFamily.of([{0}, {1}], 3))
    assert "{0} & {1} = {}" in str(info.value)


def test_principal_is_ultra():
    assert is_ultrafilter(Filter.principal(4, 2))


def test_base_alone_is_not_ultra():
    assert is_filter(SetFamily.of([range(3)], 3))
    assert not is_ultrafilter(SetFamily.of([range(3)], 3))


def test_cosingletons_are_not_a_filter():
    fam = SetFamily.of([{1, 2}, {0, 2}, {0, 1}, {0, 1, 2}], 3)
    check = is_filter(fam)
    assert not check
    assert check.condition == "intersection"


@pytest.mark.parametrize("sets, condition", [
    ([], "nonempty"),
    ([set(), {0, 1}], "empty set"),
    ([{0}], "upward"),
])
def test_filter_clause_failures(sets, condition):
    check = is_filter(SetFamily.of(sets, 2))
    assert not check and check.condition == condition


def test_ultrafilters_on_three_points_match_enumeration():
    subsets = [to_mask(s) for s in all_subsets(3)]
    found = []
    for bits in range(1 << len(subsets)):
        fam = SetFamily(3, frozenset(m for i, m in enumerate(subsets) if bits >> i & 1))
        if is_ultrafilter(fam):
            found.append(fam.members)
    listed = enumerate_ultrafilters(3)
    assert len(found) == len(listed) == 3
    assert sorted(map(sorted, found)) == sorted(sorted(u.members) for u in listed)


def test_single_point_base():
    (u,) = enumerate_ultrafilters(1)
    assert u.sets() == [frozenset({0})]


def test_enumeration_postcondition_and_cap():
    for u in enumerate_ultrafilters(6):
        assert is_filter(u) and is_ultrafilter(u)
        assert len(u) == 2 ** 5
    with pytest.raises(FilterError):
        enumerate_ultrafilters(13)


def test_limit_points_of_base_filter():
    assert limit_points(SetFamily.of([range(4)], 4)) == set(range(4))


def test_principal_point():
    assert principal_point(Filter.principal(5, 4)) == 4
    with pytest.raises(FilterError):
        principal_point(SetFamily.of([range(3)], 3))


def test_parse_family():
    fam = parse_family("{{2,3},{3,4}} over 5")
    assert fam.base_size == 5 and set(fam.sets()) == {frozenset({2, 3}), frozenset({3, 4})}
    assert parse_family("{{}} over 2").sets() == [frozenset()]
    for bad in ["{{1,2}", "{{a}} over 3", "{{5}} over 3"]:
        with pytest.raises(FilterError):
            parse_family(bad)


def test_filter_constructor_validates():
    with pytest.raises(FilterError):
        Filter(3, frozenset({to_mask({0})}))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_generated_filters(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    core = rng.sample(range(n), rng.randint(1, n))
    gens = [set(core) | set(rng.sample(range(n), rng.randint(0, n))) for _ in range(rng.randint(1, 4))]
    f = generated_filter(SetFamily.of(gens, n))
    pts = limit_points(f)
    assert pts and pts in f
    assert is_ultrafilter(f) == (len(pts) == 1)
    assert generated_filter(f) == f
    for g in gens:
        assert frozenset(g) in f
