import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_part_sizes, stable_graph_family
from modelglass.graphs.graph import (
    Graph,
    GraphError,
    clique_union,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    half_graph,
    load_graph,
    parse_edge_list,
    random_graph,
)
from modelglass.graphs.halfgraph import (
    SplitError,
    check_half_graph,
    check_order_witness,
    find_half_graph,
    half_graph_oracle,
    order_property,
)
from modelglass.graphs.ramsey import (
    family_instance,
    is_clique,
    is_independent,
    max_homogeneous,
    stable_ramsey_report,
)
from modelglass.graphs.regularity import (
    NotStable,
    RegularityError,
    check_pair,
    edge_density,
    piece_budget,
    regular_pair_bruteforce,
    regular_pair_exact,
    regular_pair_sampled,
    stable_regularity,
    validate_certificate,
)
from modelglass.structures import chain
from modelglass.syntax import GRAPH_SIGNATURE, ORDER_SIGNATURE, parse_formula

HALF8 = half_graph(8)
A_SIDE, B_SIDE = range(8), range(8, 16)


# -- graphs -----------------------------------------------------------------


def test_graph_invariants():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2)])


def test_edge_list_parsing():
    g = parse_edge_list("# a path\n4\n0 1\n1 2  # middle\n2 3\n")
    assert g.n == 4 and g.edges() == [(0, 1), (1, 2), (2, 3)]
    assert parse_edge_list("0 1\n1 2").n == 3
    assert parse_edge_list(g.to_edge_list()) == g
    with pytest.raises(GraphError):
        parse_edge_list("0 x")


def test_model_text_is_a_graph():
    g = load_graph("model 3\nrel E: (0,1) (1,0)")
    assert g.edges() == [(0, 1)]
    assert Graph.from_model(g.to_model()) == g


def test_complement_and_induced():
    c5 = cycle_graph(5)
    assert c5.complement().edge_count() == 5
    assert c5.induced([0, 1, 2]).edges() == [(0, 1), (1, 2)]


# -- half-graphs ------------------------------------------------------------


def test_half_graph_of_height_eight():
    w = find_half_graph(HALF8, 8)
    assert w is not None and check_half_graph(HALF8, w)
    assert find_half_graph(HALF8, 9) is None


def test_clique_unions_need_three_parts_for_height_two():
    # a_2 must miss the clique of a_1 and b_2 and also the clique of b_1
    assert find_half_graph(clique_union([3, 3]), 2) is None
    assert find_half_graph(clique_union([2, 2, 2]), 2) is not None
    assert find_half_graph(empty_graph(6), 2) is None
    assert find_half_graph(complete_graph(6), 2) is None


@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 7) for n in range(1, 7)])
def test_complete_bipartite_has_no_2_half_graph(m, n):
    g = complete_bipartite(m, n)
    assert find_half_graph(g, 2) is None
    if m + n <= 8:
        assert not half_graph_oracle(g, 2)


def test_random_graph_has_4_half_graph():
    hits = 0
    for seed in range(5):
        w = find_half_graph(random_graph(40, 0.5, seed), 4)
        hits += w is not None and check_half_graph(random_graph(40, 0.5, seed), w)
    assert hits >= 4


def test_witness_format():
    w = find_half_graph(half_graph(2), 2)
    assert str(w) == f"a={w.a[0]},{w.a[1]} b={w.b[0]},{w.b[1]}"
    assert w.height == 2


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_search_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    g = random_graph(n, rng.random(), seed)
    for k in (1, 2, 3):
        w = find_half_graph(g, k)
        assert (w is not None) == half_graph_oracle(g, k)
        if w is not None:
            assert check_half_graph(g, w)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_order_property_agrees_on_graphs(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(2, 10), rng.random(), seed)
    phi = parse_formula("E(x, y)", GRAPH_SIGNATURE)
    for k in (2, 3):
        assert (order_property(g.to_model(), phi, "x", "y", k) is None) == (find_half_graph(g, k) is None)


def test_order_property_on_a_chain():
    m = chain(8)
    phi = parse_formula("x < y", ORDER_SIGNATURE)
    w = order_property(m, phi, "x", "y", 4)
    assert w is not None and check_order_witness(m, phi, "x", "y", w)
    assert order_property(m, phi, "x", "y", 5) is None
    # dropping distinctness lets a_i = b_i
    assert order_property(chain(5), phi, "x", "y", 5, distinct=False) is not None


def test_order_property_split_must_cover_free_variables():
    with pytest.raises(SplitError):
        order_property(chain(3), parse_formula("x < z", ORDER_SIGNATURE), "x", "y", 2)


# -- regularity -------------------------------------------------------------


def test_half_graph_pair_is_irregular():
    v = regular_pair_exact(HALF8, A_SIDE, B_SIDE, "1/4")
    assert not v.regular
    assert v.density == Fraction(7, 16)
    xs, ys = v.witness
    assert xs == (0, 1) and ys == (14, 15)
    assert abs(edge_density(HALF8, xs, ys) - v.density) == v.deviation == Fraction(9, 16)
    assert not regular_pair_bruteforce(HALF8, A_SIDE, B_SIDE, "1/4")
    assert "irregular" in v.describe()


def test_homogeneous_pairs_are_regular():
    g = complete_bipartite(5, 5)
    assert regular_pair_exact(g, range(5), range(5, 10), "1/4").method == "homogeneous"
    assert regular_pair_sampled(g, range(5), range(5, 10), "1/4").regular


def test_regularity_input_errors():
    with pytest.raises(RegularityError):
        regular_pair_exact(HALF8, [0, 1], [1, 2], "1/4")
    with pytest.raises(RegularityError):
        regular_pair_exact(HALF8, A_SIDE, B_SIDE, 0)
    with pytest.raises(RegularityError):
        regular_pair_exact(HALF8, A_SIDE, B_SIDE, "1/4", cap=4)


def test_sampled_is_deterministic():
    g = random_graph(30, 0.5, 3)
    one = regular_pair_sampled(g, range(15), range(15, 30), "1/4", trials=50, seed=9)
    two = regular_pair_sampled(g, range(15), range(15, 30), "1/4", trials=50, seed=9)
    assert one.transcript == two.transcript and one.regular == two.regular


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_exact_matches_bruteforce(seed):
    rng = random.Random(seed)
    nx, ny = rng.randint(1, 5), rng.randint(1, 5)
    g = random_graph(nx + ny, rng.random(), seed)
    eps = Fraction(rng.randint(1, 4), 8)
    v = regular_pair_exact(g, range(nx), range(nx, nx + ny), eps)
    assert v.regular == regular_pair_bruteforce(g, range(nx), range(nx, nx + ny), eps)
    if not v.regular:
        xs, ys = v.witness
        assert abs(edge_density(g, xs, ys) - v.density) > eps


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sampling_finds_exact_violations(seed):
    rng = random.Random(seed)
    nx, ny = rng.randint(4, 12), rng.randint(4, 12)
    g = random_graph(nx + ny, rng.random(), seed)
    x, y = range(nx), range(nx, nx + ny)
    if not regular_pair_exact(g, x, y, "1/4").regular:
        assert not regular_pair_sampled(g, x, y, "1/4", trials=10_000, seed=seed).regular


def test_check_pair_switches_on_the_cap():
    g = random_graph(40, 0.5, 1)
    assert check_pair(g, range(20), range(20, 40), "1/4", exact_cap=12, trials=20).method in ("sampled",)
    assert check_pair(g, range(6), range(6, 12), "1/4").method == "exact"


def test_budget():
    assert piece_budget(Fraction(1, 4)) == 16
    assert piece_budget(Fraction(1, 2), base=3) == 9
    assert piece_budget(Fraction(2, 3)) == 3


def test_four_cliques_give_their_own_partition():
    g = clique_union([16] * 4)
    cert = stable_regularity(g, "1/4", 3)
    assert cert.passed and cert.blocks == [tuple(range(16 * i, 16 * i + 16)) for i in range(4)]
    assert all(v.density == 0 for v in cert.pairs.values())
    assert validate_certificate(g, cert) == []


def test_complete_bipartite_gives_its_sides():
    g = complete_bipartite(32, 32)
    cert = stable_regularity(g, "1/4", 3)
    assert cert.passed and cert.blocks == [tuple(range(32)), tuple(range(32, 64))]
    assert cert.pairs[0, 1].density == 1


def test_unstable_input_rejected():
    with pytest.raises(NotStable) as info:
        stable_regularity(half_graph(16), "1/4", 8)
    assert check_half_graph(half_graph(16), info.value.witness)


def test_stable_family_certificates():
    for name, sizes, g in stable_graph_family():
        assert find_half_graph(g, 3) is None, (name, sizes)
        cert = stable_regularity(g, "1/4", 3)
        assert cert.passed and not cert.irregular_pairs, (name, sizes)
        assert validate_certificate(g, cert) == []


def test_lopsided_parts_fail_honestly():
    # a single-vertex clique forces a mixed piece into every equitable partition
    g = clique_union([3, 14, 15, 1, 23])
    cert = stable_regularity(g, "1/4", 3)
    assert not cert.passed and cert.irregular_pairs
    assert any("exhausted" in note for note in cert.notes)
    assert validate_certificate(g, cert) == []


def test_validator_catches_tampering():
    g = clique_union([8, 8])
    cert = stable_regularity(g, "1/4", 3)
    cert.blocks[0], cert.blocks[1] = cert.blocks[0][:-1], cert.blocks[1] + cert.blocks[0][-1:]
    assert validate_certificate(g, cert)


def test_random_part_sizes():
    rng = random.Random(0)
    sizes = random_part_sizes(rng, 40, 5)
    assert sum(sizes) == 40 and min(sizes) >= 1


# -- homogeneous sets -------------------------------------------------------


def test_five_cycle():
    h = max_homogeneous(cycle_graph(5))
    assert (len(h.clique), len(h.independent), h.hom) == (2, 2, 2)
    assert h.clique == [0, 1] and h.independent == [0, 2]


def _brute_hom(g):
    best = 1
    for r in range(2, g.n + 1):
        for vs in itertools.combinations(range(g.n), r):
            if is_clique(g, vs) or is_independent(g, vs):
                best = r
                break
        else:
            break
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_homogeneous_matches_bruteforce(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(1, 9), rng.random(), seed)
    h = max_homogeneous(g)
    assert is_clique(g, h.clique) and is_independent(g, h.independent)
    assert h.hom == _brute_hom(g)


def test_greedy_above_cap():
    g = random_graph(20, 0.5, 0)
    h = max_homogeneous(g, cap=10)
    assert not h.exact and is_clique(g, h.clique) and is_independent(g, h.independent)


def test_ramsey_clique_family():
    rep = stable_ramsey_report("cliques", 3, [16, 32], instances=3, seed=1)
    assert not rep.skipped and len(rep.measured) == 6
    for row in rep.rows:
        assert row.hom >= math.sqrt(row.n)
        assert row.hom == max(row.parts, -(-row.n // row.parts))


def test_ramsey_is_seeded():
    a = stable_ramsey_report("multipartite", 3, [16], instances=2, seed=4)
    b = stable_ramsey_report("multipartite", 3, [16], instances=2, seed=4)
    assert a.rows == b.rows


def test_random_family_is_rejected():
    rep = stable_ramsey_report("random", 4, [32], instances=3, seed=0)
    assert len(rep.skipped) == 3 and all(r.witness is not None for r in rep.skipped)


def test_unknown_family():
    with pytest.raises(ValueError):
        family_instance("trees", 8, 0)
