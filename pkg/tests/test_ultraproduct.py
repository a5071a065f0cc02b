import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from generators import FIXED_SIGNATURES, random_formula, random_model
from modelglass.filters import Filter, SetFamily
from modelglass.semantics import holds
from modelglass.structures import chain, cyclic_ring, graph_model
from modelglass.syntax import GRAPH_SIGNATURE, ORDER_SIGNATURE, RING_SIGNATURE, ShadowingWarning, parse_formula
from modelglass.ultraproduct import (
    UltraproductError,
    ax_check,
    find_distinguishing,
    iso_check,
    los_check,
    ultraproduct,
)

CHAINS = [chain(2), chain(3), chain(4)]
THREE_CHAIN = parse_formula("exists x. exists y. exists z. (x < y & y < z)", ORDER_SIGNATURE)


def test_principal_ultraproduct_collapses_to_factor():
    up = ultraproduct(CHAINS, Filter.principal(3, 1))
    assert up.size == 3
    assert iso_check(up, CHAINS[1]).isomorphic
    assert not iso_check(up, CHAINS[2]).isomorphic


def test_classes_agree_on_the_ultrafilter():
    up = ultraproduct(CHAINS, Filter.principal(3, 2))
    for tup, c in up.class_of.items():
        assert tup[2] == up.representatives[c][2]
    assert all(rep == min(t for t, c in up.class_of.items() if c == i) for i, rep in enumerate(up.representatives))


def test_ultrapower_of_ring():
    z5 = cyclic_ring(5, RING_SIGNATURE)
    up = ultraproduct([z5, z5], Filter.principal(2, 0))
    res = iso_check(up, z5)
    assert res.isomorphic
    assert res.mapping == {i: i for i in range(5)}


def test_single_index():
    m = graph_model(4, [(0, 1), (1, 2)])
    assert iso_check(ultraproduct([m], Filter.principal(1, 0)), m).isomorphic


def test_random_representatives_give_the_same_quotient():
    models = [graph_model(3, [(0, 1)]), graph_model(3, [(1, 2), (0, 2)])]
    d = Filter.principal(2, 1)
    base = ultraproduct(models, d)
    for seed in range(5):
        other = ultraproduct(models, d, seed=seed)
        assert iso_check(other, base.model).isomorphic
        assert other.class_of == base.class_of


def test_collapse_flag_matches_generic():
    d = Filter.principal(3, 2)
    assert iso_check(ultraproduct(CHAINS, d, collapse=True), ultraproduct(CHAINS, d).model).isomorphic


def test_errors():
    with pytest.raises(UltraproductError):
        ultraproduct([chain(2), graph_model(2, [])], Filter.principal(2, 0))
    with pytest.raises(UltraproductError):
        ultraproduct(CHAINS, Filter.principal(2, 0))
    with pytest.raises(UltraproductError):
        ultraproduct(CHAINS, SetFamily.of([range(3)], 3))
    with pytest.raises(UltraproductError):
        ultraproduct(CHAINS, Filter.principal(3, 0), product_cap=10)
    with pytest.raises(UltraproductError):
        los_check(CHAINS, Filter.principal(3, 0), parse_formula("x < y", ORDER_SIGNATURE))


def test_los_on_chains():
    rep = los_check(CHAINS, Filter.principal(3, 2), THREE_CHAIN)
    assert rep.ultraproduct_holds and rep.large and rep.consistent
    assert rep.index_set == {1, 2}


def test_los_tautology():
    rep = los_check(CHAINS, Filter.principal(3, 0), parse_formula("forall x. x = x"))
    assert rep.ultraproduct_holds and rep.index_set == {0, 1, 2}


def test_chain_witness():
    res = iso_check(chain(2), chain(3))
    assert res.verdict == "not isomorphic"
    assert not holds(chain(2), res.witness) and holds(chain(3), res.witness)
    assert res.witness == find_distinguishing(chain(2), chain(3))


def test_edgeless_vs_complete():
    res = iso_check(graph_model(2, []), graph_model(2, [(0, 1)]))
    assert res.verdict == "not isomorphic"
    assert res.witness == parse_formula("exists x1. exists x2. E(x1, x2)", GRAPH_SIGNATURE)


def test_same_invariants_not_isomorphic():
    # a hexagon and two triangles: every vertex has degree 2
    hexagon = graph_model(6, [(i, (i + 1) % 6) for i in range(6)])
    triangles = graph_model(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    res = iso_check(hexagon, triangles)
    assert res.verdict == "not isomorphic"


def test_relabelled_edge_is_found():
    assert iso_check(graph_model(8, [(0, 1)]), graph_model(8, [(2, 3)])).isomorphic


def test_node_cap_gives_inconclusive():
    res = iso_check(graph_model(8, []), graph_model(8, []), node_cap=3)
    assert res.verdict == "inconclusive" and res.mapping is None


def _random_triple(seed):
    rng = random.Random(seed)
    sig = rng.choice(FIXED_SIGNATURES)
    count = rng.randint(1, 3)
    models = [random_model(rng, sig, rng.randint(1, 4)) for _ in range(count)]
    i0 = rng.randrange(count)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShadowingWarning)
        while True:
            s = random_formula(rng, sig, 4, names=("x", "y"))
            if not s.free_vars:
                break
    return models, Filter.principal(count, i0), i0, s


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_los_and_collapse_random(seed):
    models, d, i0, s = _random_triple(seed)
    up = ultraproduct(models, d)
    assert los_check(models, d, s, up).consistent
    assert up.size == models[i0].size
    assert iso_check(up, models[i0]).isomorphic


@pytest.mark.parametrize("n, k, p", [(1, 1, 2), (1, 1, 3), (1, 2, 3), (2, 1, 2)])
def test_ax_small(n, k, p):
    rep = ax_check(n, k, p)
    assert rep.holds
    assert rep.quantifier_rank == rep.coefficients + 2 * n


def test_ax_rejects_composite():
    with pytest.raises(ValueError):
        ax_check(1, 1, 4)
