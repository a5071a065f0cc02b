import itertools
import random
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from generators import FIXED_SIGNATURES, random_formula, random_model
from modelglass.engine import Evaluator, EvaluationError, TooLarge, evaluate
from modelglass.semantics import (
    UnassignedVariable,
    definable_algebra,
    eval_formula,
    eval_term,
    holds,
    is_boolean_algebra,
    same_theory_on,
    solution_set,
)
from modelglass.structures import Model, ModelError, chain, cyclic_ring, dump_model, graph_model, load_model
from modelglass.syntax import (
    GRAPH_SIGNATURE,
    ORDER_SIGNATURE,
    RING_SIGNATURE,
    And,
    Exists,
    Not,
    ShadowingWarning,
    Var,
    parse_formula,
    parse_term,
)

Z5 = cyclic_ring(5, RING_SIGNATURE)


def ring(text):
    return parse_formula(text, RING_SIGNATURE)


# -- models -----------------------------------------------------------------


def test_z5_tables():
    for a, b in itertools.product(range(5), repeat=2):
        assert Z5.apply("+", (a, b)) == (a + b) % 5
        assert Z5.apply("*", (a, b)) == (a * b) % 5


def test_model_file_round_trip():
    assert load_model(dump_model(Z5), RING_SIGNATURE) == Z5


def test_single_element_graph():
    m = load_model("model 1\nrel E:", GRAPH_SIGNATURE)
    assert m.size == 1 and not m.tuples("E")


@pytest.mark.parametrize("text, fragment", [
    ("model 2\nfun f: (0)->0 (0)->1 (1)->1", "function redefinition"),
    ("model 2\nfun f: (0)->0", "missing function value"),
    ("model 2\nrel E: (0,2)", "out of range"),
    ("model 2\nrel Q: (0)", "unknown symbol"),
    ("model 0", "nonempty"),
])
def test_model_errors(text, fragment):
    from modelglass.syntax import parse_signature

    sig = parse_signature("rel E /2; fun f /1")
    with pytest.raises(ModelError) as info:
        load_model(text, sig)
    assert fragment in str(info.value)


def test_model_comments_and_whitespace():
    m = load_model("# two points\nmodel   2\n rel E : (0 , 1)(1,0)  # symmetric\n", GRAPH_SIGNATURE)
    assert m.tuples("E") == {(0, 1), (1, 0)}


# -- evaluation -------------------------------------------------------------


def test_one_plus_one():
    assert eval_term(Z5, parse_term("1 + 1", RING_SIGNATURE), {}) == 2


def test_cube():
    assert eval_term(Z5, parse_term("x * x * x", RING_SIGNATURE), {"x": 2}) == 3


def test_constant_term():
    assert eval_term(Z5, parse_term("1", RING_SIGNATURE), {}) == 1


def test_identity_axiom_true():
    s = ring("forall x. x + 0 = x")
    assert eval_formula(Z5, s)
    assert holds(Z5, s)


def test_one_element_model():
    m = Model(GRAPH_SIGNATURE, 1)
    assert holds(m, parse_formula("forall x. exists y. x = y"))


def test_two_is_not_a_square_mod_5():
    s = ring("exists x. x * x = 2")
    assert not eval_formula(Z5, s)
    assert not holds(Z5, s)


def test_unassigned_variable():
    with pytest.raises(UnassignedVariable):
        eval_formula(Z5, ring("x = 0"), {})
    with pytest.raises(UnassignedVariable):
        eval_term(Z5, parse_term("x + 1", RING_SIGNATURE), {})
    with pytest.raises(EvaluationError):
        holds(Z5, ring("x = 0"))


# -- solution sets ----------------------------------------------------------


def test_initial_segment_of_chain():
    ds = solution_set(chain(5), parse_formula("x < 2", ORDER_SIGNATURE), ["x"])
    assert ds.extension == {(0,), (1,)}
    assert ds.parameters == (2,)


def test_reflexivity_is_everything():
    assert solution_set(chain(5), parse_formula("x = x"), ["x"]).extension == {(i,) for i in range(5)}


def test_quadratic_solution_set():
    ds = solution_set(Z5, ring("exists x. y + x*x = z"), ["y", "z"])
    assert ds.extension == {(a, b) for a in range(5) for b in range(5) if (b - a) % 5 in (0, 1, 4)}


def test_variable_order_and_extra_variables():
    ds = solution_set(chain(3), parse_formula("x < y", ORDER_SIGNATURE), ["y", "x", "z"])
    assert ds.extension == {(y, x, z) for x in range(3) for y in range(3) for z in range(3) if x < y}


def test_unlisted_free_variable_rejected():
    with pytest.raises(ValueError):
        solution_set(chain(3), parse_formula("x < y", ORDER_SIGNATURE), ["x"])


def test_split_path_matches_dense_path():
    f = ring("forall a. forall b. exists c. a * c + b = c * c + x")
    dense = evaluate(Z5, f, order=["x"])
    split = evaluate(Z5, f, order=["x"], cell_cap=30)
    assert (dense == split).all()
    expected = np.array([eval_formula(Z5, f, {"x": x}) for x in range(5)])
    assert (dense == expected).all()


def test_split_counter_increases():
    ev = Evaluator(Z5, cell_cap=30)
    ev.formula(ring("forall a. forall b. exists c. a * c + b = c"), {})
    assert ev.stats["splits"] > 0


def test_too_large_result():
    with pytest.raises(TooLarge):
        evaluate(Z5, ring("x + y = z"), cell_cap=100)


def _check_coherence(m, f):
    names = sorted(f.free_vars) or ["x"]
    ext = solution_set(m, f, names).extension
    for tup in itertools.product(m.domain, repeat=len(names)):
        assert (tup in ext) == eval_formula(m, f, dict(zip(names, tup))), (f, tup)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_membership_coherence(seed):
    rng = random.Random(seed)
    sig = rng.choice(FIXED_SIGNATURES)
    m = random_model(rng, sig, rng.randint(1, 4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShadowingWarning)
        f = random_formula(rng, sig, 4, names=("x", "y", "z"))
    _check_coherence(m, f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_boolean_identities(seed):
    rng = random.Random(seed)
    sig = rng.choice(FIXED_SIGNATURES)
    m = random_model(rng, sig, rng.randint(1, 4))
    names = ["x", "y"]
    f = random_formula(rng, sig, 3, names=names)
    g = random_formula(rng, sig, 3, names=names)
    sol = lambda h: solution_set(m, h, names).extension  # noqa: E731
    full = set(itertools.product(m.domain, repeat=2))
    assert sol(And(f, g)) == sol(f) & sol(g)
    assert sol(Not(f)) == full - sol(f)
    projected = {(y,) for (x, y) in sol(f)}
    assert solution_set(m, Exists("x", f), ["y"]).extension == projected


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cache_does_not_change_results(seed):
    rng = random.Random(seed)
    sig = rng.choice(FIXED_SIGNATURES)
    m = random_model(rng, sig, rng.randint(1, 5))
    f = random_formula(rng, sig, 5, names=("x", "y", "z"))
    names = ["x", "y", "z"]
    assert solution_set(m, f, names, cache=True).extension == solution_set(m, f, names, cache=False).extension


# -- definable sets ---------------------------------------------------------


def test_edgeless_graph_algebra_is_trivial():
    alg = definable_algebra(graph_model(3, []), [], 0, 1)
    assert sorted(map(len, alg.extensions)) == [0, 3]
    assert alg.complete


def test_chain_with_one_parameter():
    alg = definable_algebra(chain(5), [2], 0, 1)
    assert len(alg.sets) == 8
    assert sorted(sorted(c) for c in alg.cells) == [[(0,), (1,)], [(2,)], [(3,), (4,)]]


def test_witnesses_define_their_sets():
    m = chain(5)
    alg = definable_algebra(m, [2], 1, 1)
    for s in alg.sets:
        assert solution_set(m, s.formula, ["x1"]).extension == s.extension


def test_quantifiers_refine_the_algebra():
    m = chain(5)
    sizes = [len(definable_algebra(m, [], r, 1).cells) for r in range(3)]
    assert sizes == [1, 3, 5]


def test_is_boolean_algebra_examples():
    assert is_boolean_algebra([set(), {0, 1}], {0, 1})
    assert not is_boolean_algebra([set(), {0}, {0, 1}], {0, 1})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_definable_algebra_is_boolean(seed):
    rng = random.Random(seed)
    sig = rng.choice(FIXED_SIGNATURES)
    m = random_model(rng, sig, rng.randint(1, 4))
    k = rng.randint(1, 2)
    params = rng.sample(range(m.size), rng.randint(0, min(2, m.size)))
    alg = definable_algebra(m, params, rng.randint(0, 1), k, set_cap=1 << 12)
    if alg.complete:
        base = set(itertools.product(m.domain, repeat=k))
        assert is_boolean_algebra(alg.extensions, base)
    assert len(set(alg.extensions)) == len(alg.extensions)


# -- theories ---------------------------------------------------------------


def test_same_model_agrees():
    s = [ring("forall x. x + 0 = x"), ring("exists x. x * x = 2")]
    assert same_theory_on(Z5, Z5, s).agree


def test_chains_disagree():
    s = parse_formula("exists x. exists y. exists z. (x < y & y < z)", ORDER_SIGNATURE)
    report = same_theory_on(chain(2), chain(3), [s])
    assert not report.agree and report.disagreements == [s]


def test_odd_rings_halve():
    s = ring("forall x. exists y. y + y = x")
    assert same_theory_on(Z5, cyclic_ring(7, RING_SIGNATURE), [s]).agree


def test_non_sentence_rejected():
    with pytest.raises(ValueError):
        same_theory_on(Z5, Z5, [ring("x = 0")])


def test_variables_and_params_mix():
    f = parse_formula("x < 3 & exists y. (y < x & 1 < y)", ORDER_SIGNATURE)
    assert solution_set(chain(5), f, ["x"]).extension == set()
    g = parse_formula("exists y. (y < x & 0 < y)", ORDER_SIGNATURE)
    assert solution_set(chain(5), g, [Var("x").name]).extension == {(2,), (3,), (4,)}
