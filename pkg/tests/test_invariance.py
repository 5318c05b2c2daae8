import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ilw.catalog import small_actions
from ilw.invariance import (FiniteAction, FiniteSemigroup, PartialAction, ParadoxCertificate,
                            build_invariance_theory, cesaro_limit, cycle_lcm, dirac, f2_prefix_certificate,
                            f2ball, fixed_points, indicator_family, infeasibility_witness,
                            invariant_measures, is_invariant, is_multiplicative, natural_structure,
                            paradox_search, paradox_verify, period_data, pushforward, reduced_words,
                            translate, witness_norm)
from ilw.structures import satisfies_theory

T = Fraction(1, 3)
H = Fraction(1, 2)


def cyclic(n):
    els = tuple(f"g{i}" for i in range(n))
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteAction(FiniteSemigroup(els, table), tuple(f"p{i}" for i in range(n)), table)


def trivial(points):
    return FiniteAction(FiniteSemigroup(("e",), ((0,),)), tuple(points), (tuple(range(len(points))),))


def constant_maps():
    sg = FiniteSemigroup(("e", "s", "t"), ((0, 1, 2), (1, 1, 1), (2, 2, 2)))
    return FiniteAction(sg, ("p0", "p1"), ((0, 1), (0, 0), (1, 1)))


SMALL = list(small_actions(2, 3))


def test_translate_examples():
    swap = cyclic(2)
    assert translate((3, 7), "g0", swap) == (3, 7)
    assert translate((3, 7), "g1", swap) == (7, 3)
    with pytest.raises(IndexError):
        translate((1, 2, 3), 0, swap)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_translate_composition(action, data):
    n = len(action.semigroup)
    s, t = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    f = data.draw(st.lists(st.fractions(max_denominator=4), min_size=len(action), max_size=len(action)))
    st_ = action.semigroup.mul(s, t)
    # (f.s).t(x) = f(s.(t.x)) = f((st).x)
    assert translate(translate(f, s, action), t, action) == translate(f, st_, action)


def test_action_validation():
    sg = FiniteSemigroup(("e", "s"), ((0, 1), (1, 1)))
    with pytest.raises(ValueError, match="action law"):
        FiniteAction(sg, ("p0", "p1"), ((0, 1), (1, 0)))
    with pytest.raises(ValueError, match="identity"):
        FiniteAction(sg, ("p0", "p1"), ((1, 1), (1, 1)))
    with pytest.raises(ValueError, match="associative"):
        FiniteSemigroup(("a", "b"), ((1, 0), (0, 0)))


def test_trivial_semigroup_gives_uniform():
    res = invariant_measures(trivial(["a", "b", "c"]))
    assert res.feasible
    assert res.measure == (T, T, T)


def test_cyclic_group_uniform():
    res = invariant_measures(cyclic(3))
    assert res.measure == (T, T, T)


def test_constant_maps_infeasible():
    res = invariant_measures(constant_maps())
    assert not res.feasible
    assert res.dual_total < 0


def test_witness_for_constant_maps():
    action = constant_maps()
    w = infeasibility_witness(action)
    assert w.norm < 1
    assert witness_norm(action, w.pairs)[0] == w.norm
    # the hand-written witness from the indicator functions
    norm, h = witness_norm(action, [((1, 0), "s"), ((0, 1), "t")])
    assert h == (1, 1)
    assert norm == 0


def test_witness_on_feasible_action():
    with pytest.raises(ValueError, match="feasible"):
        infeasibility_witness(cyclic(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_group_actions_have_orbit_uniform_measure(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    perm = list(range(n))
    rng.shuffle(perm)
    # the cyclic group generated by one permutation
    powers = [tuple(range(n))]
    while True:
        nxt = tuple(perm[x] for x in powers[-1])
        if nxt == powers[0]:
            break
        powers.append(nxt)
    k = len(powers)
    sg = FiniteSemigroup(tuple(f"g{i}" for i in range(k)),
                         tuple(tuple((i + j) % k for j in range(k)) for i in range(k)))
    action = FiniteAction(sg, tuple(f"p{i}" for i in range(n)), tuple(powers))
    assert invariant_measures(action).feasible
    x0 = rng.randrange(n)
    orbit = {p[x0] for p in powers}
    mu = [Fraction(1, len(orbit)) if x in orbit else 0 for x in range(n)]
    assert is_invariant(action, mu)


def test_cesaro_examples():
    assert cesaro_limit([(0, 1, 2)], 1) == (0, 1, 0)
    assert cesaro_limit([(1, 2, 0)], 0) == (T, T, T)
    assert cesaro_limit([(1, 2, 1)], 0) == (0, H, H)


def test_cesaro_errors():
    with pytest.raises(ValueError, match="commute"):
        cesaro_limit([(1, 0, 2), (0, 2, 1)], 0)
    with pytest.raises(ValueError):
        cesaro_limit([], 0)
    with pytest.raises(IndexError):
        cesaro_limit([(0,)], 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=6).map(lambda v: [x % len(v) for x in v]),
       st.data())
def test_cesaro_matches_simulation(f_map, data):
    f_map = tuple(f_map)
    x0 = data.draw(st.integers(0, len(f_map) - 1))
    limit = cesaro_limit([f_map], x0)
    pre, period = period_data(f_map)
    assert period == cycle_lcm(f_map)
    assert pushforward(f_map, limit) == limit
    # partial averages converge at rate O(1/N)
    for steps in (60, 120):
        approx = oracles.cesaro_partial(f_map, x0, steps)
        assert max(abs(a - b) for a, b in zip(approx, limit)) <= Fraction(pre + period, steps)


def test_fixed_points():
    assert fixed_points(trivial(["a", "b"])) == {0, 1}
    assert fixed_points(cyclic(3)) == frozenset()
    sg = FiniteSemigroup(("e", "s"), ((0, 1), (1, 1)))
    assert fixed_points(FiniteAction(sg, ("p0", "p1", "p2"), ((0, 1, 2), (1, 1, 2)))) == {1, 2}
    sg2 = FiniteSemigroup(("e", "s"), ((0, 1), (1, 0)))
    assert fixed_points(FiniteAction(sg2, ("p0", "p1", "p2"), ((0, 1, 2), (1, 0, 2)))) == {2}


def test_multiplicative_examples():
    fam = [(1, 0), (0, 1), (3, 5)]
    assert is_multiplicative(dirac(2, 0), fam)
    assert not is_multiplicative((H, H), [(1, 0)])
    assert is_multiplicative(dirac(3, 2), indicator_family(3) + [(0, 0, 0)])
    with pytest.raises(ValueError):
        is_multiplicative((H, H), [(1, 0, 0)])


def test_invariance_theory_example():
    action = trivial(["p0", "p1"])
    theory, sig, fam = build_invariance_theory(action, {"one": (1, 1), "f": (1, 0)})
    labels = {s.label for s in theory.statements}
    assert {"axiom 1", "axiom 2", "axiom 3", "axiom 8"} <= labels
    values = {(s.formula.args[0].name, s.formula.relation): s.threshold
              for s in theory.statements if s.label == "axiom 3"}
    assert values[("c_p0", "R_f")] == 1
    assert values[("c_p1", "R_f")] == 0
    struct = natural_structure(action, sig, fam, (H, H))
    assert satisfies_theory(struct, theory).passed


def test_invariance_theory_needs_constant_one():
    with pytest.raises(ValueError, match="constant-1"):
        build_invariance_theory(trivial(["a", "b"]), {"f": (1, 0)})


def test_invariance_theory_closes_family():
    action = cyclic(3)
    theory, sig, fam = build_invariance_theory(action, {"one": (1, 1, 1), "f": (1, 0, 0)})
    assert len(fam) == 4
    assert satisfies_theory(natural_structure(action, sig, fam, (T, T, T)), theory).passed
    # a non-invariant measure breaks axiom 8
    rep = satisfies_theory(natural_structure(action, sig, fam, (H, H, 0)), theory)
    assert not rep.passed
    assert rep.failing.label == "axiom 8"


def test_multiplicative_theory_at_fixed_point():
    sg = FiniteSemigroup(("e", "s"), ((0, 1), (1, 1)))
    action = FiniteAction(sg, ("p0", "p1"), ((0, 1), (1, 1)))
    fam = {"one": (1, 1), "a": (1, 0), "b": (0, 1)}
    theory, sig, fam = build_invariance_theory(action, fam, multiplicative=True)
    assert any(s.label == "axiom 9" for s in theory.statements)
    assert satisfies_theory(natural_structure(action, sig, fam, dirac(2, 1)), theory).passed
    assert not satisfies_theory(natural_structure(action, sig, fam, (H, H)), theory).passed


def test_paradox_verify_examples():
    pa = PartialAction.from_permutations(["0", "1", "2", "3"], {"r": [1, 2, 3, 0]})
    cert = ParadoxCertificate(frozenset({0, 1, 2, 3}), ((frozenset({0, 1}), ("r",)),),
                              ((frozenset({2, 3}), ()),))
    rep = paradox_verify(pa, cert)
    assert not rep.exact
    assert rep.uncovered_1 == {0, 3}
    assert paradox_verify(pa, ParadoxCertificate(frozenset(), (), ())).exact


def test_paradox_verify_errors():
    pa = PartialAction.from_permutations(["0", "1"], {"r": [1, 0]})
    with pytest.raises(ValueError, match="disjoint"):
        paradox_verify(pa, ParadoxCertificate(frozenset({0, 1}), ((frozenset({0}), ()),), ((frozenset({0}), ()),)))
    with pytest.raises(ValueError, match="contained"):
        paradox_verify(pa, ParadoxCertificate(frozenset({0}), ((frozenset({1}), ()),)))


def test_f2_prefix_certificate():
    for n in range(1, 5):
        pa, cert = f2_prefix_certificate(n)
        assert len(pa.points) == 2 * 3 ** n - 1 == len(oracles.ball_words(n))
        rep = paradox_verify(pa, cert)
        assert len(rep.uncovered_1) == 3 ** n == oracles.prefix_cover_defect(n)
        assert rep.uncovered_2 == cert.target
        assert not rep.exact


def test_reduced_words_match_enumeration():
    assert sorted(reduced_words(3)) == sorted(oracles.ball_words(3))


def test_search_on_cyclic_group():
    pa = PartialAction.from_permutations([f"p{i}" for i in range(4)], {"r": [1, 2, 3, 0]})
    assert paradox_search(pa, range(4), 4, pa.movers(2)) is None


def test_search_limit():
    pa = f2ball(2)
    with pytest.raises(ValueError, match="exhaustive limit"):
        paradox_search(pa, range(len(pa.points)), 4)


def test_search_on_f2_ball_matches_enumeration():
    pa = f2ball(2)
    E = [i for i, w in enumerate(pa.points) if len(w) <= 1]
    movers = pa.movers(1)
    found = paradox_search(pa, E, 4, movers)
    assert (found is not None) == oracles.paradox_exists(pa.apply, E, movers, 4)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_total_injective_never_exact(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    perm = list(range(n))
    rng.shuffle(perm)
    pa = PartialAction.from_permutations([str(i) for i in range(n)], {"g": perm})
    E = [x for x in range(n) if rng.random() < 0.7] or [0]
    movers = pa.movers(2)
    a_side, b_side = {}, {}
    for x in E:
        side = rng.choice((None, a_side, b_side))
        if side is not None:
            side.setdefault(rng.choice(movers), set()).add(x)
    cert = ParadoxCertificate(frozenset(E), tuple((frozenset(p), m) for m, p in a_side.items()),
                              tuple((frozenset(p), m) for m, p in b_side.items()))
    assert not paradox_verify(pa, cert).exact
