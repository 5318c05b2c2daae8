import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ilw import generate
from ilw.logic import Signature, parse_formula
from ilw.stability import (EXACT_LADDER_LIMIT, LadderWitness, PhiMatrix, TypeVector, check_ladder,
                           is_definable_by, ladder_brute_force, ladder_index, nearest_rows,
                           phi_matrix, type_metric)
from ilw.structures import FiniteStructure

H = Fraction(1, 2)


def seeded_matrix(seed, size=6, values=3):
    return generate.matrix(random.Random(seed), size, size, values)


def test_phi_matrix_of_atom():
    sig = Signature.build({"P": (2, 1)})
    st_ = FiniteStructure.from_arrays(sig, ["p0", "p1"], [H, H], {"P": [[0, 1], [1, 0]]})
    m = phi_matrix(st_, parse_formula("P(x, y)", sig), "x", "y")
    assert m.entries == ((0, 1), (1, 0))
    assert m.bound == 1
    assert m.row_measure == (H, H)


def test_phi_matrix_integrates_third_coordinate():
    sig = Signature.build({"Q": (3, 2)})
    rng = random.Random(7)
    n = 3
    table = [[[Fraction(rng.randint(-4, 4), 2) for _ in range(n)] for _ in range(n)] for _ in range(n)]
    weights = [Fraction(1, 6), Fraction(1, 3), H]
    st_ = FiniteStructure.from_arrays(sig, ["a", "b", "c"], weights, {"Q": table})
    phi = parse_formula("int z. Q(x, y, z)", sig)
    m = phi_matrix(st_, phi, "x", "y")
    for a in range(n):
        for b in range(n):
            assert m.entries[a][b] == sum(weights[c] * table[a][b][c] for c in range(n))
    assert m.bound == phi.bound


def test_phi_matrix_needs_two_variables():
    sig = Signature.build({"P": (2, 1)})
    st_ = FiniteStructure.from_arrays(sig, ["p0"], [1], {"P": [[0]]})
    with pytest.raises(ValueError):
        phi_matrix(st_, parse_formula("int y. P(x, y)", sig), "x", "y")


def test_constant_matrix():
    m = PhiMatrix.of([[2] * 4] * 3)
    assert ladder_index(m, 3, 1)[0] == 1
    assert ladder_index(m, 2, 1)[0] == 1


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_half_graph(n):
    k, w = ladder_index(generate.half_graph(n), 1, 0)
    assert k == n
    assert check_ladder(generate.half_graph(n), w)


def test_threshold_errors():
    m = PhiMatrix.of([[0]])
    with pytest.raises(ValueError, match="r > s"):
        ladder_index(m, 0, 0)
    with pytest.raises(ValueError, match="mode"):
        ladder_index(m, 1, 0, mode="fast")
    big = generate.half_graph(EXACT_LADDER_LIMIT + 1)
    with pytest.raises(ValueError, match="lower_bound"):
        ladder_index(big, 1, 0)
    assert ladder_index(big, 1, 0, mode="lower_bound")[0] <= EXACT_LADDER_LIMIT + 1


def test_check_ladder_rejects_repeats():
    m = generate.half_graph(3)
    assert not check_ladder(m, LadderWitness(Fraction(1), Fraction(0), (1, 1), (0, 0)))
    assert check_ladder(m, LadderWitness(Fraction(1), Fraction(0), (1, 2), (0, 1)))


def test_matrix_bound_enforced():
    with pytest.raises(ValueError, match="bound"):
        PhiMatrix.of([[2]], bound=1)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3))
def test_exact_matches_oracle(seed, r):
    m = seeded_matrix(seed)
    s = r - 1
    k, w = ladder_index(m, r, s)
    assert k == oracles.ladder_oracle(m.entries, r, s)
    assert k == ladder_brute_force(m, r, s)
    assert len(w) == k and check_ladder(m, w)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_greedy_is_a_lower_bound(seed):
    m = seeded_matrix(seed)
    lo, w = ladder_index(m, 2, 1, mode="lower_bound")
    assert check_ladder(m, w)
    assert lo <= ladder_index(m, 2, 1)[0]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_wider_gap_never_increases(seed):
    m = seeded_matrix(seed)
    assert ladder_index(m, 2, 1)[0] >= ladder_index(m, 3, 1)[0]
    assert ladder_index(m, 2, 1)[0] >= ladder_index(m, 2, 0)[0]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.data())
def test_submatrix_monotone(seed, data):
    m = seeded_matrix(seed)
    n, k = m.shape
    rows = data.draw(st.lists(st.integers(0, n - 1), min_size=1, unique=True))
    cols = data.draw(st.lists(st.integers(0, k - 1), min_size=1, unique=True))
    assert ladder_index(m.submatrix(rows, cols), 2, 1)[0] <= ladder_index(m, 2, 1)[0]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_negate_and_swap_thresholds(seed):
    m = seeded_matrix(seed)
    # negating swaps the roles of low and high; transposing swaps rows and columns
    assert ladder_index(m, 2, 1)[0] == ladder_index(m.negate().transpose(), -1, -2)[0]


def test_type_metric_examples():
    p, q = TypeVector.of([0, 1]), TypeVector.of([1, 0])
    assert type_metric(p, p) == 0
    assert type_metric(p, q) == 1
    with pytest.raises(ValueError):
        type_metric(p, TypeVector.of([0, 1], ["u", "v"]))


vectors = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=3, max_size=3)


@given(vectors, vectors, vectors)
def test_type_metric_is_metric(a, b, c):
    p, q, r = TypeVector.of(a), TypeVector.of(b), TypeVector.of(c)
    assert type_metric(p, q) >= 0
    assert type_metric(p, q) == type_metric(q, p)
    assert type_metric(p, r) <= type_metric(p, q) + type_metric(q, r)
    assert (type_metric(p, q) == 0) == (a == b)


def test_nearest_rows_examples():
    m = PhiMatrix.of([[0, 1, 0], [1, 0, 1], [1, 1, 1]])
    assert nearest_rows(m, m.row(0), 0) == (0, [0])
    mid = TypeVector.of([H, H, H])
    d, rows = nearest_rows(m.submatrix([0, 1], [0, 1, 2]), mid, H)
    assert d == H and rows == [0, 1]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), vectors)
def test_nearest_rows_scan(seed, values):
    rng = random.Random(seed)
    m = PhiMatrix.of([[rng.randint(0, 3) for _ in range(3)] for _ in range(rng.randint(1, 6))])
    p = TypeVector.of(values)
    d, rows = nearest_rows(m, p, 1)
    dists = [max(abs(u - v) for u, v in zip(row, values)) for row in m.entries]
    assert d == min(dists)
    assert rows == [i for i, x in enumerate(dists) if x <= 1]


def test_definability_examples():
    m = PhiMatrix.of([[0, 1], [1, 0]])
    p = m.row(0)
    assert is_definable_by(m, p, p, 0)
    off = TypeVector.of([Fraction(1, 4), 1])
    assert not is_definable_by(m, p, off, Fraction(1, 8))
    assert is_definable_by(m, m.row(1), m.row(1), 0)
