from collections import Counter

import pytest

import oracles
from ilw.catalog import semigroup_tables, small_actions
from ilw.invariance import invariant_measures

# frozen from the exhaustive-table oracle (oracles.all_actions(3, 3), about 5 s)
SHAPES = {(1, 1): 1, (1, 2): 1, (1, 3): 1, (2, 1): 5, (2, 2): 11, (2, 3): 18,
          (3, 1): 24, (3, 2): 64, (3, 3): 149}
INFEASIBLE = 13


def shape_counts(actions):
    return Counter((len(a.semigroup), len(a)) for a in actions)


def test_semigroup_counts():
    assert [len(semigroup_tables(n)) for n in (1, 2, 3)] == [1, 5, 24]


@pytest.fixture(scope="module")
def catalog():
    return list(small_actions(3, 3))


def test_frozen_counts(catalog):
    assert shape_counts(catalog) == SHAPES
    assert sum(SHAPES.values()) == 274


def test_frozen_infeasible_count(catalog):
    assert sum(not invariant_measures(a).feasible for a in catalog) == INFEASIBLE


def test_live_oracle_small():
    keys = oracles.all_actions(2, 3)
    assert Counter((k[0], k[1]) for k in keys) == shape_counts(small_actions(2, 3))


def test_feasibility_matches_vertex_oracle(catalog):
    for action in catalog:
        mu = oracles.invariant_vertex(action.act, len(action))
        assert (mu is not None) == invariant_measures(action).feasible


def test_deterministic_order():
    assert [a.act for a in small_actions(2, 2)] == [a.act for a in small_actions(2, 2)]
