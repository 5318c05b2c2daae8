"""Enumeration of small semigroups and their actions up to relabelling."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .invariance import FiniteAction, FiniteSemigroup


def _associative(table, n) -> bool:
    return all(table[table[s][t]][u] == table[s][table[t][u]]
               for s in range(n) for t in range(n) for u in range(n))


def _relabel(table, perm):
    """Table of the semigroup with element ``i`` renamed ``perm[i]``."""
    n = len(table)
    out = [[0] * n for _ in range(n)]
    for s in range(n):
        for t in range(n):
            out[perm[s]][perm[t]] = perm[table[s][t]]
    return tuple(tuple(r) for r in out)


@lru_cache(maxsize=None)
def semigroup_tables(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """One Cayley table per isomorphism class of semigroups of order ``n``."""
    perms = list(itertools.permutations(range(n)))
    seen = set()
    reps = []
    for flat in itertools.product(range(n), repeat=n * n):
        table = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if not _associative(table, n):
            continue
        key = min(_relabel(table, p) for p in perms)
        if key not in seen:
            seen.add(key)
            reps.append(key)
    return tuple(sorted(reps))


def _automorphisms(table):
    n = len(table)
    return [p for p in itertools.permutations(range(n)) if _relabel(table, p) == table]


def _maps_ok(table, assigned, s, f):
    """Check the action law for every pair involving ``s`` among assigned elements."""
    assigned[s] = f
    for t, g in list(assigned.items()):
        for a, b in ((s, t), (t, s)):
            fa, fb = assigned[a], assigned[b]
            ab = table[a][b]
            if ab in assigned:
                comp = tuple(fa[fb[x]] for x in range(len(f)))
                if assigned[ab] != comp:
                    del assigned[s]
                    return False
    return True


def action_tables(table, m: int):
    """Every action table of the semigroup ``table`` on ``m`` labelled points."""
    n = len(table)
    identity = next((e for e in range(n)
                     if all(table[e][s] == s and table[s][e] == s for s in range(n))), None)
    maps = list(itertools.product(range(m), repeat=m))
    ident = tuple(range(m))
    assigned: dict[int, tuple[int, ...]] = {}

    def rec(s):
        if s == n:
            yield tuple(assigned[i] for i in range(n))
            return
        choices = [ident] if s == identity else maps
        for f in choices:
            if _maps_ok(table, assigned, s, f):
                yield from rec(s + 1)
                del assigned[s]

    yield from rec(0)


def _act_key(act, sigma, pi):
    """Action table after renaming elements by ``sigma`` and points by ``pi``."""
    n, m = len(act), len(act[0])
    out = [[0] * m for _ in range(n)]
    for s in range(n):
        for x in range(m):
            out[sigma[s]][pi[x]] = pi[act[s][x]]
    return tuple(tuple(r) for r in out)


def small_actions(max_elements: int = 3, max_points: int = 3):
    """Every action with ``|S| <= max_elements`` and ``|X| <= max_points``, up to relabelling.

    Yields :class:`FiniteAction` objects in a deterministic order.
    """
    for n in range(1, max_elements + 1):
        for table in semigroup_tables(n):
            sg = FiniteSemigroup(tuple(f"s{i}" for i in range(n)), table)
            autos = _automorphisms(table)
            for m in range(1, max_points + 1):
                perms = list(itertools.permutations(range(m)))
                seen = set()
                for act in action_tables(table, m):
                    key = min(_act_key(act, a, p) for a in autos for p in perms)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield FiniteAction(sg, tuple(f"p{x}" for x in range(m)), key)
