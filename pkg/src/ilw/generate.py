"""Seeded random instances: formulas, structures, matrices, families, spaces.

Every generator takes a ``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .logic import Abs, Atomic, Con, Const, Formula, Integral, Linear, Product, Signature, Var
from .nip import FunctionFamily
from .stability import PhiMatrix
from .structures import FiniteStructure
from .topometric import FiniteTopoSpace

VARIABLES = ("x", "y", "z", "u", "v", "w")


def rational(rng: random.Random, bound: int = 3, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))


def probability(rng: random.Random, n: int, allow_zero: bool = True) -> tuple[Fraction, ...]:
    low = 0 if allow_zero else 1
    raw = [rng.randint(low, 4) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return tuple(Fraction(v, total) for v in raw)


def signature(rng: random.Random, max_arity: int = 2) -> Signature:
    relations = {}
    for i in range(rng.randint(1, 3)):
        arity = rng.randint(0, max_arity)
        relations[f"R{i}"] = (arity, Fraction(rng.randint(1, 4), rng.randint(1, 2)))
    constants = [f"c{i}" for i in range(rng.randint(0, 2))]
    return Signature.build(relations, constants)


def formula(rng: random.Random, sig: Signature, depth: int = 4,
            free: Sequence[str] = ("x", "y"), _bound: tuple[str, ...] = ()) -> Formula:
    """A random formula whose free variables lie in ``free``.

    Integrals never bind a variable that is already in scope, free ones included.
    """
    scope = tuple(free) + _bound
    if depth <= 0 or rng.random() < 0.2:
        return _leaf(rng, sig, scope)
    kind = rng.choice(("linear", "linear", "product", "abs", "integral", "integral"))
    sub = lambda: formula(rng, sig, depth - 1, free, _bound)  # noqa: E731
    if kind == "linear":
        return Linear(rational(rng, 2, 3), sub(), rational(rng, 2, 3), sub())
    if kind == "product":
        return Product(sub(), sub())
    if kind == "abs":
        return Abs(sub())
    fresh = [v for v in VARIABLES if v not in scope]
    if not fresh:
        return _leaf(rng, sig, scope)
    var = rng.choice(fresh)
    return Integral(var, formula(rng, sig, depth - 1, free, _bound + (var,)))


def _leaf(rng: random.Random, sig: Signature, scope: Sequence[str]) -> Formula:
    usable = [r for r in sig.relations if r.arity == 0 or scope or sig.constants]
    if not usable or rng.random() < 0.15:
        return Const(rational(rng, 2, 3))
    rel = rng.choice(usable)
    terms = [Var(v) for v in scope] + [Con(c) for c in sig.constants]
    return Atomic(rel.name, tuple(rng.choice(terms) for _ in range(rel.arity)), rel.bound)


def structure(rng: random.Random, sig: Signature, n: int | None = None) -> FiniteStructure:
    n = n or rng.randint(1, 3)
    points = tuple(f"p{i}" for i in range(n))
    tables = {}
    for rel in sig.relations:
        b = rel.bound
        tables[rel.name] = {idx: b * Fraction(rng.randint(-4, 4), 4)
                            for idx in itertools.product(range(n), repeat=rel.arity)}
    constants = {c: rng.randrange(n) for c in sig.constants}
    return FiniteStructure(sig, points, probability(rng, n), tables, constants)


def matrix(rng: random.Random, max_rows: int = 7, max_cols: int = 7, values: int = 3) -> PhiMatrix:
    n, m = rng.randint(1, max_rows), rng.randint(1, max_cols)
    return PhiMatrix.of([[Fraction(rng.randint(0, values)) for _ in range(m)] for _ in range(n)])


def half_graph(n: int) -> PhiMatrix:
    """Entry 1 iff row index > column index."""
    return PhiMatrix.of([[1 if i > j else 0 for j in range(n)] for i in range(n)])


def family(rng: random.Random, n_points: int, n_functions: int, values: int = 2) -> FunctionFamily:
    points = tuple(f"x{i}" for i in range(n_points))
    functions = {f"f{k}": [Fraction(rng.randint(0, values), values) for _ in range(n_points)]
                 for k in range(n_functions)}
    return FunctionFamily.of(points, probability(rng, n_points), functions)


def topo_space(rng: random.Random, n: int) -> FiniteTopoSpace:
    """A random finite topology (from a random preorder) with a random metric.

    Off-diagonal distances are positive, so the metric refines the topology;
    the closed-neighbourhood condition is not enforced.
    """
    # preorder: y <= x means y in minOpen(x); take the transitive closure
    below = [{i} for i in range(n)]
    for i in range(n):
        for j in range(i):
            if rng.random() < 0.35:
                below[i].add(j)
    for _ in range(n):
        for i in range(n):
            for j in list(below[i]):
                below[i] |= below[j]
    d = [[Fraction(0) if i == j else Fraction(rng.randint(1, 4), 2) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            d[i][j] = d[j][i]
    for k, i, j in itertools.product(range(n), repeat=3):
        if d[i][k] + d[k][j] < d[i][j]:
            d[i][j] = d[i][k] + d[k][j]
    return FiniteTopoSpace(tuple(f"p{i}" for i in range(n)),
                           tuple(frozenset(b) for b in below), tuple(map(tuple, d)))
