"""Finite probability structures and exact evaluation of integral-logic formulas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cancel import CancelToken, checkpoint
from .logic import (Abs, Atomic, Con, Const, Formula, FormulaError, Integral, Linear,
                    Product, Signature, Statement, Theory, Var)
from .rational import check_probability, fmt, to_rational

#: documented desk-scale ceiling for full assignment enumeration
MAX_ASSIGNMENTS = 10 ** 7


@dataclass(frozen=True)
class FiniteStructure:
    """A finite probability space carrying relation tables and constants.

    ``tables[R]`` maps each index tuple of length ``arity(R)`` to a rational;
    ``constants[c]`` is a point index.  The sigma-algebra is the power set.
    """

    signature: Signature
    points: tuple[str, ...]
    weights: tuple[Fraction, ...]
    tables: Mapping[str, Mapping[tuple[int, ...], Fraction]]
    constants: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "weights", tuple(to_rational(w) for w in self.weights))
        if len(set(self.points)) != len(self.points):
            raise ValueError("point labels must be unique")
        if len(self.weights) != len(self.points):
            raise ValueError("one weight per point is required")
        check_probability(self.weights)
        n = len(self.points)
        tables = {}
        for rel in self.signature.relations:
            if rel.name not in self.tables:
                raise ValueError(f"no table for relation {rel.name}")
            table = {tuple(k): to_rational(v) for k, v in self.tables[rel.name].items()}
            for idx in itertools.product(range(n), repeat=rel.arity):
                if idx not in table:
                    raise ValueError(f"relation {rel.name}: missing entry at {idx}")
                if abs(table[idx]) > rel.bound:
                    raise ValueError(
                        f"relation {rel.name}: entry {fmt(table[idx])} exceeds bound {fmt(rel.bound)}")
            if len(table) != n ** rel.arity:
                raise ValueError(f"relation {rel.name}: table has entries outside the space")
            tables[rel.name] = table
        extra = set(self.tables) - set(tables)
        if extra:
            raise ValueError(f"tables for undeclared relations: {sorted(extra)}")
        object.__setattr__(self, "tables", tables)
        consts = dict(self.constants)
        if set(consts) != set(self.signature.constants):
            raise ValueError("constant interpretation must cover exactly the signature's constants")
        for c, i in consts.items():
            if not 0 <= i < n:
                raise ValueError(f"constant {c} points outside the space")
        object.__setattr__(self, "constants", consts)

    @classmethod
    def from_arrays(cls, signature: Signature, points: Sequence[str], weights: Sequence,
                    relations: Mapping[str, object], constants: Mapping[str, str | int] = ()):
        """Build from nested lists (``relations[R][i][j]...``) and point-labelled constants."""
        points = tuple(points)
        tables = {}
        for rel in signature.relations:
            if rel.name not in relations:
                raise ValueError(f"relation {rel.name!r} has no table")
            nested = relations[rel.name]
            tables[rel.name] = {idx: to_rational(_dig(nested, idx))
                                for idx in itertools.product(range(len(points)), repeat=rel.arity)}
        consts = {c: (points.index(p) if isinstance(p, str) else int(p))
                  for c, p in dict(constants).items()}
        return cls(signature, points, tuple(weights), tables, consts)

    def __len__(self):
        return len(self.points)

    def index(self, point: str | int) -> int:
        if isinstance(point, int):
            return point
        return self.points.index(point)

    def measure(self, indices: Iterable[int]) -> Fraction:
        return sum((self.weights[i] for i in set(indices)), Fraction(0))


def _dig(nested, idx):
    for i in idx:
        nested = nested[i]
    return nested


# ---------------------------------------------------------------------------
# evaluation


def evaluate(struct: FiniteStructure, phi: Formula,
             assignment: Mapping[str, int] | None = None) -> Fraction:
    assignment = dict(assignment or {})
    missing = phi.free_vars - set(assignment)
    if missing:
        raise FormulaError(f"unassigned free variables: {sorted(missing)}")
    return _eval(struct, phi, assignment)


def _eval(st: FiniteStructure, phi: Formula, env: dict) -> Fraction:
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atomic):
        idx = tuple(env[t.name] if isinstance(t, Var) else st.constants[t.name] for t in phi.args)
        try:
            return st.tables[phi.relation][idx]
        except KeyError:
            raise FormulaError(f"relation {phi.relation!r} not interpreted with arity {len(idx)}") from None
    if isinstance(phi, Linear):
        return phi.r * _eval(st, phi.left, env) + phi.s * _eval(st, phi.right, env)
    if isinstance(phi, Product):
        return _eval(st, phi.left, env) * _eval(st, phi.right, env)
    if isinstance(phi, Abs):
        return abs(_eval(st, phi.child, env))
    if isinstance(phi, Integral):
        saved = env.get(phi.var)
        total = Fraction(0)
        for i, w in enumerate(st.weights):
            if w:
                env[phi.var] = i
                total += w * _eval(st, phi.child, env)
        if saved is None:
            env.pop(phi.var, None)
        else:
            env[phi.var] = saved
        return total
    raise TypeError(f"not a formula node: {phi!r}")


def satisfies_statement(struct: FiniteStructure, stmt: Statement) -> bool:
    if not stmt.closed:
        raise FormulaError("statement has free variables")
    value = evaluate(struct, stmt.formula)
    return value >= stmt.threshold if stmt.comparator == ">=" else value == stmt.threshold


@dataclass(frozen=True)
class TheoryReport:
    passed: bool
    failing: Statement | None = None
    value: Fraction | None = None
    checked: int = 0


def satisfies_theory(struct: FiniteStructure, theory: Theory | Iterable[Statement]) -> TheoryReport:
    checked = 0
    for stmt in theory:
        value = evaluate(struct, stmt.formula)
        checked += 1
        ok = value >= stmt.threshold if stmt.comparator == ">=" else value == stmt.threshold
        if not ok:
            return TheoryReport(False, stmt, value, checked)
    return TheoryReport(True, checked=checked)


def _assignments(struct: FiniteStructure, variables: Sequence[str]):
    total = len(struct) ** len(variables)
    if total > MAX_ASSIGNMENTS:
        raise ValueError(f"{total} assignments exceed the enumeration limit {MAX_ASSIGNMENTS}")
    for combo in itertools.product(range(len(struct)), repeat=len(variables)):
        yield dict(zip(variables, combo))


def sup_norm(struct: FiniteStructure, phi: Formula, cancel: CancelToken | None = None) -> Fraction:
    """``max |phi(a)|`` over every assignment of the free variables."""
    best = Fraction(0)
    for n, env in enumerate(_assignments(struct, sorted(phi.free_vars))):
        checkpoint(cancel, n)
        best = max(best, abs(_eval(struct, phi, env)))
    return best


# ---------------------------------------------------------------------------
# minimal structures


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [i for b in self.blocks for i in b]
        if len(seen) != len(set(seen)):
            raise ValueError("partition blocks overlap")

    def block_of(self, i: int) -> int:
        for k, b in enumerate(self.blocks):
            if i in b:
                return k
        raise KeyError(i)


@dataclass(frozen=True)
class FragmentFormula:
    """A formula in one distinguished variable, other variables fixed to points."""

    formula: Formula
    var: str
    params: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        rest = self.formula.free_vars - {self.var} - set(self.params)
        if rest or self.var in self.params:
            raise FormulaError(
                "fragment formula must have exactly one free variable after instantiating parameters")


def _as_fragment(item) -> FragmentFormula:
    if isinstance(item, FragmentFormula):
        return item
    phi = item
    if len(phi.free_vars) != 1:
        raise FormulaError("fragment formula must have exactly one free variable")
    return FragmentFormula(phi, next(iter(phi.free_vars)))


def superlevel_set(struct: FiniteStructure, frag: FragmentFormula) -> frozenset:
    env = dict(frag.params)
    out = set()
    for i in range(len(struct)):
        env[frag.var] = i
        if _eval(struct, frag.formula, env) > 0:
            out.add(i)
    return frozenset(out)


def minimalize(struct: FiniteStructure, fragment: Iterable) -> Partition:
    """Atoms of the algebra generated by the sets ``{x : phi(x) > 0}``."""
    signatures = [[] for _ in range(len(struct))]
    for item in fragment:
        level = superlevel_set(struct, _as_fragment(item))
        for i in range(len(struct)):
            signatures[i].append(i in level)
    blocks: dict[tuple, list[int]] = {}
    for i, sig in enumerate(signatures):
        blocks.setdefault(tuple(sig), []).append(i)
    return Partition(tuple(tuple(b) for b in blocks.values()))


# ---------------------------------------------------------------------------
# Tarski-Vaught


@dataclass(frozen=True)
class TarskiVaughtReport:
    passed: bool
    checked: int
    formula: Formula | None = None
    params: Mapping[str, int] | None = None
    large_measure: Fraction | None = None
    trace_measure: Fraction | None = None
    small_measure: Fraction | None = None


def tarski_vaught_check(small: FiniteStructure, large: FiniteStructure,
                        embedding: Sequence[int], fragment: Iterable,
                        cancel: CancelToken | None = None) -> TarskiVaughtReport:
    """Compare ``nu{x in N : phi(a, x) > 0}`` with the measure of its trace on ``M``.

    ``embedding[i]`` is the ``N``-index of ``M``'s point ``i``.  Fragment items
    are ``(formula, variable)`` pairs, ``FragmentFormula`` objects or bare
    formulas (distinguished variable: the least free one); every other free
    variable ranges over all points of ``M``.  The trace is measured with
    ``N``'s weights restricted to the image of ``M``, which is the measure a
    substructure carries.
    """
    embedding = tuple(embedding)
    if len(embedding) != len(small) or len(set(embedding)) != len(embedding):
        raise ValueError("embedding must be injective and defined on every point")
    if any(not 0 <= j < len(large) for j in embedding):
        raise ValueError("embedding leaves the large structure")
    if small.signature != large.signature:
        raise ValueError("structures have different signatures")
    for rel in small.signature.relations:
        for idx, v in small.tables[rel.name].items():
            if large.tables[rel.name][tuple(embedding[i] for i in idx)] != v:
                raise ValueError(f"embedding does not preserve {rel.name} at {idx}")
    for c, i in small.constants.items():
        if embedding[i] != large.constants[c]:
            raise ValueError(f"embedding does not preserve constant {c}")

    image = set(embedding)
    back = {j: i for i, j in enumerate(embedding)}
    checked = 0
    for item in fragment:
        if isinstance(item, FragmentFormula):
            phi, var = item.formula, item.var
        elif isinstance(item, tuple):
            phi, var = item
        else:
            phi, var = item, min(item.free_vars, default="_")
        others = sorted(phi.free_vars - {var})
        for combo in itertools.product(range(len(small)), repeat=len(others)):
            checkpoint(cancel, checked)
            params = {v: embedding[i] for v, i in zip(others, combo)}
            level = superlevel_set(large, FragmentFormula(phi, var, params))
            big = large.measure(level)
            trace = large.measure(level & image)
            small_side = small.measure(back[j] for j in level & image)
            checked += 1
            if big != trace:
                return TarskiVaughtReport(False, checked, phi,
                                          dict(zip(others, combo)), big, trace, small_side)
    return TarskiVaughtReport(True, checked)
