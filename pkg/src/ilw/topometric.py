"""Finite topometric spaces and the epsilon-Cantor-Bendixson derivative."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import to_rational

INF = math.inf


@dataclass(frozen=True)
class FiniteTopoSpace:
    """A finite space given by minimal open neighbourhoods plus a pseudometric.

    ``min_open[x]`` is the smallest open set containing ``x``; the open sets
    are exactly the unions of these.  Non-Hausdorff topologies are allowed on
    purpose: a finite Hausdorff space is discrete and every rank collapses.
    """

    points: tuple[str, ...]
    min_open: tuple[frozenset, ...]
    metric: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.points)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "min_open", tuple(frozenset(u) for u in self.min_open))
        object.__setattr__(self, "metric",
                           tuple(tuple(to_rational(v) for v in row) for row in self.metric))
        if len(self.min_open) != n or len(self.metric) != n or any(len(r) != n for r in self.metric):
            raise ValueError("neighbourhoods and metric must cover every point")
        if any(not 0 <= y < n for u in self.min_open for y in u):
            raise ValueError("neighbourhood mentions an unknown point")

    def __len__(self):
        return len(self.points)

    @classmethod
    def discrete(cls, metric: Sequence[Sequence], points: Sequence[str] | None = None):
        n = len(metric)
        return cls(tuple(points or (f"p{i}" for i in range(n))),
                   tuple(frozenset({i}) for i in range(n)), tuple(map(tuple, metric)))

    @classmethod
    def chain(cls, n: int, distance=1):
        """``min_open(i) = {0, ..., i}`` with all distinct points at ``distance``."""
        d = to_rational(distance)
        metric = tuple(tuple(Fraction(0) if i == j else d for j in range(n)) for i in range(n))
        return cls(tuple(f"p{i}" for i in range(n)),
                   tuple(frozenset(range(i + 1)) for i in range(n)), metric)

    @classmethod
    def indiscrete(cls, metric: Sequence[Sequence]):
        n = len(metric)
        everything = frozenset(range(n))
        return cls(tuple(f"p{i}" for i in range(n)), tuple(everything for _ in range(n)),
                   tuple(map(tuple, metric)))

    def is_open(self, U: Iterable[int]) -> bool:
        U = frozenset(U)
        return all(self.min_open[x] <= U for x in U)

    def closure(self, F: Iterable[int]) -> frozenset:
        F = frozenset(F)
        return frozenset(x for x in range(len(self)) if self.min_open[x] & F)

    def open_sets(self) -> list[frozenset]:
        n = len(self)
        return [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)
                if self.is_open(c)]

    def closed_sets(self) -> list[frozenset]:
        everything = frozenset(range(len(self)))
        return [everything - U for U in self.open_sets()]


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def validate_topometric(space: FiniteTopoSpace) -> list[Violation]:
    """Every failed axiom, with witnesses; an empty list means the space is valid."""
    out = []
    n = len(space)
    U, d = space.min_open, space.metric
    for x in range(n):
        if x not in U[x]:
            out.append(Violation("neighbourhood", f"{space.points[x]} not in its own minimal open set"))
        for y in U[x]:
            if not U[y] <= U[x]:
                out.append(Violation("neighbourhood",
                                     f"minOpen({space.points[y]}) not inside minOpen({space.points[x]})"))
    for x in range(n):
        if d[x][x] != 0:
            out.append(Violation("metric", f"d({space.points[x]}, {space.points[x]}) != 0"))
        for y in range(n):
            if d[x][y] < 0:
                out.append(Violation("metric", f"negative distance at ({space.points[x]}, {space.points[y]})"))
            if d[x][y] != d[y][x]:
                out.append(Violation("metric", f"asymmetric at ({space.points[x]}, {space.points[y]})"))
            for z in range(n):
                if d[x][z] > d[x][y] + d[y][z]:
                    out.append(Violation("metric", f"triangle inequality fails at "
                                                   f"({space.points[x]}, {space.points[y]}, {space.points[z]})"))
    for x, y in itertools.combinations(range(n), 2):
        if d[x][y] == 0 and not (y in U[x] and x in U[y]):
            out.append(Violation("refinement",
                                 f"d({space.points[x]}, {space.points[y]}) = 0 but the points are "
                                 "topologically separated"))
    if not any(v.kind == "neighbourhood" for v in out):
        radii = sorted({v for row in d for v in row if v > 0})
        for F in space.closed_sets():
            if not F:
                continue
            for eps in radii:
                nbhd = frozenset(x for x in range(n) if min(d[x][y] for y in F) <= eps)
                if space.closure(nbhd) != nbhd:
                    names = ",".join(space.points[i] for i in sorted(F))
                    out.append(Violation("closed-neighbourhood",
                                         f"closed {eps}-neighbourhood of {{{names}}} is not closed"))
    return out


def diameter(space: FiniteTopoSpace, U: Iterable[int]) -> Fraction:
    U = list(U)
    return max((space.metric[x][y] for x in U for y in U), default=Fraction(0))


def derivative(space: FiniteTopoSpace, X: frozenset, eps: Fraction) -> frozenset:
    """Drop every point whose relative minimal neighbourhood has diameter <= eps."""
    return frozenset(x for x in X if diameter(space, space.min_open[x] & X) > eps)


def derivative_by_closed_sets(space: FiniteTopoSpace, X: frozenset, eps: Fraction) -> frozenset:
    """Intersection of the closed ``F`` inside ``X`` with ``diam(X \\ F) <= eps``."""
    out = frozenset(X)
    for F in space.closed_sets():
        if F <= X and diameter(space, X - F) <= eps:
            out &= F
    return out


@dataclass(frozen=True)
class CbSequence:
    """``stages[a]`` is ``X_{eps, a}``; the last stage is the stable one."""

    stages: tuple[frozenset, ...]

    @property
    def limit(self) -> frozenset:
        return self.stages[-1]


def cb_sequence(space: FiniteTopoSpace, eps, step=derivative) -> CbSequence:
    eps = to_rational(eps)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    stages = [frozenset(range(len(space)))]
    while True:
        nxt = step(space, stages[-1], eps)
        if nxt == stages[-1]:
            return CbSequence(tuple(stages))
        stages.append(nxt)


def cb_rank(space: FiniteTopoSpace, eps, U: Iterable[int]) -> int | float:
    """Largest stage meeting ``U``, or ``INF`` when ``U`` meets the stable set."""
    U = frozenset(U)
    if not U:
        raise ValueError("U must be non-empty")
    seq = cb_sequence(space, eps)
    if U & seq.limit:
        return INF
    return max(a for a, X in enumerate(seq.stages) if U & X)
