"""Almost-dependence diagnostics: D_k measures, shattering, L1 classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import kernels
from .cancel import CancelToken, checkpoint
from .rational import check_probability, to_rational
from .stability import LadderWitness, PhiMatrix, TypeVector

#: inclusion-exclusion is exact up to this many distinct level-set boxes
MAX_BOXES = 20
#: shattering search is exact up to this carrier size
MAX_CARRIER = 20


@dataclass(frozen=True)
class FunctionFamily:
    """Named rational functions on a finite probability space.

    Functions with identical value vectors are merged; ``names[i]`` lists
    every name given to ``functions[i]``.
    """

    points: tuple[str, ...]
    weights: tuple[Fraction, ...]
    functions: tuple[tuple[Fraction, ...], ...]
    names: tuple[tuple[str, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "weights", tuple(to_rational(w) for w in self.weights))
        if len(self.weights) != len(self.points):
            raise ValueError("one weight per carrier point is required")
        check_probability(self.weights)
        names = self.names or tuple((f"f{i}",) for i in range(len(self.functions)))
        merged: dict[tuple, list[str]] = {}
        for f, ns in zip(self.functions, names):
            f = tuple(to_rational(v) for v in f)
            if len(f) != len(self.points):
                raise ValueError("function length does not match the carrier")
            merged.setdefault(f, []).extend(ns)
        object.__setattr__(self, "functions", tuple(merged))
        object.__setattr__(self, "names", tuple(tuple(ns) for ns in merged.values()))

    @classmethod
    def of(cls, points, weights, functions: Mapping[str, Sequence] | Sequence[Sequence]):
        if isinstance(functions, Mapping):
            return cls(tuple(points), tuple(weights), tuple(functions.values()),
                       tuple((n,) for n in functions))
        return cls(tuple(points), tuple(weights), tuple(map(tuple, functions)))

    def measure(self, indices: Iterable[int]) -> Fraction:
        return sum((self.weights[i] for i in set(indices)), Fraction(0))

    def index_set(self, E: Iterable[int | str] | None) -> tuple[int, ...]:
        if E is None:
            return tuple(range(len(self.points)))
        out = []
        for x in E:
            i = self.points.index(x) if isinstance(x, str) else int(x)
            if not 0 <= i < len(self.points):
                raise ValueError(f"point {x!r} outside the carrier")
            out.append(i)
        return tuple(sorted(set(out)))


def _thresholds(s, r) -> tuple[Fraction, Fraction]:
    s, r = to_rational(s), to_rational(r)
    if not s < r:
        raise ValueError("thresholds must satisfy s < r")
    return s, r


def level_boxes(fam: FunctionFamily, E: Sequence[int], s, r) -> list[tuple[int, int]]:
    """Distinct non-empty ``(L_f, H_f)`` pairs as bitmasks over positions in ``E``.

    ``L_f = {x in E : f(x) <= s}``, ``H_f = {x in E : f(x) >= r}``.  Boxes
    contained in another box are dropped: they do not change the union.
    """
    boxes = set()
    for f in fam.functions:
        L = sum(1 << i for i, x in enumerate(E) if f[x] <= s)
        H = sum(1 << i for i, x in enumerate(E) if f[x] >= r)
        if L and H:
            boxes.add((L, H))
    maximal = [b for b in boxes
               if not any(o != b and b[0] & ~o[0] == 0 and b[1] & ~o[1] == 0 for o in boxes)]
    return sorted(maximal)


def dk_measure(fam: FunctionFamily, E: Iterable, s, r, k: int,
               cancel: CancelToken | None = None) -> Fraction:
    """``mu^{2k}`` of the union over ``f`` of ``(L_f x H_f)^k`` with coordinates interleaved."""
    s, r = _thresholds(s, r)
    if k < 1:
        raise ValueError("k must be a positive integer")
    E = fam.index_set(E)
    boxes = level_boxes(fam, E, s, r)
    if len(boxes) > MAX_BOXES:
        raise ValueError(f"{len(boxes)} distinct level-set boxes exceed the exact limit {MAX_BOXES}")
    signed = kernels.ie_signed_boxes([b[0] for b in boxes], [b[1] for b in boxes], cancel)
    # integer arithmetic over a common denominator
    den = lcm(*(fam.weights[x].denominator for x in E)) if E else 1
    w = [fam.weights[x].numerator * (den // fam.weights[x].denominator) for x in E]

    def mass(mask):
        return sum(w[i] for i in range(len(E)) if (mask >> i) & 1)

    total = 0
    for (L, H), c in signed.items():
        total += c * (mass(L) * mass(H)) ** k
    return Fraction(total, den ** (2 * k))


def dk_measure_brute(fam: FunctionFamily, E: Iterable, s, r, k: int) -> Fraction:
    """Direct sum of ``mu^{2k}(w)`` over ``w in E^{2k}`` lying in ``D_k``."""
    s, r = _thresholds(s, r)
    E = fam.index_set(E)
    total = Fraction(0)
    for w in itertools.product(E, repeat=2 * k):
        if any(all(f[w[2 * i]] <= s and f[w[2 * i + 1]] >= r for i in range(k))
               for f in fam.functions):
            p = Fraction(1)
            for x in w:
                p *= fam.weights[x]
            total += p
    return total


@dataclass(frozen=True)
class DependenceVerdict:
    """``k`` is the least witness index, or ``None`` when ``kmax`` was exhausted."""

    k: int | None
    dk: Fraction | None
    full: Fraction | None
    epsilon: Fraction
    history: tuple[tuple[int, Fraction, Fraction], ...]

    @property
    def exhausted(self) -> bool:
        return self.k is None


def almost_dependence_check(fam: FunctionFamily, E: Iterable, s, r, kmax: int,
                            cancel: CancelToken | None = None) -> DependenceVerdict:
    """Least ``k <= kmax`` with ``mu^{2k}(D_k) < mu(E)^{2k}``.

    When no such ``k`` exists up to ``kmax`` the verdict is "exhausted", never
    "independent"; ``epsilon = mu(E)`` is then the epsilon-FD level that the
    recorded history supports.
    """
    s, r = _thresholds(s, r)
    E = fam.index_set(E)
    muE = fam.measure(E)
    if muE == 0:
        raise ValueError("E must have positive measure")
    if kmax < 1:
        raise ValueError("kmax must be a positive integer")
    history = []
    for k in range(1, kmax + 1):
        dk = dk_measure(fam, E, s, r, k, cancel)
        full = muE ** (2 * k)
        history.append((k, dk, full))
        if dk < full:
            return DependenceVerdict(k, dk, full, muE, tuple(history))
    return DependenceVerdict(None, None, None, muE, tuple(history))


# ---------------------------------------------------------------------------
# shattering


def _low_high(fam: FunctionFamily, s, r):
    n = len(fam.points)
    lows = [sum(1 << x for x in range(n) if f[x] <= s) for f in fam.functions]
    highs = [sum(1 << x for x in range(n) if f[x] >= r) for f in fam.functions]
    return lows, highs


def independence_dimension(fam: FunctionFamily, s, r,
                           cancel: CancelToken | None = None) -> tuple[int, tuple[int, ...]]:
    """Largest ``k`` with ``w_1..w_k`` shattered at thresholds ``s < r``.

    Shattered sets are closed under subsets, so candidates of size ``k + 1``
    are built only from shattered sets of size ``k``.
    """
    s, r = _thresholds(s, r)
    n = len(fam.points)
    if n > MAX_CARRIER:
        raise ValueError(f"carrier of {n} points exceeds the exact limit {MAX_CARRIER}")
    lows, highs = _low_high(fam, s, r)
    if not fam.functions:
        return 0, ()
    level = [0]
    k = 0
    best: tuple[int, ...] = ()
    counter = 0
    while level:
        known = set(level)
        nxt = []
        for w in level:
            for x in range(w.bit_length(), n):
                cand = w | (1 << x)
                counter += 1
                checkpoint(cancel, counter)
                if any(cand & ~(1 << y) not in known for y in _members(w)):
                    continue
                if kernels.is_shattered(lows, highs, cand, k + 1):
                    nxt.append(cand)
        if not nxt:
            break
        k += 1
        level = nxt
        best = tuple(_members(min(nxt)))
    return k, best


def _members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def independence_dimension_brute(fam: FunctionFamily, s, r) -> int:
    """Try every point tuple and every pattern directly on function values."""
    s, r = _thresholds(s, r)
    n = len(fam.points)
    best = 0
    for k in range(1, n + 1):
        found = False
        for w in itertools.combinations(range(n), k):
            if all(any(all((f[w[i]] <= s) if i in I else (f[w[i]] >= r) for i in range(k))
                       for f in fam.functions)
                   for size in range(k + 1) for I in map(set, itertools.combinations(range(k), size))):
                found = True
                break
        if not found:
            break
        best = k
    return best if fam.functions else 0


def ladder_from_shattering(fam: FunctionFamily, w: Sequence[int], s, r) -> tuple[PhiMatrix, LadderWitness]:
    """Ladder of length ``len(w)`` in the (function x point) matrix.

    Row ``i`` is a function that is low exactly on ``w_{i+1}, ..., w_k``;
    column ``i`` is the point ``w_i``.
    """
    s, r = _thresholds(s, r)
    k = len(w)
    rows = []
    for i in range(k):
        low_on = set(range(i + 1, k))
        for idx, f in enumerate(fam.functions):
            if all((f[w[j]] <= s) if j in low_on else (f[w[j]] >= r) for j in range(k)):
                rows.append(idx)
                break
        else:
            raise ValueError("points are not shattered by the family")
    bound = max((abs(v) for f in fam.functions for v in f), default=Fraction(0))
    matrix = PhiMatrix(tuple("|".join(ns) for ns in fam.names), fam.points,
                       fam.functions, bound, None, fam.weights)
    return matrix, LadderWitness(r, s, tuple(rows), tuple(w))


# ---------------------------------------------------------------------------
# L1 classes and almost definability


@dataclass(frozen=True)
class L1Class:
    representative: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    def __eq__(self, other):
        if not isinstance(other, L1Class) or other.weights != self.weights:
            return NotImplemented
        return all(u == v for u, v, w in zip(self.representative, other.representative, self.weights) if w)

    def __hash__(self):
        return hash(tuple(v for v, w in zip(self.representative, self.weights) if w))


def l1_distance(xi: Sequence, xi2: Sequence, mu: Sequence) -> Fraction:
    xi, xi2, mu = ([to_rational(v) for v in seq] for seq in (xi, xi2, mu))
    if not len(xi) == len(xi2) == len(mu):
        raise ValueError("vectors and measure must have equal length")
    return sum((w * abs(u - v) for u, v, w in zip(xi, xi2, mu)), Fraction(0))


def almost_defines(psi: TypeVector, p: TypeVector, mu: Sequence) -> bool:
    """``psi(b) = p(b)`` at every column of positive weight."""
    if psi.labels != p.labels or len(mu) != len(p.values):
        raise ValueError("labels or measure do not align")
    return all(u == v for u, v, w in zip(psi.values, p.values, mu) if to_rational(w) > 0)


def quotient_types(types: Sequence[TypeVector], mu: Sequence) -> list[list[int]]:
    """Group indices by almost-everywhere equality, in order of first appearance."""
    mu = [to_rational(v) for v in mu]
    for t in types:
        if t.labels != types[0].labels or len(mu) != len(t.values):
            raise ValueError("labels or measure do not align")
    classes: list[list[int]] = []
    for i, t in enumerate(types):
        for cls in classes:
            if almost_defines(types[cls[0]], t, mu):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes
