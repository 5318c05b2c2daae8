"""Value matrices of two-variable formulas, ladders, and the type metric."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .cancel import CancelToken
from .logic import Formula, FormulaError
from .rational import check_probability, to_rational
from .structures import FiniteStructure, _eval

#: exact ladder search is promised up to this min(rows, cols)
EXACT_LADDER_LIMIT = 15


@dataclass(frozen=True)
class PhiMatrix:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    bound: Fraction
    row_measure: tuple[Fraction, ...] | None = None
    col_measure: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        entries = tuple(tuple(to_rational(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        object.__setattr__(self, "bound", to_rational(self.bound))
        if len(entries) != len(self.row_labels) or any(len(r) != len(self.col_labels) for r in entries):
            raise ValueError("matrix shape does not match its labels")
        if any(abs(v) > self.bound for row in entries for v in row):
            raise ValueError("matrix entry exceeds the bound")
        for mu, n in ((self.row_measure, len(entries)), (self.col_measure, len(self.col_labels))):
            if mu is not None:
                if len(mu) != n:
                    raise ValueError("measure length does not match the matrix")
                check_probability(mu, "measure")

    @classmethod
    def of(cls, rows: Sequence[Sequence], bound=None, row_labels=None, col_labels=None) -> "PhiMatrix":
        """Convenience constructor; the bound defaults to the largest absolute entry."""
        entries = [[to_rational(v) for v in r] for r in rows]
        if bound is None:
            bound = max((abs(v) for r in entries for v in r), default=Fraction(0))
        n, m = len(entries), len(entries[0]) if entries else 0
        return cls(tuple(row_labels or (f"a{i}" for i in range(n))),
                   tuple(col_labels or (f"b{j}" for j in range(m))),
                   tuple(map(tuple, entries)), to_rational(bound))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def row(self, i: int) -> "TypeVector":
        return TypeVector(self.col_labels, self.entries[i])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PhiMatrix":
        return PhiMatrix(tuple(self.row_labels[i] for i in rows),
                         tuple(self.col_labels[j] for j in cols),
                         tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
                         self.bound)

    def transpose(self) -> "PhiMatrix":
        return PhiMatrix(self.col_labels, self.row_labels, tuple(zip(*self.entries)),
                         self.bound, self.col_measure, self.row_measure)

    def negate(self) -> "PhiMatrix":
        return PhiMatrix(self.row_labels, self.col_labels,
                         tuple(tuple(-v for v in r) for r in self.entries),
                         self.bound, self.row_measure, self.col_measure)


@dataclass(frozen=True)
class TypeVector:
    labels: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))
        if len(self.labels) != len(self.values):
            raise ValueError("one value per label is required")

    @classmethod
    def of(cls, values: Sequence, labels: Sequence[str] | None = None) -> "TypeVector":
        values = tuple(values)
        return cls(tuple(labels or (f"b{j}" for j in range(len(values)))), values)


@dataclass(frozen=True)
class LadderWitness:
    r: Fraction
    s: Fraction
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __len__(self):
        return len(self.rows)


def phi_matrix(struct: FiniteStructure, phi: Formula, row_var: str, col_var: str) -> PhiMatrix:
    if set(phi.free_vars) != {row_var, col_var} or row_var == col_var:
        raise FormulaError(f"formula must have exactly the free variables {row_var!r} and {col_var!r}")
    n = len(struct)
    entries = []
    env: dict = {}
    for a in range(n):
        row = []
        for b in range(n):
            env[row_var], env[col_var] = a, b
            row.append(_eval(struct, phi, env))
        entries.append(tuple(row))
    return PhiMatrix(struct.points, struct.points, tuple(entries), phi.bound,
                     struct.weights, struct.weights)


def check_ladder(m: PhiMatrix, w: LadderWitness) -> bool:
    """Re-check the ladder conditions for every ``i > j``."""
    if w.r <= w.s or len(w.rows) != len(w.cols):
        return False
    if len(set(w.rows)) != len(w.rows) or len(set(w.cols)) != len(w.cols):
        return False
    n, k = m.shape
    if any(not 0 <= a < n for a in w.rows) or any(not 0 <= b < k for b in w.cols):
        return False
    E = m.entries
    for i in range(len(w.rows)):
        for j in range(i):
            if not (E[w.rows[i]][w.cols[j]] >= w.r and E[w.rows[j]][w.cols[i]] <= w.s):
                return False
    return True


def _masks(m: PhiMatrix, r: Fraction, s: Fraction):
    n, k = m.shape
    rows_high = [sum(1 << a for a in range(n) if m.entries[a][b] >= r) for b in range(k)]
    cols_low = [sum(1 << b for b in range(k) if m.entries[a][b] <= s) for a in range(n)]
    return rows_high, cols_low


def ladder_index(m: PhiMatrix, r, s, mode: str = "exact",
                 cancel: CancelToken | None = None) -> tuple[int, LadderWitness]:
    """Longest ladder ``a_i, b_i`` (distinct indices) with
    ``phi(a_i, b_j) >= r`` and ``phi(a_j, b_i) <= s`` for ``i > j``.

    ``mode="lower_bound"`` runs a greedy extension instead of the exhaustive
    search; its result never exceeds the exact index.
    """
    r, s = to_rational(r), to_rational(s)
    if r <= s:
        raise ValueError("thresholds must satisfy r > s")
    n, k = m.shape
    if not n or not k:
        raise ValueError("empty matrix")
    rows_high, cols_low = _masks(m, r, s)
    if mode == "exact":
        if min(n, k) > EXACT_LADDER_LIMIT:
            raise ValueError(f"exact ladder search is limited to min(rows, cols) <= {EXACT_LADDER_LIMIT}; "
                             "use mode='lower_bound'")
        best, rows, cols = kernels.ladder_search(rows_high, cols_low, n, k, cancel)
    elif mode == "lower_bound":
        best, rows, cols = _greedy_ladder(rows_high, cols_low, n, k)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    witness = LadderWitness(r, s, tuple(rows), tuple(cols))
    if not check_ladder(m, witness):
        raise AssertionError("internal error: ladder witness fails its own check")
    return best, witness


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _greedy_ladder(rows_high, cols_low, n, k):
    R, C = (1 << n) - 1, (1 << k) - 1
    rows, cols = [], []
    while R and C:
        best = None
        for a in range(n):
            if not (R >> a) & 1:
                continue
            C2 = C & cols_low[a]
            for b in range(k):
                if not (C >> b) & 1:
                    continue
                R2 = R & rows_high[b] & ~(1 << a)
                C3 = C2 & ~(1 << b)
                score = (min(_popcount(R2), _popcount(C3)), _popcount(R2) + _popcount(C3))
                if best is None or score > best[0]:
                    best = (score, a, b, R2, C3)
        _, a, b, R, C = best
        rows.append(a)
        cols.append(b)
    return len(rows), rows, cols


def ladder_brute_force(m: PhiMatrix, r, s) -> int:
    """Reference index: extend every ladder prefix by every unused pair.

    Prefixes of ladders are ladders, so growing sequences one pair at a time
    and re-checking all conditions visits every ladder.
    """
    r, s = to_rational(r), to_rational(s)
    n, k = m.shape
    E = m.entries
    best = 1 if n and k else 0

    def grow(rows, cols):
        nonlocal best
        best = max(best, len(rows))
        for a, b in itertools.product(range(n), range(k)):
            if a in rows or b in cols:
                continue
            if all(E[a][cols[j]] >= r and E[rows[j]][b] <= s for j in range(len(rows))):
                grow(rows + [a], cols + [b])

    grow([], [])
    return best


# ---------------------------------------------------------------------------
# types


def _aligned(p: TypeVector, q: TypeVector) -> None:
    if p.labels != q.labels:
        raise ValueError("type vectors have different labels")


def type_metric(p: TypeVector, q: TypeVector) -> Fraction:
    _aligned(p, q)
    return max((abs(u - v) for u, v in zip(p.values, q.values)), default=Fraction(0))


def nearest_rows(m: PhiMatrix, p: TypeVector, eps) -> tuple[Fraction, list[int]]:
    eps = to_rational(eps)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    dists = [type_metric(m.row(i), p) for i in range(m.shape[0])]
    return min(dists), [i for i, d in enumerate(dists) if d <= eps]


def is_definable_by(m: PhiMatrix, p: TypeVector, psi: TypeVector, eps) -> bool:
    """``sup_b |p(b) - psi(b)| <= eps``; labels must match the matrix columns."""
    if p.labels != m.col_labels:
        raise ValueError("type labels do not match the matrix columns")
    return type_metric(p, psi) <= to_rational(eps)
