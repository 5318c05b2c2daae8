"""Exact rational simplex (two phases, Bland's rule) with Farkas certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    """``status`` is ``optimal``, ``infeasible`` or ``unbounded``.

    For ``infeasible`` results ``farkas`` is a vector ``z`` with ``A^T z >= 0``
    and ``b . z < 0``, which proves that ``Ax = b, x >= 0`` has no solution.
    """

    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [v / piv for v in row]
        self.rhs[i] /= piv
        for k, other in enumerate(self.rows):
            if k != i and other[j]:
                f = other[j]
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
                self.rhs[k] -= f * self.rhs[i]
        self.basis[i] = j

    def reduced_costs(self, cost: Sequence[Fraction], allowed: int) -> list[Fraction]:
        cb = [cost[b] for b in self.basis]
        out = []
        for j in range(allowed):
            z = sum((c * r[j] for c, r in zip(cb, self.rows) if c), ZERO)
            out.append(cost[j] - z)
        return out

    def run(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Minimise ``cost`` over the first ``allowed`` columns with Bland's rule."""
        while True:
            red = self.reduced_costs(cost, allowed)
            entering = next((j for j in range(allowed) if red[j] < 0 and j not in self.basis), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (self.rhs[i] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def solve(A: Sequence[Sequence], b: Sequence, c: Sequence | None = None) -> LPResult:
    """Minimise ``c . x`` subject to ``A x = b``, ``x >= 0`` in exact arithmetic.

    With ``c`` omitted only feasibility is decided and the phase-1 basic
    solution is returned.
    """
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    signs = [(-1 if bi < 0 else 1) for bi in b]
    rows = []
    for i in range(m):
        art = [ZERO] * m
        art[i] = Fraction(1)
        rows.append([signs[i] * v for v in A[i]] + art)
    tab = _Tableau(rows, [signs[i] * b[i] for i in range(m)], [n + i for i in range(m)])

    phase1 = [ZERO] * n + [Fraction(1)] * m
    tab.run(phase1, n + m)
    infeasibility = sum((tab.rhs[i] for i in range(m) if tab.basis[i] >= n), ZERO)
    if infeasibility > 0:
        # dual of phase 1: y = c_B B^-1, read from the artificial columns
        y = []
        for k in range(m):
            yk = sum((phase1[bv] * tab.rows[i][n + k] for i, bv in enumerate(tab.basis)), ZERO)
            y.append(yk * signs[k])
        z = tuple(-v for v in y)
        _check_farkas(A, b, z)
        return LPResult("infeasible", farkas=z)

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if j is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1

    value = None
    status = "optimal"
    if c is not None:
        cost = [Fraction(v) for v in c] + [ZERO] * m
        status = tab.run(cost, n)
        if status == "unbounded":
            return LPResult("unbounded")
    x = [ZERO] * n
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rhs[i]
    if c is not None:
        value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult(status, x=tuple(x), value=value)


def _check_farkas(A, b, z) -> None:
    for j in range(len(A[0]) if A else 0):
        if sum((A[i][j] * z[i] for i in range(len(A))), ZERO) < 0:
            raise AssertionError("internal error: Farkas certificate fails A^T z >= 0")
    if sum((bi * zi for bi, zi in zip(b, z)), ZERO) >= 0:
        raise AssertionError("internal error: Farkas certificate fails b . z < 0")
