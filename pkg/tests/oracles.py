"""Independent reference implementations used to cross-check the package.

None of these share code with ``ilw``: they work from plain lists and use the
most direct algorithm available, however slow.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ilw.logic import Abs, Atomic, Con, Const, Integral, Linear, Product, Var


# ---------------------------------------------------------------------------
# evaluation by substitution


def substitute(phi, var, point):
    """Replace free occurrences of ``var`` by the marker ``Con('#<point>')``."""
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Atomic):
        args = tuple(Con(f"#{point}") if isinstance(t, Var) and t.name == var else t for t in phi.args)
        return Atomic(phi.relation, args, phi.rel_bound)
    if isinstance(phi, Linear):
        return Linear(phi.r, substitute(phi.left, var, point), phi.s, substitute(phi.right, var, point))
    if isinstance(phi, Product):
        return Product(substitute(phi.left, var, point), substitute(phi.right, var, point))
    if isinstance(phi, Abs):
        return Abs(substitute(phi.child, var, point))
    if isinstance(phi, Integral):
        if phi.var == var:
            return phi
        return Integral(phi.var, substitute(phi.child, var, point))
    raise TypeError(phi)


def eval_closed(struct, phi):
    """Value of a formula whose variables have all been substituted away."""
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atomic):
        idx = []
        for t in phi.args:
            if not isinstance(t, Con):
                raise ValueError("free variable left")
            idx.append(int(t.name[1:]) if t.name.startswith("#") else struct.constants[t.name])
        return struct.tables[phi.relation][tuple(idx)]
    if isinstance(phi, Linear):
        return phi.r * eval_closed(struct, phi.left) + phi.s * eval_closed(struct, phi.right)
    if isinstance(phi, Product):
        return eval_closed(struct, phi.left) * eval_closed(struct, phi.right)
    if isinstance(phi, Abs):
        return abs(eval_closed(struct, phi.child))
    if isinstance(phi, Integral):
        return sum((w * eval_closed(struct, substitute(phi.child, phi.var, i))
                    for i, w in enumerate(struct.weights)), Fraction(0))
    raise TypeError(phi)


def eval_by_substitution(struct, phi, assignment):
    for var, point in assignment.items():
        phi = substitute(phi, var, point)
    return eval_closed(struct, phi)


# ---------------------------------------------------------------------------
# ladders


def ladder_oracle(entries, r, s) -> int:
    """Longest ladder, trying every ordered row tuple.

    Once the rows ``a_1..a_k`` are fixed, column ``b_i`` only has to satisfy
    conditions against the rows, so the columns are a system of distinct
    representatives, found here by plain backtracking.
    """
    n = len(entries)
    m = len(entries[0]) if n else 0
    if not n or not m:
        return 0
    best = 1
    for k in range(2, min(n, m) + 1):
        found = False
        for rows in itertools.permutations(range(n), k):
            allowed = []
            for i in range(k):
                ok = [b for b in range(m)
                      if all(entries[rows[j]][b] <= s for j in range(i))
                      and all(entries[rows[j]][b] >= r for j in range(i + 1, k))]
                allowed.append(ok)
            if _distinct_choice(allowed, 0, set()):
                found = True
                break
        if not found:
            break
        best = k
    return best


def _distinct_choice(allowed, i, used) -> bool:
    if i == len(allowed):
        return True
    for b in allowed[i]:
        if b not in used:
            used.add(b)
            if _distinct_choice(allowed, i + 1, used):
                return True
            used.remove(b)
    return False


# ---------------------------------------------------------------------------
# dependence


def dk_oracle(functions, weights, E, s, r, k) -> Fraction:
    total = Fraction(0)
    for w in itertools.product(E, repeat=2 * k):
        hit = any(all(f[w[2 * i]] <= s and f[w[2 * i + 1]] >= r for i in range(k)) for f in functions)
        if hit:
            p = Fraction(1)
            for x in w:
                p *= weights[x]
            total += p
    return total


def shatter_oracle(functions, n, s, r) -> int:
    best = 0
    for k in range(1, n + 1):
        ok_k = False
        for w in itertools.combinations(range(n), k):
            patterns = set()
            for f in functions:
                if all(f[x] <= s or f[x] >= r for x in w):
                    patterns.add(tuple(f[x] <= s for x in w))
            if len(patterns) == 2 ** k:
                ok_k = True
                break
        if not ok_k:
            return best
        best = k
    return best


# ---------------------------------------------------------------------------
# Cantor-Bendixson by intersecting closed sets


def cb_oracle(min_open, d, eps):
    """Stages of the derivative as the intersection of every relatively closed
    ``F`` with ``diam(X \\ F) <= eps``."""
    n = len(min_open)
    X = frozenset(range(n))
    stages = [X]
    while True:
        cur = stages[-1]
        nxt = set(cur)
        for k in range(len(cur) + 1):
            for F in map(frozenset, itertools.combinations(sorted(cur), k)):
                rest = cur - F
                # F is relatively closed iff its complement in cur is relatively open
                if all(min_open[x] & cur <= rest for x in rest):
                    if max((d[x][y] for x in rest for y in rest), default=0) <= eps:
                        nxt &= F
        nxt = frozenset(nxt)
        if nxt == cur:
            return stages
        stages.append(nxt)


# ---------------------------------------------------------------------------
# free groups


INV = {"a": "A", "A": "a", "b": "B", "B": "b"}


def ball_words(n):
    out = []
    for k in range(n + 1):
        for t in itertools.product("aAbB", repeat=k):
            w = "".join(t)
            if all(INV[w[i]] != w[i + 1] for i in range(len(w) - 1)):
                out.append(w)
    return out


def prefix_cover_defect(n) -> int:
    """Ball words not reached by ``A_1 = aW`` (fixed) and ``a . A_2`` with ``A_2 = AW``."""
    words = set(ball_words(n))
    covered = {w for w in words if w.startswith("a")}
    for w in words:
        if w.startswith("A"):
            covered.add(w[1:])
    return len(words - covered)


# ---------------------------------------------------------------------------
# invariant measures by vertex enumeration


def _solve(rows, rhs):
    """Gaussian elimination; returns the unique solution or None."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    i = 0
    for j in range(ncols):
        p = next((k for k in range(i, len(m)) if m[k][j] != 0), None)
        if p is None:
            continue
        m[i], m[p] = m[p], m[i]
        m[i] = [v / m[i][j] for v in m[i]]
        for k in range(len(m)):
            if k != i and m[k][j] != 0:
                f = m[k][j]
                m[k] = [a - f * b for a, b in zip(m[k], m[i])]
        pivots.append(j)
        i += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in m):
        return None
    if len(pivots) != ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, j in zip(m, pivots):
        x[j] = row[-1]
    return x


def invariant_vertex(act_rows, n):
    """Some invariant probability vector, or None, by trying every support."""
    eqs = []
    for row in act_rows:
        for y in range(n):
            eqs.append([Fraction((1 if row[x] == y else 0) - (1 if x == y else 0)) for x in range(n)])
    for k in range(1, n + 1):
        for support in itertools.combinations(range(n), k):
            rows = [[e[x] for x in support] for e in eqs] + [[Fraction(1)] * k]
            rhs = [Fraction(0)] * len(eqs) + [Fraction(1)]
            sol = _solve(rows, rhs)
            if sol is not None and all(v >= 0 for v in sol):
                mu = [Fraction(0)] * n
                for x, v in zip(support, sol):
                    mu[x] = v
                return mu
    return None


# ---------------------------------------------------------------------------
# small semigroup actions by brute force over all tables


def all_actions(max_elements, max_points):
    """Canonical keys of every action up to relabelling, by exhaustive tables."""
    keys = set()
    for n in range(1, max_elements + 1):
        tables = []
        for flat in itertools.product(range(n), repeat=n * n):
            t = [flat[i * n:(i + 1) * n] for i in range(n)]
            if all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n)):
                tables.append(t)
        for t in tables:
            ident = next((e for e in range(n) if all(t[e][a] == a == t[a][e] for a in range(n))), None)
            for m in range(1, max_points + 1):
                for flat in itertools.product(range(m), repeat=n * m):
                    act = [flat[i * m:(i + 1) * m] for i in range(n)]
                    if ident is not None and any(act[ident][x] != x for x in range(m)):
                        continue
                    if not all(act[t[a][b]][x] == act[a][act[b][x]]
                               for a in range(n) for b in range(n) for x in range(m)):
                        continue
                    keys.add(_canonical(t, act, n, m))
    return keys


def _canonical(t, act, n, m):
    best = None
    for sg in itertools.permutations(range(n)):
        inv = [0] * n
        for i, v in enumerate(sg):
            inv[v] = i
        tt = tuple(tuple(sg[t[inv[a]][inv[b]]] for b in range(n)) for a in range(n))
        for pi in itertools.permutations(range(m)):
            pinv = [0] * m
            for i, v in enumerate(pi):
                pinv[v] = i
            aa = tuple(tuple(pi[act[inv[a]][pinv[x]]] for x in range(m)) for a in range(n))
            key = (n, m, tt, aa)
            if best is None or key < best:
                best = key
    return best


# ---------------------------------------------------------------------------
# paradoxical decompositions by enumerating every certificate


def paradox_exists(apply, E, movers, max_pieces) -> bool:
    """Try every assignment of each point of ``E`` to nothing or to (side, mover).

    ``apply(mover, x)`` returns the image or None.
    """
    E = sorted(E)
    options = [None] + [(side, m) for side in (0, 1) for m in movers]
    for choice in itertools.product(options, repeat=len(E)):
        ok = True
        for side in (0, 1):
            used = {c[1] for c in choice if c is not None and c[0] == side}
            if len(used) > max_pieces:
                ok = False
                break
            image = []
            for x, c in zip(E, choice):
                if c is not None and c[0] == side:
                    image.append(apply(c[1], x))
            if None in image or set(image) != set(E):
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Cesaro averages by direct simulation


def cesaro_partial(f_map, x0, steps):
    """``(1/steps) sum_{k<steps} delta_{f^k(x0)}``."""
    out = [Fraction(0)] * len(f_map)
    x = x0
    for _ in range(steps):
        out[x] += 1
        x = f_map[x]
    return [v / steps for v in out]
