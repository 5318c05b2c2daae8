"""Finite semigroup actions, invariant measures and paradoxical decompositions."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import lp
from .cancel import CancelToken, checkpoint
from .logic import (Abs, Atomic, Con, Const, Integral, Linear, Product, Signature,
                    Statement, Theory, Var, max_of)
from .rational import check_probability, to_rational
from .structures import FiniteStructure

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FiniteSemigroup:
    """``cayley[s][t]`` is the index of ``s*t``."""

    elements: tuple[str, ...]
    cayley: tuple[tuple[int, ...], ...]
    identity: int | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.elements)
        table = tuple(tuple(int(v) for v in row) for row in self.cayley)
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "cayley", table)
        if n == 0 or len(table) != n or any(len(row) != n for row in table):
            raise ValueError("Cayley table must be square and non-empty")
        if any(not 0 <= v < n for row in table for v in row):
            raise ValueError("Cayley table entry out of range")
        for s, t, u in itertools.product(range(n), repeat=3):
            if table[table[s][t]][u] != table[s][table[t][u]]:
                raise ValueError(f"not associative at ({self.elements[s]}, {self.elements[t]}, {self.elements[u]})")
        if self.identity is None:
            object.__setattr__(self, "identity", _find_identity(table))
        elif any(table[self.identity][s] != s or table[s][self.identity] != s for s in range(n)):
            raise ValueError("declared identity is not a two-sided identity")

    def __len__(self):
        return len(self.elements)

    def mul(self, s: int, t: int) -> int:
        return self.cayley[s][t]

    @property
    def is_commutative(self) -> bool:
        n = len(self)
        return all(self.cayley[s][t] == self.cayley[t][s] for s in range(n) for t in range(n))


def _find_identity(table) -> int | None:
    n = len(table)
    for e in range(n):
        if all(table[e][s] == s and table[s][e] == s for s in range(n)):
            return e
    return None


@dataclass(frozen=True)
class FiniteAction:
    """``act[s][x]`` is the index of ``s . x``; ``(st) . x = s . (t . x)``."""

    semigroup: FiniteSemigroup
    points: tuple[str, ...]
    act: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        S, m = self.semigroup, len(self.points)
        act = tuple(tuple(int(v) for v in row) for row in self.act)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "act", act)
        if m == 0 or len(act) != len(S) or any(len(row) != m for row in act):
            raise ValueError("action table must have one row per element and one column per point")
        if any(not 0 <= v < m for row in act for v in row):
            raise ValueError("action table entry out of range")
        for s, t in itertools.product(range(len(S)), repeat=2):
            st = S.cayley[s][t]
            for x in range(m):
                if act[st][x] != act[s][act[t][x]]:
                    raise ValueError(
                        f"action law fails: ({S.elements[s]}{S.elements[t]}).{self.points[x]}")
        if S.identity is not None and any(act[S.identity][x] != x for x in range(m)):
            raise ValueError("identity does not act trivially")

    def __len__(self):
        return len(self.points)

    def element(self, s: int | str) -> int:
        return s if isinstance(s, int) else self.semigroup.elements.index(s)

    def point(self, x: int | str) -> int:
        return x if isinstance(x, int) else self.points.index(x)

    def maps(self) -> list[tuple[int, ...]]:
        return list(self.act)


def translate(f: Sequence, s: int | str, action: FiniteAction) -> tuple[Fraction, ...]:
    """``(f . s)(x) = f(s . x)``."""
    if len(f) != len(action):
        raise IndexError("function length does not match the point set")
    row = action.act[action.element(s)]
    return tuple(Fraction(f[row[x]]) for x in range(len(action)))


# ---------------------------------------------------------------------------
# invariant measures as an exact LP


def invariance_rows(action: FiniteAction) -> list[tuple[int, int, tuple[int, ...]]]:
    """Non-trivial invariance equations ``sum_{x: s.x = y} mu(x) - mu(y) = 0``.

    Each row is ``(s, y, coefficients)``; the coefficient vector is
    ``1_y . s - 1_y``.
    """
    rows = []
    m = len(action)
    for s, row in enumerate(action.act):
        for y in range(m):
            coeffs = tuple((1 if row[x] == y else 0) - (1 if x == y else 0) for x in range(m))
            if any(coeffs):
                rows.append((s, y, coeffs))
    return rows


def is_invariant(action: FiniteAction, measure: Sequence) -> bool:
    """Exact check of every invariance equation plus the probability constraints."""
    mu = [Fraction(v) for v in measure]
    if len(mu) != len(action) or any(v < 0 for v in mu) or sum(mu) != 1:
        return False
    for _, _, coeffs in invariance_rows(action):
        if sum((c * v for c, v in zip(coeffs, mu)), ZERO) != 0:
            return False
    return True


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    measure: tuple[Fraction, ...] | None = None
    #: Farkas weights on the invariance equations, keyed by (element, point)
    dual: Mapping[tuple[int, int], Fraction] | None = None
    #: Farkas weight on the normalisation row; negative when infeasible
    dual_total: Fraction | None = None


def invariant_measures(action: FiniteAction) -> FeasibilityResult:
    """Decide whether an invariant probability measure exists.

    When one does, the returned measure is the average of the vertices that
    maximise each coordinate in turn, so its support is as large as the
    invariance equations allow (the uniform measure for a trivial action).
    """
    rows = invariance_rows(action)
    m = len(action)
    A = [list(coeffs) for _, _, coeffs in rows] + [[1] * m]
    b = [0] * len(rows) + [1]
    first = lp.solve(A, b)
    if first.status == "infeasible":
        z = first.farkas
        dual = {(s, y): z[k] for k, (s, y, _) in enumerate(rows) if z[k]}
        return FeasibilityResult(False, dual=dual, dual_total=z[-1])
    vertices = []
    for x in range(m):
        cost = [0] * m
        cost[x] = -1
        res = lp.solve(A, b, cost)
        if res.status == "optimal" and res.x[x] > 0:
            vertices.append(res.x)
    if not vertices:
        vertices.append(first.x)
    mu = tuple(sum(col, ZERO) / len(vertices) for col in zip(*vertices))
    if not is_invariant(action, mu):
        raise AssertionError("internal error: LP measure fails an invariance equation")
    return FeasibilityResult(True, measure=mu)


@dataclass(frozen=True)
class DualityWitness:
    """Functions ``f_i`` and elements ``s_i`` with ``||1 - sum(f_i.s_i - f_i)|| < 1``."""

    pairs: tuple[tuple[tuple[Fraction, ...], int], ...]
    norm: Fraction
    h: tuple[Fraction, ...]


def witness_norm(action: FiniteAction, pairs: Iterable[tuple[Sequence, int | str]]) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Return ``(||1 - h||_inf, h)`` for ``h = sum(f_i . s_i - f_i)``."""
    h = [ZERO] * len(action)
    for f, s in pairs:
        fs = translate(f, s, action)
        for x in range(len(action)):
            h[x] += fs[x] - Fraction(f[x])
    return max(abs(1 - v) for v in h), tuple(h)


def infeasibility_witness(action: FiniteAction) -> DualityWitness:
    result = invariant_measures(action)
    if result.feasible:
        raise ValueError("feasible: the action has an invariant measure")
    m = len(action)
    per_element: dict[int, list[Fraction]] = {}
    for (s, y), w in sorted(result.dual.items()):
        per_element.setdefault(s, [ZERO] * m)[y] += w
    _, h = witness_norm(action, [(f, s) for s, f in per_element.items()])
    # h >= -dual_total > 0 everywhere; rescale so that max h = 1
    scale = max(h)
    pairs = tuple((tuple(v / scale for v in f), s) for s, f in sorted(per_element.items()))
    norm, h = witness_norm(action, pairs)
    if not norm < 1:
        raise AssertionError("internal error: witness norm is not below 1")
    return DualityWitness(pairs, norm, h)


# ---------------------------------------------------------------------------
# Cesaro averages for commuting maps


def pushforward(f_map: Sequence[int], nu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [ZERO] * len(nu)
    for x, w in enumerate(nu):
        if w:
            out[f_map[x]] += w
    return tuple(out)


def _compose(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """``f o g``."""
    return tuple(f[g[x]] for x in range(len(g)))


def commute(f: Sequence[int], g: Sequence[int]) -> bool:
    return _compose(f, g) == _compose(g, f)


def cesaro_step(f_map: Sequence[int], nu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Exact limit of ``(1/(n+1)) sum_{k<=n} P^k nu`` for the pushforward ``P`` of ``f_map``.

    The powers ``f^k`` are eventually periodic; the limit is the average of
    ``P^k nu`` over one period after the preperiod.
    """
    n = len(f_map)
    power = tuple(range(n))
    seen: dict[tuple[int, ...], int] = {}
    powers = []
    k = 0
    while power not in seen:
        seen[power] = k
        powers.append(power)
        power = _compose(f_map, power)
        k += 1
    start = seen[power]
    cycle = powers[start:]
    total = [ZERO] * n
    for p in cycle:
        for x, w in enumerate(pushforward(p, nu)):
            total[x] += w
    return tuple(v / len(cycle) for v in total)


def cesaro_limit(maps: Sequence[Sequence[int]], x0: int) -> tuple[Fraction, ...]:
    """Nested Cesaro averaging of ``delta_{x0}`` along pairwise commuting maps."""
    maps = [tuple(f) for f in maps]
    if not maps:
        raise ValueError("at least one map is required")
    n = len(maps[0])
    if any(len(f) != n or any(not 0 <= v < n for v in f) for f in maps):
        raise ValueError("maps must be self-maps of one finite set")
    for f, g in itertools.combinations(maps, 2):
        if not commute(f, g):
            raise ValueError("maps do not commute")
    if not 0 <= x0 < n:
        raise IndexError("start point out of range")
    nu = tuple(ONE if x == x0 else ZERO for x in range(n))
    for f in maps:
        nu = cesaro_step(f, nu)
    return nu


def period_data(f_map: Sequence[int]) -> tuple[int, int]:
    """``(preperiod, period)`` of the sequence of powers of ``f_map``."""
    n = len(f_map)
    power = tuple(range(n))
    seen = {}
    k = 0
    while power not in seen:
        seen[power] = k
        power = _compose(f_map, power)
        k += 1
    return seen[power], k - seen[power]


def cycle_lcm(f_map: Sequence[int]) -> int:
    """lcm of the cycle lengths of a self-map; equals the period of its powers."""
    out = 1
    for x in range(len(f_map)):
        pos = {}
        y, step = x, 0
        while y not in pos:
            pos[y] = step
            y = f_map[y]
            step += 1
        out = lcm(out, step - pos[y])
    return out


# ---------------------------------------------------------------------------
# fixed points and multiplicative measures


def fixed_points(action: FiniteAction) -> frozenset[int]:
    return frozenset(x for x in range(len(action)) if all(row[x] == x for row in action.act))


def dirac(n: int, x: int) -> tuple[Fraction, ...]:
    return tuple(ONE if i == x else ZERO for i in range(n))


def is_multiplicative(measure: Sequence, family: Sequence[Sequence]) -> bool:
    mu = [to_rational(v) for v in measure]
    check_probability(mu, "measure")
    fam = [[to_rational(v) for v in f] for f in family]
    if any(len(f) != len(mu) for f in fam):
        raise ValueError("family vectors must match the measure's length")

    def integral(f):
        return sum((w * v for w, v in zip(mu, f)), ZERO)

    for f, g in itertools.product(fam, repeat=2):
        if integral(f) * integral(g) != integral([a * b for a, b in zip(f, g)]):
            return False
    return True


def indicator_family(n: int) -> list[tuple[Fraction, ...]]:
    return [dirac(n, x) for x in range(n)]


# ---------------------------------------------------------------------------
# theories of invariant measures

_NAME_BAD = re.compile(r"[^A-Za-z0-9_]")


def _ident(prefix: str, label: str) -> str:
    return prefix + _NAME_BAD.sub("_", str(label))


def close_under_translation(action: FiniteAction, family: Mapping[str, Sequence]) -> dict[str, tuple[Fraction, ...]]:
    """Add every translate ``f . s`` missing from the family, named ``<f>_<s>``."""
    out = {name: tuple(to_rational(v) for v in f) for name, f in family.items()}
    known = {f: name for name, f in out.items()}
    frontier = list(out.items())
    while frontier:
        name, f = frontier.pop(0)
        for s, label in enumerate(action.semigroup.elements):
            g = translate(f, s, action)
            if g not in known:
                new = _ident("", f"{name}_{label}")
                while new in out:
                    new += "_"
                out[new] = g
                known[g] = new
                frontier.append((new, g))
    return out


def build_invariance_theory(action: FiniteAction, family: Mapping[str, Sequence],
                            multiplicative: bool = False) -> tuple[Theory, Signature, dict]:
    """Finite instance of the theory of (multiplicative) invariant measures.

    Returns ``(theory, signature, family)``; the family is the input closed
    under translation, and relation ``R_<name>`` interprets family member
    ``<name>``.  Pointwise axioms are stated in closed form as
    ``int x. |lhs - rhs| = 0``.
    """
    n = len(action)
    fam = close_under_translation(action, family)
    ones = tuple([ONE] * n)
    by_vector = {f: name for name, f in fam.items()}
    if ones not in by_vector:
        raise ValueError("family must contain the constant-1 vector")
    rel = {name: _ident("R_", name) for name in fam}
    const = {x: _ident("c_", label) for x, label in enumerate(action.points)}
    sig = Signature.build(
        {rel[name]: (1, max((abs(v) for v in f), default=ZERO)) for name, f in fam.items()},
        const.values())

    def R(name, var="x"):
        r = sig.relation(rel[name])
        return Atomic(r.name, (Var(var),), r.bound)

    def integral(name):
        return Integral("x", R(name))

    def pointwise(phi, label):
        return Statement(Integral("x", Abs(phi)), "=", ZERO, label)

    one = by_vector[ones]
    out = [pointwise(Linear(1, R(one), -1, Const(1)), "axiom 1"),
           Statement(integral(one), "=", ONE, "axiom 2")]
    for name, f in fam.items():
        r = sig.relation(rel[name])
        for x in range(n):
            atom = Atomic(r.name, (Con(const[x]),), r.bound)
            out.append(Statement(atom, "=", f[x], "axiom 3"))
    names = list(fam)
    for a, b in itertools.combinations_with_replacement(names, 2):
        f, g = fam[a], fam[b]
        total = tuple(u + v for u, v in zip(f, g))
        if total in by_vector:
            out.append(pointwise(Linear(1, R(by_vector[total]), -1, Linear(1, R(a), 1, R(b))), "axiom 4"))
    for a, b in itertools.permutations(names, 2):
        ratio = _scalar_ratio(fam[a], fam[b])
        if ratio is not None:
            out.append(pointwise(Linear(1, R(b), -ratio, R(a)), "axiom 5"))
    products = []
    for a, b in itertools.combinations_with_replacement(names, 2):
        prod = tuple(u * v for u, v in zip(fam[a], fam[b]))
        if prod in by_vector:
            products.append((a, b, by_vector[prod]))
            out.append(pointwise(Linear(1, R(by_vector[prod]), -1, Product(R(a), R(b))), "axiom 6"))
    for a, b in itertools.combinations(names, 2):
        top = tuple(max(u, v) for u, v in zip(fam[a], fam[b]))
        if top in by_vector:
            out.append(pointwise(Linear(1, R(by_vector[top]), -1, max_of(R(a), R(b))), "axiom 7"))
    for name, f in fam.items():
        for s in range(len(action.semigroup)):
            g = by_vector[translate(f, s, action)]
            out.append(Statement(Linear(1, integral(name), -1, integral(g)), "=", ZERO, "axiom 8"))
    if multiplicative:
        for a, b, p in products:
            out.append(Statement(Linear(1, integral(p), -1, Product(integral(a), integral(b))),
                                 "=", ZERO, "axiom 9"))
    return Theory(tuple(out)), sig, fam


def _scalar_ratio(f, g) -> Fraction | None:
    """``r`` with ``g = r f`` when ``f`` is non-zero and ``r`` is not 1."""
    pivot = next((i for i, v in enumerate(f) if v), None)
    if pivot is None:
        return None
    r = g[pivot] / f[pivot]
    if r == 1 or any(r * u != v for u, v in zip(f, g)):
        return None
    return r


def natural_structure(action: FiniteAction, signature: Signature, family: Mapping[str, Sequence],
                      measure: Sequence) -> FiniteStructure:
    """``(X, mu)`` with ``R_f = f`` and ``c_a = a``."""
    tables = {}
    for name, f in family.items():
        rname = _ident("R_", name)
        tables[rname] = {(x,): to_rational(f[x]) for x in range(len(action))}
    consts = {_ident("c_", label): x for x, label in enumerate(action.points)}
    return FiniteStructure(signature, action.points, tuple(measure), tables, consts)


# ---------------------------------------------------------------------------
# partial actions and paradoxical decompositions

Mover = tuple[str, ...]


@dataclass(frozen=True)
class PartialAction:
    points: tuple[str, ...]
    generators: Mapping[str, Mapping[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        gens = {}
        for name, pmap in self.generators.items():
            pmap = {int(k): int(v) for k, v in dict(pmap).items()}
            if len(set(pmap.values())) != len(pmap):
                raise ValueError(f"generator {name} is not injective")
            if any(not 0 <= v < len(self.points) for kv in pmap.items() for v in kv):
                raise ValueError(f"generator {name} leaves the point set")
            gens[name] = pmap
        object.__setattr__(self, "generators", gens)

    def apply(self, mover: Mover, x: int) -> int | None:
        """Apply a word right to left; ``None`` where it is undefined."""
        for g in reversed(mover):
            x = self.generators[g].get(x)
            if x is None:
                return None
        return x

    def parse_mover(self, text: str) -> Mover:
        text = text.strip()
        if text in ("", "e", "1"):
            return ()
        parts = [p for p in re.split(r"[\s,.*]+", text) if p]
        if all(p in self.generators for p in parts):
            return tuple(parts)
        if len(parts) == 1 and all(ch in self.generators for ch in text):
            return tuple(text)
        raise ValueError(f"unknown mover {text!r}")

    def movers(self, max_length: int = 1) -> list[Mover]:
        """Words of length <= ``max_length`` in the generators, shortest first."""
        gens = sorted(self.generators)
        out: list[Mover] = [()]
        for k in range(1, max_length + 1):
            out.extend(itertools.product(gens, repeat=k))
        return out

    @classmethod
    def from_permutations(cls, points: Sequence[str], perms: Mapping[str, Sequence[int]],
                          inverses: bool = True) -> "PartialAction":
        gens = {}
        for name, p in perms.items():
            gens[name] = dict(enumerate(p))
            if inverses:
                gens[name + "_inv"] = {v: k for k, v in enumerate(p)}
        return cls(tuple(points), gens)


def mover_text(mover: Mover) -> str:
    if not mover:
        return "e"
    if all(len(g) == 1 for g in mover):
        return "".join(mover)
    return " ".join(mover)


@dataclass(frozen=True)
class ParadoxCertificate:
    target: frozenset
    a_pieces: tuple[tuple[frozenset, Mover], ...]
    b_pieces: tuple[tuple[frozenset, Mover], ...] = ()


@dataclass(frozen=True)
class DefectReport:
    undefined_count: int
    uncovered_1: frozenset
    uncovered_2: frozenset
    escaped_count: int
    exact: bool


def paradox_verify(pa: PartialAction, cert: ParadoxCertificate) -> DefectReport:
    E = frozenset(cert.target)
    if any(not 0 <= x < len(pa.points) for x in E):
        raise ValueError("target leaves the point set")
    pieces = [frozenset(p) for p, _ in cert.a_pieces + cert.b_pieces]
    for p in pieces:
        if not p <= E:
            raise ValueError("piece is not contained in the target set")
    for p, q in itertools.combinations(pieces, 2):
        if p & q:
            raise ValueError("pieces are not pairwise disjoint")
    undefined = 0
    escaped = 0
    uncovered = []
    for side in (cert.a_pieces, cert.b_pieces):
        covered = set()
        for piece, mover in side:
            for x in piece:
                y = pa.apply(tuple(mover), x)
                if y is None:
                    undefined += 1
                elif y in E:
                    covered.add(y)
                else:
                    escaped += 1
        uncovered.append(E - covered)
    exact = not uncovered[0] and not uncovered[1] and undefined == 0 and escaped == 0
    return DefectReport(undefined, uncovered[0], uncovered[1], escaped, exact)


#: largest target set searched exhaustively without the heuristic flag
EXHAUSTIVE_LIMIT = 12


def paradox_search(pa: PartialAction, E: Iterable[int], max_pieces: int,
                   movers: Sequence[Mover] | None = None, heuristic: bool = False,
                   cancel: CancelToken | None = None) -> ParadoxCertificate | None:
    """Backtracking search for an exact paradoxical decomposition of ``E``.

    Pieces sharing a mover can be merged and surplus points dropped, so the
    search assigns every target point exactly one preimage per side, with at
    most ``max_pieces`` distinct movers per side.  Movers are injective, so a
    side consumes as many source points as ``E`` has; the branch is cut as
    soon as the unused sources cannot pay for the uncovered targets.
    """
    E = sorted(set(E))
    if len(E) > EXHAUSTIVE_LIMIT and not heuristic:
        raise ValueError(f"|E| = {len(E)} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}; "
                         "pass heuristic=True to search anyway")
    if movers is None:
        movers = pa.movers(1)
    movers = [tuple(m) for m in movers]
    Eset = set(E)
    # preimages[y] = [(x, mover)] with mover.x = y, x in E
    preimages = {y: [] for y in E}
    for mover in movers:
        for x in E:
            y = pa.apply(mover, x)
            if y in Eset:
                preimages[y].append((x, mover))
    targets = [(0, y) for y in E] + [(1, y) for y in E]
    used: dict[int, tuple[int, Mover]] = {}
    side_movers = [dict(), dict()]  # mover -> use count
    counter = [0]

    def search(t: int) -> bool:
        counter[0] += 1
        checkpoint(cancel, counter[0])
        if t == len(targets):
            return True
        if len(E) - len(used) < len(targets) - t:
            return False
        side, y = targets[t]
        for x, mover in preimages[y]:
            if x in used:
                continue
            fresh = mover not in side_movers[side]
            if fresh and len(side_movers[side]) >= max_pieces:
                continue
            used[x] = (side, mover)
            side_movers[side][mover] = side_movers[side].get(mover, 0) + 1
            if search(t + 1):
                return True
            del used[x]
            side_movers[side][mover] -= 1
            if not side_movers[side][mover]:
                del side_movers[side][mover]
        return False

    if not search(0):
        return None
    grouped = [dict(), dict()]
    for x, (side, mover) in used.items():
        grouped[side].setdefault(mover, set()).add(x)
    return ParadoxCertificate(
        frozenset(E),
        tuple((frozenset(p), m) for m, p in grouped[0].items()),
        tuple((frozenset(p), m) for m, p in grouped[1].items()))


# ---------------------------------------------------------------------------
# free group balls

F2_LETTERS = "aAbB"
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def reduced_words(n: int) -> list[str]:
    """Reduced words of length <= n over a, A=a^-1, b, B=b^-1, length then letter order."""
    words = [""]
    layer = [""]
    for _ in range(n):
        nxt = []
        for w in layer:
            for ch in F2_LETTERS:
                if not w or _INVERSE[w[-1]] != ch:
                    nxt.append(w + ch)
        words.extend(nxt)
        layer = nxt
    return words


def _left_multiply(g: str, w: str) -> str:
    if w and w[0] == _INVERSE[g]:
        return w[1:]
    return g + w


def f2ball(n: int) -> PartialAction:
    """Left translations by a, A, b, B restricted to the ball of radius ``n``."""
    if n < 0:
        raise ValueError("radius must be non-negative")
    words = reduced_words(n)
    index = {w: i for i, w in enumerate(words)}
    gens = {}
    for g in F2_LETTERS:
        pmap = {}
        for w, i in index.items():
            v = _left_multiply(g, w)
            if v in index:
                pmap[i] = index[v]
        gens[g] = pmap
    return PartialAction(tuple(w or "e" for w in words), gens)


def f2_prefix_certificate(n: int) -> tuple[PartialAction, ParadoxCertificate]:
    """Words starting with ``a`` (mover e) and with ``A`` (mover a) on the radius-n ball."""
    pa = f2ball(n)
    starts_a = frozenset(i for i, w in enumerate(pa.points) if w.startswith("a"))
    starts_A = frozenset(i for i, w in enumerate(pa.points) if w.startswith("A"))
    cert = ParadoxCertificate(frozenset(range(len(pa.points))),
                              ((starts_a, ()), (starts_A, ("a",))))
    return pa, cert
