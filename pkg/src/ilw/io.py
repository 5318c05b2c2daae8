"""Readers and writers for the workbench file formats.

Most formats are TOML documents whose rationals are quoted ``"p/q"`` strings
(plain TOML integers are accepted too, floats never).  The matrix format is a
whitespace table instead.
"""

from __future__ import annotations

import itertools
import shlex
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

import tomli

from .invariance import FiniteAction, FiniteSemigroup, ParadoxCertificate, PartialAction
from .logic import FormulaError, Signature, Theory, parse_theory
from .nip import FunctionFamily
from .rational import fmt, to_rational
from .stability import PhiMatrix
from .structures import FiniteStructure
from .topometric import FiniteTopoSpace


class FileFormatError(ValueError):
    """Malformed input; the message starts with the file name and position when known."""


def _fail(source: str, message: str) -> FileFormatError:
    return FileFormatError(f"{source}: {message}")


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise FileFormatError(f"{path}: not valid UTF-8") from None


def _toml(text: str, source: str) -> dict:
    try:
        return tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise _fail(source, str(exc)) from None


def _rational(value: Any, source: str, where: str) -> Fraction:
    if isinstance(value, float):
        raise _fail(source, f"{where}: write rationals as quoted \"p/q\", not floats")
    try:
        return to_rational(value)
    except (TypeError, ValueError) as exc:
        raise _fail(source, f"{where}: {exc}") from None


def _rationals(values: Any, source: str, where: str) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise _fail(source, f"{where}: expected an array")
    return tuple(_rational(v, source, f"{where}[{i}]") for i, v in enumerate(values))


def _need(doc: Mapping, key: str, source: str, where: str = "") -> Any:
    if key not in doc:
        raise _fail(source, f"missing key {where + key!r}")
    return doc[key]


def _labels(values: Any, source: str, where: str) -> tuple[str, ...]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise _fail(source, f"{where}: expected an array of strings")
    if len(set(values)) != len(values):
        raise _fail(source, f"{where}: labels must be unique")
    return tuple(values)


def _index(label: Any, labels: Sequence[str], source: str, where: str) -> int:
    if isinstance(label, str):
        if label not in labels:
            raise _fail(source, f"{where}: unknown label {label!r}")
        return labels.index(label)
    if isinstance(label, int) and not isinstance(label, bool) and 0 <= label < len(labels):
        return label
    raise _fail(source, f"{where}: expected a label or index, got {label!r}")


def _guarded(source: str, build):
    try:
        return build()
    except FileFormatError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise _fail(source, str(exc)) from None


# ---------------------------------------------------------------------------
# signatures, structures, theories


def parse_signature(text: str, source: str = "<signature>") -> Signature:
    doc = _toml(text, source)
    relations = {}
    for name, entry in doc.get("relation", {}).items():
        arity = _need(entry, "arity", source, f"relation.{name}.")
        bound = _rational(_need(entry, "bound", source, f"relation.{name}."), source,
                          f"relation.{name}.bound")
        relations[name] = (arity, bound)
    constants = doc.get("constants", [])
    return _guarded(source, lambda: Signature.build(relations, constants))


def _depth(nested) -> int:
    d = 0
    while isinstance(nested, list):
        if not nested:
            break
        nested = nested[0]
        d += 1
    return d


def parse_structure(text: str, source: str = "<structure>") -> FiniteStructure:
    """``[space]`` points/weights, ``[relation.R]`` values (+ optional arity, bound),
    ``[constant.c]`` point.  A missing bound defaults to the largest absolute entry."""
    doc = _toml(text, source)
    space = _need(doc, "space", source)
    points = _labels(_need(space, "points", source, "space."), source, "space.points")
    weights = _rationals(_need(space, "weights", source, "space."), source, "space.weights")
    n = len(points)
    relations, tables = {}, {}
    for name, entry in doc.get("relation", {}).items():
        values = _need(entry, "values", source, f"relation.{name}.")
        arity = entry.get("arity", _depth(values))
        if not isinstance(arity, int) or arity < 0:
            raise _fail(source, f"relation.{name}.arity: expected a non-negative integer")
        table = {}
        for idx in itertools.product(range(n), repeat=arity):
            cell = values
            try:
                for i in idx:
                    if not isinstance(cell, list) or len(cell) != n:
                        raise IndexError
                    cell = cell[i]
            except IndexError:
                raise _fail(source, f"relation.{name}.values: expected a {'x'.join([str(n)] * arity)} array") from None
            table[idx] = _rational(cell, source, f"relation.{name}.values{list(idx)}")
        bound = entry.get("bound")
        bound = (max((abs(v) for v in table.values()), default=Fraction(0)) if bound is None
                 else _rational(bound, source, f"relation.{name}.bound"))
        relations[name] = (arity, bound)
        tables[name] = table
    constants = {}
    for name, entry in doc.get("constant", {}).items():
        constants[name] = _index(_need(entry, "point", source, f"constant.{name}."), points,
                                 source, f"constant.{name}.point")
    sig = _guarded(source, lambda: Signature.build(relations, constants))
    return _guarded(source, lambda: FiniteStructure(sig, points, weights, tables, constants))


def _toml_str(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _toml_array(values) -> str:
    return "[" + ", ".join(values) + "]"


def _nested(table, n, arity, prefix=()):
    if len(prefix) == arity:
        return _toml_str(fmt(table[prefix]))
    return _toml_array(_nested(table, n, arity, prefix + (i,)) for i in range(n))


def dump_structure(struct: FiniteStructure) -> str:
    lines = ["[space]",
             f"points = {_toml_array(map(_toml_str, struct.points))}",
             f"weights = {_toml_array(_toml_str(fmt(w)) for w in struct.weights)}"]
    for rel in struct.signature.relations:
        lines += ["", f"[relation.{rel.name}]", f"arity = {rel.arity}",
                  f"bound = {_toml_str(fmt(rel.bound))}",
                  f"values = {_nested(struct.tables[rel.name], len(struct), rel.arity)}"]
    for c, i in struct.constants.items():
        lines += ["", f"[constant.{c}]", f"point = {_toml_str(struct.points[i])}"]
    return "\n".join(lines) + "\n"


def parse_theory_file(text: str, sig: Signature, source: str = "<theory>") -> Theory:
    try:
        return parse_theory(text, sig)
    except (FormulaError, ValueError) as exc:
        raise _fail(source, str(exc)) from None


# ---------------------------------------------------------------------------
# actions and paradox data


def parse_action(text: str, source: str = "<action>") -> FiniteAction:
    """``[semigroup] elements, table`` (row-major, ``table[s][t] = s*t``) and
    ``[action] points, table`` (``table[s][x] = s.x``); entries are labels or indices."""
    doc = _toml(text, source)
    sg = _need(doc, "semigroup", source)
    elements = _labels(_need(sg, "elements", source, "semigroup."), source, "semigroup.elements")
    cayley = [[_index(v, elements, source, f"semigroup.table[{i}][{j}]") for j, v in enumerate(row)]
              for i, row in enumerate(_need(sg, "table", source, "semigroup."))]
    act = _need(doc, "action", source)
    points = _labels(_need(act, "points", source, "action."), source, "action.points")
    table = [[_index(v, points, source, f"action.table[{i}][{j}]") for j, v in enumerate(row)]
             for i, row in enumerate(_need(act, "table", source, "action."))]
    semigroup = _guarded(source, lambda: FiniteSemigroup(elements, tuple(map(tuple, cayley))))
    return _guarded(source, lambda: FiniteAction(semigroup, points, tuple(map(tuple, table))))


def dump_action(action: FiniteAction) -> str:
    S = action.semigroup
    rows = lambda table, labels: _toml_array(  # noqa: E731
        _toml_array(_toml_str(labels[v]) for v in row) for row in table)
    return "\n".join([
        "[semigroup]",
        f"elements = {_toml_array(map(_toml_str, S.elements))}",
        f"table = {rows(S.cayley, S.elements)}",
        "",
        "[action]",
        f"points = {_toml_array(map(_toml_str, action.points))}",
        f"table = {rows(action.act, action.points)}",
    ]) + "\n"


def parse_partial_action(text: str, source: str = "<partial action>") -> PartialAction:
    """``points = [...]`` and ``[generators] name = [[from, to], ...]``."""
    doc = _toml(text, source)
    points = _labels(_need(doc, "points", source), source, "points")
    gens = {}
    for name, pairs in _need(doc, "generators", source).items():
        pmap = {}
        for k, pair in enumerate(pairs):
            if not isinstance(pair, list) or len(pair) != 2:
                raise _fail(source, f"generators.{name}[{k}]: expected a [from, to] pair")
            x = _index(pair[0], points, source, f"generators.{name}[{k}]")
            if x in pmap:
                raise _fail(source, f"generators.{name}: point {points[x]!r} mapped twice")
            pmap[x] = _index(pair[1], points, source, f"generators.{name}[{k}]")
        gens[name] = pmap
    return _guarded(source, lambda: PartialAction(points, gens))


def dump_partial_action(pa: PartialAction) -> str:
    lines = [f"points = {_toml_array(map(_toml_str, pa.points))}", "", "[generators]"]
    for name, pmap in pa.generators.items():
        pairs = (_toml_array([_toml_str(pa.points[x]), _toml_str(pa.points[y])])
                 for x, y in sorted(pmap.items()))
        lines.append(f"{name} = {_toml_array(pairs)}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, pa: PartialAction, source: str = "<certificate>") -> ParadoxCertificate:
    """``target = [...]`` then ``[[a]]`` / ``[[b]]`` entries with ``piece`` and ``mover``."""
    doc = _toml(text, source)
    target = frozenset(_index(p, pa.points, source, "target") for p in _need(doc, "target", source))
    sides = []
    for side in ("a", "b"):
        pieces = []
        for k, entry in enumerate(doc.get(side, [])):
            piece = frozenset(_index(p, pa.points, source, f"{side}[{k}].piece")
                              for p in _need(entry, "piece", source, f"{side}[{k}]."))
            mover = _guarded(source, lambda: pa.parse_mover(str(entry.get("mover", "e"))))
            pieces.append((piece, mover))
        sides.append(tuple(pieces))
    return ParadoxCertificate(target, sides[0], sides[1])


# ---------------------------------------------------------------------------
# matrices and families


def parse_matrix(text: str, source: str = "<matrix>", bound=None) -> PhiMatrix:
    """Header line of column labels, then ``label v1 v2 ...`` per row; ``#`` starts a comment."""
    rows, labels, header = [], [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            fields = shlex.split(line, comments=True)
        except ValueError as exc:
            raise _fail(source, f"line {lineno}: {exc}") from None
        if not fields:
            continue
        if header is None:
            header = tuple(fields)
            continue
        if len(fields) != len(header) + 1:
            raise _fail(source, f"line {lineno}: expected a label and {len(header)} values")
        labels.append(fields[0])
        rows.append(tuple(_rational(v, source, f"line {lineno}") for v in fields[1:]))
    if header is None or not rows:
        raise _fail(source, "empty matrix")
    if bound is None:
        bound = max(abs(v) for r in rows for v in r)
    return _guarded(source, lambda: PhiMatrix(tuple(labels), header, tuple(rows), bound))


def dump_matrix(m: PhiMatrix) -> str:
    quote = lambda s: shlex.quote(s)  # noqa: E731
    lines = [" ".join(map(quote, m.col_labels))]
    for label, row in zip(m.row_labels, m.entries):
        lines.append(" ".join([quote(label)] + [f'"{fmt(v)}"' for v in row]))
    return "\n".join(lines) + "\n"


def parse_family(text: str, source: str = "<family>") -> FunctionFamily:
    """``[carrier] points, weights`` and ``[functions] name = [...]``."""
    doc = _toml(text, source)
    carrier = _need(doc, "carrier", source)
    points = _labels(_need(carrier, "points", source, "carrier."), source, "carrier.points")
    weights = _rationals(_need(carrier, "weights", source, "carrier."), source, "carrier.weights")
    functions = {name: _rationals(values, source, f"functions.{name}")
                 for name, values in doc.get("functions", {}).items()}
    return _guarded(source, lambda: FunctionFamily.of(points, weights, functions))


def dump_family(fam: FunctionFamily) -> str:
    lines = ["[carrier]",
             f"points = {_toml_array(map(_toml_str, fam.points))}",
             f"weights = {_toml_array(_toml_str(fmt(w)) for w in fam.weights)}",
             "", "[functions]"]
    for names, f in zip(fam.names, fam.functions):
        lines.append(f"{names[0]} = {_toml_array(_toml_str(fmt(v)) for v in f)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# topometric spaces


def parse_space(text: str, source: str = "<space>") -> FiniteTopoSpace:
    """``points``, ``minopen.<p> = [...]`` and a lower-triangular ``metric``.

    Row ``i`` of the metric lists ``d(p_i, p_0) ... d(p_i, p_{i-1})``, with or
    without the trailing diagonal zero.  A point without a ``minopen`` entry
    gets ``{p}``.
    """
    doc = _toml(text, source)
    points = _labels(_need(doc, "points", source), source, "points")
    n = len(points)
    minopen_doc = doc.get("minopen", {})
    unknown = set(minopen_doc) - set(points)
    if unknown:
        raise _fail(source, f"minopen: unknown points {sorted(unknown)}")
    min_open = tuple(frozenset(_index(q, points, source, f"minopen.{p}") for q in minopen_doc[p])
                     if p in minopen_doc else frozenset({i})
                     for i, p in enumerate(points))
    rows = _need(doc, "metric", source)
    if not isinstance(rows, list) or len(rows) != n:
        raise _fail(source, f"metric: expected {n} rows")
    d = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(rows):
        values = _rationals(row, source, f"metric[{i}]")
        if len(values) == i + 1:
            if values[i] != 0:
                raise _fail(source, f"metric[{i}]: diagonal entry must be 0")
            values = values[:i]
        if len(values) != i:
            raise _fail(source, f"metric[{i}]: expected {i} entries below the diagonal")
        for j, v in enumerate(values):
            d[i][j] = d[j][i] = v
    return _guarded(source, lambda: FiniteTopoSpace(points, min_open, tuple(map(tuple, d))))


def dump_space(space: FiniteTopoSpace) -> str:
    lines = [f"points = {_toml_array(map(_toml_str, space.points))}",
             "metric = " + _toml_array(
                 _toml_array(_toml_str(fmt(space.metric[i][j])) for j in range(i))
                 for i in range(len(space))),
             "", "[minopen]"]
    for p, U in zip(space.points, space.min_open):
        lines.append(f"{_toml_str(p)} = {_toml_array(_toml_str(space.points[q]) for q in sorted(U))}")
    return "\n".join(lines) + "\n"
