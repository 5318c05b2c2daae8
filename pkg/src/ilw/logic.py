"""Integral-logic formulas: syntax tree, parser, printer and universal bounds.

The surface grammar::

    formula := sum
    sum     := term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := RATIONAL | IDENT "(" args ")" | IDENT | "abs" "(" formula ")"
             | "max" "(" formula "," formula ")" | "min" "(" formula "," formula ")"
             | "int" VAR "." formula | "(" formula ")"

A term that starts with a rational literal followed by ``*`` inside a sum
contributes that literal as its linear coefficient, so ``2*P + -1*Q`` is the
single node ``Linear(2, P, -1, Q)``.  ``int`` extends as far right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .rational import RationalLike, fmt, to_rational

KEYWORDS = frozenset({"int", "abs", "max", "min"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormulaError(ValueError):
    """Raised for malformed formulas; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class RelationSymbol:
    name: str
    arity: int
    bound: Fraction


@dataclass(frozen=True)
class Signature:
    relations: tuple[RelationSymbol, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = [r.name for r in self.relations] + list(self.constants)
        if len(set(names)) != len(names):
            raise ValueError("relation and constant names must be unique")
        for name in names:
            if not _IDENT.match(name) or name in KEYWORDS:
                raise ValueError(f"illegal symbol name {name!r}")
        for rel in self.relations:
            if rel.arity < 0:
                raise ValueError(f"relation {rel.name}: negative arity")
            if rel.bound < 0:
                raise ValueError(f"relation {rel.name}: negative bound")

    @classmethod
    def build(cls, relations: Mapping[str, tuple[int, RationalLike]] = (),
              constants: Iterable[str] = ()) -> "Signature":
        rels = tuple(RelationSymbol(name, int(arity), to_rational(bound))
                     for name, (arity, bound) in dict(relations).items())
        return cls(rels, tuple(constants))

    def relation(self, name: str) -> RelationSymbol:
        for rel in self.relations:
            if rel.name == name:
                return rel
        raise KeyError(name)

    def has_relation(self, name: str) -> bool:
        return any(r.name == name for r in self.relations)


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Con:
    name: str


Term = Union[Var, Con]


@dataclass(frozen=True)
class Const:
    value: Fraction
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "bound", abs(self.value))
        object.__setattr__(self, "free_vars", frozenset())


@dataclass(frozen=True)
class Atomic:
    relation: str
    args: tuple[Term, ...]
    rel_bound: Fraction = field(compare=False, repr=False)
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.rel_bound))
        object.__setattr__(self, "free_vars",
                           frozenset(t.name for t in self.args if isinstance(t, Var)))


@dataclass(frozen=True)
class Linear:
    r: Fraction
    left: "Formula"
    s: Fraction
    right: "Formula"
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "bound",
                           abs(self.r) * self.left.bound + abs(self.s) * self.right.bound)
        object.__setattr__(self, "free_vars", self.left.free_vars | self.right.free_vars)


@dataclass(frozen=True)
class Product:
    left: "Formula"
    right: "Formula"
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bound", self.left.bound * self.right.bound)
        object.__setattr__(self, "free_vars", self.left.free_vars | self.right.free_vars)


@dataclass(frozen=True)
class Abs:
    child: "Formula"
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bound", self.child.bound)
        object.__setattr__(self, "free_vars", self.child.free_vars)


@dataclass(frozen=True)
class Integral:
    var: str
    child: "Formula"
    bound: Fraction = field(init=False, compare=False, repr=False)
    free_vars: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.var in bound_variables(self.child):
            raise FormulaError(f"variable {self.var!r} is re-bound inside its own integral")
        object.__setattr__(self, "bound", self.child.bound)
        object.__setattr__(self, "free_vars", self.child.free_vars - {self.var})


Formula = Union[Const, Atomic, Linear, Product, Abs, Integral]


def bound_variables(phi: Formula) -> frozenset:
    if isinstance(phi, Integral):
        return bound_variables(phi.child) | {phi.var}
    if isinstance(phi, (Linear, Product)):
        return bound_variables(phi.left) | bound_variables(phi.right)
    if isinstance(phi, Abs):
        return bound_variables(phi.child)
    return frozenset()


def universal_bound(phi: Formula) -> Fraction:
    return phi.bound


def free_variables(phi: Formula) -> frozenset:
    return phi.free_vars


# sugar -----------------------------------------------------------------------

def positive_part(phi: Formula) -> Formula:
    half = Fraction(1, 2)
    return Linear(half, phi, half, Abs(phi))


def max_of(phi: Formula, psi: Formula) -> Formula:
    """``max(phi, psi) = (phi - psi)^+ + psi``."""
    return Linear(1, positive_part(Linear(1, phi, -1, psi)), 1, psi)


def min_of(phi: Formula, psi: Formula) -> Formula:
    """``min(phi, psi) = psi - (psi - phi)^+``."""
    return Linear(1, psi, -1, positive_part(Linear(1, psi, -1, phi)))


def atomic(sig: Signature, relation: str, *args: str) -> Atomic:
    """Build an atom, reading each argument as a constant if the signature has one."""
    rel = sig.relation(relation)
    if len(args) != rel.arity:
        raise FormulaError(f"{relation} expects {rel.arity} arguments, got {len(args)}")
    terms = tuple(Con(a) if a in sig.constants else Var(a) for a in args)
    return Atomic(relation, terms, rel.bound)


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*().,])
""", re.VERBOSE)

# tokens after which a '-' starts a signed literal rather than a subtraction
_SIGN_CONTEXT = {None, "(", ",", "+", "-", "*", "."}


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    pos = 0
    prev: str | None = None
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            pos = m.end()
            continue
        if kind == "op" and lexeme in "+-" and prev in _SIGN_CONTEXT:
            num = re.compile(r"\s*(\d+(?:/\d+)?)").match(text, m.end())
            if num:
                value = _literal(num.group(1), pos)
                tokens.append(("num", -value if lexeme == "-" else value, pos))
                prev = "num"
                pos = num.end()
                continue
            # a sign before a non-literal reads as a coefficient of -1 or 1
            tokens.append(("num", Fraction(-1 if lexeme == "-" else 1), pos))
            tokens.append(("*", "*", pos))
            prev = "*"
            pos = m.end()
            continue
        if kind == "num":
            tokens.append(("num", _literal(lexeme, pos), pos))
            prev = "num"
        elif kind == "ident":
            tokens.append(("ident", lexeme, pos))
            prev = "ident"
        else:
            tokens.append((lexeme, lexeme, pos))
            prev = lexeme
        pos = m.end()
    tokens.append(("eof", None, len(text)))
    return tokens


def _literal(lexeme: str, pos: int) -> Fraction:
    num, _, den = lexeme.partition("/")
    if den and int(den) == 0:
        raise FormulaError("zero denominator", pos)
    return Fraction(int(num), int(den) if den else 1)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaError(f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        phi = self.sum()
        self.take("eof")
        return phi

    def sum(self) -> Formula:
        coef, acc = self.term()
        if self.peek()[0] not in ("+", "-"):
            return acc if coef is None else Product(Const(coef), acc)
        left_coef = Fraction(1) if coef is None else coef
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.take()[0] == "+" else -1
            coef, body = self.term()
            right_coef = sign * (Fraction(1) if coef is None else coef)
            acc = Linear(left_coef, acc, right_coef, body)
            left_coef = Fraction(1)
        return acc

    def term(self) -> tuple[Fraction | None, Formula]:
        """Return ``(coefficient, body)``; the coefficient is a leading literal."""
        first_is_literal = self.peek()[0] == "num"
        factors = [self.factor()]
        while self.peek()[0] == "*":
            self.take("*")
            factors.append(self.factor())
        if first_is_literal and len(factors) > 1:
            coef = factors[0].value
            return coef, _fold_product(factors[1:])
        return None, _fold_product(factors)

    def factor(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return Const(value)
        if kind == "(":
            self.take("(")
            phi = self.sum()
            self.take(")")
            return phi
        if kind != "ident":
            found = "end of input" if kind == "eof" else repr(value)
            raise FormulaError(f"expected a formula, found {found}", pos)
        if value == "int":
            self.take()
            var_tok = self.take("ident")
            var = var_tok[1]
            if var in KEYWORDS or var in self.sig.constants or self.sig.has_relation(var):
                raise FormulaError(f"{var!r} cannot be used as a variable", var_tok[2])
            if var in self.scope:
                raise FormulaError(f"variable {var!r} shadows an enclosing integral", var_tok[2])
            self.take(".")
            self.scope.append(var)
            try:
                body = self.sum()
            finally:
                self.scope.pop()
            return Integral(var, body)
        if value in ("abs", "max", "min"):
            self.take()
            self.take("(")
            first = self.sum()
            if value == "abs":
                self.take(")")
                return Abs(first)
            self.take(",")
            second = self.sum()
            self.take(")")
            return max_of(first, second) if value == "max" else min_of(first, second)
        return self.atom()

    def atom(self) -> Atomic:
        _, name, pos = self.take("ident")
        if not self.sig.has_relation(name):
            if name in self.sig.constants:
                raise FormulaError(f"constant {name!r} used as a formula", pos)
            raise FormulaError(f"unknown relation symbol {name!r}", pos)
        rel = self.sig.relation(name)
        args: list[Term] = []
        if self.peek()[0] == "(":
            self.take("(")
            if self.peek()[0] != ")":
                args.append(self.argument())
                while self.peek()[0] == ",":
                    self.take(",")
                    args.append(self.argument())
            self.take(")")
        elif rel.arity != 0:
            raise FormulaError(f"relation {name!r} of arity {rel.arity} needs an argument list", pos)
        if len(args) != rel.arity:
            raise FormulaError(
                f"relation {name!r} has arity {rel.arity}, given {len(args)} arguments", pos)
        return Atomic(name, tuple(args), rel.bound)

    def argument(self) -> Term:
        _, name, pos = self.take("ident")
        if name in KEYWORDS:
            raise FormulaError(f"keyword {name!r} used as a term", pos)
        if self.sig.has_relation(name):
            raise FormulaError(f"relation {name!r} used as a term", pos)
        return Con(name) if name in self.sig.constants else Var(name)


def _fold_product(factors: list[Formula]) -> Formula:
    acc = factors[0]
    for phi in factors[1:]:
        acc = Product(acc, phi)
    return acc


def parse_formula(text: str, sig: Signature) -> Formula:
    return _Parser(text, sig).parse()


# ---------------------------------------------------------------------------
# printer


def print_formula(phi: Formula) -> str:
    """Render ``phi`` so that :func:`parse_formula` rebuilds the same tree."""
    if isinstance(phi, Linear):
        return f"{fmt(phi.r)}*{_operand(phi.left)} + {fmt(phi.s)}*{_operand(phi.right)}"
    if isinstance(phi, Product):
        return f"{_factor(phi.left, leftmost=True)}*{_factor(phi.right)}"
    if isinstance(phi, Integral):
        return f"int {phi.var}. {print_formula(phi.child)}"
    return _atomish(phi)


def _atomish(phi: Formula) -> str:
    if isinstance(phi, Const):
        return fmt(phi.value)
    if isinstance(phi, Atomic):
        if not phi.args:
            return phi.relation
        return f"{phi.relation}({', '.join(t.name for t in phi.args)})"
    if isinstance(phi, Abs):
        return f"abs({print_formula(phi.child)})"
    return f"({print_formula(phi)})"


def _operand(phi: Formula) -> str:
    # the body after a linear coefficient: products and sums need brackets
    if isinstance(phi, (Const, Atomic, Abs)):
        return _atomish(phi)
    return f"({print_formula(phi)})"


def _factor(phi: Formula, leftmost: bool = False) -> str:
    if isinstance(phi, Const):
        return fmt(phi.value)
    if isinstance(phi, Product) and leftmost and not isinstance(phi.left, Const):
        return print_formula(phi)
    return _operand(phi)


# ---------------------------------------------------------------------------
# statements and theories


@dataclass(frozen=True)
class Statement:
    formula: Formula
    comparator: str
    threshold: Fraction
    label: str = field(default="user", compare=False)

    def __post_init__(self):
        if self.comparator not in (">=", "="):
            raise ValueError(f"comparator must be '>=' or '=', got {self.comparator!r}")
        object.__setattr__(self, "threshold", to_rational(self.threshold))

    @property
    def closed(self) -> bool:
        return not self.formula.free_vars

    def text(self) -> str:
        return f'"{print_formula(self.formula)}" {self.comparator} "{fmt(self.threshold)}"'


@dataclass(frozen=True)
class Theory:
    statements: tuple[Statement, ...] = ()

    def __post_init__(self):
        for st in self.statements:
            if not st.closed:
                raise ValueError(f"theory member is not closed: {st.text()}")

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)

    def text(self) -> str:
        return "".join(f"{st.text()}  # {st.label}\n" for st in self.statements)


_STATEMENT_LINE = re.compile(r'\s*"(?P<f>[^"]*)"\s*(?P<cmp>>=|=)\s*"?(?P<r>[-+]?\d+(?:/\d+)?)"?\s*(?:#\s*(?P<label>.*))?\Z')


def parse_theory(text: str, sig: Signature) -> Theory:
    statements = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _STATEMENT_LINE.match(line)
        if not m:
            raise FormulaError(f"line {lineno}: expected '\"<formula>\" >= \"<rational>\"'")
        try:
            phi = parse_formula(m.group("f"), sig)
        except FormulaError as exc:
            raise FormulaError(f"line {lineno}: {exc}") from None
        label = (m.group("label") or f"line {lineno}").strip()
        st = Statement(phi, m.group("cmp"), to_rational(m.group("r")), label)
        if not st.closed:
            raise FormulaError(f"line {lineno}: statement is not closed")
        statements.append(st)
    return Theory(tuple(statements))
