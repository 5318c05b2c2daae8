import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilw import generate
from ilw.logic import (Abs, Atomic, Con, Const, FormulaError, Integral, Linear, Product, Signature,
                       Statement, Theory, Var, free_variables, max_of, min_of, parse_formula,
                       parse_theory, print_formula, universal_bound)

SIG = Signature.build({"R": (1, 1), "S": (1, 3), "P": (2, 1), "Q": (3, 2), "T": (0, 3), "U": (0, 1)},
                      ["c", "d"])


def parse(text):
    return parse_formula(text, SIG)


def test_integral_of_unary_relation():
    phi = parse("int x. R(x)")
    assert phi == Integral("x", Atomic("R", (Var("x"),), 1))
    assert free_variables(phi) == frozenset()


def test_linear_bound():
    sig = Signature.build({"P": (0, 1), "Q": (0, 3)})
    phi = parse_formula("2*P + -1*Q", sig)
    assert isinstance(phi, Linear)
    assert (phi.r, phi.s) == (2, -1)
    assert universal_bound(phi) == 5


def test_max_desugars_to_linear():
    sig = Signature.build({"P": (0, 1), "Q": (0, 3)})
    phi = parse_formula("max(P, Q)", sig)
    P, Q = Atomic("P", (), 1), Atomic("Q", (), 3)
    assert isinstance(phi, Linear)
    assert phi == max_of(P, Q)
    # b_P + 2 b_Q
    assert phi.bound == 7


def test_min_desugars():
    sig = Signature.build({"P": (0, 1), "Q": (0, 3)})
    assert parse_formula("min(P, Q)", sig) == min_of(Atomic("P", (), 1), Atomic("Q", (), 3))


@pytest.mark.parametrize("text", ["int x. R(x)", "abs(U)", "1/2*U + 1/2*abs(U)"])
def test_print_round_trip(text):
    phi = parse(text)
    assert parse(print_formula(phi)) == phi


def test_abs_prints_as_written():
    assert print_formula(parse("abs(U)")) == "abs(U)"


def test_rational_literals_survive():
    phi = parse("1/2*U + 1/2*abs(U)")
    assert print_formula(phi) == "1/2*U + 1/2*abs(U)"
    assert phi.r == Fraction(1, 2)


def test_bound_cases():
    sig = Signature.build({"R": (1, 3), "A": (0, 2), "B": (0, 3)})
    assert parse_formula("R(x)", sig).bound == 3
    assert parse_formula("A*B", sig).bound == 6
    assert parse_formula("int x. R(x)", sig).bound == 3
    assert parse_formula("-5/2", sig).bound == Fraction(5, 2)


def test_free_variables():
    assert free_variables(parse("int y. P(x, y)")) == {"x"}
    assert free_variables(parse("R(c)")) == frozenset()
    assert free_variables(parse("P(x, y) + R(x)")) == {"x", "y"}


def test_subtraction_is_linear():
    phi = parse("U - T")
    assert phi == Linear(1, Atomic("U", (), 1), -1, Atomic("T", (), 3))


def test_unary_minus():
    assert parse("-U") == Product(Const(-1), Atomic("U", (), 1))
    assert parse("1 - -3") == Linear(1, Const(1), -1, Const(-3))


def test_multiplication_binds_tighter():
    phi = parse("U + T*U")
    assert isinstance(phi, Linear)
    assert phi.right == Product(Atomic("T", (), 3), Atomic("U", (), 1))


def test_int_extends_right():
    phi = parse("int x. R(x) + U")
    assert isinstance(phi, Integral)
    assert isinstance(phi.child, Linear)
    assert isinstance(parse("(int x. R(x)) + U"), Linear)


def test_constants_as_arguments():
    phi = parse("P(c, x)")
    assert phi.args == (Con("c"), Var("x"))


@pytest.mark.parametrize("text, fragment", [
    ("int x. R(x", "expected ')'"),
    ("R(x) +", "expected a formula"),
    ("V(x)", "unknown relation"),
    ("P(x)", "arity 2"),
    ("R", "needs an argument list"),
    ("int x. int x. R(x)", "shadows"),
    ("int c. R(c)", "cannot be used as a variable"),
    ("c", "constant 'c' used as a formula"),
    ("R(int)", "keyword"),
    ("1/0", "zero denominator"),
    ("R(x) $ U", "unexpected character"),
])
def test_errors(text, fragment):
    with pytest.raises(FormulaError) as exc:
        parse(text)
    assert fragment in str(exc.value)


def test_error_position():
    with pytest.raises(FormulaError) as exc:
        parse("U + + ")
    assert exc.value.pos == 6


def test_shadowing_rejected_in_ast():
    with pytest.raises(FormulaError):
        Integral("x", Integral("x", Atomic("R", (Var("x"),), 1)))


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature.build({"R": (1, 1)}, ["R"])
    with pytest.raises(ValueError):
        Signature.build({"R": (1, -1)})
    with pytest.raises(ValueError):
        Signature.build({"int": (1, 1)})


def test_statement_and_theory():
    st_ = Statement(parse("int x. R(x)"), "=", "1/2")
    assert st_.closed
    assert st_.text() == '"int x. R(x)" = "1/2"'
    with pytest.raises(ValueError):
        Theory((Statement(parse("R(x)"), ">=", 0),))
    with pytest.raises(ValueError):
        Statement(parse("U"), "<", 0)


def test_parse_theory():
    text = '# comment\n"int x. R(x)" = "1/2"  # half\n\n"U" >= "0"\n'
    th = parse_theory(text, SIG)
    assert len(th) == 2
    assert th.statements[0].label == "half"
    assert th.statements[1].label == "line 4"
    assert parse_theory(th.text(), SIG) == th
    with pytest.raises(FormulaError, match="not closed"):
        parse_theory('"R(x)" = "0"', SIG)
    with pytest.raises(FormulaError, match="line 1"):
        parse_theory('R(x) = 0', SIG)


# ---------------------------------------------------------------------------
# properties


@st.composite
def formulas(draw):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = random.Random(seed)
    sig = generate.signature(rng)
    return sig, generate.formula(rng, sig, depth=draw(st.integers(0, 5)))


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip_property(case):
    sig, phi = case
    text = print_formula(phi)
    again = parse_formula(text, sig)
    assert again == phi
    assert again.bound == phi.bound
    assert print_formula(again) == text


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_bound_nonnegative(case):
    _, phi = case
    assert phi.bound >= 0


@given(st.fractions(), st.fractions())
def test_const_bound(r, s):
    phi = Linear(r, Const(1), s, Abs(Const(-2)))
    assert phi.bound == abs(r) + 2 * abs(s)
