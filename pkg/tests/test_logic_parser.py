"""Grammar round trips, AST shapes, and positioned rejection of malformed input."""

import random
from fractions import Fraction

import pytest

from finloc.errors import ParseError, UnboundVariable
from finloc.logic import nodes, parse_formula, print_formula

from conftest import random_formula


class TestParsing:
    def test_inf_dist_example(self):
        got = parse_formula("inf x:S1 . d1(x, 1/3)")
        assert got == nodes.Inf(
            "x", 1, nodes.Dist(1, nodes.Var("x"), nodes.RatConst(Fraction(1, 3)))
        )

    def test_min_neg_example(self):
        got = parse_formula("sup x:S1 . min(d1(x,0), neg(d1(x,0)))")
        body = nodes.Min(
            nodes.Dist(1, nodes.Var("x"), nodes.IntConst(0)),
            nodes.Neg(nodes.Dist(1, nodes.Var("x"), nodes.IntConst(0))),
        )
        assert got == nodes.Sup("x", 1, body)

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariable) as err:
            parse_formula("d1(x, 0)")
        assert err.value.line == 1
        assert err.value.col == 4

    def test_whitespace_and_comments(self):
        text = """
        # leading comment
        inf  x : S2 .   # trailing comment
            zero3( ( x * x ) )
        """
        got = parse_formula(text)
        assert got == nodes.Inf(
            "x", 2, nodes.ZeroPred(3, nodes.TermMul(nodes.Var("x"), nodes.Var("x")))
        )

    def test_connectives(self):
        got = parse_formula("plus(minus(1/2, 1/4), max(0, 1))")
        assert got == nodes.PlusTrunc(
            nodes.MinusTrunc(nodes.Const(Fraction(1, 2)), nodes.Const(Fraction(1, 4))),
            nodes.Max(nodes.Const(Fraction(0)), nodes.Const(Fraction(1))),
        )

    def test_negative_term_atoms(self):
        got = parse_formula("zero1((-2 + -3/4))")
        assert got == nodes.ZeroPred(
            1, nodes.TermAdd(nodes.IntConst(-2), nodes.RatConst(Fraction(-3, 4)))
        )

    def test_rational_with_unit_denominator_stays_rational(self):
        got = parse_formula("zero1(3/1)")
        assert got == nodes.ZeroPred(1, nodes.RatConst(Fraction(3)))


MALFORMED = [
    ("", 1, 1),
    ("inf x:S1 .", 1, 11),
    ("inf x:S1 d1(x,x)", 1, 10),
    ("inf x:T1 . d1(x,x)", 1, 5),
    ("inf x:S0 . d1(x,x)", 1, 7),
    ("d0(1, 2)", 1, 1),
    ("zero0(1)", 1, 1),
    ("min(0)", 1, 6),
    ("min(0, 1", 1, 9),
    ("3/2", 1, 1),
    ("2", 1, 1),
    ("neg 0", 1, 5),
    ("inf sup:S1 . d1(sup, 0)", 1, 5),
    ("inf x:S1 . d1((x + ), 0)", 1, 20),
    ("inf x:S1 . d1((x % x), 0)", 1, 17),
    ("inf x:S1 . d1(x, 1/0)", 1, 20),
    ("inf x:S1 . d1(x, x) trailing", 1, 21),
    ("sup d1:S1 . d1(d1, 0)", 1, 5),
]


class TestMalformed:
    @pytest.mark.parametrize("text,line,col", MALFORMED)
    def test_rejected_with_position(self, text, line, col):
        with pytest.raises(ParseError) as err:
            parse_formula(text)
        assert err.value.line == line
        assert err.value.col == col

    def test_expected_token_set_present(self):
        with pytest.raises(ParseError) as err:
            parse_formula("min[0, 1)")
        assert err.value.expected


class TestRoundTrip:
    def test_thousand_random_asts(self):
        rng = random.Random(0xF1D0)
        for _ in range(1000):
            formula = random_formula(rng, depth=rng.randint(0, 6))
            assert parse_formula(print_formula(formula)) == formula

    def test_printer_examples(self):
        f = parse_formula("sup x:S1 . inf y:S1 . d2((y * y), x)")
        assert print_formula(f) == "sup x:S1 . inf y:S1 . d2((y * y), x)"
