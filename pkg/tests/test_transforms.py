import pytest

from painleve_forge import JetPoly, parse_expr
from painleve_forge.odefile import load_fixture
from painleve_forge.transforms import (
    InvariantPair,
    compare_equations,
    hodograph_raise,
    invert_dependent,
    reduction_residual,
)

u = JetPoly.u
x = JetPoly.x()


def fx(name):
    return load_fixture(name).equation()


class TestInvertDependent:
    def test_chazy(self, chazy):
        assert invert_dependent(chazy) == fx("chazy_w")

    def test_linear(self):
        # content 1 and positive leading coefficient in the canonical order
        assert invert_dependent(parse_expr("y'' - y")) == parse_expr("y*y'' - 2*y'^2 + y^2")

    def test_raised(self):
        assert invert_dependent(fx("chazy_raised")) == fx("chazy_raised_inv")

    def test_involution(self, chazy):
        assert invert_dependent(invert_dependent(chazy)) == chazy.normalized()

    def test_order_limit(self):
        with pytest.raises(ValueError):
            invert_dependent(u(5))


class TestHodographRaise:
    def test_scaling_reduction(self):
        raised = hodograph_raise(fx("chazy_scaling"))
        assert raised == fx("chazy_raised")
        P = parse_expr
        hand = P(
            "(y + y')^2*y'*y''' - (y + y')*(y*y''^2 + 2*(2 + y)*y'^2*y'') + (3*y' + 6 + 4*y)*y'^4"
        )
        assert compare_equations(raised, hand).identical

    def test_alternative_form_differs(self):
        diff = compare_equations(hodograph_raise(fx("chazy_scaling")), fx("chazy_raised_alt"))
        assert not diff.identical

    def test_pure_chain_rule(self):
        assert hodograph_raise(u(2)) == u(3) * u(1) - u(2) * u(2)

    def test_first_order_rejected(self):
        with pytest.raises(ValueError):
            hodograph_raise(u(1) - 1)


class TestReductionResidual:
    def test_translation(self, chazy):
        ok, cert = reduction_residual(chazy, InvariantPair(u(0), u(1)), fx("chazy_translation"))
        assert ok and cert.is_zero

    def test_abel(self):
        inv = InvariantPair.from_strings("w/r^2", "w'/r", "w", "r")
        assert reduction_residual(fx("chazy_translation"), inv, fx("chazy_abel"))[0]

    def test_scaling(self, chazy):
        inv = InvariantPair(x * u(0), x * x * u(1))
        assert reduction_residual(chazy, inv, fx("chazy_scaling"))[0]

    def test_wrong_invariants(self, chazy):
        ok, cert = reduction_residual(chazy, InvariantPair(u(0), u(0)), fx("chazy_translation"))
        assert not ok and cert.as_poly() == u(0) + 1

    def test_identity(self, chazy):
        assert reduction_residual(chazy, InvariantPair(x, u(0)), chazy)[0]

    def test_constant_r_rejected(self):
        with pytest.raises(ValueError):
            InvariantPair(JetPoly.const(3), u(0))


def test_compare_reports_changes():
    d = compare_equations(parse_expr("y'' + 2*y"), parse_expr("y'' + 3*y + x"))
    assert d.only_right == (("x", "1"),)
    assert d.changed == (("y", "2", "3"),)
    assert compare_equations(parse_expr("2*y'' - 4*y"), parse_expr("y - y''/2")).identical
