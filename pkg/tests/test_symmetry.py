from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve_forge import JetPoly, parse_expr
from painleve_forge.symmetry import (
    VectorField,
    apply_prolonged,
    is_symmetry,
    lie_bracket,
    prolong,
    structure_constants,
)

u = JetPoly.u
x = JetPoly.x()

X1 = VectorField(JetPoly.const(1), JetPoly())
X2 = VectorField(x, -u(0))
X3 = VectorField(x * x, -(x * u(0) * 2) - 6)
SCALE_Y = VectorField(JetPoly(), u(0))


def test_field_rejects_derivatives():
    with pytest.raises(ValueError):
        VectorField.from_strings("1", "y'")


def test_from_strings():
    assert VectorField.from_strings("x^2", "-2*x*y - 6") == X3


class TestProlong:
    def test_translation(self):
        assert prolong(X1, 3) == [JetPoly()] * 3

    def test_scaling(self):
        assert prolong(X2, 1) == [-(u(1) * 2)]

    def test_projective(self):
        assert prolong(X3, 1) == [-(u(0) * 2) - x * u(1) * 4]


class TestApplyProlonged:
    def test_autonomous(self, chazy):
        assert apply_prolonged(X1, chazy).is_zero

    def test_scaling_weight(self, chazy):
        assert apply_prolonged(X2, chazy) == chazy.scale(-4)

    def test_negative_control(self, chazy):
        assert apply_prolonged(SCALE_Y, chazy) == parse_expr("y''' - 4*y*y'' + 6*y'^2")


class TestIsSymmetry:
    @pytest.mark.parametrize("field", [X1, X2, X3])
    def test_sl2(self, chazy, field):
        ok, cert = is_symmetry(field, chazy)
        assert ok and cert.is_zero

    def test_not_symmetry(self, chazy):
        ok, cert = is_symmetry(SCALE_Y, chazy)
        assert not ok
        assert cert.as_poly() == parse_expr("-2*y*y'' + 3*y'^2")

    def test_linear_translation(self):
        assert is_symmetry(X1, parse_expr("y'' - y"))[0]


class TestBrackets:
    def test_pairs(self):
        assert lie_bracket(X1, X2) == X1
        assert lie_bracket(X1, X3) == X2.scale(2)
        assert lie_bracket(X2, X3) == X3

    def test_table(self):
        t = structure_constants([X1, X2, X3])
        assert t.closed
        assert t.bracket(0, 1) == (1, 0, 0)
        assert t.bracket(0, 2) == (0, 2, 0)
        assert t.bracket(1, 2) == (0, 0, 1)
        assert t.bracket(1, 0) == (-1, 0, 0)

    def test_single(self):
        t = structure_constants([X1])
        assert t.brackets == {} and t.closed

    def test_commuting(self):
        t = structure_constants([X1, SCALE_Y])
        assert t.closed and t.bracket(0, 1) == (0, 0)

    def test_not_closed(self):
        t = structure_constants([X1, X3])
        assert not t.closed and t.bracket(0, 1) is None


coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=3)
point_monos = st.lists(st.integers(0, 2), min_size=1, max_size=2).map(tuple)
point_polys = st.dictionaries(point_monos, coeffs, max_size=3).map(JetPoly)
fields = st.builds(VectorField, point_polys, point_polys)


@settings(max_examples=40, deadline=None)
@given(fields, fields)
def test_antisymmetry(a, b):
    assert lie_bracket(a, b) == lie_bracket(b, a).scale(-1)


@settings(max_examples=30, deadline=None)
@given(fields, fields, fields)
def test_jacobi(a, b, c):
    total = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) + lie_bracket(c, lie_bracket(a, b))
    assert total.is_zero


@settings(max_examples=30, deadline=None)
@given(fields, fields, coeffs)
def test_prolongation_linear(a, b, k):
    lhs = prolong(a.scale(k) + b, 3)
    rhs = [pa.scale(k) + pb for pa, pb in zip(prolong(a, 3), prolong(b, 3))]
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(fields, fields)
def test_bracket_acts_as_commutator(a, b):
    f = JetPoly({(1, 2): Fraction(1), (3,): Fraction(2)})
    assert lie_bracket(a, b).apply(f) == a.apply(b.apply(f)) - b.apply(a.apply(f))
