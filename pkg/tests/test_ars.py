from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve_forge import JetPoly, parse_expr
from painleve_forge.ars import (
    ARBITRARY,
    ClassificationError,
    CompatibilityFailure,
    Direction,
    ResonanceResult,
    analyze,
    build_series,
    classify,
    consistency_check,
    find_balances,
    resonances,
    scan_balances,
    series_residuals,
)
from painleve_forge.transforms import invert_dependent
from painleve_forge import upoly

CHAZY_LEFT_8 = {0: -6, 1: 1, 2: 1, 3: 1, 4: F(-1, 6), 5: F(5, 12), 6: F(-1, 20), 7: F(-1, 90), 8: F(17, 360)}
CHAZY_LEFT_TAIL = {9: F(-1, 48), 10: F(61, 6480), 11: F(-59, 32400), 12: F(-127, 237600)}
W_RIGHT_8 = [1, 1, F(3, 2), F(5, 3), F(13, 6), F(8, 3), F(95, 28), F(17, 4), F(901, 168)]


def _result(roots):
    poly = [F(1)]
    for r in roots:
        poly = upoly.mul(poly, [F(-r), F(1)])
    return ResonanceResult(poly, sorted(F(r) for r in roots), False, -1 in roots)


def _chazy_branch(chazy):
    (b,) = find_balances(chazy)
    return b, resonances(chazy, b)


class TestBalances:
    def test_chazy(self, chazy):
        scan = scan_balances(chazy)
        assert [(b.p, b.coeff) for b in scan.balances] == [(-1, -6)]
        assert [r.p for r in scan.rejected] == [-2]

    def test_w_equation(self, chazy):
        bs = find_balances(invert_dependent(chazy))
        assert sorted(b.p for b in bs) == [-2, -1]
        assert all(b.coeff is ARBITRARY for b in bs)

    def test_painleve_ince(self, equation):
        bs = find_balances(equation("painleve_ince"))
        assert sorted((b.p, b.coeff) for b in bs) == [(-1, 1), (-1, 2)]

    def test_linear_has_none(self, equation):
        assert find_balances(equation("linear")) == []

    def test_dominant_terms_balance(self, chazy, equation):
        # u = c x^p: dominant terms share the minimal exponent and cancel at c
        for delta in (chazy, equation("painleve_ince"), equation("chazy_raised")):
            for b in find_balances(delta):
                if b.coeff is ARBITRARY:
                    continue
                exps, total = set(), F(0)
                for mono in b.dominant_terms:
                    c = delta.terms[mono]
                    e = F(mono[0] if mono else 0)
                    for k, a in enumerate(mono[1:]):
                        e += a * (b.p - k)
                        for _ in range(a):
                            c *= b.coeff * upoly.falling_value(b.p, k)
                    exps.add(e)
                    total += c
                assert len(exps) == 1 and total == 0


class TestResonances:
    def test_chazy(self, chazy):
        _, r = _chazy_branch(chazy)
        assert list(r.poly_coeffs) == [6, 11, 6, 1]
        assert list(r.rational_roots) == [-3, -2, -1]
        assert r.contains_generic and not r.has_nonrational_factor

    def test_roots_divide(self, chazy, equation):
        for delta in (chazy, equation("painleve_ince"), equation("chazy_raised_inv")):
            for b in find_balances(delta):
                r = resonances(delta, b)
                for root in r.rational_roots:
                    assert upoly.synthetic_division(r.poly_coeffs, root)[1] == 0
                assert r.contains_generic == (upoly.evaluate(r.poly_coeffs, -1) == 0)

    def test_root_sum(self, chazy):
        # monic cubic: sum of roots = -(next-to-top coefficient)
        _, r = _chazy_branch(chazy)
        assert sum(r.rational_roots) == -r.poly_coeffs[-2]

    def test_painleve_ince(self, equation):
        delta = equation("painleve_ince")
        got = {b.coeff: resonances(delta, b).rational_roots for b in find_balances(delta)}
        assert list(got[2]) == [-2, -1]
        assert list(got[1]) == [-1, 1]


class TestClassify:
    def test_directions(self):
        assert classify(_result([-1, -2, -3])) is Direction.LEFT
        assert classify(_result([-1, 0, 1])) is Direction.RIGHT
        assert classify(_result([-1, -2])) is Direction.LEFT
        assert classify(_result([-1, 2])) is Direction.RIGHT
        assert classify(_result([-1, -2, 1])) is Direction.FULL

    def test_refuses_irrational(self):
        r = ResonanceResult([F(-2), F(0), F(1)], [], True, False)
        with pytest.raises(ClassificationError):
            classify(r)


class TestSeries:
    def test_chazy_left(self, chazy):
        b, r = _chazy_branch(chazy)
        s = build_series(chazy, b, r, 8, {1: 1, 2: 1})
        assert s.direction is Direction.LEFT
        assert s.coeffs == CHAZY_LEFT_8
        assert s.free_indices == {1, 2, 3}
        assert [s.exponent(i) for i in range(3)] == [-1, -2, -3]
        assert consistency_check(chazy, s) == (True, 9)

    def test_chazy_left_longer(self, chazy):
        b, r = _chazy_branch(chazy)
        s = build_series(chazy, b, r, 12, {1: 1, 2: 1})
        assert {i: s.coeffs[i] for i in CHAZY_LEFT_TAIL} == CHAZY_LEFT_TAIL

    def test_chazy_leading_only_is_exact(self, chazy):
        b, r = _chazy_branch(chazy)
        s = build_series(chazy, b, r, 6, {1: 0, 2: 0, 3: 0})
        assert all(s.coeffs[i] == 0 for i in range(1, 7))
        assert consistency_check(chazy, s) == (True, None)

    def test_corrupted_coefficient(self, chazy):
        b, r = _chazy_branch(chazy)
        s = build_series(chazy, b, r, 6, {1: 1, 2: 1})
        bad = s.with_coefficient(4, s.coeffs[4] + 1)
        ok, lowest = consistency_check(chazy, bad)
        assert not ok and lowest == 4

    def test_w_right(self, chazy):
        w = invert_dependent(chazy)
        b = next(b for b in find_balances(w) if b.p == -1)
        r = resonances(w, b)
        assert list(r.rational_roots) == [-1, 0, 1]
        s = build_series(w, b, r, 8)
        assert s.direction is Direction.RIGHT
        assert s.free_indices == {0, 1}
        assert s.coefficient_list() == W_RIGHT_8
        assert consistency_check(w, s)[0]

    def test_incompatible_resonance(self):
        # y'' = 6 y^2 + x^2: leading 1/x^2, the x^2 forcing lands on resonance 6
        delta = parse_expr("y'' - 6*y^2 - x^2")
        b = find_balances(delta)[0]
        r = resonances(delta, b)
        assert list(r.rational_roots) == [-1, 6]
        with pytest.raises(CompatibilityFailure) as info:
            build_series(delta, b, r, 8)
        assert info.value.index == 6

    def test_bad_truncation(self, chazy):
        b, r = _chazy_branch(chazy)
        with pytest.raises(ValueError):
            build_series(chazy, b, r, 0)


class TestAnalyze:
    def test_chazy(self, chazy):
        rep = analyze(chazy)
        assert len(rep.balances) == 1 and not rep.failures
        br = rep.balances[0]
        assert br.direction is Direction.LEFT and br.compatible
        assert br.lowest_residual_index == 9

    def test_w_equation(self, chazy):
        rep = analyze(invert_dependent(chazy))
        assert [b.balance.p for b in rep.balances] == [-1]
        assert rep.balances[0].direction is Direction.RIGHT
        assert 0 in rep.balances[0].series.free_indices
        (fail,) = rep.failures
        assert fail.balance.p == -2 and fail.failure_stage == "classify"
        assert list(fail.resonance.rational_roots) == [-2, -1, 0]

    def test_raised(self, equation):
        rep = analyze(equation("chazy_raised"))
        (br,) = rep.balances
        assert (br.balance.p, br.balance.coeff) == (-1, -6)
        assert list(br.resonance.rational_roots) == [-3, -2, -1]
        assert br.direction is Direction.LEFT
        assert br.series.coefficient_list()[:4] == [-6, 1, F(-1, 6), F(1, 36)]
        inv = analyze(equation("chazy_raised_inv"))
        assert [list(b.resonance.rational_roots) for b in inv.balances] == [[-1, 0, 1]]
        assert inv.balances[0].direction is Direction.RIGHT

    def test_painleve_ince_self_consistent(self, equation):
        rep = analyze(equation("painleve_ince"))
        assert not rep.failures
        by_a = {b.balance.coeff: b for b in rep.balances}
        assert by_a[2].direction is Direction.LEFT
        assert by_a[2].series.coefficient_list() == [2] + [1] * 8
        assert by_a[1].direction is Direction.RIGHT
        assert by_a[1].series.free_indices == {1}

    def test_every_balance_reported_once(self, chazy, equation):
        for delta in (chazy, invert_dependent(chazy), equation("painleve_ince"), equation("chazy_raised_inv")):
            rep = analyze(delta)
            assert len(rep.branches) == len(find_balances(delta))

    def test_coordinate_dependence(self, chazy):
        assert analyze(chazy).balances[0].direction is Direction.LEFT
        assert analyze(invert_dependent(chazy)).balances[0].direction is Direction.RIGHT


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=3), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_series_determinism(a1, a2):
    delta = parse_expr("y''' - 2*y*y'' + 3*y'^2")
    (b,) = find_balances(delta)
    r = resonances(delta, b)
    one = build_series(delta, b, r, 7, {1: a1, 2: a2})
    two = build_series(delta, b, r, 7, {1: a1, 2: a2})
    assert one == two
    assert consistency_check(delta, one)[0]


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 8), st.fractions(min_value=-2, max_value=2, max_denominator=4).filter(bool))
def test_perturbation_fails_at_perturbed_index(i, eps):
    delta = parse_expr("y''' - 2*y*y'' + 3*y'^2")
    (b,) = find_balances(delta)
    s = build_series(delta, b, resonances(delta, b), 8, {1: 1, 2: 1})
    bad = s.with_coefficient(i, s.coeffs[i] + eps)
    res = series_residuals(delta, bad)
    assert next(k for k, v in enumerate(res) if v) == i
