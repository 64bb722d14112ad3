import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from painleve_forge import JetPoly, parse_expr
from painleve_forge import numerics as nm
from painleve_forge.ars import Direction, PainleveSeries, build_series, find_balances, resonances
from painleve_forge.odefile import load_fixture
from painleve_forge.transforms import InvariantPair, invert_dependent

u = JetPoly.u
CHAZY = parse_expr("y''' - 2*y*y'' + 3*y'^2")


@pytest.fixture(scope="module")
def chazy_series():
    (b,) = find_balances(CHAZY)
    return build_series(CHAZY, b, resonances(CHAZY, b), 12, {1: 1, 2: 1})


def leading_only():
    return PainleveSeries(Direction.LEFT, Fraction(-1), {0: Fraction(-6)}, frozenset(), 0)


class TestSeriesEvaluation:
    def test_leading_term_jet(self):
        assert np.allclose(nm.eval_series_jet(leading_only(), 2, 2), [-3, 1.5, -1.5])

    def test_horner_agrees(self, chazy_series):
        for x in (4, 5 + 2j, 10, -7j):
            a = nm.eval_series_jet(chazy_series, x, 0)[0]
            assert abs(a - nm.eval_series_horner(chazy_series, x)) <= 1e-14 * abs(a)

    def test_exact_oracle(self, chazy_series):
        exact = sum(c * Fraction(10) ** s for s, c in ((chazy_series.exponent(i), c) for i, c in chazy_series.coeffs.items()))
        approx = nm.eval_series_jet(chazy_series, 10, 0)[0]
        assert abs(approx - float(exact)) <= 1e-12 * abs(float(exact))

    def test_derivative_by_finite_difference(self, chazy_series):
        x, h = 6.0, 1e-5
        jet = nm.eval_series_jet(chazy_series, x, 1)
        fd = (nm.eval_series_jet(chazy_series, x + h, 0)[0] - nm.eval_series_jet(chazy_series, x - h, 0)[0]) / (2 * h)
        assert abs(fd - jet[1]) <= 1e-8

    def test_origin_refused(self, chazy_series):
        with pytest.raises(ValueError):
            nm.eval_series_jet(chazy_series, 0, 1)


class TestIntegrate:
    def test_special_solution(self):
        ic = nm.eval_series_jet(leading_only(), 1, 2)
        traj = nm.integrate(CHAZY, ic, 1, 2)
        assert abs(traj.end_state[0] - (-3)) <= 1e-9 and not traj.blow_up

    def test_linear(self):
        traj = nm.integrate(parse_expr("y'' - y"), [1, 1], 0, 1)
        assert abs(traj.end_state[0] - math.e) <= 1e-8 * math.e

    def test_series_consistency(self, chazy_series):
        ic = nm.eval_series_jet(chazy_series, 5, 2)
        traj = nm.integrate(CHAZY, ic, 5, 8)
        ref = nm.eval_series_jet(chazy_series, 8, 0)[0]
        assert abs(traj.end_state[0] - ref) <= 1e-6 * abs(ref)

    def test_reversible(self, chazy_series):
        ic = nm.eval_series_jet(chazy_series, 5 + 1j, 2)
        there = nm.integrate(CHAZY, ic, 5 + 1j, 7 - 1j)
        back = nm.integrate(CHAZY, there.end_state, 7 - 1j, 5 + 1j)
        assert np.allclose(back.end_state, ic, rtol=1e-8, atol=1e-10)

    def test_samples_ordered(self, chazy_series):
        traj = nm.integrate(CHAZY, nm.eval_series_jet(chazy_series, 5, 2), 5, 6)
        assert traj.t[0] == 0 and traj.t[-1] == 1 and np.all(np.diff(traj.t) > 0)
        assert traj.states.shape[1] == 3

    def test_tighter_tolerance_not_worse(self):
        errs = []
        for rtol in (1e-6, 5e-7, 2.5e-7):
            traj = nm.integrate(parse_expr("y'' - y"), [1, 1], 0, 2, rtol=rtol, atol=1e-14)
            errs.append(abs(traj.end_state[0] - math.e**2))
        assert errs[2] <= errs[0]

    def test_blow_up(self):
        # y' = y^2 from y(0)=1 leaves every bound before x = 1
        traj = nm.integrate(parse_expr("y' - y^2"), [1], 0, 2)
        assert traj.blow_up and abs(traj.last_good_x) < 1.01

    def test_origin_guard(self):
        with pytest.raises(ValueError):
            nm.integrate(CHAZY, [1, 0, 0], -1, 1, min_origin_distance=1e-3)

    def test_bad_ic_length(self):
        with pytest.raises(ValueError):
            nm.integrate(CHAZY, [1, 0], 1, 2)

    def test_outputs(self, chazy_series):
        traj = nm.integrate(CHAZY, nm.eval_series_jet(chazy_series, 5, 2), 5, 6)
        assert traj.to_csv().splitlines()[0].startswith("t,x_re,x_im,re_u0,im_u0")
        assert '"blow_up": false' in traj.to_json()


class TestResidualCheck:
    def test_chazy_series(self, chazy_series):
        assert nm.residual_check(CHAZY, chazy_series, [4, 5 + 2j, 10]) <= 1e-6

    def test_corrupted(self, chazy_series):
        # wrong leading coefficient leaves a residual of order 5 x^-4
        bad = chazy_series.with_coefficient(0, -5)
        assert nm.residual_check(CHAZY, bad, [4]) >= 1e-2

    def test_right_series_improves_with_terms(self):
        w = invert_dependent(CHAZY)
        b = next(b for b in find_balances(w) if b.p == -1)
        r = resonances(w, b)
        res = [nm.residual_check(w, build_series(w, b, r, n), [0.1, 0.1j]) for n in (4, 6, 8)]
        assert res[0] > res[1] > res[2]


@pytest.fixture(scope="module")
def traj(chazy_series):
    return nm.integrate(CHAZY, nm.eval_series_jet(chazy_series, 5, 2), 5, 7)


class TestReductionTrajectory:
    def test_translation(self, traj):
        red = load_fixture("chazy_translation").equation()
        assert nm.reduction_trajectory_check(CHAZY, InvariantPair(u(0), u(1)), red, traj).max_residual <= 1e-7

    def test_scaling(self, traj):
        x = JetPoly.x()
        red = load_fixture("chazy_scaling").equation()
        check = nm.reduction_trajectory_check(CHAZY, InvariantPair(x * u(0), x * x * u(1)), red, traj)
        assert check.max_residual <= 1e-7 and not check.skipped

    def test_altered_control(self, traj):
        red = load_fixture("chazy_translation").equation() + 1
        assert nm.reduction_trajectory_check(CHAZY, InvariantPair(u(0), u(1)), red, traj).max_residual >= 1e-2


class TestBarrierScan:
    DIRS = [cmath.exp(2j * math.pi * k / 8) for k in range(8)]

    def test_linear_entire(self):
        scan = nm.barrier_scan(parse_expr("y'' - y"), [1, 0], 0, self.DIRS, horizon=5)
        assert all(r is None for _, r in scan)

    def test_special_solution_ray(self):
        ic = nm.eval_series_jet(leading_only(), 1, 2)
        [(_, r)] = nm.barrier_scan(CHAZY, ic, 1, [1])
        assert r is None

    def test_generic_ic_blows_up_somewhere(self, monkeypatch):
        monkeypatch.setenv("PAINLEVE_FORGE_THREADS", "4")
        scan = nm.barrier_scan(CHAZY, [1, 0.5, 0.2], 1, self.DIRS)
        radii = [r for _, r in scan if r is not None]
        assert radii and all(0 < r < 10 for r in radii)
        assert '"direction"' in nm.scan_to_json(scan)
