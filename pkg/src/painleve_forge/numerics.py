"""Floating-point cross-checks of the exact results.

Everything here is complex double precision.  Paths in the complex x-plane
are straight segments ``x(t) = x_a + t (x_b - x_a)``, t in [0, 1].
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .ars import PainleveSeries
from .jet import JetPoly, RationalJetExpr, reduce_mod_equation, solve_top
from .transforms import InvariantPair
from .upoly import falling_value

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


class CompiledPoly:
    """Vectorised evaluator for a JetPoly at complex jet points."""

    def __init__(self, p: JetPoly, width: Optional[int] = None):
        width = max(p.width, width or 0, 1)
        self.width = width
        monos = [m + (0,) * (width - len(m)) for m, _ in p.items()]
        self.exps = np.array(monos, dtype=int).reshape(len(monos), width)
        self.coeffs = np.array([complex(float(c)) for _, c in p.items()], dtype=complex)

    def __call__(self, point: Sequence[complex]) -> complex:
        """point = (x, u0, u1, ...); missing trailing slots count as unused."""
        z = np.zeros(self.width, dtype=complex)
        z[: min(len(point), self.width)] = point[: self.width]
        if not len(self.coeffs):
            return 0j
        return complex(np.sum(self.coeffs * np.prod(z**self.exps, axis=1)))


class CompiledRational:
    def __init__(self, e, width: Optional[int] = None):
        e = RationalJetExpr.lift(e)
        self.num = CompiledPoly(e.num, width)
        self.den = CompiledPoly(e.den, width)

    def parts(self, point) -> Tuple[complex, complex]:
        return self.num(point), self.den(point)

    def __call__(self, point) -> complex:
        n, d = self.parts(point)
        return n / d


# -- series evaluation ---------------------------------------------------------


def eval_series_jet(s: PainleveSeries, x: complex, order: int) -> np.ndarray:
    """(y, y', ..., y^(order)) of the truncated series, termwise."""
    x = complex(x)
    if x == 0:
        raise ValueError("series cannot be evaluated at the singularity x = 0")
    out = np.zeros(order + 1, dtype=complex)
    for i, a in s.coeffs.items():
        if not a:
            continue
        e = s.exponent(i)
        for k in range(order + 1):
            f = falling_value(e, k)
            if f:
                out[k] += float(a) * float(f) * x ** float(e - k)
    return out


def eval_series_horner(s: PainleveSeries, x: complex) -> complex:
    """Value of the series as x**p * poly(x**sign) evaluated by Horner's rule."""
    x = complex(x)
    t = x if s.sign > 0 else 1 / x
    acc = 0j
    for a in reversed(s.coefficient_list()):
        acc = acc * t + float(a)
    return acc * x ** float(s.p)


def series_tail(s: PainleveSeries, x: complex) -> float:
    """Magnitude of the last retained term, a crude truncation error scale."""
    a = s.coeffs.get(s.truncation, 0)
    return abs(float(a) * complex(x) ** float(s.exponent(s.truncation)))


# -- integration ---------------------------------------------------------------


@dataclass
class Trajectory:
    path: Tuple[complex, complex]
    t: np.ndarray
    states: np.ndarray  # shape (len(t), order)
    tolerance_used: float
    blow_up: bool = False
    message: str = ""

    def x(self) -> np.ndarray:
        a, b = self.path
        return a + self.t * (b - a)

    @property
    def end_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def last_good_x(self) -> complex:
        return complex(self.x()[-1])

    def to_json(self) -> str:
        return json.dumps(
            {
                "path": [[self.path[0].real, self.path[0].imag], [self.path[1].real, self.path[1].imag]],
                "tolerance_used": self.tolerance_used,
                "blow_up": self.blow_up,
                "message": self.message,
                "samples": [
                    [float(t), [[float(z.real), float(z.imag)] for z in row]]
                    for t, row in zip(self.t, self.states)
                ],
            }
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = self.states.shape[1]
        w.writerow(["t", "x_re", "x_im"] + [f"{q}{k}" for k in range(n) for q in ("re_u", "im_u")])
        for t, xx, row in zip(self.t, self.x(), self.states):
            vals = []
            for z in row:
                vals += [repr(float(z.real)), repr(float(z.imag))]
            w.writerow([repr(float(t)), repr(float(xx.real)), repr(float(xx.imag))] + vals)
        return buf.getvalue()


class _RHS:
    def __init__(self, delta: JetPoly):
        n, sol = solve_top(delta)
        self.order = n
        self.top = CompiledRational(sol, n + 2)

    def highest(self, x: complex, state: Sequence[complex]) -> complex:
        num, den = self.top.parts([x, *state])
        if den == 0:
            raise ZeroDivisionError("leading coefficient vanishes")
        return num / den


def integrate(
    delta: JetPoly,
    ic: Sequence[complex],
    x_a: complex,
    x_b: complex,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    blowup: float = 1e10,
    min_origin_distance: float = 0.0,
) -> Trajectory:
    """Integrate along the segment x_a -> x_b with an embedded RK 5(4) pair.

    ``ic`` holds (u0, ..., u_{n-1}) at x_a.  A state magnitude beyond
    ``blowup`` or a collapsing step size ends the run with ``blow_up`` set.
    Pass ``min_origin_distance`` to refuse paths that graze the expansion
    point x = 0.
    """
    rhs = _RHS(delta)
    n = rhs.order
    x_a, x_b = complex(x_a), complex(x_b)
    y0 = np.asarray(ic, dtype=complex)
    if y0.shape != (n,):
        raise ValueError(f"initial condition must have length {n}")
    seg = x_b - x_a
    if min_origin_distance and seg != 0 and _segment_distance(x_a, x_b) < min_origin_distance:
        raise ValueError("path passes within min_origin_distance of x = 0")

    def f(t, y):
        x = x_a + t * seg
        dy = np.empty(n, dtype=complex)
        dy[:-1] = y[1:]
        try:
            dy[-1] = rhs.highest(x, y)
        except ZeroDivisionError:
            dy[-1] = np.inf
        return dy * seg

    def escape(t, y):
        return blowup - np.max(np.abs(y))

    escape.terminal = True
    sol = solve_ivp(f, (0.0, 1.0), y0, method="RK45", rtol=rtol, atol=atol, events=escape)
    blown = sol.status == 1 or sol.status == -1 or not np.all(np.isfinite(sol.y))
    ts, ys = sol.t, sol.y.T
    good = np.all(np.isfinite(ys), axis=1)
    return Trajectory((x_a, x_b), ts[good], ys[good], rtol, bool(blown), sol.message)


def _segment_distance(a: complex, b: complex) -> float:
    d = b - a
    t = max(0.0, min(1.0, -(a.real * d.real + a.imag * d.imag) / abs(d) ** 2))
    return abs(a + t * d)


# -- residual checks ----------------------------------------------------------


def residual_check(delta: JetPoly, s: PainleveSeries, points: Sequence[complex]) -> float:
    """Largest |delta| on the series jet over the given points."""
    order = max(delta.max_jet_order, 0)
    ev = CompiledPoly(delta, order + 2)
    worst = 0.0
    for x in points:
        jet = eval_series_jet(s, x, order)
        worst = max(worst, abs(ev([complex(x), *jet])))
    return worst


@dataclass
class ReductionCheck:
    max_residual: float
    skipped: List[int] = field(default_factory=list)


def reduction_trajectory_check(
    delta_orig: JetPoly,
    inv: InvariantPair,
    delta_reduced: JetPoly,
    traj: Trajectory,
    min_denominator: float = 1e-10,
) -> ReductionCheck:
    """Evaluate delta_reduced along a numeric solution of delta_orig."""
    order = max(delta_reduced.max_jet_order, 0)
    exprs = [inv.r_expr] + inv.reduced_jets(order)
    n = delta_orig.max_jet_order
    width = n + 2
    compiled = [CompiledRational(reduce_mod_equation(e, delta_orig), width) for e in exprs]
    reduced = CompiledPoly(delta_reduced, order + 2)
    worst = 0.0
    skipped = []
    for idx, (x, state) in enumerate(zip(traj.x(), traj.states)):
        point = [complex(x), *state]
        vals = []
        for c in compiled:
            num, den = c.parts(point)
            if abs(den) < min_denominator:
                break
            vals.append(num / den)
        else:
            worst = max(worst, abs(reduced(vals)))
            continue
        skipped.append(idx)
    return ReductionCheck(worst, skipped)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PAINLEVE_FORGE_THREADS", "1")))
    except ValueError:
        return 1


def barrier_scan(
    delta: JetPoly,
    ic: Sequence[complex],
    x_a: complex,
    directions: Sequence[complex],
    rtol: float = 1e-8,
    horizon: float = 10.0,
    atol: float = 1e-10,
    blowup: float = 1e8,
) -> List[Tuple[complex, Optional[float]]]:
    """Integrate outward along rays; radius of suspected blow-up or None."""

    def one(d):
        d = complex(d) / abs(d)
        try:
            traj = integrate(delta, ic, x_a, x_a + horizon * d, rtol, atol, blowup)
        except ValueError:
            return d, 0.0
        if traj.blow_up:
            return d, float(abs(traj.last_good_x - complex(x_a)))
        return d, None

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(one, directions))


def scan_to_json(scan: Sequence[Tuple[complex, Optional[float]]]) -> str:
    return json.dumps(
        [{"direction": [d.real, d.imag], "radius": r if r is not None else "none within horizon"} for d, r in scan]
    )
