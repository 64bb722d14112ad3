"""Singularity analysis: dominant balances, resonances and Painleve series.

The movable singularity is placed at the origin.  A trial solution
``u = c*x**p`` turns each monomial of the equation into ``F_m(p) c**d_m
x**(a_m + d_m p - w_m)`` where ``d_m`` is the degree in the u-variables and
``w_m`` the total derivative weight.  Balances are read off from that
piecewise-linear exponent picture.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from . import upoly
from .jet import JetPoly, Monomial


class Arbitrary(enum.Enum):
    """Marker for a leading coefficient left free by the balance."""

    ARBITRARY = "arbitrary"

    def __repr__(self):
        return "ARBITRARY"

    def __str__(self):
        return self.value


ARBITRARY = Arbitrary.ARBITRARY


class Direction(str, enum.Enum):
    RIGHT = "Right"
    LEFT = "Left"
    FULL = "Full"

    @property
    def sign(self) -> int:
        if self is Direction.FULL:
            raise ValueError("a Full series has no single direction")
        return 1 if self is Direction.RIGHT else -1


class ARSError(Exception):
    """Base class for failures of one stage of the algorithm."""

    stage = "ars"


class ResonanceError(ARSError):
    stage = "resonances"


class ClassificationError(ARSError):
    stage = "classify"


class SeriesError(ARSError):
    stage = "series"


class CompatibilityFailure(ARSError):
    stage = "compatibility"

    def __init__(self, index: int, residual: Fraction):
        super().__init__(
            f"compatibility condition fails at index {index}: forced term {residual} != 0"
        )
        self.index = index
        self.residual = residual


@dataclass(frozen=True)
class Balance:
    p: Fraction
    coeff: Union[Fraction, Arbitrary]
    dominant_terms: FrozenSet[Monomial]
    degree_in_coeff: int

    @property
    def is_arbitrary(self) -> bool:
        return self.coeff is ARBITRARY


@dataclass(frozen=True)
class RejectedBalance:
    p: Fraction
    coeff: Union[Fraction, Arbitrary, None]
    reason: str


@dataclass(frozen=True)
class ResonanceResult:
    poly_coeffs: Tuple[Fraction, ...]
    rational_roots: Tuple[Fraction, ...]
    has_nonrational_factor: bool
    contains_generic: bool

    @property
    def degree(self) -> int:
        return len(self.poly_coeffs) - 1

    def non_generic(self) -> List[Fraction]:
        roots = list(self.rational_roots)
        if Fraction(-1) in roots:
            roots.remove(Fraction(-1))
        return roots


@dataclass(frozen=True)
class PainleveSeries:
    """Truncated series sum_i coeffs[i] * x**(p + sign*i), i = 0..truncation."""

    direction: Direction
    p: Fraction
    coeffs: Dict[int, Fraction]
    free_indices: FrozenSet[int]
    truncation: int

    @property
    def sign(self) -> int:
        return self.direction.sign

    def exponent(self, i: int) -> Fraction:
        return self.p + self.sign * i

    def coefficient_list(self) -> List[Fraction]:
        return [self.coeffs.get(i, Fraction(0)) for i in range(self.truncation + 1)]

    def with_coefficient(self, i: int, value) -> "PainleveSeries":
        coeffs = dict(self.coeffs)
        coeffs[i] = Fraction(value)
        return PainleveSeries(self.direction, self.p, coeffs, self.free_indices, self.truncation)


@dataclass
class BranchResult:
    balance: Balance
    resonance: Optional[ResonanceResult] = None
    direction: Optional[Direction] = None
    series: Optional[PainleveSeries] = None
    compatible: bool = False
    lowest_residual_index: Optional[int] = None
    failure_stage: Optional[str] = None
    diagnostic: Optional[str] = None


@dataclass
class AnalysisReport:
    equation: JetPoly
    balances: List[BranchResult] = field(default_factory=list)
    failures: List[BranchResult] = field(default_factory=list)
    rejected: List[RejectedBalance] = field(default_factory=list)

    @property
    def branches(self) -> List[BranchResult]:
        return self.balances + self.failures

    @property
    def any_compatible(self) -> bool:
        return any(b.compatible for b in self.balances)


# -- monomial bookkeeping --------------------------------------------------


@dataclass(frozen=True)
class _Term:
    mono: Monomial
    coeff: Fraction
    x_power: int
    jets: Tuple[int, ...]  # exponent of u_k at position k

    @property
    def degree(self) -> int:
        return sum(self.jets)

    @property
    def weight(self) -> int:
        return sum(k * e for k, e in enumerate(self.jets))

    def exponent(self, p: Fraction) -> Fraction:
        return self.x_power + self.degree * p - self.weight

    def factor(self, p: Fraction) -> Fraction:
        out = self.coeff
        for k, e in enumerate(self.jets):
            if e:
                out *= upoly.falling_value(p, k) ** e
        return out

    def factor_poly(self) -> upoly.UPoly:
        out = [self.coeff]
        for k, e in enumerate(self.jets):
            for _ in range(e):
                out = upoly.mul(out, upoly.falling(0, k))
        return out


def _terms(delta: JetPoly) -> List[_Term]:
    out = []
    for mono, c in delta.items():
        x_power = mono[0] if mono else 0
        out.append(_Term(mono, c, x_power, tuple(mono[1:])))
    return out


def equation_order(delta: JetPoly) -> int:
    return delta.max_jet_order


def _candidate_exponents(terms: List[_Term]) -> List[Fraction]:
    cands = set()
    for i, a in enumerate(terms):
        for b in terms[i + 1:]:
            if a.degree != b.degree:
                cands.add(Fraction(b.x_power - b.weight - a.x_power + a.weight, a.degree - b.degree))
    groups: Dict[Tuple[int, int], upoly.UPoly] = {}
    for t in terms:
        key = (t.degree, t.x_power - t.weight)
        groups[key] = upoly.add(groups.get(key, []), t.factor_poly())
    for g in groups.values():
        if len(g) > 1:
            roots, _ = upoly.rational_roots(g)
            cands.update(roots)
    return sorted(cands, reverse=True)


@dataclass
class BalanceScan:
    balances: List[Balance]
    rejected: List[RejectedBalance]


def scan_balances(delta: JetPoly, singular_only: bool = True) -> BalanceScan:
    """Find leading-order behaviours; also report the candidates turned down.

    Candidate exponents are those where two exponent lines cross, or where a
    group of monomials sharing one exponent line cancels identically.  Only
    principal balances (the highest derivative among the dominant terms) are
    kept.
    """
    if delta.is_zero:
        raise ValueError("cannot analyse the zero equation")
    terms = _terms(delta)
    order = equation_order(delta)
    balances: List[Balance] = []
    rejected: List[RejectedBalance] = []
    for p in _candidate_exponents(terms):
        if singular_only and p >= 0:
            continue
        low = min(t.exponent(p) for t in terms)
        dominant = [t for t in terms if t.exponent(p) == low]
        bpoly: upoly.UPoly = []
        for t in dominant:
            bpoly = upoly.add(bpoly, [0] * t.degree + [t.factor(p)])
        principal = any(
            len(t.jets) > order and t.jets[order] and t.factor(p) for t in dominant
        )
        doms = frozenset(t.mono for t in dominant)
        if not bpoly:
            coeffs: List[Union[Fraction, Arbitrary]] = [ARBITRARY]
        else:
            roots, rest = upoly.rational_roots(bpoly)
            coeffs = sorted({r for r in roots if r != 0})
            if len(rest) > 1:
                rejected.append(
                    RejectedBalance(p, None, f"non-rational coefficient roots of {_fmt_poly(rest, 'c')}")
                )
        for c in coeffs:
            if not principal:
                rejected.append(
                    RejectedBalance(p, c, "non-principal: highest derivative absent from dominant terms")
                )
            else:
                balances.append(Balance(p, c, doms, len(bpoly) - 1 if bpoly else max(t.degree for t in dominant)))
    return BalanceScan(balances, rejected)


def find_balances(delta: JetPoly, singular_only: bool = True) -> List[Balance]:
    return scan_balances(delta, singular_only).balances


def _fmt_poly(p: Sequence[Fraction], var: str) -> str:
    parts = [f"({c})*{var}^{i}" for i, c in enumerate(p) if c]
    return " + ".join(parts) or "0"


# -- resonances ----------------------------------------------------------


def resonance_polynomial(delta: JetPoly, b: Balance, coeff=None) -> Dict[int, upoly.UPoly]:
    """Coefficient of m in delta(c x^p + m x^(p+R)) at the dominant exponent.

    Returned as {power of c: polynomial in R}.  When ``coeff`` is given it
    replaces an arbitrary balance coefficient.
    """
    out: Dict[int, upoly.UPoly] = {}
    p = b.p
    for t in _terms(delta):
        if t.mono not in b.dominant_terms:
            continue
        lead = [upoly.falling_value(p, k) for k in range(len(t.jets))]
        for k, e in enumerate(t.jets):
            if not e:
                continue
            rest = t.coeff * e * lead[k] ** (e - 1)
            for j, ej in enumerate(t.jets):
                if j != k and ej:
                    rest *= lead[j] ** ej
            if rest:
                piece = upoly.scale(upoly.falling(p, k), rest)
                out[t.degree - 1] = upoly.add(out.get(t.degree - 1, []), piece)
    out = {k: v for k, v in out.items() if v}
    c = coeff if coeff is not None else b.coeff
    if c is ARBITRARY:
        return out
    total: upoly.UPoly = []
    for power, poly in out.items():
        total = upoly.add(total, upoly.scale(poly, Fraction(c) ** power))
    return {0: total} if total else {}


def resonances(delta: JetPoly, b: Balance) -> ResonanceResult:
    parts = resonance_polynomial(delta, b)
    if not parts:
        raise ResonanceError("m-linear part vanishes at the dominant exponent")
    monics = {tuple(upoly.monic(v)) for v in parts.values()}
    if len(monics) > 1:
        raise ResonanceError("resonances depend on the arbitrary leading coefficient")
    poly = list(monics.pop())
    roots, rest = upoly.rational_roots(poly)
    return ResonanceResult(
        poly_coeffs=tuple(poly),
        rational_roots=tuple(roots),
        has_nonrational_factor=len(rest) > 1,
        contains_generic=upoly.evaluate(poly, -1) == 0,
    )


def classify(r: ResonanceResult) -> Direction:
    if not r.contains_generic:
        raise ClassificationError("generic resonance -1 absent")
    if r.has_nonrational_factor:
        raise ClassificationError("irrational or complex resonances")
    rest = r.non_generic()
    if any(x.denominator != 1 for x in rest):
        raise ClassificationError("non-integer resonance; integer-power series unsupported")
    if all(x >= 0 for x in rest):
        return Direction.RIGHT
    if all(x < 0 for x in rest):
        return Direction.LEFT
    return Direction.FULL


# -- series -------------------------------------------------------------


def _series_layout(terms: List[_Term], p: Fraction, sign: int) -> Dict[Monomial, int]:
    """Offset (in series steps) of each monomial's lowest contribution.

    A Right series is anchored on the smallest exponent, a Left series on
    the largest, so every offset is a non-negative integer.
    """
    exps = [t.exponent(p) for t in terms]
    ref = min(exps) if sign > 0 else max(exps)
    layout = {}
    for t, e in zip(terms, exps):
        off = sign * (e - ref)
        if off.denominator != 1:
            raise SeriesError(f"monomial offset {off} is not an integer number of series steps")
        layout[t.mono] = int(off)
    return layout


def _truncated_product(factors: List[List[Fraction]], length: int) -> List[Fraction]:
    out = [Fraction(1)] + [Fraction(0)] * (length - 1)
    for f in factors:
        nxt = [Fraction(0)] * length
        for i, a in enumerate(out):
            if a:
                for j in range(min(len(f), length - i)):
                    if f[j]:
                        nxt[i + j] += a * f[j]
        out = nxt
    return out


def _residuals(terms, layout, p, sign, coeffs: Sequence[Fraction], upto: int) -> List[Fraction]:
    """Coefficients of the substituted equation at offsets 0..upto."""
    res = [Fraction(0)] * (upto + 1)
    deriv_cache: Dict[int, List[Fraction]] = {}

    def deriv(k):
        if k not in deriv_cache:
            deriv_cache[k] = [a * upoly.falling_value(p + sign * i, k) for i, a in enumerate(coeffs)]
        return deriv_cache[k]

    for t in terms:
        off = layout[t.mono]
        if off > upto:
            continue
        factors = [deriv(k) for k, e in enumerate(t.jets) for _ in range(e)]
        prod = _truncated_product(factors, upto - off + 1)
        for i, v in enumerate(prod):
            if v:
                res[off + i] += t.coeff * v
    return res


def build_series(
    delta: JetPoly,
    b: Balance,
    r: ResonanceResult,
    N: int,
    free_values: Optional[Mapping[int, Fraction]] = None,
) -> PainleveSeries:
    """Solve for the series coefficients order by order.

    Free constants default to 1.  Raises CompatibilityFailure when a
    resonance index carries a non-vanishing forced term.
    """
    if N < 1:
        raise ValueError("truncation must be positive")
    direction = classify(r)
    if direction is Direction.FULL:
        raise SeriesError("mixed-sign resonances: a two-sided series has no one-sided recurrence")
    free_values = {int(k): Fraction(v) for k, v in (free_values or {}).items()}
    sign = direction.sign
    terms = _terms(delta)
    layout = _series_layout(terms, b.p, sign)

    free = set()
    if b.is_arbitrary:
        a0 = free_values.get(0, Fraction(1))
        free.add(0)
    else:
        a0 = b.coeff
    coeffs = [a0]
    lead = _residuals(terms, layout, b.p, sign, coeffs, 0)[0]
    if lead:
        raise CompatibilityFailure(0, lead)
    for i in range(1, N + 1):
        coeffs.append(Fraction(0))
        forced = _residuals(terms, layout, b.p, sign, coeffs, i)[i]
        coeffs[i] = Fraction(1)
        alpha = _residuals(terms, layout, b.p, sign, coeffs, i)[i] - forced
        if alpha:
            coeffs[i] = -forced / alpha
        else:
            if forced:
                raise CompatibilityFailure(i, forced)
            coeffs[i] = free_values.get(i, Fraction(1))
            free.add(i)
    return PainleveSeries(direction, b.p, dict(enumerate(coeffs)), frozenset(free), N)


def series_residuals(delta: JetPoly, s: PainleveSeries) -> List[Fraction]:
    """Every residual coefficient of the truncated series, by offset."""
    terms = _terms(delta)
    layout = _series_layout(terms, s.p, s.sign)
    top = max(layout[t.mono] + t.degree * s.truncation for t in terms)
    return _residuals(terms, layout, s.p, s.sign, s.coefficient_list(), top)


def consistency_check(delta: JetPoly, s: PainleveSeries) -> Tuple[bool, Optional[int]]:
    """(ok, first nonzero residual offset); offset is None if the series is exact."""
    res = series_residuals(delta, s)
    lowest = next((i for i, v in enumerate(res) if v), None)
    return lowest is None or lowest > s.truncation, lowest


def analyze(
    delta: JetPoly,
    N: int = 8,
    free_values: Optional[Mapping[int, Fraction]] = None,
    singular_only: bool = True,
) -> AnalysisReport:
    scan = scan_balances(delta, singular_only)
    report = AnalysisReport(delta, rejected=list(scan.rejected))
    order = equation_order(delta)
    for b in scan.balances:
        br = BranchResult(b)
        try:
            br.resonance = r = resonances(delta, b)
            if r.degree != order:
                raise ResonanceError(
                    f"resonance polynomial has degree {r.degree}, equation order is {order}"
                )
            if not r.contains_generic:
                raise ResonanceError("generic resonance absent")
            br.direction = classify(r)
            if br.direction is Direction.FULL:
                raise ClassificationError(
                    "mixed-sign resonances: Full series has no one-sided recurrence"
                )
            br.series = build_series(delta, b, r, N, free_values)
            ok, lowest = consistency_check(delta, br.series)
            br.lowest_residual_index = lowest
            if not ok:
                raise ARSError(f"residual at offset {lowest} <= truncation {N}")
            br.compatible = True
        except ARSError as exc:
            br.failure_stage = "consistency" if type(exc) is ARSError else exc.stage
            br.diagnostic = str(exc)
        (report.balances if br.compatible else report.failures).append(br)
    return report
