"""Changes of variables on polynomial ODEs.

All three operations return polynomials with integer content 1 and a
positive leading coefficient in the canonical monomial order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple, Union

from .jet import (
    JetPoly,
    RationalJetExpr,
    X,
    clear_denominators,
    reduce_mod_equation,
    substitute,
    total_derivative,
    u_slot,
)

JetLike = Union[JetPoly, RationalJetExpr]


@dataclass(frozen=True)
class InvariantPair:
    """New independent (r) and dependent (w) variables as jet expressions."""

    r_expr: JetLike
    w_expr: JetLike
    labels: Tuple[str, str] = ("r", "w")

    def __post_init__(self):
        if RationalJetExpr.lift(total_derivative(self.r_expr)).is_zero:
            raise ValueError("D_x(r) vanishes identically; r cannot serve as independent variable")

    @classmethod
    def from_strings(cls, r: str, w: str, dep: str = "y", indep: str = "x", labels=("r", "w")):
        from .parsing import parse_expr

        return cls(parse_expr(r, dep, indep), parse_expr(w, dep, indep), labels)

    def reduced_jets(self, order: int) -> List[RationalJetExpr]:
        """[w, dw/dr, d2w/dr2, ...] up to the given order via the chain rule."""
        dr = RationalJetExpr.lift(total_derivative(self.r_expr))
        out = [RationalJetExpr.lift(self.w_expr)]
        for _ in range(order):
            out.append(RationalJetExpr.lift(total_derivative(out[-1])) / dr)
        return out


def invert_dependent(delta: JetPoly) -> JetPoly:
    """Apply u -> 1/v and return the cleared numerator in the v-jets."""
    n = delta.max_jet_order
    if n > 4:
        raise ValueError("inversion supported up to fourth order")
    inv = RationalJetExpr(1, JetPoly.u(0))
    bindings = {u_slot(0): inv}
    cur: JetLike = inv
    for k in range(1, n + 1):
        cur = total_derivative(cur)
        bindings[u_slot(k)] = cur
    num, _ = clear_denominators(substitute(delta, bindings))
    return num


def hodograph_raise(delta: JetPoly) -> JetPoly:
    """chi = Phi(s), psi = dPhi/ds: second order in psi(chi) -> third order in Phi(s).

    On input the x slot holds chi and u0..u2 hold psi, psi', psi''.
    """
    if delta.max_jet_order != 2:
        raise ValueError(f"hodograph raise needs a second-order equation, got order {delta.max_jet_order}")
    v = [JetPoly.u(k) for k in range(4)]
    bindings = {
        X: v[0],
        u_slot(0): v[1],
        u_slot(1): RationalJetExpr(v[2], v[1]),
        u_slot(2): RationalJetExpr(v[3] * v[1] - v[2] * v[2], v[1] ** 3),
    }
    num, _ = clear_denominators(substitute(delta, bindings))
    return num


def reduction_residual(
    delta_orig: JetPoly, inv: InvariantPair, delta_reduced: JetPoly
) -> Tuple[bool, RationalJetExpr]:
    """Check that delta_reduced(r, w, w_r, ...) vanishes on solutions of delta_orig."""
    order = max(delta_reduced.max_jet_order, 0)
    jets = inv.reduced_jets(order)
    bindings = {X: RationalJetExpr.lift(inv.r_expr)}
    for k, e in enumerate(jets):
        bindings[u_slot(k)] = e
    pulled = substitute(delta_reduced, bindings)
    num, _ = clear_denominators(pulled)
    cert = reduce_mod_equation(num, delta_orig)
    return cert.is_zero, cert


@dataclass(frozen=True)
class MonomialDiff:
    only_left: Tuple[Tuple[str, str], ...]
    only_right: Tuple[Tuple[str, str], ...]
    changed: Tuple[Tuple[str, str, str], ...]

    @property
    def identical(self) -> bool:
        return not (self.only_left or self.only_right or self.changed)


def compare_equations(left: JetPoly, right: JetPoly, dep: str = "y", indep: str = "x") -> MonomialDiff:
    """Monomial-level diff after content/sign normalization of both sides."""
    a, b = left.normalized(), right.normalized()
    ta, tb = a.terms, b.terms

    def name(m):
        return JetPoly({m: 1}).to_str(dep, indep)

    keys = sorted(set(ta) | set(tb), key=lambda m: name(m))
    only_l, only_r, changed = [], [], []
    for m in keys:
        if m in ta and m not in tb:
            only_l.append((name(m), str(ta[m])))
        elif m in tb and m not in ta:
            only_r.append((name(m), str(tb[m])))
        elif ta[m] != tb[m]:
            changed.append((name(m), str(ta[m]), str(tb[m])))
    return MonomialDiff(tuple(only_l), tuple(only_r), tuple(changed))
