"""Lie point symmetries of scalar ODEs: prolongation, the symmetry test and
structure constants of a set of generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .jet import JetPoly, RationalJetExpr, X, reduce_mod_equation, total_derivative, u_slot


@dataclass(frozen=True)
class VectorField:
    """xi(x, u0) d/dx + eta(x, u0) d/du0."""

    xi: JetPoly
    eta: JetPoly

    def __post_init__(self):
        for name, comp in (("xi", self.xi), ("eta", self.eta)):
            if comp.max_jet_order > 0:
                raise ValueError(f"{name} may depend on x and u0 only")

    @classmethod
    def from_strings(cls, xi: str, eta: str, dep: str = "y", indep: str = "x") -> "VectorField":
        from .parsing import parse_expr

        parts = []
        for text in (xi, eta):
            e = parse_expr(text, dep, indep)
            if isinstance(e, RationalJetExpr):
                raise ValueError(f"vector field component {text!r} is not polynomial")
            parts.append(e)
        return cls(*parts)

    def apply(self, f: JetPoly) -> JetPoly:
        """Action of the field as a derivation on functions of (x, u0)."""
        return self.xi * f.diff(X) + self.eta * f.diff(u_slot(0))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi + other.xi, self.eta + other.eta)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi - other.xi, self.eta - other.eta)

    def scale(self, k) -> "VectorField":
        return VectorField(self.xi.scale(k), self.eta.scale(k))

    @property
    def is_zero(self) -> bool:
        return self.xi.is_zero and self.eta.is_zero

    def to_str(self, dep: str = "y", indep: str = "x") -> str:
        return f"xi = {self.xi.to_str(dep, indep)}; eta = {self.eta.to_str(dep, indep)}"


def prolong(X_: VectorField, k: int) -> List[JetPoly]:
    """[eta^(1), ..., eta^(k)] with eta^(j) = D(eta^(j-1)) - u_j D(xi).

    Point fields have polynomial prolongations, so plain JetPoly is returned.
    """
    if k < 1:
        raise ValueError("prolongation order must be positive")
    dxi = total_derivative(X_.xi)
    out = []
    prev = X_.eta
    for j in range(1, k + 1):
        prev = total_derivative(prev) - JetPoly.u(j) * dxi
        out.append(prev)
    return out


def apply_prolonged(X_: VectorField, delta: JetPoly) -> JetPoly:
    n = max(delta.max_jet_order, 0)
    result = X_.xi * delta.diff(X) + X_.eta * delta.diff(u_slot(0))
    if n >= 1:
        for j, eta_j in enumerate(prolong(X_, n), start=1):
            result = result + eta_j * delta.diff(u_slot(j))
    return result


def is_symmetry(X_: VectorField, delta: JetPoly) -> Tuple[bool, RationalJetExpr]:
    """Symmetry test on the solution manifold; returns (verdict, obstruction)."""
    cert = reduce_mod_equation(apply_prolonged(X_, delta), delta)
    return cert.is_zero, cert


def lie_bracket(X_: VectorField, Y: VectorField) -> VectorField:
    return VectorField(X_.apply(Y.xi) - Y.apply(X_.xi), X_.apply(Y.eta) - Y.apply(X_.eta))


@dataclass
class StructureTable:
    generators: List[VectorField]
    # (i, j), i < j, zero-based -> coordinates in the generator basis, or None
    brackets: Dict[Tuple[int, int], Optional[Tuple[Fraction, ...]]] = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return all(v is not None for v in self.brackets.values())

    def bracket(self, i: int, j: int) -> Optional[Tuple[Fraction, ...]]:
        if i == j:
            return tuple(Fraction(0) for _ in self.generators)
        if i < j:
            return self.brackets[(i, j)]
        v = self.brackets[(j, i)]
        return None if v is None else tuple(-c for c in v)


def _coordinates(fields: Sequence[VectorField], target: VectorField) -> Optional[Tuple[Fraction, ...]]:
    """Exact solution of target = sum c_k fields[k], or None if not in the span."""
    keys = set()
    for f in list(fields) + [target]:
        keys.update(("xi", m) for m, _ in f.xi.items())
        keys.update(("eta", m) for m, _ in f.eta.items())

    def coeff(f: VectorField, key):
        comp = f.xi if key[0] == "xi" else f.eta
        return comp.terms.get(key[1], Fraction(0))

    rows = [[coeff(f, key) for f in fields] + [coeff(target, key)] for key in sorted(keys, key=str)]
    n = len(fields)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in rows):
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = rows[i][n]
    return tuple(sol)


def structure_constants(gens: Sequence[VectorField]) -> StructureTable:
    if not gens:
        raise ValueError("need at least one generator")
    table = StructureTable(list(gens))
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            table.brackets[(i, j)] = _coordinates(gens, lie_bracket(gens[i], gens[j]))
    return table
