"""Exact polynomial and rational algebra on the jet space (x, u0, u1, ..., uK).

A monomial is stored as an exponent tuple ``(e_x, e_u0, e_u1, ...)`` with
trailing zeros stripped, so two polynomials are equal iff their term dicts
are equal.  Slot 0 is the independent variable, slot ``k + 1`` is ``u_k``.

Coefficients are :class:`fractions.Fraction` everywhere.  Floating point
only enters through :func:`evaluate`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Monomial = Tuple[int, ...]
Number = Union[int, Fraction]

X = 0


def u_slot(k: int) -> int:
    """Slot index of the jet variable u_k."""
    return k + 1


def slot_of(name: str) -> int:
    """Map a variable name ``"x"`` or ``"u<k>"`` to its slot."""
    if name == "x":
        return X
    if name.startswith("u") and name[1:].isdigit():
        return u_slot(int(name[1:]))
    raise KeyError(f"not a jet variable name: {name!r}")


def slot_name(slot: int) -> str:
    return "x" if slot == X else f"u{slot - 1}"


def _trim(mono: Iterable[int]) -> Monomial:
    mono = list(mono)
    while mono and mono[-1] == 0:
        mono.pop()
    return tuple(mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _exp(mono: Monomial, slot: int) -> int:
    return mono[slot] if slot < len(mono) else 0


def order_key(mono: Monomial, width: int) -> Tuple[int, Tuple[int, ...]]:
    """Graded lexicographic key with x < u0 < u1 < ...

    Total degree first, then exponents compared from the highest jet
    variable down to x.
    """
    padded = tuple(mono) + (0,) * (width - len(mono))
    return sum(mono), padded[::-1]


class JetPoly:
    """Immutable sparse polynomial in x and the jet variables."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[int], Number] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    key = _trim(mono)
                    total = clean.get(key, Fraction(0)) + coeff
                    if total:
                        clean[key] = total
                    else:
                        clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "JetPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "JetPoly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, slot: int, power: int = 1) -> "JetPoly":
        mono = [0] * (slot + 1)
        mono[slot] = power
        return cls._raw({_trim(mono): Fraction(1)})

    @classmethod
    def x(cls) -> "JetPoly":
        return cls.var(X)

    @classmethod
    def u(cls, k: int) -> "JetPoly":
        return cls.var(u_slot(k))

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    @property
    def width(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    @property
    def max_jet_order(self) -> int:
        """Highest k with u_k present, or -1 if no jet variable occurs."""
        return self.width - 2 if self.width >= 2 else -1

    def slots(self) -> set:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def degree_in(self, slot: int) -> int:
        return max((_exp(m, slot) for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def coefficient_of(self, slot: int, power: int) -> "JetPoly":
        """Coefficient of slot**power, viewing self as a polynomial in that slot."""
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            if _exp(mono, slot) == power:
                m = list(mono)
                if slot < len(m):
                    m[slot] = 0
                out[_trim(m)] = c
        return JetPoly._raw(out)

    def sorted_terms(self):
        """Terms in descending canonical order."""
        w = self.width
        return sorted(self._terms.items(), key=lambda t: order_key(t[0], w), reverse=True)

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        w = self.width
        return max(self._terms.items(), key=lambda t: order_key(t[0], w))

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (0 for the zero polynomial)."""
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def normalized(self) -> "JetPoly":
        """Integer content 1 and positive leading coefficient."""
        if not self._terms:
            return self
        k = self.content()
        if self.leading_term()[1] < 0:
            k = -k
        if k == 1:
            return self
        return JetPoly._raw({m: c / k for m, c in self._terms.items()})

    def monomial_gcd(self) -> Monomial:
        monos = list(self._terms)
        if not monos:
            return ()
        width = min(len(m) for m in monos)
        return _trim(min(m[i] for m in monos) for i in range(width))

    def divide_monomial(self, mono: Monomial) -> "JetPoly":
        out = {}
        for m, c in self._terms.items():
            q = list(m)
            for i, e in enumerate(mono):
                q[i] -= e
                if q[i] < 0:
                    raise ValueError("monomial does not divide polynomial")
            out[_trim(q)] = c
        return JetPoly._raw(out)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "JetPoly":
        if isinstance(other, JetPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return JetPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return JetPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return JetPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: Number) -> "JetPoly":
        k = Fraction(k)
        if not k:
            return JetPoly()
        return JetPoly._raw({m: c * k for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, JetPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return JetPoly()
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return JetPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "JetPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = JetPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetPoly.const(other)
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus ---------------------------------------------------------

    def diff(self, slot: int) -> "JetPoly":
        """Partial derivative with respect to one slot."""
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = _exp(mono, slot)
            if e:
                m = list(mono)
                m[slot] -= 1
                key = _trim(m)
                out[key] = out.get(key, 0) + c * e
        return JetPoly._raw({m: c for m, c in out.items() if c})

    def to_str(self, dep: str = "y", indep: str = "x") -> str:
        from .parsing import format_poly

        return format_poly(self, dep, indep)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"JetPoly({self.to_str('u')!r})"


class RationalJetExpr:
    """Quotient num/den of jet polynomials.

    Normalized on construction: common monomial factors are cancelled and the
    denominator has integer content 1 with positive leading coefficient.
    No polynomial gcd is attempted.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = JetPoly._coerce(num)
        den = JetPoly._coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("denominator is identically zero")
        if num.is_zero:
            self.num, self.den = JetPoly(), JetPoly.const(1)
            return
        g = _trim(map(min, zip(num.monomial_gcd(), den.monomial_gcd())))
        if g:
            num, den = num.divide_monomial(g), den.divide_monomial(g)
        k = den.content()
        if den.leading_term()[1] < 0:
            k = -k
        if k != 1:
            num, den = num.scale(1 / k), den.scale(1 / k)
        self.num, self.den = num, den

    @staticmethod
    def lift(e) -> "RationalJetExpr":
        if isinstance(e, RationalJetExpr):
            return e
        return RationalJetExpr(e)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    def as_poly(self) -> JetPoly:
        if not self.is_polynomial:
            raise ValueError("expression has a non-constant denominator")
        return self.num.scale(1 / self.den.constant_value())

    def simplify(self) -> Union[JetPoly, "RationalJetExpr"]:
        return self.as_poly() if self.is_polynomial else self

    @property
    def max_jet_order(self) -> int:
        return max(self.num.max_jet_order, self.den.max_jet_order)

    def __add__(self, other):
        o = _as_rational(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalJetExpr(self.num + o.num, self.den)
        return RationalJetExpr(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalJetExpr(-self.num, self.den)

    def __sub__(self, other):
        o = _as_rational(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _as_rational(other)
        if o is NotImplemented:
            return o
        return RationalJetExpr(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rational(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise ZeroDivisionError("division by the zero expression")
        return RationalJetExpr(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _as_rational(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalJetExpr(self.den ** (-n), self.num ** (-n))
        return RationalJetExpr(self.num**n, self.den**n)

    def __eq__(self, other):
        o = _as_rational(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_str(self, dep: str = "y", indep: str = "x") -> str:
        if self.is_polynomial:
            return self.as_poly().to_str(dep, indep)
        return f"({self.num.to_str(dep, indep)})/({self.den.to_str(dep, indep)})"

    def __repr__(self):
        return f"RationalJetExpr({self.num.to_str('u')!r}, {self.den.to_str('u')!r})"


JetExpr = Union[JetPoly, RationalJetExpr]


def _as_rational(other):
    if isinstance(other, RationalJetExpr):
        return other
    if isinstance(other, (JetPoly, int, Fraction)):
        return RationalJetExpr(other)
    return NotImplemented


# -- operations -----------------------------------------------------------


def _dx_poly(e: JetPoly) -> JetPoly:
    out: Dict[Monomial, Fraction] = {}
    for mono, c in e.items():
        for slot, ex in enumerate(mono):
            if not ex:
                continue
            m = list(mono)
            m[slot] -= 1
            if slot != X:
                # d/dx u_k = u_{k+1}
                if slot + 1 < len(m):
                    m[slot + 1] += 1
                else:
                    m.append(1)
            key = _trim(m)
            out[key] = out.get(key, 0) + c * ex
    return JetPoly._raw({m: c for m, c in out.items() if c})


def total_derivative(e: JetExpr, n: int = 1) -> JetExpr:
    """Apply D_x = d/dx + sum_k u_{k+1} d/du_k exactly n times."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    for _ in range(n):
        if isinstance(e, RationalJetExpr):
            num, den = e.num, e.den
            if den.is_constant:
                e = RationalJetExpr(_dx_poly(num), den)
            else:
                e = RationalJetExpr(_dx_poly(num) * den - num * _dx_poly(den), den * den)
        else:
            e = _dx_poly(e)
    return e


def _binding_key(name) -> int:
    return name if isinstance(name, int) else slot_of(name)


def substitute(e: JetExpr, bindings: Mapping) -> RationalJetExpr:
    """Simultaneously replace jet variables by expressions.

    ``bindings`` maps ``"x"``/``"u<k>"`` (or raw slot ints) to a JetPoly,
    RationalJetExpr or number.  Unbound variables pass through.
    """
    if isinstance(e, RationalJetExpr):
        return _subst_poly(e.num, bindings) / _subst_poly(e.den, bindings)
    return _subst_poly(e, bindings)


def _subst_poly(e: JetPoly, bindings: Mapping) -> RationalJetExpr:
    binds = {_binding_key(k): _as_rational(v) for k, v in bindings.items()}
    if not binds or e.is_zero:
        return RationalJetExpr(e)

    # Monomial denominators are tracked as exponent vectors; any other
    # denominator is grouped by equality and raised to a common power.
    mono_den: Dict[int, Tuple[Monomial, Fraction]] = {}
    group_of: Dict[int, int] = {}
    groups: list = []
    for s, b in binds.items():
        if b.den.is_monomial:
            (m, c), = b.den.items()
            mono_den[s] = (m, c)
        else:
            for gi, g in enumerate(groups):
                if g == b.den:
                    group_of[s] = gi
                    break
            else:
                group_of[s] = len(groups)
                groups.append(b.den)

    plans = []
    width = 0
    for mono, c in e.items():
        rest = list(mono)
        dmono: Monomial = ()
        dconst = Fraction(1)
        gpow = [0] * len(groups)
        for s, ex in enumerate(mono):
            if ex and s in binds:
                rest[s] = 0
                if s in mono_den:
                    m, k = mono_den[s]
                    dmono = _mono_mul(dmono, tuple(ex * v for v in m))
                    dconst *= k**ex
                else:
                    gpow[group_of[s]] += ex
        plans.append((mono, c, _trim(rest), dmono, dconst, gpow))
        width = max(width, len(dmono))

    common_mono = [0] * width
    for *_, dmono, _, _ in plans:
        for i, v in enumerate(dmono):
            common_mono[i] = max(common_mono[i], v)
    common_pow = [max(p[5][g] for p in plans) for g in range(len(groups))]

    cache: Dict[Tuple[int, int, str], JetPoly] = {}

    def power(s_or_g, n, which):
        key = (s_or_g, n, which)
        if key not in cache:
            base = binds[s_or_g].num if which == "num" else groups[s_or_g]
            cache[key] = base**n
        return cache[key]

    total = JetPoly()
    for mono, c, rest, dmono, dconst, gpow in plans:
        term = JetPoly._raw({rest: c / dconst})
        for s, ex in enumerate(mono):
            if ex and s in binds:
                term = term * power(s, ex, "num")
        fill = [common_mono[i] - (dmono[i] if i < len(dmono) else 0) for i in range(width)]
        if any(fill):
            term = term * JetPoly._raw({_trim(fill): Fraction(1)})
        for gi, gp in enumerate(gpow):
            if common_pow[gi] - gp:
                term = term * power(gi, common_pow[gi] - gp, "den")
        total = total + term

    den = JetPoly._raw({_trim(common_mono): Fraction(1)})
    for gi, gp in enumerate(common_pow):
        if gp:
            den = den * power(gi, gp, "den")
    if den.is_zero:
        raise ZeroDivisionError("substitution produced a zero denominator")
    return RationalJetExpr(total, den)


def clear_denominators(e: JetExpr) -> Tuple[JetPoly, JetPoly]:
    """Return (numerator normalized to content 1 and positive lead, denominator)."""
    e = RationalJetExpr.lift(e)
    return e.num.normalized(), e.den


class UnsupportedReduction(ValueError):
    """The equation is not linear in its highest jet variable."""


def solve_top(eq: JetPoly) -> Tuple[int, RationalJetExpr]:
    """Solve eq = 0 for its top jet variable u_n; returns (n, expression)."""
    n = eq.max_jet_order
    if n < 0:
        raise UnsupportedReduction("equation contains no jet variable")
    top = u_slot(n)
    if eq.degree_in(top) != 1:
        raise UnsupportedReduction(
            f"equation has degree {eq.degree_in(top)} in its top variable u{n}"
        )
    a = eq.coefficient_of(top, 1)
    b = eq.coefficient_of(top, 0)
    return n, RationalJetExpr(-b, a)


def reduce_mod_equation(e: JetExpr, eq: JetPoly) -> RationalJetExpr:
    """Eliminate u_n, u_{n+1}, ... from e using eq = 0 and its derivatives."""
    n, sol = solve_top(eq)
    e = RationalJetExpr.lift(e)
    top = e.max_jet_order
    if top < n:
        return e
    solved = {u_slot(n): sol}
    current = sol
    for k in range(n + 1, top + 1):
        current = substitute(total_derivative(current), {u_slot(n): sol})
        solved[u_slot(k)] = current
    return substitute(e, solved)


def evaluate(e: JetExpr, point: Mapping[str, complex]) -> complex:
    """Floating evaluation; ``point`` maps ``"x"``/``"u<k>"`` to numbers."""
    if isinstance(e, RationalJetExpr):
        return evaluate(e.num, point) / evaluate(e.den, point)
    values = {slot_of(k): complex(v) for k, v in point.items()}
    total = 0j
    for mono, c in e.items():
        term = complex(float(c))
        for s, ex in enumerate(mono):
            if ex:
                if s not in values:
                    raise KeyError(f"unbound variable {slot_name(s)}")
                term *= values[s] ** ex
        total += term
    return total


def evaluate_exact(e: JetExpr, point: Mapping[str, Number]) -> Fraction:
    """Exact rational evaluation."""
    if isinstance(e, RationalJetExpr):
        return evaluate_exact(e.num, point) / evaluate_exact(e.den, point)
    values = {slot_of(k): Fraction(v) for k, v in point.items()}
    total = Fraction(0)
    for mono, c in e.items():
        term = c
        for s, ex in enumerate(mono):
            if ex:
                if s not in values:
                    raise KeyError(f"unbound variable {slot_name(s)}")
                term *= values[s] ** ex
        total += term
    return total
