"""Dense univariate polynomials over Q, coefficient lists in ascending order."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

UPoly = List[Fraction]


def trim(p: Sequence) -> UPoly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def add(a: Sequence, b: Sequence) -> UPoly:
    n = max(len(a), len(b))
    return trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def scale(a: Sequence, k) -> UPoly:
    return trim(c * k for c in a)


def mul(a: Sequence, b: Sequence) -> UPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def evaluate(p: Sequence, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def falling(shift, k: int) -> UPoly:
    """(t + shift)(t + shift - 1)...(t + shift - k + 1) as a polynomial in t."""
    out: UPoly = [Fraction(1)]
    for j in range(k):
        out = mul(out, [Fraction(shift) - j, Fraction(1)])
    return out


def falling_value(a, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= a - j
    return out


def monic(p: Sequence) -> UPoly:
    p = trim(p)
    if not p:
        return p
    return [c / p[-1] for c in p]


def synthetic_division(p: Sequence, r) -> Tuple[UPoly, Fraction]:
    """Divide p by (t - r); returns (quotient, remainder)."""
    p = trim(p)
    if not p:
        return [], Fraction(0)
    quot = [Fraction(0)] * (len(p) - 1)
    acc = Fraction(0)
    for i in range(len(p) - 1, -1, -1):
        acc = acc * r + p[i]
        if i:
            quot[i - 1] = acc
    return quot, acc


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: Sequence) -> Tuple[List[Fraction], UPoly]:
    """All rational roots with multiplicity, plus the cofactor left over.

    Uses the rational-root theorem on the integer-scaled polynomial and
    synthetic division to strip each root.
    """
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has no finite root set")
    roots: List[Fraction] = []
    while len(p) > 1 and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    changed = True
    while changed and len(p) > 1:
        changed = False
        lcm = 1
        for c in p:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in p]
        for q in _divisors(ints[-1]):
            for a in _divisors(ints[0]):
                for cand in (Fraction(a, q), Fraction(-a, q)):
                    quot, rem = synthetic_division(p, cand)
                    if rem == 0:
                        roots.append(cand)
                        p = quot
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return sorted(roots), p
