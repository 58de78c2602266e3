"""Certified sign decisions for homogeneous polynomials on spheres.

Univariate polynomials are lists of Fractions, lowest degree first.
Multivariate polynomials are dicts ``{exponent tuple: Fraction}``.

Two procedures are provided:

* Sturm sequences for real-root counting and isolation (circle case, after
  dehomogenising);
* exact interval subdivision of the boundary of the cube ``[-1, 1]^m`` with a
  centred-form enclosure (higher spheres).  A homogeneous polynomial vanishes
  somewhere on the unit sphere iff it vanishes on the cube boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, lcm
from typing import Sequence

import sympy

Poly1 = list[Fraction]
PolyN = dict[tuple[int, ...], Fraction]


# --------------------------------------------------------------------------- #
# univariate


def trim(p: Sequence[Fraction]) -> Poly1:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence[Fraction]) -> int:
    return len(trim(p)) - 1


def peval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence[Fraction]) -> Poly1:
    return trim([i * c for i, c in enumerate(p)][1:])


def divmod_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Poly1, Poly1]:
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def gcd_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly1:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def squarefree_part(p: Sequence[Fraction]) -> Poly1:
    g = gcd_poly(p, derivative(p))
    if len(g) <= 1:
        return trim(p)
    return divmod_poly(p, g)[0]


def sturm_sequence(p: Sequence[Fraction]) -> list[Poly1]:
    """``p, p', -rem(p, p'), ...`` until the remainder vanishes."""
    p = trim(p)
    if not p:
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p]
    d = derivative(p)
    if not d:
        return seq
    seq.append(d)
    while True:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            return seq
        seq.append([-c for c in r])


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_at(p: Poly1, x: Fraction | None, at_minus_infinity: bool = False) -> int:
    if x is not None:
        return _sign(peval(p, x))
    lead = _sign(p[-1])
    if at_minus_infinity and (len(p) - 1) % 2:
        return -lead
    return lead


def sign_variations(seq: Sequence[Poly1], x: Fraction | None, at_minus_infinity: bool = False) -> int:
    signs = [s for s in (_sign_at(q, x, at_minus_infinity) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence[Fraction], lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Distinct real roots in ``(lo, hi]``; ``None`` means infinite endpoint."""
    seq = sturm_sequence(p)
    return sign_variations(seq, lo, at_minus_infinity=lo is None) - sign_variations(seq, hi)


def cauchy_bound(p: Sequence[Fraction]) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals ``(a, b)`` each holding exactly one distinct real root.

    An exact rational root ``r`` met at a bisection point is returned as the
    degenerate interval ``(r, r)``.
    """
    p = trim(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)

    def count_open(a: Fraction, b: Fraction) -> int:
        n = sign_variations(seq, a) - sign_variations(seq, b)
        return n - (peval(p, b) == 0)

    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = count_open(a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if peval(p, mid) == 0:
            out.append((mid, mid))
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out)


def rational_roots(p: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots, read off the linear factors of a factorisation over QQ."""
    p = trim(p)
    if len(p) <= 1:
        return []
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p))
    out = []
    for factor, _ in sympy.factor_list(expr, x)[1]:
        poly = sympy.Poly(factor, x)
        if poly.degree() == 1:
            a, b = poly.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            out.append(Fraction(int(r.p), int(r.q)))
    return sorted(out)


def refine_root(p: Sequence[Fraction], a: Fraction, b: Fraction, steps: int = 8) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval by bisection on sign or Sturm counts."""
    seq = sturm_sequence(p)
    for _ in range(steps):
        if a == b:
            break
        mid = (a + b) / 2
        if peval(p, mid) == 0:
            return mid, mid
        if sign_variations(seq, a) - sign_variations(seq, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


# --------------------------------------------------------------------------- #
# circle: homogeneous binary forms


@dataclass
class CircleDecision:
    """Outcome of the circle test for a binary form ``V(l1, l2)``.

    ``zero_ray``/``opposite_ray`` are integer rays ``(l1, l2)`` where ``V``
    vanishes or has the sign opposite to ``V(1, 0)``; ``interval`` is an
    isolating interval (in the chart ``l2 = 1``) for a zero with no rational
    sign witness.
    """

    nonvanishing: bool
    trace: list[dict] = field(default_factory=list)
    zero_ray: tuple[int, int] | None = None
    opposite_ray: tuple[int, int] | None = None
    interval: tuple[Fraction, Fraction] | None = None


def _ray(x: Fraction, y: Fraction) -> tuple[int, int]:
    d = lcm(x.denominator, y.denominator)
    return int(x * d), int(y * d)


def decide_circle(coeffs: dict[tuple[int, int], Fraction], deg: int) -> CircleDecision:
    """Decide whether a binary form of degree ``deg`` vanishes on the unit circle.

    The chart ``l2 = 1`` covers every ray except ``(+-1, 0)``, which are
    tested exactly; the chart ``l1 = 1`` is counted as an independent check.
    """
    v = [Fraction(0)] * (deg + 1)  # V(x, 1)
    w = [Fraction(0)] * (deg + 1)  # V(1, y)
    for (a, b), c in coeffs.items():
        v[a] += c
        w[b] += c
    at_e1 = v[deg]
    at_e2 = w[deg]
    trace: list[dict] = []
    if at_e1 == 0:
        return CircleDecision(False, [{"step": "point", "ray": (1, 0), "value": at_e1}], zero_ray=(1, 0))
    if at_e2 == 0:
        return CircleDecision(False, [{"step": "point", "ray": (0, 1), "value": at_e2}], zero_ray=(0, 1))
    trace.append({"step": "points", "V(1,0)": at_e1, "V(0,1)": at_e2})
    seq_v = sturm_sequence(v)
    roots_v = sign_variations(seq_v, None, True) - sign_variations(seq_v, None)
    trace.append({
        "step": "sturm",
        "chart": "l2=1",
        "sequence": [list(q) for q in seq_v],
        "variations_minus_inf": sign_variations(seq_v, None, True),
        "variations_plus_inf": sign_variations(seq_v, None),
        "real_roots": roots_v,
    })
    seq_w = sturm_sequence(w)
    roots_w = sign_variations(seq_w, None, True) - sign_variations(seq_w, None)
    trace.append({"step": "sturm", "chart": "l1=1", "real_roots": roots_w})
    if roots_v == 0:
        if roots_w != 0:
            raise AssertionError("chart disagreement in Sturm counts")
        return CircleDecision(True, trace)
    rational = rational_roots(v)
    if rational:
        trace.append({"step": "rational_root", "chart": "l2=1", "root": rational[0]})
        return CircleDecision(False, trace, zero_ray=_ray(rational[0], Fraction(1)))
    # irrational roots: look for a sign change, else keep an isolating interval
    a, b = isolate_real_roots(v)[0]
    trace.append({"step": "isolate", "chart": "l2=1", "interval": (a, b)})
    if a == b:
        return CircleDecision(False, trace, zero_ray=_ray(a, Fraction(1)))
    ref = _sign(at_e1)
    for _ in range(16):
        for x in (a, b, (a + b) / 2):
            val = peval(v, x)
            if val == 0:
                return CircleDecision(False, trace, zero_ray=_ray(x, Fraction(1)))
            if _sign(val) == -ref:
                return CircleDecision(False, trace, opposite_ray=_ray(x, Fraction(1)))
        a, b = refine_root(v, a, b, 4)
        if a == b:
            return CircleDecision(False, trace, zero_ray=_ray(a, Fraction(1)))
    return CircleDecision(False, trace, interval=(a, b))


# --------------------------------------------------------------------------- #
# multivariate: subdivision on the cube boundary


def npoly_eval(p: PolyN, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for mono, c in p.items():
        term = c
        for x, e in zip(point, mono):
            if e:
                term *= x**e
        total += term
    return total


def substitute_face(p: PolyN, index: int, value: Fraction) -> PolyN:
    out: PolyN = {}
    for mono, c in p.items():
        key = mono[:index] + mono[index + 1 :]
        out[key] = out.get(key, Fraction(0)) + c * value ** mono[index]
    return {k: v for k, v in out.items() if v}


def taylor_shift(p: PolyN, center: Sequence[Fraction]) -> PolyN:
    """Coefficients of ``h -> p(center + h)``."""
    out: PolyN = {}
    for mono, c in p.items():
        # expand prod_j (c_j + h_j)^{e_j}
        parts = []
        for cj, e in zip(center, mono):
            parts.append([(k, comb(e, k) * cj ** (e - k)) for k in range(e + 1)])
        for choice in product(*parts):
            key = tuple(k for k, _ in choice)
            coef = c
            for _, f in choice:
                coef *= f
            if coef:
                out[key] = out.get(key, Fraction(0)) + coef
    return {k: v for k, v in out.items() if v}


def centred_enclosure(p: PolyN, center: Sequence[Fraction], radius: Fraction) -> tuple[Fraction, Fraction]:
    """Exact interval containing ``p`` on the box ``center +- radius``."""
    t = taylor_shift(p, center)
    zero = tuple(0 for _ in center)
    mid = t.get(zero, Fraction(0))
    spread = sum((abs(c) * radius ** sum(m) for m, c in t.items() if m != zero), Fraction(0))
    return mid - spread, mid + spread


@dataclass
class SubdivisionResult:
    status: str  # "nonvanishing" | "zero" | "sign_change" | "undecided"
    cells_certified: int = 0
    max_depth_reached: int = 0
    witness_point: tuple[Fraction, ...] | None = None
    witness_value: Fraction | None = None
    undecided_cells: int = 0
    trace: list[dict] = field(default_factory=list)


def decide_sphere_subdivision(p: PolyN, nvars: int, deg: int, max_depth: int = 12) -> SubdivisionResult:
    """Decide nonvanishing of a homogeneous form on the unit sphere by subdivision.

    Faces ``l_i = 1`` of the cube are subdivided into dyadic boxes; a box is
    certified when the centred-form enclosure excludes zero.  Exact values at
    box centres give refutation witnesses (a zero, or the sign opposite to
    ``V(e_1)``; the sphere is connected, so a sign change forces a zero).
    Odd degree also needs the faces ``l_i = -1``.
    """
    e1 = tuple(Fraction(1) if i == 0 else Fraction(0) for i in range(nvars))
    ref_value = npoly_eval(p, e1)
    if ref_value == 0:
        return SubdivisionResult("zero", witness_point=e1, witness_value=ref_value)
    ref = _sign(ref_value)
    faces = [(i, Fraction(1)) for i in range(nvars)]
    if deg % 2:
        faces += [(i, Fraction(-1)) for i in range(nvars)]
    result = SubdivisionResult("nonvanishing")
    for index, value in faces:
        face_poly = substitute_face(p, index, value)
        m = nvars - 1
        queue = [(tuple(Fraction(0) for _ in range(m)), Fraction(1), 0)]
        certified = 0
        while queue:
            nxt = []
            for center, radius, depth in queue:
                point = center[:index] + (value,) + center[index:]
                val = npoly_eval(face_poly, center) if m else npoly_eval(face_poly, ())
                if val == 0 or _sign(val) != ref:
                    result.status = "zero" if val == 0 else "sign_change"
                    result.witness_point = point
                    result.witness_value = val
                    result.trace.append({"face": (index, value), "depth": depth})
                    return result
                lo, hi = centred_enclosure(face_poly, center, radius) if m else (val, val)
                result.max_depth_reached = max(result.max_depth_reached, depth)
                if lo > 0 or hi < 0:
                    certified += 1
                    continue
                if depth >= max_depth:
                    result.undecided_cells += 1
                    continue
                half = radius / 2
                for offsets in product((-half, half), repeat=m):
                    nxt.append((tuple(c + o for c, o in zip(center, offsets)), half, depth + 1))
            queue = nxt
        result.cells_certified += certified
        result.trace.append({"face": (index, value), "cells_certified": certified})
    if result.undecided_cells:
        result.status = "undecided"
    return result


def integer_ray(point: Sequence[Fraction]) -> tuple[int, ...]:
    d = 1
    for x in point:
        d = lcm(d, Fraction(x).denominator)
    return tuple(int(Fraction(x) * d) for x in point)
