"""Exact coefficient rings.

Two rings are supported:

* :data:`QQ`, the rationals, with elements stored as :class:`fractions.Fraction`;
* :class:`LambdaRing`, polynomials with rational coefficients in the sphere
  parameters ``l1, ..., lm``.  Elements are sympy ``PolyElement`` objects, which
  keep a canonical sparse monomial form.

Every tensor records the ring of its coefficients.  Values are converted
through ``ring(x)``, which accepts integers, fractions and elements of the
same ring only; anything else raises :class:`~cosphere.errors.RingMismatch`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

from sympy.polys.domains import QQ as SYMPY_QQ
from sympy.polys.fields import field as sympy_field
from sympy.polys.rings import PolyElement, ring as sympy_ring

from .errors import RingMismatch

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction; a zero denominator is an error."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_fraction(x: Any) -> Fraction:
    """Convert an int, Fraction or gmpy/sympy rational to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, PolyElement):
        raise RingMismatch("polynomial value where a rational was expected")
    try:
        return Fraction(int(x.numerator), int(x.denominator))
    except AttributeError as exc:
        raise RingMismatch(f"cannot interpret {x!r} as an exact rational") from exc


class Rationals:
    """The field of rational numbers."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x: Any) -> Fraction:
        if isinstance(x, str):
            return parse_rational(x)
        if isinstance(x, float):
            raise RingMismatch("floats are not exact; pass a Fraction or a 'p/q' string")
        return to_fraction(x)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("rational")

    def __repr__(self) -> str:
        return "QQ"

    @property
    def tag(self) -> str:
        return "rational"

    def is_zero(self, x: Fraction) -> bool:
        return x == 0

    def format(self, x: Fraction) -> str:
        return format_rational(x)

    def to_json(self, x: Fraction) -> str:
        return format_rational(x)

    def from_json(self, data: Any) -> Fraction:
        return parse_rational(data)

    def inverse(self, x: Fraction) -> Fraction:
        return 1 / x


QQ = Rationals()


class LambdaRing:
    """Polynomials in ``l1..lm`` with rational coefficients.

    Two instances with the same number of variables are equal and share the
    underlying sympy ring, so their elements interoperate.
    """

    _cache: dict[int, tuple] = {}

    def __init__(self, nvars: int) -> None:
        if nvars < 1:
            raise ValueError("a lambda ring needs at least one variable")
        self.nvars = nvars
        if nvars not in LambdaRing._cache:
            names = ",".join(f"l{i + 1}" for i in range(nvars))
            R, *gens = sympy_ring(names, SYMPY_QQ)
            LambdaRing._cache[nvars] = (R, tuple(gens))
        self.poly_ring, self.gens = LambdaRing._cache[nvars]
        self.zero = self.poly_ring.zero
        self.one = self.poly_ring.one

    def __call__(self, x: Any) -> PolyElement:
        if isinstance(x, PolyElement):
            if x.ring != self.poly_ring:
                raise RingMismatch(f"polynomial over {x.ring} used in {self!r}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, float):
            raise RingMismatch("floats are not exact; pass a Fraction or a 'p/q' string")
        return self.poly_ring(to_fraction(x))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LambdaRing) and other.nvars == self.nvars

    def __hash__(self) -> int:
        return hash(("lambda", self.nvars))

    def __repr__(self) -> str:
        return f"LambdaRing({self.nvars})"

    @property
    def tag(self) -> str:
        return f"lambda:{self.nvars - 1}"

    def is_zero(self, x: PolyElement) -> bool:
        return not x

    @cached_property
    def sphere_relation(self) -> PolyElement:
        """The generator ``l1^2 + ... + lm^2 - 1`` of the sphere ideal."""
        return sum((g * g for g in self.gens), self.zero) - 1

    @cached_property
    def norm_squared(self) -> PolyElement:
        return sum((g * g for g in self.gens), self.zero)

    def reduce_sphere(self, x: PolyElement) -> PolyElement:
        """Canonical representative of ``x`` modulo the sphere ideal.

        The ideal is principal, so the remainder of division by its generator
        (lex order, ``l1`` largest) is a normal form.
        """
        return self(x).rem([self.sphere_relation])

    def equal_on_sphere(self, a: PolyElement, b: PolyElement) -> bool:
        return not self.reduce_sphere(a - b)

    def specialize(self, x: PolyElement, point: Sequence[Any]) -> Fraction:
        """Evaluate at a rational point; the result is a Fraction."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.nvars}")
        value = self(x).evaluate(list(zip(self.gens, [SYMPY_QQ(to_fraction(p).numerator, to_fraction(p).denominator) for p in point])))
        return to_fraction(value)

    def terms(self, x: PolyElement) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical order: total degree descending, then lex descending."""
        items = [(tuple(m), to_fraction(c)) for m, c in self(x).items()]
        items.sort(key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
        return items

    def from_terms(self, terms: Iterable[tuple[Sequence[int], Any]]) -> PolyElement:
        out = self.zero
        for mono, coeff in terms:
            term = self.poly_ring(to_fraction(coeff))
            for g, e in zip(self.gens, mono):
                term = term * g ** int(e)
            out = out + term
        return out

    def is_homogeneous(self, x: PolyElement, degree: int | None = None) -> bool:
        degrees = {sum(m) for m in self(x).keys()}
        if not degrees:
            return True
        if len(degrees) != 1:
            return False
        return degree is None or degrees == {degree}

    def format(self, x: PolyElement) -> str:
        terms = self.terms(x)
        if not terms:
            return "0"
        parts: list[str] = []
        for i, (mono, coeff) in enumerate(terms):
            factors = [
                f"l{k + 1}" if e == 1 else f"l{k + 1}^{e}" for k, e in enumerate(mono) if e
            ]
            mag = abs(coeff)
            if factors:
                body = "*".join(factors) if mag == 1 else format_rational(mag) + "*" + "*".join(factors)
            else:
                body = format_rational(mag)
            if i == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    def parse(self, text: str) -> PolyElement:
        """Parse a polynomial written in ``l1..lm`` with ``+ - * ^`` and rationals."""
        from sympy import Symbol, sympify

        allowed = {f"l{i + 1}": Symbol(f"l{i + 1}") for i in range(self.nvars)}
        cleaned = text.replace("^", "**")
        if re.search(r"[^0-9a-z+\-*/() .]", cleaned):
            raise ValueError(f"invalid character in polynomial {text!r}")
        for name in re.findall(r"[a-z]\w*", cleaned):
            if name not in allowed:
                raise ValueError(f"unknown variable {name!r} in polynomial {text!r}")
        expr = sympify(cleaned, locals=allowed, rational=True)
        poly = self.poly_ring.from_expr(expr) if expr.free_symbols else self.poly_ring(to_fraction(expr))
        return poly

    def to_json(self, x: PolyElement) -> list[list[Any]]:
        return [[list(m), format_rational(c)] for m, c in self.terms(x)]

    def from_json(self, data: Any) -> PolyElement:
        return self.from_terms((m, parse_rational(c)) for m, c in data)

    def inverse(self, x: PolyElement) -> PolyElement:
        x = self(x)
        if x.is_ground and x:
            return self.poly_ring(1 / to_fraction(x.LC))
        raise ZeroDivisionError("only nonzero constants are invertible in a polynomial ring")

    @cached_property
    def fraction_field(self):
        """sympy rational-function field in the same variables."""
        names = ",".join(f"l{i + 1}" for i in range(self.nvars))
        K, *_ = sympy_field(names, SYMPY_QQ)
        return K


Ring = Rationals | LambdaRing


def ring_of(values: Iterable[Any]) -> Ring:
    """Infer the ring of a collection of raw values (QQ unless a PolyElement appears)."""
    found: LambdaRing | None = None
    for v in values:
        if isinstance(v, PolyElement):
            r = LambdaRing(v.ring.ngens)
            if found is not None and found != r:
                raise RingMismatch("values from different lambda rings")
            found = r
    return found if found is not None else QQ


def parse_ring(tag: str) -> Ring:
    """Parse ``rational`` or ``lambda:<p>``; the latter is the ring of a ``p``-sphere (``p+1`` variables)."""
    tag = tag.strip()
    if tag == "rational":
        return QQ
    m = re.fullmatch(r"lambda:(\d+)", tag)
    if m and int(m.group(1)) >= 1:
        return LambdaRing(int(m.group(1)) + 1)
    raise ValueError(f"unknown ring selector {tag!r}; expected 'rational' or 'lambda:<p>'")
