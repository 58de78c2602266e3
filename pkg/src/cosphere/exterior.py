"""Exact exterior calculus of constant-coefficient tensors on a Lie frame.

A :class:`Frame` is a basis ``e_1..e_n`` of a Lie algebra given by its structure
constants.  Forms, vector fields and endomorphisms have constant coefficients
in that basis (equivalently: left-invariant tensors on the Lie group, or
constant tensors on a torus when the frame is abelian).

Conventions
-----------
* Wedge product: determinant convention, ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``
  for 1-forms; ``e^1 ^ ... ^ e^k`` evaluates to ``det`` on basis vectors.
* Exterior derivative: Chevalley-Eilenberg formula without normalising factor,
  so for a 1-form ``d a(X, Y) = X a(Y) - Y a(X) - a([X, Y])``.  The
  half-alternation convention gives ``d`` of 1-forms an extra factor 1/2.
* Interior product: ``i_v`` inserts ``v`` in the first slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Any, Iterable, Mapping, Sequence

from .errors import DegreeError, FrameMismatch, JacobiError, RingMismatch
from .scalars import QQ, LambdaRing, Ring, to_fraction


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries assumed distinct)."""
    inversions = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def sort_indices(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return ``(sign, sorted)``; ``sign`` is 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    return permutation_sign(indices), tuple(sorted(indices))


@dataclass(frozen=True)
class Frame:
    """A Lie algebra basis with rational structure constants.

    ``constants`` lists ``((i, j), ((k, c), ...))`` with ``i < j`` meaning
    ``[e_i, e_j] = sum_k c e_k``.  Indices are 0-based internally; basis names
    are only labels.  The Jacobi identity is checked at construction.
    """

    dim: int
    names: tuple[str, ...]
    constants: tuple[tuple[tuple[int, int], tuple[tuple[int, Fraction], ...]], ...] = ()
    check_jacobi: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("frame dimension must be positive")
        if len(self.names) != self.dim or len(set(self.names)) != self.dim:
            raise ValueError("basis names must be distinct and match the dimension")
        for (i, j), terms in self.constants:
            if not (0 <= i < j < self.dim):
                raise ValueError(f"bracket index pair {(i, j)} invalid (need 0 <= i < j < dim)")
            for k, _ in terms:
                if not 0 <= k < self.dim:
                    raise ValueError(f"bracket output index {k} out of range")
        if self.check_jacobi:
            bad = self.jacobi_violation()
            if bad is not None:
                raise JacobiError(bad)

    @classmethod
    def from_brackets(
        cls,
        names: Sequence[str] | int,
        brackets: Mapping[tuple[int, int], Mapping[int, Any]] | None = None,
        check_jacobi: bool = True,
    ) -> "Frame":
        """Build a frame from ``{(i, j): {k: c}}``; ``(j, i)`` entries are negated."""
        if isinstance(names, int):
            names = [f"e{i + 1}" for i in range(names)]
        names = tuple(names)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), terms in (brackets or {}).items():
            if i == j:
                if any(to_fraction(c) for c in terms.values()):
                    raise ValueError(f"[e_{i}, e_{i}] must vanish")
                continue
            sign = 1 if i < j else -1
            key = (min(i, j), max(i, j))
            slot = table.setdefault(key, {})
            for k, c in terms.items():
                slot[k] = slot.get(k, Fraction(0)) + sign * to_fraction(c)
        constants = tuple(
            (key, tuple(sorted((k, c) for k, c in slot.items() if c)))
            for key, slot in sorted(table.items())
            if any(c for c in slot.values())
        )
        return cls(len(names), names, constants, check_jacobi)

    @classmethod
    def abelian(cls, names: Sequence[str] | int) -> "Frame":
        return cls.from_brackets(names, {})

    @cached_property
    def table(self) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
        """Dense ``table[i][j][k]`` = coefficient of ``e_k`` in ``[e_i, e_j]``."""
        n = self.dim
        t = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), terms in self.constants:
            for k, c in terms:
                t[i][j][k] = c
                t[j][i][k] = -c
        return tuple(tuple(tuple(row) for row in plane) for plane in t)

    @property
    def is_abelian(self) -> bool:
        return not self.constants

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        return self.table[i][j]

    def jacobi_violation(self) -> tuple[int, int, int] | None:
        t = self.table if self.constants else None
        if t is None:
            return None
        n = self.dim

        def nested(a: int, b: int, c: int) -> list[Fraction]:
            # [[e_a, e_b], e_c]
            out = [Fraction(0)] * n
            for m, coeff in enumerate(t[a][b]):
                if coeff:
                    for k in range(n):
                        out[k] += coeff * t[m][c][k]
            return out

        for i, j, k in combinations(range(n), 3):
            total = [x + y + z for x, y, z in zip(nested(i, j, k), nested(j, k, i), nested(k, i, j))]
            if any(total):
                return (i, j, k)
        return None

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis name {name!r}") from None

    def vector(self, i: int | str, ring: Ring = QQ) -> "VectorField":
        i = self.index(i) if isinstance(i, str) else i
        coeffs = [ring.zero] * self.dim
        coeffs[i] = ring.one
        return VectorField(self, coeffs, ring)

    def coframe(self, i: int | str, ring: Ring = QQ) -> "KForm":
        """Dual basis 1-form ``e^i``."""
        i = self.index(i) if isinstance(i, str) else i
        return KForm(self, 1, {(i,): ring.one}, ring)

    def extend(self, name: str = "t") -> "Frame":
        """Append one direction commuting with everything."""
        return Frame(self.dim + 1, self.names + (name,), self.constants, check_jacobi=False)


def _check_frames(*frames: Frame) -> Frame:
    first = frames[0]
    for f in frames[1:]:
        if f is not first and f != first:
            raise FrameMismatch("tensors live on different frames")
    return first


def _check_rings(*rings: Ring) -> Ring:
    first = rings[0]
    for r in rings[1:]:
        if r != first:
            raise RingMismatch(f"cannot combine {first!r} with {r!r}")
    return first


class KForm:
    """Alternating k-form with constant coefficients.

    ``coeffs`` maps strictly increasing index tuples to ring elements.  Keys
    given in another order are sorted with the permutation sign; keys with a
    repeated index are dropped.  Zero coefficients are never stored.
    """

    __slots__ = ("frame", "degree", "ring", "_c", "_hash")

    def __init__(
        self,
        frame: Frame,
        degree: int,
        coeffs: Mapping[tuple[int, ...], Any] | None = None,
        ring: Ring = QQ,
    ) -> None:
        if degree < 0 or degree > frame.dim:
            raise DegreeError(f"degree {degree} not allowed on a {frame.dim}-dimensional frame")
        c: dict[tuple[int, ...], Any] = {}
        for key, value in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree or any(not 0 <= i < frame.dim for i in key):
                raise DegreeError(f"index tuple {key} invalid for a {degree}-form in dim {frame.dim}")
            sign, skey = sort_indices(key)
            if sign == 0:
                continue
            v = ring(value)
            c[skey] = c[skey] + sign * v if skey in c else sign * v
        self.frame = frame
        self.degree = degree
        self.ring = ring
        self._c = {k: v for k, v in c.items() if not ring.is_zero(v)}
        self._hash = None

    @classmethod
    def _raw(cls, frame: Frame, degree: int, coeffs: dict, ring: Ring) -> "KForm":
        obj = cls.__new__(cls)
        obj.frame, obj.degree, obj.ring = frame, degree, ring
        obj._c = {k: v for k, v in coeffs.items() if not ring.is_zero(v)}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, frame: Frame, degree: int, ring: Ring = QQ) -> "KForm":
        return cls(frame, degree, {}, ring)

    @classmethod
    def constant(cls, frame: Frame, value: Any, ring: Ring = QQ) -> "KForm":
        return cls(frame, 0, {(): value}, ring)

    @property
    def coeffs(self) -> dict[tuple[int, ...], Any]:
        return dict(self._c)

    def items(self) -> list[tuple[tuple[int, ...], Any]]:
        return sorted(self._c.items())

    def __getitem__(self, key: Sequence[int]) -> Any:
        sign, skey = sort_indices(tuple(key))
        if sign == 0:
            return self.ring.zero
        return sign * self._c.get(skey, self.ring.zero)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def top_coefficient(self) -> Any:
        """Coefficient on ``e^1 ^ ... ^ e^n``; requires a top-degree form."""
        if self.degree != self.frame.dim:
            raise DegreeError("top_coefficient needs a form of top degree")
        return self._c.get(tuple(range(self.frame.dim)), self.ring.zero)

    def _compatible(self, other: "KForm") -> None:
        _check_frames(self.frame, other.frame)
        _check_rings(self.ring, other.ring)
        if self.degree != other.degree:
            raise DegreeError(f"cannot add a {self.degree}-form and a {other.degree}-form")

    def __add__(self, other: "KForm") -> "KForm":
        if not isinstance(other, KForm):
            return NotImplemented
        self._compatible(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return KForm._raw(self.frame, self.degree, out, self.ring)

    def __neg__(self) -> "KForm":
        return KForm._raw(self.frame, self.degree, {k: -v for k, v in self._c.items()}, self.ring)

    def __sub__(self, other: "KForm") -> "KForm":
        if not isinstance(other, KForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Any) -> "KForm":
        if isinstance(scalar, (KForm, VectorField, EndoField)):
            return NotImplemented
        s = self.ring(scalar)
        return KForm._raw(self.frame, self.degree, {k: s * v for k, v in self._c.items()}, self.ring)

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.ring == other.ring
            and self.frame == other.frame
            and self._c == other._c
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.frame, self.degree, self.ring, tuple(sorted(self._c.items()))))
        return self._hash

    def map_coeffs(self, fn, ring: Ring | None = None) -> "KForm":
        ring = ring or self.ring
        return KForm._raw(self.frame, self.degree, {k: ring(fn(v)) for k, v in self._c.items()}, ring)

    def to_ring(self, ring: Ring) -> "KForm":
        """Explicit embedding of a rational form into a lambda ring."""
        if ring == self.ring:
            return self
        if self.ring != QQ:
            raise RingMismatch(f"only rational forms can be embedded, not {self.ring!r}")
        return KForm._raw(self.frame, self.degree, {k: ring(v) for k, v in self._c.items()}, ring)

    def __repr__(self) -> str:
        return f"KForm(degree={self.degree}, {self.pretty()})"

    def pretty(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for key, value in self.items():
            basis = "^".join("d" + self.frame.names[i] for i in key) or "1"
            parts.append(f"({self.ring.format(value)})*{basis}")
        return " + ".join(parts)


class VectorField:
    """Constant-coefficient vector field ``sum v_i e_i``."""

    __slots__ = ("frame", "ring", "coeffs")

    def __init__(self, frame: Frame, coeffs: Sequence[Any], ring: Ring = QQ) -> None:
        if len(coeffs) != frame.dim:
            raise ValueError(f"vector needs {frame.dim} coefficients, got {len(coeffs)}")
        self.frame = frame
        self.ring = ring
        self.coeffs = tuple(ring(c) for c in coeffs)

    @classmethod
    def zero(cls, frame: Frame, ring: Ring = QQ) -> "VectorField":
        return cls(frame, [ring.zero] * frame.dim, ring)

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_frames(self.frame, other.frame)
        _check_rings(self.ring, other.ring)
        return VectorField(self.frame, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.ring)

    def __neg__(self) -> "VectorField":
        return VectorField(self.frame, [-a for a in self.coeffs], self.ring)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __mul__(self, scalar: Any) -> "VectorField":
        if isinstance(scalar, (KForm, VectorField, EndoField)):
            return NotImplemented
        s = self.ring(scalar)
        return VectorField(self.frame, [s * a for a in self.coeffs], self.ring)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.frame == other.frame and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.frame, self.ring, self.coeffs))

    def to_ring(self, ring: Ring) -> "VectorField":
        if ring == self.ring:
            return self
        if self.ring != QQ:
            raise RingMismatch(f"only rational vectors can be embedded, not {self.ring!r}")
        return VectorField(self.frame, [ring(c) for c in self.coeffs], ring)

    def __repr__(self) -> str:
        return "VectorField(" + ", ".join(self.ring.format(c) for c in self.coeffs) + ")"


class EndoField:
    """Constant (1,1)-tensor; ``matrix[i][j]`` is component ``i`` of the image of ``e_j``."""

    __slots__ = ("frame", "ring", "matrix")

    def __init__(self, frame: Frame, matrix: Sequence[Sequence[Any]], ring: Ring = QQ) -> None:
        n = frame.dim
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError(f"endomorphism needs a {n}x{n} matrix")
        self.frame = frame
        self.ring = ring
        self.matrix = tuple(tuple(ring(x) for x in row) for row in matrix)

    @classmethod
    def identity(cls, frame: Frame, ring: Ring = QQ) -> "EndoField":
        n = frame.dim
        return cls(frame, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)], ring)

    @classmethod
    def zero(cls, frame: Frame, ring: Ring = QQ) -> "EndoField":
        n = frame.dim
        return cls(frame, [[ring.zero] * n for _ in range(n)], ring)

    @classmethod
    def from_columns(cls, frame: Frame, columns: Sequence["VectorField"], ring: Ring = QQ) -> "EndoField":
        n = frame.dim
        return cls(frame, [[columns[j][i] for j in range(n)] for i in range(n)], ring)

    def column(self, j: int) -> VectorField:
        return VectorField(self.frame, [self.matrix[i][j] for i in range(self.frame.dim)], self.ring)

    def __call__(self, v: VectorField) -> VectorField:
        _check_frames(self.frame, v.frame)
        _check_rings(self.ring, v.ring)
        n = self.frame.dim
        zero = self.ring.zero
        out = []
        for i in range(n):
            acc = zero
            row = self.matrix[i]
            for j in range(n):
                if row[j] and v.coeffs[j]:
                    acc = acc + row[j] * v.coeffs[j]
            out.append(acc)
        return VectorField(self.frame, out, self.ring)

    def __matmul__(self, other: "EndoField") -> "EndoField":
        if not isinstance(other, EndoField):
            return NotImplemented
        _check_frames(self.frame, other.frame)
        _check_rings(self.ring, other.ring)
        n = self.frame.dim
        zero = self.ring.zero
        out = [[zero] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                a = self.matrix[i][k]
                if not a:
                    continue
                brow = other.matrix[k]
                orow = out[i]
                for j in range(n):
                    if brow[j]:
                        orow[j] = orow[j] + a * brow[j]
        return EndoField(self.frame, out, self.ring)

    def __add__(self, other: "EndoField") -> "EndoField":
        if not isinstance(other, EndoField):
            return NotImplemented
        _check_frames(self.frame, other.frame)
        _check_rings(self.ring, other.ring)
        return EndoField(
            self.frame,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)],
            self.ring,
        )

    def __neg__(self) -> "EndoField":
        return EndoField(self.frame, [[-a for a in row] for row in self.matrix], self.ring)

    def __sub__(self, other: "EndoField") -> "EndoField":
        return self + (-other)

    def __mul__(self, scalar: Any) -> "EndoField":
        if isinstance(scalar, (KForm, VectorField, EndoField)):
            return NotImplemented
        s = self.ring(scalar)
        return EndoField(self.frame, [[s * a for a in row] for row in self.matrix], self.ring)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EndoField):
            return NotImplemented
        return self.frame == other.frame and self.ring == other.ring and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.frame, self.ring, self.matrix))

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for row in self.matrix for a in row)

    def pullback(self, form: KForm) -> KForm:
        """``form o self`` for a 1-form, i.e. ``X -> form(self X)``."""
        if form.degree != 1:
            raise DegreeError("pullback by an endomorphism is implemented for 1-forms")
        _check_frames(self.frame, form.frame)
        _check_rings(self.ring, form.ring)
        n = self.frame.dim
        coeffs = {}
        for j in range(n):
            acc = self.ring.zero
            for (i,), a in form._c.items():
                if self.matrix[i][j]:
                    acc = acc + a * self.matrix[i][j]
            coeffs[(j,)] = acc
        return KForm(self.frame, 1, coeffs, self.ring)

    def to_ring(self, ring: Ring) -> "EndoField":
        if ring == self.ring:
            return self
        if self.ring != QQ:
            raise RingMismatch(f"only rational endomorphisms can be embedded, not {self.ring!r}")
        return EndoField(self.frame, [[ring(a) for a in row] for row in self.matrix], ring)

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(self.ring.format(a) for a in row) + "]" for row in self.matrix]
        return "EndoField(" + ", ".join(rows) + ")"


def outer(eta: KForm, xi: VectorField) -> EndoField:
    """The endomorphism ``eta (x) xi : X -> eta(X) xi``."""
    if eta.degree != 1:
        raise DegreeError("outer product needs a 1-form")
    _check_frames(eta.frame, xi.frame)
    ring = _check_rings(eta.ring, xi.ring)
    n = eta.frame.dim
    row = [eta[(j,)] for j in range(n)]
    return EndoField(eta.frame, [[xi.coeffs[i] * row[j] for j in range(n)] for i in range(n)], ring)


def linear_combination(coeffs: Sequence[Any], items: Sequence[Any]):
    """``sum c_i x_i`` for forms, vectors or endomorphisms sharing a ring."""
    if not items:
        raise ValueError("empty linear combination")
    total = None
    for c, x in zip(coeffs, items, strict=True):
        term = x * c
        total = term if total is None else total + term
    return total


# --------------------------------------------------------------------------- #
# operations


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; a result degree above ``dim`` raises :class:`DegreeError`."""
    frame = _check_frames(a.frame, b.frame)
    ring = _check_rings(a.ring, b.ring)
    degree = a.degree + b.degree
    if degree > frame.dim:
        raise DegreeError(f"wedge of degree {degree} exceeds dimension {frame.dim}")
    out: dict[tuple[int, ...], Any] = {}
    for ka, va in a._c.items():
        sa = set(ka)
        for kb, vb in b._c.items():
            if sa.intersection(kb):
                continue
            # sign of the merge: pairs (i in ka, j in kb) with i > j
            inv = sum(1 for i in ka for j in kb if i > j)
            key = tuple(sorted(ka + kb))
            term = va * vb
            if inv % 2:
                term = -term
            out[key] = out[key] + term if key in out else term
    return KForm._raw(frame, degree, out, ring)


def wedge_all(forms: Iterable[KForm]) -> KForm:
    forms = list(forms)
    if not forms:
        raise ValueError("wedge_all needs at least one form")
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def power(a: KForm, m: int) -> KForm:
    """``m``-fold wedge power; ``power(a, 0)`` is the constant 1."""
    if m < 0:
        raise ValueError("power exponent must be nonnegative")
    out = KForm.constant(a.frame, a.ring.one, a.ring)
    for _ in range(m):
        out = wedge(out, a)
    return out


def interior(v: VectorField, a: KForm) -> KForm:
    """Interior product ``i_v a``."""
    frame = _check_frames(v.frame, a.frame)
    ring = _check_rings(v.ring, a.ring)
    if a.degree == 0:
        raise DegreeError("interior product of a 0-form is undefined")
    out: dict[tuple[int, ...], Any] = {}
    for key, value in a._c.items():
        for m, idx in enumerate(key):
            c = v.coeffs[idx]
            if not c:
                continue
            rest = key[:m] + key[m + 1 :]
            term = value * c
            if m % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return KForm._raw(frame, a.degree - 1, out, ring)


def ext_d(a: KForm) -> KForm:
    """Chevalley-Eilenberg exterior derivative of a constant form.

    ``(d a)(X_0..X_k) = sum_{p<q} (-1)^(p+q) a([X_p, X_q], X_0..^p..^q..X_k)``.
    The sum is evaluated sparsely: a term ``a_I`` can only contribute through
    some ``k`` in ``I`` and a bracket ``[e_p, e_q]`` with a nonzero ``e_k`` part.
    """
    frame = a.frame
    ring = a.ring
    if a.degree >= frame.dim:
        raise DegreeError("the exterior derivative of a top-degree form has degree dim + 1")
    if frame.is_abelian:
        return KForm.zero(frame, a.degree + 1, ring)
    # output index k -> list of (p, q, c) with c = coefficient of e_k in [e_p, e_q], p < q
    producers: dict[int, list[tuple[int, int, Fraction]]] = {}
    for (p, q), terms in frame.constants:
        for k, c in terms:
            producers.setdefault(k, []).append((p, q, c))
    out: dict[tuple[int, ...], Any] = {}
    for key, value in a._c.items():
        for m, k in enumerate(key):
            if k not in producers:
                continue
            rest = key[:m] + key[m + 1 :]
            rest_set = set(rest)
            for p, q, c in producers[k]:
                if p in rest_set or q in rest_set:
                    continue
                target = tuple(sorted(rest + (p, q)))
                pos_p = target.index(p)
                pos_q = target.index(q)
                sign = (-1) ** (pos_p + pos_q + m)
                term = value * (sign * c)
                out[target] = out[target] + term if target in out else term
    return KForm._raw(frame, a.degree + 1, out, ring)


def evaluate(a: KForm, vectors: Sequence[VectorField]) -> Any:
    """Evaluate a form on vectors by the full alternating sum over permutations.

    This is the reference evaluation used to cross-check the combinatorial
    wedge and interior products, so it deliberately avoids both.
    """
    if len(vectors) != a.degree:
        raise ValueError(f"a {a.degree}-form takes {a.degree} arguments, got {len(vectors)}")
    for v in vectors:
        _check_frames(a.frame, v.frame)
        _check_rings(a.ring, v.ring)
    ring = a.ring
    k = a.degree
    if k == 0:
        return a._c.get((), ring.zero)
    total = ring.zero
    perms = [(p, permutation_sign(p)) for p in permutations(range(k))]
    for key, value in a._c.items():
        acc = ring.zero
        for perm, sign in perms:
            prod = ring.one
            for r in range(k):
                x = vectors[perm[r]].coeffs[key[r]]
                if not x:
                    prod = ring.zero
                    break
                prod = prod * x
            if prod:
                acc = acc + prod if sign > 0 else acc - prod
        total = total + value * acc
    return total


def bracket(v: VectorField, w: VectorField) -> VectorField:
    """Lie bracket of constant vector fields via the structure constants."""
    frame = _check_frames(v.frame, w.frame)
    ring = _check_rings(v.ring, w.ring)
    n = frame.dim
    out = [ring.zero] * n
    if frame.is_abelian:
        return VectorField(frame, out, ring)
    for (i, j), terms in frame.constants:
        coeff = v.coeffs[i] * w.coeffs[j] - v.coeffs[j] * w.coeffs[i]
        if not coeff:
            continue
        for k, c in terms:
            out[k] = out[k] + coeff * c
    return VectorField(frame, out, ring)


def pair(a: KForm, v: VectorField) -> Any:
    """``a(v)`` for a 1-form ``a``."""
    if a.degree != 1:
        raise DegreeError("pairing needs a 1-form")
    _check_frames(a.frame, v.frame)
    _check_rings(a.ring, v.ring)
    acc = a.ring.zero
    for (i,), c in a._c.items():
        if v.coeffs[i]:
            acc = acc + c * v.coeffs[i]
    return acc


def lie_derivative_1form(v: VectorField, a: KForm) -> KForm:
    """``(L_v a)(w) = -a([v, w])`` for constant ``a`` and ``v``."""
    if a.degree != 1:
        raise DegreeError("lie_derivative_1form needs a 1-form")
    frame = _check_frames(v.frame, a.frame)
    ring = _check_rings(v.ring, a.ring)
    coeffs = {(k,): -pair(a, bracket(v, frame.vector(k, ring))) for k in range(frame.dim)}
    return KForm(frame, 1, coeffs, ring)


def lie_derivative_form(v: VectorField, a: KForm) -> KForm:
    """``(L_v a)(X_1..X_k) = -sum_i a(X_1..[v, X_i]..X_k)`` for constant data."""
    frame = _check_frames(v.frame, a.frame)
    ring = _check_rings(v.ring, a.ring)
    n = frame.dim
    images = [bracket(v, frame.vector(k, ring)) for k in range(n)]
    out: dict[tuple[int, ...], Any] = {}
    for key in combinations(range(n), a.degree):
        acc = ring.zero
        for slot, k in enumerate(key):
            w = images[k]
            for m, c in enumerate(w.coeffs):
                if not c:
                    continue
                args = key[:slot] + (m,) + key[slot + 1 :]
                val = a[args]
                if val:
                    acc = acc - c * val
        out[key] = acc
    return KForm(frame, a.degree, out, ring)


def lie_derivative_endo(v: VectorField, P: EndoField) -> EndoField:
    """``(L_v P)(w) = [v, P w] - P [v, w]`` for constant ``v`` and ``P``."""
    frame = _check_frames(v.frame, P.frame)
    ring = _check_rings(v.ring, P.ring)
    cols = []
    for k in range(frame.dim):
        ek = frame.vector(k, ring)
        cols.append(bracket(v, P(ek)) - P(bracket(v, ek)))
    return EndoField.from_columns(frame, cols, ring)


def form_from_matrix(frame: Frame, matrix: Sequence[Sequence[Any]], ring: Ring = QQ) -> KForm:
    """2-form with ``form(e_i, e_j) = matrix[i][j]`` (matrix assumed antisymmetric)."""
    n = frame.dim
    return KForm(frame, 2, {(i, j): matrix[i][j] for i in range(n) for j in range(i + 1, n)}, ring)


def form_matrix(a: KForm) -> list[list[Any]]:
    """Antisymmetric matrix ``a(e_i, e_j)`` of a 2-form."""
    if a.degree != 2:
        raise DegreeError("form_matrix needs a 2-form")
    n = a.frame.dim
    m = [[a.ring.zero] * n for _ in range(n)]
    for (i, j), v in a._c.items():
        m[i][j] = v
        m[j][i] = -v
    return m
