"""Single almost cosymplectic structures: volume, Reeb field, type, Cartan class."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .certificates import Certificate, Verdict
from .errors import DegreeError, DimensionError, SingularSystem, StructureError
from .exterior import (
    Frame,
    KForm,
    VectorField,
    _check_frames,
    _check_rings,
    ext_d,
    interior,
    pair,
    power,
    wedge,
)
from .linalg import solve
from .scalars import QQ, LambdaRing, Ring


@dataclass(frozen=True, eq=False)
class AlmostCosym:
    """A pair ``(eta, omega)`` on a ``(2n+1)``-dimensional frame.

    The volume condition ``eta ^ omega^n != 0`` is checked at construction
    unless ``check_volume`` is false (used for lambda-parametric members,
    whose nonvanishing is decided on the whole sphere instead).
    """

    eta: KForm
    omega: KForm
    check_volume: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.eta.degree != 1 or self.omega.degree != 2:
            raise DegreeError("an almost cosymplectic pair is a 1-form and a 2-form")
        _check_frames(self.eta.frame, self.omega.frame)
        _check_rings(self.eta.ring, self.omega.ring)
        dim = self.eta.frame.dim
        if dim % 2 == 0 or dim < 3:
            raise DimensionError(f"almost cosymplectic structures need odd dimension >= 3, got {dim}")
        if self.check_volume and not self.volume_nonzero:
            raise StructureError("eta ^ omega^n vanishes: not an almost cosymplectic structure")

    @property
    def frame(self) -> Frame:
        return self.eta.frame

    @property
    def ring(self) -> Ring:
        return self.eta.ring

    @property
    def n(self) -> int:
        return (self.frame.dim - 1) // 2

    @property
    def volume_nonzero(self) -> bool:
        return not self.ring.is_zero(volume_form(self).top_coefficient())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlmostCosym):
            return NotImplemented
        return self.eta == other.eta and self.omega == other.omega

    def __hash__(self) -> int:
        return hash((self.eta, self.omega))


def volume_form(s: AlmostCosym) -> KForm:
    """``eta ^ omega^n``, a top-degree form."""
    return wedge(s.eta, power(s.omega, s.n))


def reeb_system(s: AlmostCosym) -> tuple[list[list[Any]], list[Any]]:
    """Linear system ``eta(x) = 1``, ``omega(x, e_k) = 0`` for the Reeb field."""
    n = s.frame.dim
    ring = s.ring
    rows = [[s.eta[(j,)] for j in range(n)]]
    rhs = [ring.one]
    for k in range(n):
        rows.append([s.omega[(j, k)] for j in range(n)])
        rhs.append(ring.zero)
    return rows, rhs


def reeb(s: AlmostCosym) -> VectorField:
    """The unique ``xi`` with ``i_xi eta = 1`` and ``i_xi omega = 0``.

    Over the rationals this is exact Gaussian elimination.  Over a lambda ring
    the system is solved over the rational-function field; if the solution
    has a nonconstant denominator a :class:`StructureError` names it (use
    :func:`reeb_rational` to get numerator and denominator).
    """
    if s.ring == QQ:
        rows, rhs = reeb_system(s)
        try:
            x = solve(rows, rhs)
        except SingularSystem as exc:
            raise StructureError(f"Reeb system is singular: not almost cosymplectic ({exc})") from exc
        xi = VectorField(s.frame, x, QQ)
    else:
        numer, denom = reeb_rational(s)
        if not denom.is_ground:
            raise StructureError(
                f"Reeb field is a rational function with denominator {s.ring.format(denom)}"
            )
        xi = numer * s.ring.inverse(denom)
    if pair(s.eta, xi) != s.ring.one or not interior(xi, s.omega).is_zero():
        raise StructureError("Reeb solution failed re-verification")
    return xi


def reeb_rational(s: AlmostCosym) -> tuple[VectorField, Any]:
    """Reeb field over a lambda ring as ``(numerator, denominator)``."""
    ring = s.ring
    if not isinstance(ring, LambdaRing):
        return reeb(s), ring.one
    K = ring.fraction_field
    rows, rhs = reeb_system(s)
    try:
        x = solve([[K(a) for a in row] for row in rows], [K(b) for b in rhs])
    except SingularSystem as exc:
        raise StructureError(f"Reeb system singular over the rational-function field ({exc})") from exc
    denom = ring.one
    for value in x:
        denom = denom.lcm(ring(value.denom))
    numer = [ring((value * K(denom)).numer) for value in x]
    return VectorField(s.frame, numer, ring), denom


class StructureKind(str, Enum):
    CONTACT = "Contact"
    COSYMPLECTIC = "Cosymplectic"
    NEITHER = "Neither"


@dataclass(frozen=True)
class StructureClass:
    kind: StructureKind
    d_eta: KForm
    d_omega: KForm

    @property
    def is_contact(self) -> bool:
        return self.kind is StructureKind.CONTACT

    @property
    def is_cosymplectic(self) -> bool:
        return self.kind is StructureKind.COSYMPLECTIC


def classify(s: AlmostCosym) -> StructureClass:
    """Contact if ``d eta = omega``; cosymplectic if both forms are closed."""
    d_eta = ext_d(s.eta)
    d_omega = ext_d(s.omega)
    if d_eta == s.omega:
        kind = StructureKind.CONTACT
    elif d_eta.is_zero() and d_omega.is_zero():
        kind = StructureKind.COSYMPLECTIC
    else:
        kind = StructureKind.NEITHER
    return StructureClass(kind, d_eta, d_omega)


def classify_certificate(s: AlmostCosym, expected: StructureKind) -> Certificate:
    c = classify(s)
    verdict = Verdict.VERIFIED if c.kind is expected else Verdict.REFUTED
    return Certificate(
        f"structure is {expected.value}",
        verdict,
        "exact closedness via ext_d",
        {"kind": c.kind.value, "d_eta": c.d_eta, "d_omega": c.d_omega},
    )


@dataclass(frozen=True)
class ClassReport:
    """Cartan class ``k`` of a 1-form with the forms that certify it.

    ``s`` is the largest power with ``(d eta)^s != 0``.  ``witnesses`` maps a
    label to the nonzero form proving the lower bound and the vanishing form
    proving the upper bound.
    """

    cartan_class: int
    s: int
    witnesses: dict[str, KForm]


def cartan_class(eta: KForm) -> ClassReport:
    """Cartan class: ``2s+1`` if ``eta ^ (d eta)^s != 0`` else ``2s``.

    For a lambda-ring form this is the class of the generic member (vanishing
    means vanishing as a polynomial).
    """
    if eta.degree != 1:
        raise DegreeError("cartan_class needs a 1-form")
    if eta.is_zero():
        raise StructureError("the zero form has no Cartan class")
    dim = eta.frame.dim
    d_eta = ext_d(eta) if dim > 1 else KForm.zero(eta.frame, 1, eta.ring)
    s = 0
    current = KForm.constant(eta.frame, eta.ring.one, eta.ring)
    if d_eta.degree == 2:
        while 2 * (s + 1) <= dim:
            nxt = wedge(current, d_eta)
            if nxt.is_zero():
                break
            current = nxt
            s += 1
    witnesses: dict[str, KForm] = {f"(d eta)^{s}": current}
    top = wedge(eta, current) if 2 * s + 1 <= dim else None
    if top is not None and not top.is_zero():
        witnesses[f"eta ^ (d eta)^{s}"] = top
        if 2 * s + 3 <= dim:
            witnesses[f"eta ^ (d eta)^{s + 1}"] = wedge(eta, wedge(current, d_eta))
        return ClassReport(2 * s + 1, s, witnesses)
    if top is not None:
        witnesses[f"eta ^ (d eta)^{s}"] = top
    return ClassReport(2 * s, s, witnesses)
