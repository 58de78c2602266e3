"""Symplectization ``omega = dt ^ eta + Omega`` on ``M x R``, couples, recursion operator.

The extra factor is one appended frame direction ``t`` commuting with every
basis vector; base forms are lifted by keeping their indices, so ``dt`` is the
last coframe element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .certificates import Certificate, from_checks
from .errors import DegreeError, DimensionError, SingularSystem, StructureError
from .exterior import EndoField, Frame, KForm, ext_d, form_matrix, interior, power, wedge
from .linalg import inverse, matmul, transpose
from .scalars import QQ, LambdaRing
from .structures import AlmostCosym, StructureKind, classify


@dataclass(frozen=True)
class ExtendedFrame:
    base: Frame
    frame: Frame

    @property
    def t_index(self) -> int:
        return self.base.dim

    @property
    def dt(self) -> KForm:
        return self.frame.coframe(self.t_index)

    def lift(self, form: KForm) -> KForm:
        if form.frame != self.base:
            raise StructureError("form does not live on the base frame")
        return KForm(self.frame, form.degree, form.coeffs, form.ring)


@lru_cache(maxsize=None)
def extend_frame(base: Frame) -> ExtendedFrame:
    name = "t"
    while name in base.names:
        name += "_"
    return ExtendedFrame(base, base.extend(name))


def symplectize(s: AlmostCosym) -> KForm:
    """``dt ^ eta + Omega`` on the extended frame."""
    ext = extend_frame(s.frame)
    return wedge(ext.dt.to_ring(s.ring), ext.lift(s.eta)) + ext.lift(s.omega)


def symplectic_certificate(s: AlmostCosym) -> Certificate:
    """``omega`` is nondegenerate, and closed exactly when ``s`` is cosymplectic."""
    w = symplectize(s)
    closed = ext_d(w).is_zero()
    nondegenerate = not power(w, w.frame.dim // 2).is_zero()
    cosym = classify(s).kind is StructureKind.COSYMPLECTIC
    if closed != cosym:
        raise AssertionError("closedness of the symplectization disagrees with classify")
    return from_checks(
        "symplectization is symplectic",
        "exact ext_d and top power",
        {"closed": closed, "nondegenerate": nondegenerate},
        {"omega": w, "d omega": ext_d(w)},
    )


@dataclass(frozen=True)
class CoupleReport:
    """Products of two 2-forms on an even-dimensional frame.

    ``couple`` is only defined in dimension 4 (``None`` otherwise).
    ``conformal`` means ``(l1 w1 + l2 w2)^m = w1^m (l1^2 + l2^2)^(m/2)`` as a
    polynomial identity, ``2m`` the dimension; in dimension 4 this is exactly
    ``w1 ^ w2 = 0`` and ``w1^2 = w2^2``.
    """

    w11: KForm
    w22: KForm
    w12: KForm
    top1: KForm
    top2: KForm
    couple: bool | None
    conformal: bool
    squares_equal: bool
    family_polynomial: Any
    witness: dict[str, Any] = field(default_factory=dict)


def couple_check(w1: KForm, w2: KForm) -> CoupleReport:
    if w1.degree != 2 or w2.degree != 2:
        raise DegreeError("couple_check needs two 2-forms")
    if w1.frame != w2.frame:
        raise StructureError("forms live on different frames")
    dim = w1.frame.dim
    if dim % 2 or dim < 4:
        raise DimensionError(f"couples need an even dimension >= 4, got {dim}")
    m = dim // 2
    w11, w22, w12 = wedge(w1, w1), wedge(w2, w2), wedge(w1, w2)
    top1, top2 = power(w1, m), power(w2, m)
    R = LambdaRing(2)
    l1, l2 = R.gens
    wl = w1.to_ring(R) * l1 + w2.to_ring(R) * l2
    poly = power(wl, m).top_coefficient()
    c1 = top1.top_coefficient()
    witness: dict[str, Any] = {}
    if m % 2:
        conformal = False
        witness["reason"] = "odd top power: the family power changes sign under l -> -l"
    else:
        target = R.norm_squared ** (m // 2) * R(c1)
        diff = poly - target
        conformal = not diff and c1 != 0
        if diff:
            mono = R.terms(diff)[0][0]
            actual = dict(R.terms(poly)).get(mono, 0)
            expected = dict(R.terms(target)).get(mono, 0)
            witness["monomial"] = {"exponents": mono, "actual": actual, "expected": expected}
    couple = None
    if dim == 4:
        orient = extend_sign(w1.frame)
        s1 = QQ(w11.top_coefficient()) * orient
        s2 = QQ(w22.top_coefficient()) * orient
        couple = w12.is_zero() and s1 > 0 and s2 > 0
    return CoupleReport(w11, w22, w12, top1, top2, couple, conformal, w11 == w22, poly, witness)


def extend_sign(frame: Frame) -> int:
    """Orientation sign for a frame whose last direction is the appended ``t``."""
    return -1 if (frame.dim - 1) % 2 else 1


def flat_matrix(w: KForm) -> list[list[Any]]:
    """Matrix of ``X -> i_X w`` (column ``j`` is ``i_{e_j} w``)."""
    return transpose(form_matrix(w))


def recursion_operator(w1: KForm, w2: KForm) -> EndoField:
    """The endomorphism ``J`` with ``i_X w1 = i_{JX} w2`` for every ``X``."""
    if w1.frame != w2.frame:
        raise StructureError("forms live on different frames")
    if w1.ring != QQ or w2.ring != QQ:
        raise StructureError("recursion_operator works over the rationals")
    frame = w1.frame
    try:
        inv2 = inverse(flat_matrix(w2))
    except SingularSystem as exc:
        raise StructureError("the second form is degenerate") from exc
    J = EndoField(frame, matmul(inv2, flat_matrix(w1)))
    for k in range(frame.dim):
        ek = frame.vector(k)
        if interior(ek, w1) != interior(J(ek), w2):
            raise AssertionError("recursion operator failed re-verification")
    return J


def is_complex_structure(J: EndoField) -> bool:
    return J @ J == -EndoField.identity(J.frame, J.ring)


def recursion_certificate(w1: KForm, w2: KForm) -> Certificate:
    """``J`` for a pair of 2-forms; a conformal couple must give ``J^2 = -I``."""
    J = recursion_operator(w1, w2)
    square = J @ J
    complex_ = square == -EndoField.identity(J.frame, J.ring)
    report = couple_check(w1, w2)
    if report.conformal and not complex_:
        raise AssertionError("conformal couple with J^2 != -I")
    return from_checks("J^2 = -I", "exact flat-map solve", {"J^2 = -I": complex_}, {"J": J, "J^2": square})


def stated_couple_residuals(s1: AlmostCosym, s2: AlmostCosym) -> dict[str, KForm]:
    """Differences for the 3-manifold relations with factor 2 on every ``dt`` term.

    ``w1^w1 - 2 dt^eta1^Omega1``, ``w2^w2 - 2 dt^eta2^Omega2`` and
    ``w1^w2 - 2 dt^(eta1^Omega2 + eta2^Omega1)``.
    """
    ext = extend_frame(s1.frame)
    dt = ext.dt
    w1, w2 = symplectize(s1), symplectize(s2)
    e1, e2 = ext.lift(s1.eta), ext.lift(s2.eta)
    o1, o2 = ext.lift(s1.omega), ext.lift(s2.omega)
    return {
        "w1^w1 - 2dt^eta1^Omega1": wedge(w1, w1) - wedge(dt, wedge(e1, o1)) * 2,
        "w2^w2 - 2dt^eta2^Omega2": wedge(w2, w2) - wedge(dt, wedge(e2, o2)) * 2,
        "w1^w2 - 2dt^(eta1^Omega2 + eta2^Omega1)": wedge(w1, w2) - wedge(dt, wedge(e1, o2) + wedge(e2, o1)) * 2,
    }


def couple_expansion_residuals(s1: AlmostCosym, s2: AlmostCosym) -> dict[str, KForm]:
    """Differences for the binomial expansions valid in every dimension.

    ``w_i^w_i = 2 dt^eta_i^Omega_i + Omega_i^Omega_i`` and
    ``w1^w2 = dt^(eta1^Omega2 + eta2^Omega1) + Omega1^Omega2``.
    """
    ext = extend_frame(s1.frame)
    dt = ext.dt
    w1, w2 = symplectize(s1), symplectize(s2)
    e1, e2 = ext.lift(s1.eta), ext.lift(s2.eta)
    o1, o2 = ext.lift(s1.omega), ext.lift(s2.omega)
    return {
        "w1^w1": wedge(w1, w1) - wedge(dt, wedge(e1, o1)) * 2 - wedge(o1, o1),
        "w2^w2": wedge(w2, w2) - wedge(dt, wedge(e2, o2)) * 2 - wedge(o2, o2),
        "w1^w2": wedge(w1, w2) - wedge(dt, wedge(e1, o2) + wedge(e2, o1)) - wedge(o1, o2),
    }
