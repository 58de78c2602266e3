"""Almost cosymplectic p-spheres: volume polynomial, nonvanishing, tautness, roundness.

A family is generated by ``p+1`` rational structures ``(eta_i, omega_i)`` on a
common frame.  The members ``eta_l = sum l_i eta_i``, ``omega_l = sum l_i
omega_i`` live over :class:`~cosphere.scalars.LambdaRing` ``(p+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

from .certificates import Certificate, Verdict, from_checks
from .errors import DimensionError, FrameMismatch, RingMismatch, StructureError
from .exterior import Frame, KForm, VectorField, bracket, ext_d, interior, pair, power, wedge
from .linalg import nullspace, rank
from .positivity import (
    decide_circle,
    decide_sphere_subdivision,
    integer_ray,
    sign_variations,
    sturm_sequence,
)
from .scalars import QQ, LambdaRing
from .structures import AlmostCosym, reeb

DEFAULT_MAX_DEPTH = 12


@dataclass(frozen=True, eq=False)
class Generators:
    """``p+1`` rational almost cosymplectic structures on one frame."""

    members: tuple[AlmostCosym, ...]

    def __init__(self, members: Sequence[AlmostCosym]) -> None:
        members = tuple(members)
        if len(members) < 2:
            raise StructureError("a p-sphere needs at least two generators")
        frame = members[0].frame
        for s in members:
            if s.frame != frame:
                raise FrameMismatch("generators must share one frame")
            if s.ring != QQ:
                raise RingMismatch("generators must have rational coefficients")
        object.__setattr__(self, "members", members)

    @property
    def p(self) -> int:
        return len(self.members) - 1

    @property
    def frame(self) -> Frame:
        return self.members[0].frame

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def ring(self) -> LambdaRing:
        return LambdaRing(len(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> AlmostCosym:
        return self.members[i]

    @cached_property
    def member(self) -> tuple[KForm, KForm]:
        """``(eta_l, omega_l)`` over the lambda ring."""
        R = self.ring
        eta = KForm.zero(self.frame, 1, R)
        omega = KForm.zero(self.frame, 2, R)
        for g, s in zip(R.gens, self.members):
            eta = eta + s.eta.to_ring(R) * g
            omega = omega + s.omega.to_ring(R) * g
        return eta, omega

    @cached_property
    def reeb_fields(self) -> tuple[VectorField, ...]:
        return tuple(reeb(s) for s in self.members)

    def specialize(self, point: Sequence[Any]) -> AlmostCosym:
        """The member at a rational point (not necessarily on the sphere)."""
        point = [Fraction(x) for x in point]
        eta = sum((s.eta * c for s, c in zip(self.members[1:], point[1:])), self.members[0].eta * point[0])
        omega = sum((s.omega * c for s, c in zip(self.members[1:], point[1:])), self.members[0].omega * point[0])
        return AlmostCosym(eta, omega, check_volume=False)


@dataclass(frozen=True)
class VolumePolynomial:
    """Top coefficient ``V(l)`` of ``eta_l ^ omega_l^n``, homogeneous of degree ``n+1``."""

    poly: Any
    ring: LambdaRing
    degree: int

    def __post_init__(self) -> None:
        if self.poly and not self.ring.is_homogeneous(self.poly, self.degree):
            raise StructureError(f"volume polynomial is not homogeneous of degree {self.degree}")

    def at(self, point: Sequence[Any]) -> Fraction:
        return self.ring.specialize(self.poly, point)

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return self.ring.terms(self.poly)

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms())

    def format(self) -> str:
        return self.ring.format(self.poly)

    def is_zero(self) -> bool:
        return not self.poly

    def __str__(self) -> str:
        return self.format()


def family_volume(g: Generators) -> VolumePolynomial:
    eta, omega = g.member
    top = wedge(eta, power(omega, g.n))
    return VolumePolynomial(top.top_coefficient(), g.ring, g.n + 1)


def _unit(i: int, m: int, sign: int = 1) -> tuple[int, ...]:
    return tuple(sign if j == i else 0 for j in range(m))


def _ray_witness(V: VolumePolynomial, ray: Sequence[int], reference: Fraction) -> dict[str, Any]:
    value = V.at(ray)
    return {
        "ray": tuple(int(x) for x in ray),
        "norm_squared": sum(int(x) ** 2 for x in ray),
        "value": value,
        "reference_value": reference,
        "kind": "zero" if value == 0 else "opposite_sign",
    }


def _pattern_constant(V: VolumePolynomial) -> Fraction | None:
    """``c`` if ``V = c (sum l_i^2)^{deg/2}`` exactly, else ``None``."""
    if V.degree % 2 or V.is_zero():
        return None
    c = V.at(_unit(0, V.ring.nvars))
    target = V.ring.norm_squared ** (V.degree // 2) * V.ring(c)
    return c if V.poly == target else None


def verify_p_sphere(g: Generators, max_depth: int = DEFAULT_MAX_DEPTH) -> Certificate:
    """Decide whether ``V`` is nowhere zero on the unit sphere ``S^p``.

    Steps, in order: parity shortcut (odd degree forces a zero), exact
    pattern ``c (sum l_i^2)^k``, Sturm isolation for circles, and exact
    subdivision of the cube boundary for ``p >= 2``.
    """
    V = family_volume(g)
    m = g.p + 1
    claim = f"almost cosymplectic {g.p}-sphere"
    trace: list[dict] = [{"step": "volume", "polynomial": V.format(), "degree": V.degree}]
    details = {"polynomial": V.poly, "degree": V.degree}
    if V.is_zero():
        wit = _ray_witness(V, _unit(0, m), Fraction(0))
        return Certificate(claim, Verdict.REFUTED, "identically zero", wit, {}, tuple(trace), details)
    ref_ray = _unit(0, m)
    ref = V.at(ref_ray)
    if V.degree % 2:
        trace.append({"step": "parity", "odd_degree": True})
        if ref == 0:
            wit = _ray_witness(V, ref_ray, ref)
        else:
            wit = _ray_witness(V, _unit(0, m, -1), ref)
        wit["antipodal"] = {"ray": ref_ray, "value": ref, "antipode_value": V.at(_unit(0, m, -1))}
        return Certificate(claim, Verdict.REFUTED, "parity", wit, {"odd_degree": True}, tuple(trace), details)
    c = _pattern_constant(V)
    if c is not None and c != 0:
        trace.append({"step": "pattern", "constant": c})
        return Certificate(
            claim, Verdict.VERIFIED_EXACT, "exact pattern", {"constant": c, "exponent": V.degree // 2},
            {"pattern": True}, tuple(trace), details,
        )
    if m == 2:
        coeffs = {(a, b): v for (a, b), v in V.terms()}
        decision = decide_circle(coeffs, V.degree)
        trace.extend(decision.trace)
        if decision.nonvanishing:
            return Certificate(claim, Verdict.VERIFIED_BY_ISOLATION, "Sturm isolation", {}, {"no_real_roots": True}, tuple(trace), details)
        if decision.zero_ray or decision.opposite_ray:
            ray = decision.zero_ray or decision.opposite_ray
            wit = _ray_witness(V, ray, ref)
        else:
            a, b = decision.interval
            wit = {"isolating_interval": (a, b), "chart": "l2=1", "kind": "isolated_root", "reference_value": ref}
        return Certificate(claim, Verdict.REFUTED, "Sturm isolation", wit, {"no_real_roots": False}, tuple(trace), details)
    result = decide_sphere_subdivision(V.as_dict(), m, V.degree, max_depth)
    trace.extend(result.trace)
    details = dict(details, cells_certified=result.cells_certified, max_depth=max_depth)
    if result.status == "nonvanishing":
        return Certificate(claim, Verdict.VERIFIED_BY_SUBDIVISION, "interval subdivision", {}, {"all_cells_certified": True}, tuple(trace), details)
    if result.status == "undecided":
        wit = {"undecided_cells": result.undecided_cells, "depth": max_depth}
        return Certificate(claim, Verdict.UNDECIDED, "interval subdivision", wit, {"all_cells_certified": False}, tuple(trace), details)
    wit = _ray_witness(V, integer_ray(result.witness_point), ref)
    return Certificate(claim, Verdict.REFUTED, "interval subdivision", wit, {"all_cells_certified": False}, tuple(trace), details)


def replay_witness(V: VolumePolynomial, cert: Certificate) -> bool:
    """Re-evaluate ``V`` at a refutation ray and confirm the recorded sign."""
    wit = cert.witness
    if "ray" not in wit:
        return False
    value = V.at(wit["ray"])
    ref = V.at(_unit(0, V.ring.nvars))
    if value != wit["value"]:
        return False
    return value == 0 or (value > 0) != (ref > 0)


def _first_nonzero_ray(poly, ring: LambdaRing, bound: int = 4) -> tuple[int, ...] | None:
    """Small integer ray where a nonzero polynomial does not vanish."""
    from itertools import product

    rays = sorted(product(range(-bound, bound + 1), repeat=ring.nvars), key=lambda r: (sum(map(abs, r)), [-x for x in r]))
    for ray in rays:
        if any(ray) and ring.specialize(poly, ray) != 0:
            return ray
    return None


def is_taut(g: Generators) -> Certificate:
    """Taut iff ``V = V(e_1) (sum l_i^2)^{(n+1)/2}`` as polynomials.

    For circles on 3-dimensional frames the two form identities
    ``eta1 ^ omega1 = eta2 ^ omega2`` and ``eta1 ^ omega2 = -eta2 ^ omega1`` are
    checked as well, and the two methods must agree.
    """
    V = family_volume(g)
    R = g.ring
    checks: dict[str, bool] = {}
    witness: dict[str, Any] = {}
    trace: list[dict] = [{"step": "volume", "polynomial": V.format()}]
    ref = V.at(_unit(0, R.nvars))
    if V.degree % 2:
        checks["even_degree"] = False
        witness["reason"] = "odd degree: V(-l) = -V(l)"
        diff = None
    else:
        target = R.norm_squared ** (V.degree // 2) * R(ref)
        diff = V.poly - target
        checks["polynomial_identity"] = not diff and ref != 0
        if diff:
            terms = R.terms(diff)
            witness["difference"] = diff
            witness["first_monomial"] = {"exponents": terms[0][0], "coefficient": terms[0][1]}
            ray = _first_nonzero_ray(diff, R)
            if ray is not None:
                nsq = sum(x * x for x in ray)
                witness["ray"] = ray
                witness["normalised_value"] = V.at(ray) / Fraction(nsq) ** (V.degree // 2)
                witness["reference_value"] = ref
            if R.nvars == 2:
                chart = [Fraction(0)] * (V.degree + 1)
                for (a, b), c in terms:
                    chart[a] += c
                seq = sturm_sequence(chart)
                roots = sign_variations(seq, None, True) - sign_variations(seq, None)
                trace.append({
                    "step": "sturm",
                    "polynomial": "V - V(e1)*(l1^2+l2^2)^k on l2=1",
                    "sequence": [list(q) for q in seq],
                    "real_roots": roots,
                })
    if g.p == 1 and g.frame.dim == 3:
        (s1, s2) = g.members
        eq7 = wedge(s1.eta, s1.omega) == wedge(s2.eta, s2.omega)
        eq8 = wedge(s1.eta, s2.omega) == -wedge(s2.eta, s1.omega)
        pointwise = eq7 and eq8
        checks["same_volume_pairs"] = eq7
        checks["mixed_volume_pairs"] = eq8
        if pointwise != checks.get("polynomial_identity", False):
            raise AssertionError("tautness methods disagree")
    cert = from_checks("family is taut", "polynomial identity", checks, witness, polynomial=V.poly)
    return Certificate(cert.claim, cert.verdict, cert.method, cert.witness, cert.checks, tuple(trace), cert.details)


def round_residuals(g: Generators) -> tuple[Any, KForm]:
    """``eta_l(xi_l) - 1`` reduced on the sphere, and ``i_{xi_l} omega_l``."""
    R = g.ring
    eta, omega = g.member
    xi = VectorField.zero(g.frame, R)
    for gen, x in zip(R.gens, g.reeb_fields):
        xi = xi + x.to_ring(R) * gen
    return R.reduce_sphere(pair(eta, xi) - 1), interior(xi, omega).map_coeffs(R.reduce_sphere)


def is_round(g: Generators) -> Certificate:
    """Round iff ``eta_i(xi_j) + eta_j(xi_i) = 0`` (i != j) and
    ``i_{xi_i} omega_j + i_{xi_j} omega_i = 0`` (all i, j)."""
    xis = g.reeb_fields
    checks: dict[str, bool] = {}
    witness: dict[str, Any] = {}
    m = len(g)
    for i in range(m):
        for j in range(i + 1, m):
            value = pair(g[i].eta, xis[j]) + pair(g[j].eta, xis[i])
            ok = value == 0
            checks[f"(i) {i + 1},{j + 1}"] = ok
            if not ok and "pair" not in witness:
                witness.update(condition="(i)", pair=(i + 1, j + 1), value=value)
    for i in range(m):
        for j in range(i, m):
            form = interior(xis[i], g[j].omega) + interior(xis[j], g[i].omega)
            ok = form.is_zero()
            checks[f"(ii) {i + 1},{j + 1}"] = ok
            if not ok and "pair" not in witness:
                witness.update(condition="(ii)", pair=(i + 1, j + 1), form=form)
    eta_res, omega_res = round_residuals(g)
    cert = from_checks(
        "family is round",
        "generator conditions",
        checks,
        witness,
        reeb_fields=list(xis),
        eta_residual=eta_res,
        interior_residual=omega_res,
    )
    if cert.verified and (eta_res or omega_res):
        raise AssertionError("generator conditions hold but the lambda identity fails")
    return cert


@dataclass(frozen=True)
class ReebDistribution:
    """Span of the generator Reeb fields, with the 3-dimensional kernel data."""

    vectors: tuple[VectorField, ...]
    rank: int
    kernels: dict[str, list[list[Fraction]]] = field(default_factory=dict)
    kernels_match: bool | None = None


def _same_span(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> bool:
    ra, rb = rank(list(a)), rank(list(b))
    return ra == rb == rank(list(a) + list(b))


def reeb_distribution(g: Generators) -> ReebDistribution:
    xis = g.reeb_fields
    rows = [list(x.coeffs) for x in xis]
    r = rank(rows)
    kernels: dict[str, list[list[Fraction]]] = {}
    match = None
    if g.p == 1 and g.frame.dim == 3:
        t12 = interior(xis[0], g[1].omega)
        t21 = interior(xis[1], g[0].omega)
        dim = g.frame.dim
        kernels["ker i_xi1 omega2"] = nullspace([[t12[(k,)] for k in range(dim)]], dim)
        kernels["ker i_xi2 omega1"] = nullspace([[t21[(k,)] for k in range(dim)]], dim)
        match = all(_same_span(rows, k) for k in kernels.values())
    return ReebDistribution(tuple(xis), r, kernels, match)


def integrability(g: Generators) -> Certificate:
    """Integrability of the Reeb distribution of a circle on a 3-dimensional frame.

    Decided by ``theta ^ d theta`` for ``theta = i_xi1 omega2`` and
    ``i_xi2 omega1``, and independently by closure of the span under the
    bracket; the two answers must agree.
    """
    if g.p != 1 or g.frame.dim != 3:
        raise DimensionError("the kernel characterization needs a circle on a 3-dimensional frame")
    xi1, xi2 = g.reeb_fields
    thetas = {
        "i_xi1 omega2": interior(xi1, g[1].omega),
        "i_xi2 omega1": interior(xi2, g[0].omega),
    }
    frobenius = {name: wedge(t, ext_d(t)) for name, t in thetas.items()}
    by_forms = all(f.is_zero() for f in frobenius.values())
    br = bracket(xi1, xi2)
    rows = [list(xi1.coeffs), list(xi2.coeffs)]
    by_bracket = rank(rows + [list(br.coeffs)]) == rank(rows)
    if by_forms != by_bracket:
        raise AssertionError("integrability methods disagree")
    checks = {"theta ^ d theta = 0": by_forms, "bracket closed": by_bracket}
    witness: dict[str, Any] = {}
    if not by_forms:
        witness = {"frobenius": frobenius, "bracket": br}
    return from_checks("Reeb distribution is integrable", "Frobenius and bracket closure", checks, witness, thetas=thetas)


def nonvanishing_check(g: Generators) -> Certificate:
    """``i_xi1 omega2`` and ``i_xi2 omega1`` are nonzero and ``xi1, xi2`` independent."""
    if g.p != 1:
        raise DimensionError("nonvanishing_check is defined for circles")
    xi1, xi2 = g.reeb_fields
    t12 = interior(xi1, g[1].omega)
    t21 = interior(xi2, g[0].omega)
    independent = rank([list(xi1.coeffs), list(xi2.coeffs)]) == 2
    checks = {
        "i_xi1 omega2 != 0": not t12.is_zero(),
        "i_xi2 omega1 != 0": not t21.is_zero(),
        "xi1, xi2 independent": independent,
    }
    return from_checks(
        "contractions nowhere vanish",
        "exact coefficients",
        checks,
        {"i_xi1 omega2": t12, "i_xi2 omega1": t21, "xi1": xi1, "xi2": xi2},
    )
