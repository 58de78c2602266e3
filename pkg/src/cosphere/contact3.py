"""Almost contact (metric) structures and almost contact 3-structures.

Everything is constant-coefficient on a Lie frame.  Lie derivatives use
``(L_v a)(w) = -a([v, w])`` and ``(L_v P)(w) = [v, P w] - P [v, w]``; ``d`` is the
frame differential without the factor 1/2.

Structures over a :class:`~cosphere.scalars.LambdaRing` may be checked modulo
the sphere ideal ``sum l_i^2 - 1`` (``on_sphere=True``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Sequence

from .certificates import Certificate, from_checks
from .errors import DimensionError, NotOnSphere, StructureError
from .exterior import (
    EndoField,
    Frame,
    KForm,
    VectorField,
    bracket,
    evaluate,
    ext_d,
    form_from_matrix,
    form_matrix,
    interior,
    lie_derivative_1form,
    lie_derivative_endo,
    outer,
    pair,
    power,
    wedge,
)
from .linalg import determinant, inverse, leading_minors, matmul, nullspace, rank, transpose
from .scalars import QQ, LambdaRing, Ring
from .sphere import Generators
from .structures import AlmostCosym, cartan_class

EVEN_PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


# --------------------------------------------------------------------------- #
# residual helpers


def _reduce(ring: Ring, x: Any, on_sphere: bool) -> Any:
    if on_sphere and isinstance(ring, LambdaRing):
        return ring.reduce_sphere(x)
    return x


def _vanishes(obj: Any, ring: Ring, on_sphere: bool = False) -> bool:
    if isinstance(obj, KForm):
        return all(not _reduce(ring, v, on_sphere) for _, v in obj.items())
    if isinstance(obj, VectorField):
        return all(not _reduce(ring, v, on_sphere) for v in obj.coeffs)
    if isinstance(obj, EndoField):
        return all(not _reduce(ring, v, on_sphere) for row in obj.matrix for v in row)
    if isinstance(obj, (list, tuple)):
        return all(_vanishes(x, ring, on_sphere) for x in obj)
    return not _reduce(ring, obj, on_sphere)


def _matrix_residual(a: Sequence[Sequence[Any]], ring: Ring, on_sphere: bool) -> bool:
    return all(not _reduce(ring, x, on_sphere) for row in a for x in row)


# --------------------------------------------------------------------------- #
# almost contact structures


def verify_almost_contact(phi: EndoField, xi: VectorField, eta: KForm, on_sphere: bool = False) -> Certificate:
    """``phi^2 = -I + eta (x) xi`` and ``eta(xi) = 1``, plus ``eta o phi = 0``, ``phi xi = 0``."""
    ring = phi.ring
    identity = EndoField.identity(phi.frame, ring)
    square_res = phi @ phi + identity - outer(eta, xi)
    norm_res = pair(eta, xi) - ring.one
    checks = {
        "phi^2 = -I + eta(x)xi": _vanishes(square_res, ring, on_sphere),
        "eta(xi) = 1": _vanishes(norm_res, ring, on_sphere),
        "eta o phi = 0": _vanishes(phi.pullback(eta), ring, on_sphere),
        "phi xi = 0": _vanishes(phi(xi), ring, on_sphere),
    }
    witness = {}
    if not checks["phi^2 = -I + eta(x)xi"]:
        witness["phi^2 + I - eta(x)xi"] = square_res
    return from_checks("almost contact structure", "exact matrix identities", checks, witness)


@dataclass(frozen=True, eq=False)
class AlmostContact:
    """``(phi, xi, eta)``; the defining identities are checked at construction."""

    phi: EndoField
    xi: VectorField
    eta: KForm
    on_sphere: bool = False
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.eta.degree != 1:
            raise StructureError("eta must be a 1-form")
        if self.check:
            cert = verify_almost_contact(self.phi, self.xi, self.eta, self.on_sphere)
            if not cert.verified:
                raise StructureError(f"not an almost contact structure: {cert.witness['failed']}")

    @property
    def frame(self) -> Frame:
        return self.phi.frame

    @property
    def ring(self) -> Ring:
        return self.phi.ring

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlmostContact):
            return NotImplemented
        return self.phi == other.phi and self.xi == other.xi and self.eta == other.eta

    def __hash__(self) -> int:
        return hash((self.phi, self.xi, self.eta))


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric positive-definite rational matrix."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __init__(self, matrix: Sequence[Sequence[Any]]) -> None:
        m = tuple(tuple(QQ(x) for x in row) for row in matrix)
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("metric must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise StructureError("metric must be symmetric")
        minors = leading_minors(m)
        if any(d <= 0 for d in minors):
            raise StructureError(f"metric is not positive definite (leading minors {minors})")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, dim: int) -> "MetricTensor":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def in_ring(self, ring: Ring) -> list[list[Any]]:
        return [[ring(x) for x in row] for row in self.matrix]

    def __call__(self, x: VectorField, y: VectorField) -> Any:
        ring = x.ring
        g = self.in_ring(ring)
        total = ring.zero
        for i, a in enumerate(x.coeffs):
            if a:
                for j, b in enumerate(y.coeffs):
                    if b and g[i][j]:
                        total = total + a * g[i][j] * b
        return total

    def scaled(self, c: Any) -> "MetricTensor":
        return MetricTensor([[QQ(c) * x for x in row] for row in self.matrix])


def _phi_matrix(phi: EndoField) -> list[list[Any]]:
    return [list(row) for row in phi.matrix]


def verify_compatible_metric(g: MetricTensor, s: AlmostContact) -> Certificate:
    """``g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)`` on basis pairs."""
    ring = s.ring
    if g.dim != s.frame.dim:
        raise DimensionError("metric and structure dimensions differ")
    G = g.in_ring(ring)
    P = _phi_matrix(s.phi)
    lhs = matmul(matmul(transpose(P), G), P)
    n = s.frame.dim
    e = [s.eta[(i,)] for i in range(n)]
    res = [[lhs[i][j] - G[i][j] + e[i] * e[j] for j in range(n)] for i in range(n)]
    ok = _matrix_residual(res, ring, s.on_sphere)
    omega = matmul(G, P)
    antisym = _matrix_residual([[omega[i][j] + omega[j][i] for j in range(n)] for i in range(n)], ring, s.on_sphere)
    checks = {"g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)": ok, "Omega antisymmetric": antisym}
    return from_checks("compatible metric", "exact matrix identity", checks, {} if ok else {"residual": res})


def fundamental_form(g: MetricTensor, s: AlmostContact) -> KForm:
    """``Omega(X, Y) = g(X, phi Y)``."""
    cert = verify_compatible_metric(g, s)
    if not cert.verified:
        raise StructureError("metric is not compatible with the structure")
    ring = s.ring
    omega = matmul(g.in_ring(ring), _phi_matrix(s.phi))
    if s.on_sphere and isinstance(ring, LambdaRing):
        omega = [[ring.reduce_sphere(x) for x in row] for row in omega]
    return form_from_matrix(s.frame, omega, ring)


def induced_pair(g: MetricTensor, s: AlmostContact) -> AlmostCosym:
    """``(eta, Omega)`` with ``Omega`` the fundamental form."""
    return AlmostCosym(s.eta, fundamental_form(g, s), check_volume=s.ring == QQ)


# --------------------------------------------------------------------------- #
# 3-structures


def _three_structure_checks(structs: Sequence[AlmostContact], on_sphere: bool) -> tuple[dict[str, bool], dict[str, Any]]:
    checks: dict[str, bool] = {}
    witness: dict[str, Any] = {}
    ring = structs[0].ring
    for a, b, c in EVEN_PERMUTATIONS:
        sa, sb, sc = structs[a], structs[b], structs[c]
        tag = f"({a + 1},{b + 1},{c + 1})"
        items = {
            f"phi{c + 1} = phi{a + 1}phi{b + 1} - eta{b + 1}(x)xi{a + 1} {tag}": sa.phi @ sb.phi - outer(sb.eta, sa.xi) - sc.phi,
            f"phi{c + 1} = -phi{b + 1}phi{a + 1} + eta{a + 1}(x)xi{b + 1} {tag}": -(sb.phi @ sa.phi) + outer(sa.eta, sb.xi) - sc.phi,
            f"xi{c + 1} = phi{a + 1}xi{b + 1} {tag}": sa.phi(sb.xi) - sc.xi,
            f"xi{c + 1} = -phi{b + 1}xi{a + 1} {tag}": -sb.phi(sa.xi) - sc.xi,
            f"eta{c + 1} = eta{a + 1} o phi{b + 1} {tag}": sb.phi.pullback(sa.eta) - sc.eta,
            f"eta{c + 1} = -eta{b + 1} o phi{a + 1} {tag}": -sa.phi.pullback(sb.eta) - sc.eta,
        }
        for name, residual in items.items():
            ok = _vanishes(residual, ring, on_sphere)
            checks[name] = ok
            if not ok and "relation" not in witness:
                witness["relation"] = name
                witness["residual"] = residual
    return checks, witness


@dataclass(frozen=True, eq=False)
class AC3:
    """Three almost contact structures linked by the quaternionic relations."""

    structures: tuple[AlmostContact, AlmostContact, AlmostContact]
    metric: MetricTensor | None = None

    def __init__(self, structures: Sequence[AlmostContact], metric: MetricTensor | None = None, check: bool = True) -> None:
        structures = tuple(structures)
        if len(structures) != 3:
            raise StructureError("a 3-structure has exactly three members")
        frame = structures[0].frame
        if any(s.frame != frame for s in structures):
            raise StructureError("structures live on different frames")
        object.__setattr__(self, "structures", structures)
        object.__setattr__(self, "metric", metric)
        if check:
            checks, witness = _three_structure_checks(structures, False)
            if not all(checks.values()):
                raise StructureError(f"3-structure relation fails: {witness['relation']}")
            if metric is not None:
                for i, s in enumerate(structures):
                    if not verify_compatible_metric(metric, s).verified:
                        raise StructureError(f"metric not compatible with structure {i + 1}")

    @property
    def frame(self) -> Frame:
        return self.structures[0].frame

    def __getitem__(self, i: int) -> AlmostContact:
        return self.structures[i]

    @property
    def phis(self) -> tuple[EndoField, ...]:
        return tuple(s.phi for s in self.structures)

    @property
    def xis(self) -> tuple[VectorField, ...]:
        return tuple(s.xi for s in self.structures)

    @property
    def etas(self) -> tuple[KForm, ...]:
        return tuple(s.eta for s in self.structures)


def verify_3_structure(t: AC3) -> Certificate:
    checks, witness = _three_structure_checks(t.structures, t[0].on_sphere)
    if t.metric is not None:
        for i, s in enumerate(t.structures):
            checks[f"metric compatible {i + 1}"] = verify_compatible_metric(t.metric, s).verified
        g = t.metric
        for a in range(3):
            for b in range(3):
                checks[f"g(xi{a + 1}, xi{b + 1}) = delta"] = g(t.xis[a], t.xis[b]) == (1 if a == b else 0)
    return from_checks("almost contact 3-structure", "exact relations for even permutations", checks, witness)


def induced_generators(t: AC3) -> Generators:
    """The three ``(eta_a, Omega_a)`` of a metric 3-structure."""
    if t.metric is None:
        raise StructureError("the 3-structure carries no metric")
    return Generators([induced_pair(t.metric, s) for s in t.structures])


# --------------------------------------------------------------------------- #
# tensors


@dataclass(frozen=True)
class TwoOneTensor:
    """Tensor table ``T[k][args]`` on basis arguments.

    ``arity`` is the number of vector arguments (1 or 2).  Scalar-valued
    tensors use a single output slot (``out_dim == 1``).
    """

    frame: Frame
    ring: Ring
    arity: int
    out_dim: int
    table: tuple  # table[args] -> tuple of out_dim scalars, args in row-major order

    @classmethod
    def build(cls, frame: Frame, ring: Ring, arity: int, vector_valued: bool, fn) -> "TwoOneTensor":
        out_dim = frame.dim if vector_valued else 1
        rows = []
        for args in product(range(frame.dim), repeat=arity):
            value = fn(*args)
            if isinstance(value, VectorField):
                rows.append(tuple(value.coeffs))
            else:
                rows.append((ring(value),))
        return cls(frame, ring, arity, out_dim, tuple(rows))

    @property
    def vector_valued(self) -> bool:
        return self.out_dim != 1

    def _index(self, args: Sequence[int]) -> int:
        idx = 0
        for a in args:
            idx = idx * self.frame.dim + a
        return idx

    def __call__(self, *args: int) -> tuple:
        return self.table[self._index(args)]

    def is_zero(self, on_sphere: bool = False) -> bool:
        return all(not _reduce(self.ring, x, on_sphere) for row in self.table for x in row)

    def __sub__(self, other: "TwoOneTensor") -> "TwoOneTensor":
        return TwoOneTensor(
            self.frame, self.ring, self.arity, self.out_dim,
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.table, other.table)),
        )

    def __add__(self, other: "TwoOneTensor") -> "TwoOneTensor":
        return TwoOneTensor(
            self.frame, self.ring, self.arity, self.out_dim,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.table, other.table)),
        )

    def __mul__(self, c: Any) -> "TwoOneTensor":
        c = self.ring(c)
        return TwoOneTensor(self.frame, self.ring, self.arity, self.out_dim, tuple(tuple(c * a for a in r) for r in self.table))

    __rmul__ = __mul__

    def nonzero_entries(self) -> list[tuple[tuple[int, ...], tuple]]:
        out = []
        for idx, args in enumerate(product(range(self.frame.dim), repeat=self.arity)):
            row = self.table[idx]
            if any(row):
                out.append((args, row))
        return out

    def to_json(self) -> dict[str, Any]:
        from .certificates import scalar_to_json

        names = self.frame.names
        return {
            "arity": self.arity,
            "vector_valued": self.vector_valued,
            "nonzero": [
                [[names[a] for a in args], [scalar_to_json(x) for x in row]] for args, row in self.nonzero_entries()
            ],
        }


def nijenhuis_concomitant(P: EndoField, Q: EndoField) -> TwoOneTensor:
    """``[P,Q](X,Y) = [PX,QY] - P[QX,Y] - Q[X,PY] + [QX,PY] - Q[PX,Y] - P[X,QY] + (PQ+QP)[X,Y]``."""
    frame = P.frame
    ring = P.ring
    PQ = P @ Q + Q @ P

    def value(i: int, j: int) -> VectorField:
        X, Y = frame.vector(i, ring), frame.vector(j, ring)
        PX, QX, PY, QY = P(X), Q(X), P(Y), Q(Y)
        XY = bracket(X, Y)
        return (
            bracket(PX, QY) - P(bracket(QX, Y)) - Q(bracket(X, PY))
            + bracket(QX, PY) - Q(bracket(PX, Y)) - P(bracket(X, QY))
            + PQ(XY)
        )

    return TwoOneTensor.build(frame, ring, 2, True, value)


def nijenhuis_torsion(P: EndoField) -> TwoOneTensor:
    """``P^2[X,Y] + [PX,PY] - P[PX,Y] - P[X,PY]``."""
    frame, ring = P.frame, P.ring
    P2 = P @ P

    def value(i: int, j: int) -> VectorField:
        X, Y = frame.vector(i, ring), frame.vector(j, ring)
        return P2(bracket(X, Y)) + bracket(P(X), P(Y)) - P(bracket(P(X), Y)) - P(bracket(X, P(Y)))

    return TwoOneTensor.build(frame, ring, 2, True, value)


def _two_form_times_vector(frame: Frame, ring: Ring, form: KForm, v: VectorField) -> TwoOneTensor:
    return TwoOneTensor.build(frame, ring, 2, True, lambda i, j: v * form[(i, j)])


def _lie_along(eta: KForm, v: VectorField, w: VectorField) -> Any:
    """``(L_v eta)(w) = -eta([v, w])``."""
    return -pair(eta, bracket(v, w))


@dataclass(frozen=True)
class NTensors:
    n1: TwoOneTensor
    n2: TwoOneTensor
    n3: TwoOneTensor
    n4: TwoOneTensor

    def as_tuple(self) -> tuple[TwoOneTensor, ...]:
        return (self.n1, self.n2, self.n3, self.n4)

    def all_zero(self) -> bool:
        return all(t.is_zero() for t in self.as_tuple())


def _n_tensors_raw(
    phis: tuple[EndoField, EndoField], xis: tuple[VectorField, VectorField], etas: tuple[KForm, KForm]
) -> NTensors:
    pa, pb = phis
    xa, xb = xis
    ea, eb = etas
    frame, ring = pa.frame, pa.ring
    n1 = nijenhuis_concomitant(pa, pb) + _two_form_times_vector(frame, ring, ext_d(ea), xb) + _two_form_times_vector(frame, ring, ext_d(eb), xa)

    def n2_value(i: int, j: int) -> Any:
        X, Y = frame.vector(i, ring), frame.vector(j, ring)
        return (
            _lie_along(eb, pa(X), Y) - _lie_along(eb, pa(Y), X)
            + _lie_along(ea, pb(X), Y) - _lie_along(ea, pb(Y), X)
        )

    n2 = TwoOneTensor.build(frame, ring, 2, False, n2_value)
    L3 = lie_derivative_endo(xa, pb) + lie_derivative_endo(xb, pa)
    n3 = TwoOneTensor.build(frame, ring, 1, True, lambda i: L3.column(i))
    L4 = lie_derivative_1form(xa, eb) + lie_derivative_1form(xb, ea)
    n4 = TwoOneTensor.build(frame, ring, 1, False, lambda i: L4[(i,)])
    return NTensors(n1, n2, n3, n4)


def n_tensors(t: AC3, alpha: int, beta: int) -> NTensors:
    """``N^(1..4)_{alpha,beta}`` (0-based indices)."""
    a, b = t[alpha], t[beta]
    return _n_tensors_raw((a.phi, b.phi), (a.xi, b.xi), (a.eta, b.eta))


def single_structure_tensors(s: AlmostContact) -> NTensors:
    """The four normality tensors of one structure.

    ``N1 = torsion(phi) + d eta (x) xi``, ``N2(X,Y) = (L_{phi X} eta)(Y) - (L_{phi Y} eta)(X)``,
    ``N3 = L_xi phi``, ``N4 = L_xi eta``.
    """
    frame, ring = s.frame, s.ring
    n1 = nijenhuis_torsion(s.phi) + _two_form_times_vector(frame, ring, ext_d(s.eta), s.xi)

    def n2_value(i: int, j: int) -> Any:
        X, Y = frame.vector(i, ring), frame.vector(j, ring)
        return _lie_along(s.eta, s.phi(X), Y) - _lie_along(s.eta, s.phi(Y), X)

    n2 = TwoOneTensor.build(frame, ring, 2, False, n2_value)
    L3 = lie_derivative_endo(s.xi, s.phi)
    n3 = TwoOneTensor.build(frame, ring, 1, True, lambda i: L3.column(i))
    L4 = lie_derivative_1form(s.xi, s.eta)
    n4 = TwoOneTensor.build(frame, ring, 1, False, lambda i: L4[(i,)])
    return NTensors(n1, n2, n3, n4)


def is_normal(s: AlmostContact) -> bool:
    return single_structure_tensors(s).n1.is_zero()


def hypercomplex_lift(s: AlmostContact) -> EndoField:
    """``J(X, f d/dt) = (phi X - f xi, eta(X) d/dt)`` on the frame extended by ``t``."""
    from .symplectization import extend_frame

    ext = extend_frame(s.frame).frame
    n = s.frame.dim
    ring = s.ring
    m = [[ring.zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            m[i][j] = s.phi.matrix[i][j]
        m[n][i] = s.eta[(i,)]
        m[i][n] = -s.xi.coeffs[i]
    return EndoField(ext, m, ring)


def n_tensor_report(t: AC3) -> Certificate:
    """Symmetry, the hypercomplex lift identities and the diagonal relations.

    The lift identities ``[J_a, J_b]((X,0),(Y,0)) = (N1(X,Y), N2(X,Y))`` and
    ``[J_a, J_b]((X,0),(0,d/dt)) = (N3(X), N4(X))`` must hold exactly.  The
    diagonal ``N_{a,a}`` is compared with the single-structure tensors both as
    ``N_{a,a} = c N_phi`` for the factors ``c = 1, 1/2, 1/2, 1/2`` and ``c = 2``.
    """
    checks: dict[str, bool] = {}
    witness: dict[str, Any] = {}
    n = t.frame.dim
    lifts = [hypercomplex_lift(s) for s in t.structures]
    for a in range(3):
        for b in range(3):
            N = n_tensors(t, a, b)
            if b > a:
                M = n_tensors(t, b, a)
                checks[f"symmetric {a + 1},{b + 1}"] = all((x - y).is_zero() for x, y in zip(N.as_tuple(), M.as_tuple()))
            C = nijenhuis_concomitant(lifts[a], lifts[b])
            ok = True
            for i in range(n):
                for j in range(n):
                    row = C(i, j)
                    if tuple(row[:n]) != N.n1(i, j) or row[n] != N.n2(i, j)[0]:
                        ok = False
                row = C(i, n)
                if tuple(row[:n]) != N.n3(i) or row[n] != N.n4(i)[0]:
                    ok = False
            checks[f"hypercomplex lift {a + 1},{b + 1}"] = ok
        N = n_tensors(t, a, a)
        S = single_structure_tensors(t[a])
        halved = [Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]
        checks[f"N_aa = (1,1/2,1/2,1/2) N_phi, a={a + 1}"] = all(
            (x - y * c).is_zero() for x, y, c in zip(N.as_tuple(), S.as_tuple(), halved)
        )
        checks[f"N_aa = 2 N_phi, a={a + 1}"] = all((x - y * 2).is_zero() for x, y in zip(N.as_tuple(), S.as_tuple()))
    return from_checks("N-tensor identities", "exact tensor tables", checks, witness)


def hyper_normal(t: AC3) -> Certificate:
    checks = {}
    for a in range(3):
        for b in range(a, 3):
            N = n_tensors(t, a, b)
            for k, tensor in enumerate(N.as_tuple(), start=1):
                checks[f"N{k}_{a + 1}{b + 1} = 0"] = tensor.is_zero()
    return from_checks("all N-tensors vanish", "exact tensor tables", checks)


# --------------------------------------------------------------------------- #
# lambda structures


def _on_sphere_point(point: Sequence[Any]) -> list[Fraction]:
    pt = [QQ(x) for x in point]
    if len(pt) != 3:
        raise NotOnSphere("a point of S^2 has three coordinates")
    if sum(x * x for x in pt) != 1:
        raise NotOnSphere(f"sum of squares of {tuple(str(x) for x in pt)} is not 1")
    return pt


@dataclass(frozen=True)
class LambdaStructure:
    structure: AlmostContact
    certificate: Certificate
    point: tuple[Fraction, ...] | None


def lambda_structure(t: AC3, point: Sequence[Any] | None = None) -> LambdaStructure:
    """``phi_l = sum l_a phi_a`` and likewise for ``xi``, ``eta``.

    With ``point=None`` the coefficients are the symbols ``l1, l2, l3`` and
    every identity is checked modulo ``l1^2 + l2^2 + l3^2 - 1``.
    """
    if point is None:
        R = LambdaRing(3)
        coeffs = list(R.gens)
        phis = [p.to_ring(R) for p in t.phis]
        xis = [x.to_ring(R) for x in t.xis]
        etas = [e.to_ring(R) for e in t.etas]
        on_sphere = True
        pt = None
    else:
        pt = _on_sphere_point(point)
        coeffs = pt
        phis, xis, etas = list(t.phis), list(t.xis), list(t.etas)
        on_sphere = False
    phi = phis[0] * coeffs[0] + phis[1] * coeffs[1] + phis[2] * coeffs[2]
    xi = xis[0] * coeffs[0] + xis[1] * coeffs[1] + xis[2] * coeffs[2]
    eta = etas[0] * coeffs[0] + etas[1] * coeffs[1] + etas[2] * coeffs[2]
    cert = verify_almost_contact(phi, xi, eta, on_sphere)
    checks = dict(cert.checks)
    if t.metric is not None:
        s_tmp = AlmostContact(phi, xi, eta, on_sphere, check=False)
        checks.update(verify_compatible_metric(t.metric, s_tmp).checks)
    final = from_checks("lambda structure", "modulo the sphere ideal" if on_sphere else "exact", checks, cert.witness)
    s = AlmostContact(phi, xi, eta, on_sphere, check=False)
    return LambdaStructure(s, final, tuple(pt) if pt else None)


# --------------------------------------------------------------------------- #
# distributions


def _kernel(rows: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    return nullspace(rows, dim) if rows else nullspace([], dim)


def _contraction_rows(form: KForm) -> list[list[Fraction]]:
    """Rows ``r_k`` with ``r_k . X = (i_X form)(e_k)``."""
    m = form_matrix(form)
    n = form.frame.dim
    return [[m[i][k] for i in range(n)] for k in range(n)]


@dataclass(frozen=True)
class CharDistributions:
    C: tuple[list[list[Fraction]], ...]
    E: list[list[Fraction]]
    H: list[list[Fraction]]
    V: list[list[Fraction]]
    classes: tuple[int, int, int]
    bracket_pattern: dict[str, Any]

    @property
    def dims(self) -> dict[str, Any]:
        return {"C": [len(c) for c in self.C], "E": len(self.E), "H": len(self.H), "V": len(self.V)}


def characteristic_distribution(eta: KForm) -> list[list[Fraction]]:
    """``{X : eta(X) = 0, i_X d eta = 0}``."""
    n = eta.frame.dim
    rows = [[eta[(i,)] for i in range(n)]] + _contraction_rows(ext_d(eta))
    return _kernel(rows, n)


def reeb_bracket_pattern(t: AC3) -> dict[str, Any]:
    """Test ``[xi_a, xi_b] = c xi_c`` with one ``c`` for all even permutations."""
    cs = []
    holds = True
    for a, b, c in EVEN_PERMUTATIONS:
        br = bracket(t.xis[a], t.xis[b])
        target = t.xis[c]
        idx = next((i for i, x in enumerate(target.coeffs) if x), None)
        coef = br.coeffs[idx] / target.coeffs[idx] if idx is not None else None
        if coef is None or br != target * coef:
            holds = False
        cs.append(coef)
    same = holds and len(set(cs)) == 1
    return {"holds": same, "constants": cs, "brackets": [bracket(t.xis[a], t.xis[b]) for a, b, _ in EVEN_PERMUTATIONS]}


def char_distributions(t: AC3) -> CharDistributions:
    n = t.frame.dim
    etas = t.etas
    H = _kernel([[e[(i,)] for i in range(n)] for e in etas], n)
    rows = [[e[(i,)] for i in range(n)] for e in etas]
    for e in etas:
        rows += _contraction_rows(ext_d(e))
    E = _kernel(rows, n)
    C = tuple(characteristic_distribution(e) for e in etas)
    classes = tuple(cartan_class(e).cartan_class for e in etas)
    V = [list(x.coeffs) for x in t.xis]
    return CharDistributions(C, E, H, V, classes, reeb_bracket_pattern(t))


def char_distribution_certificate(t: AC3) -> Certificate:
    cd = char_distributions(t)
    n = t.frame.dim
    checks = {}
    for a, (c, k) in enumerate(zip(cd.C, cd.classes)):
        checks[f"dim C{a + 1} = dim - class"] = len(c) == n - k
    checks["dim H = dim - 3"] = len(cd.H) == n - 3
    checks["[xi_a, xi_b] = c xi_c"] = cd.bracket_pattern["holds"]
    return from_checks("characteristic distributions", "kernel solve", checks, {}, dims=cd.dims, classes=list(cd.classes))


def span_equal(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> bool:
    a, b = list(a), list(b)
    if not a or not b:
        return len(a) == len(b) == 0 or (rank(a) if a else 0) == (rank(b) if b else 0) == 0
    return rank(a) == rank(b) == rank(a + b)


def quasi_contact_report(t: AC3, points: Iterable[Sequence[Any]] = ()) -> Certificate:
    """Cartan class of ``eta_l`` (generic and at given sphere points) and ``C_l = E``."""
    cd = char_distributions(t)
    R = LambdaRing(3)
    eta_l = sum((e.to_ring(R) * g for e, g in zip(t.etas[1:], R.gens[1:])), t.etas[0].to_ring(R) * R.gens[0])
    generic = cartan_class(eta_l).cartan_class
    checks: dict[str, bool] = {}
    classes = {}
    for p in points:
        pt = _on_sphere_point(p)
        eta_p = t.etas[0] * pt[0] + t.etas[1] * pt[1] + t.etas[2] * pt[2]
        k = cartan_class(eta_p).cartan_class
        classes[tuple(str(x) for x in pt)] = k
        checks[f"class at {tuple(str(x) for x in pt)} = generic"] = k == generic
        checks[f"C = E at {tuple(str(x) for x in pt)}"] = span_equal(characteristic_distribution(eta_p), cd.E)
    checks["generators share the class"] = len(set(cd.classes)) == 1 and cd.classes[0] == generic
    return from_checks("quasi-contact rank", "Cartan class and kernels", checks, {}, generic_class=generic, classes=classes)


# --------------------------------------------------------------------------- #
# tautness on a phi-basis


def phi_basis(t: AC3, horizontal: Sequence[VectorField]) -> list[VectorField]:
    """``(xi1, xi2, xi3, X_i.., phi1 X_i.., phi2 X_i.., phi3 X_i..)``."""
    X = list(horizontal)
    return list(t.xis) + X + [t[0].phi(x) for x in X] + [t[1].phi(x) for x in X] + [t[2].phi(x) for x in X]


def phi_basis_volume(t: AC3, horizontal: Sequence[VectorField]) -> tuple[Any, Any]:
    """``eta_l ^ Omega_l^(2n+1)`` on a phi-basis, raw and reduced on the sphere."""
    gens = induced_generators(t)
    eta_l, omega_l = gens.member
    R = gens.ring
    top = wedge(eta_l, power(omega_l, (t.frame.dim - 1) // 2))
    basis = phi_basis(t, horizontal)
    # a top form evaluates to its coefficient times the determinant of the vectors
    det = determinant([[v.coeffs[i] for v in basis] for i in range(t.frame.dim)])
    value = top.top_coefficient() * R(det)
    return value, R.reduce_sphere(value)


# --------------------------------------------------------------------------- #
# hyperholomorphic product


def musical_anticommutation(forms: Sequence[KForm]) -> Certificate:
    """``w_a^# o w_b^flat = -w_b^# o w_a^flat`` for ``a != b``."""
    from .symplectization import flat_matrix

    flats = [flat_matrix(w) for w in forms]
    sharps = [inverse(f) for f in flats]
    checks = {}
    witness = {}
    for a in range(len(forms)):
        for b in range(a + 1, len(forms)):
            lhs = matmul(sharps[a], flats[b])
            rhs = matmul(sharps[b], flats[a])
            ok = all(x + y == 0 for r1, r2 in zip(lhs, rhs) for x, y in zip(r1, r2))
            checks[f"{a + 1},{b + 1}"] = ok
            if not ok and "pair" not in witness:
                witness = {"pair": (a + 1, b + 1), "lhs": lhs, "rhs": rhs}
    return from_checks("musical maps anticommute", "exact matrices", checks, witness)


def hyperholomorphic_product(forms: Sequence[KForm], names: Sequence[str] = ("t1", "t2", "t3")) -> Generators:
    """``eta_a = dt_a``, ``Omega_a = w_a + eta_b ^ eta_c`` on ``N x R^3``."""
    if len(forms) != 3:
        raise StructureError("three 2-forms are required")
    base = forms[0].frame
    if base.dim % 4:
        raise DimensionError("a hyperholomorphic triple lives in dimension 4k")
    cert = musical_anticommutation(forms)
    if not cert.verified:
        raise StructureError(f"musical maps do not anticommute: {cert.witness.get('pair')}")
    frame = base
    for name in names:
        frame = frame.extend(name)
    n = base.dim
    dts = [frame.coframe(n + a) for a in range(3)]
    members = []
    for a, b, c in EVEN_PERMUTATIONS:
        w = KForm(frame, 2, forms[a].coeffs)
        members.append(AlmostCosym(dts[a], w + wedge(dts[b], dts[c])))
    return Generators(members)
