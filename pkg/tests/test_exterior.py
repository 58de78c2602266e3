from fractions import Fraction

import pytest

import oracles
from cosphere.errors import DegreeError, FrameMismatch, JacobiError, RingMismatch
from cosphere.exterior import (
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
    lie_derivative_form,
    outer,
    pair,
    permutation_sign,
    power,
    wedge,
    wedge_all,
)
from cosphere.scalars import LambdaRing


@pytest.fixture
def heis():
    return Frame.from_brackets(["e1", "e2", "e3"], {(0, 1): {2: 1}})


def test_frame_rejects_jacobi_violation():
    with pytest.raises(JacobiError) as exc:
        Frame.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {1: 1}})
    assert exc.value.triple == (0, 1, 2)


def test_frame_reversed_pair_is_negated():
    fr = Frame.from_brackets(3, {(1, 0): {2: 1}})
    assert fr.basis_bracket(0, 1) == (0, 0, -1)


def test_frame_rejects_bad_names():
    with pytest.raises(ValueError):
        Frame(2, ("a", "a"))


def test_heisenberg_d_has_no_half(heis):
    e1, e2, e3 = (heis.coframe(i) for i in range(3))
    assert ext_d(e3) == -wedge(e1, e2)
    assert ext_d(e1).is_zero()


def test_d_of_top_form_raises(heis):
    vol = wedge_all(heis.coframe(i) for i in range(3))
    with pytest.raises(DegreeError):
        ext_d(vol)


def test_wedge_beyond_dimension_raises(heis):
    with pytest.raises(DegreeError):
        wedge(heis.coframe(0), wedge_all(heis.coframe(i) for i in range(3)))


def test_wedge_determinant_convention(heis):
    e = [heis.vector(i) for i in range(3)]
    w = wedge(heis.coframe(0), heis.coframe(1))
    assert evaluate(w, [e[0], e[1]]) == 1
    assert evaluate(w, [e[1], e[0]]) == -1


def test_power_carries_factorial():
    fr = Frame.abelian(4)
    om = wedge(fr.coframe(0), fr.coframe(1)) + wedge(fr.coframe(2), fr.coframe(3))
    assert power(om, 2).top_coefficient() == 2
    assert power(om, 0) == KForm.constant(fr, 1)


def test_interior_first_slot(heis):
    w = wedge(heis.coframe(0), heis.coframe(1))
    assert interior(heis.vector(0), w) == heis.coframe(1)
    assert interior(heis.vector(1), w) == -heis.coframe(0)


def test_interior_of_function_raises(heis):
    with pytest.raises(DegreeError):
        interior(heis.vector(0), KForm.constant(heis, 1))


def test_bracket_and_pair(heis):
    assert bracket(heis.vector(0), heis.vector(1)) == heis.vector(2)
    assert pair(heis.coframe(2), heis.vector(2)) == 1


def test_lie_derivatives_agree(heis):
    v = VectorField(heis, [1, 2, 0])
    e3 = heis.coframe(2)
    assert lie_derivative_1form(v, e3) == lie_derivative_form(v, e3)
    # (L_v e3)(w) = -e3([v, w])
    for k in range(3):
        assert pair(lie_derivative_1form(v, e3), heis.vector(k)) == -pair(e3, bracket(v, heis.vector(k)))


def test_lie_derivative_endo_of_identity_vanishes(heis):
    assert lie_derivative_endo(heis.vector(0), EndoField.identity(heis)).is_zero()


def test_kform_mismatches(heis):
    other = Frame.abelian(3)
    with pytest.raises(FrameMismatch):
        heis.coframe(0) + other.coframe(0)
    R = LambdaRing(2)
    with pytest.raises(RingMismatch):
        heis.coframe(0) + heis.coframe(0).to_ring(R)


def test_kform_sorts_and_cancels(heis):
    w = KForm(heis, 2, {(1, 0): 1})
    assert w == -wedge(heis.coframe(0), heis.coframe(1))
    assert (w - w).is_zero()
    assert not KForm(heis, 2, {(0, 0): 5})


def test_form_matrix_round_trip(heis):
    w = KForm(heis, 2, {(0, 1): 2, (1, 2): -3})
    assert form_from_matrix(heis, form_matrix(w)) == w


def test_endo_pullback_and_outer(heis):
    P = outer(heis.coframe(0), heis.vector(1))
    assert P(heis.vector(0)) == heis.vector(1)
    assert P(heis.vector(2)).is_zero()
    assert P.pullback(heis.coframe(1)) == heis.coframe(0)


def test_evaluate_matches_minor_oracle(heis):
    w = KForm(heis, 2, {(0, 1): 2, (0, 2): Fraction(1, 3), (1, 2): -1})
    vs = [VectorField(heis, [1, 2, 3]), VectorField(heis, [0, -1, 4])]
    assert evaluate(w, vs) == oracles.form_eval(w, vs)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_lambda_ring_forms():
    fr = Frame.abelian(3)
    R = LambdaRing(2)
    l1, l2 = R.gens
    eta = fr.coframe(0).to_ring(R) * l1 + fr.coframe(1).to_ring(R) * l2
    assert wedge(eta, eta).is_zero()
