from fractions import Fraction

import pytest

import oracles
from cosphere import contact3 as c3
from cosphere import sphere as sp
from cosphere.corpus import builtin, quaternionic
from cosphere.errors import NotOnSphere, StructureError
from cosphere.exterior import EndoField, Frame, ext_d
from cosphere.linalg import rank
from cosphere.structures import StructureKind, classify


@pytest.fixture(scope="module")
def lie7():
    return builtin("lie7").triple()


@pytest.fixture(scope="module")
def su2():
    return builtin("su2_r4").triple()


def test_almost_contact_identities(lie7):
    for s in lie7.structures:
        cert = c3.verify_almost_contact(s.phi, s.xi, s.eta)
        assert cert.verified and all(cert.checks.values())


def test_almost_contact_rejects_bad_data(lie7):
    s = lie7[0]
    with pytest.raises(StructureError):
        c3.AlmostContact(s.phi, s.xi * 2, s.eta)
    cert = c3.verify_almost_contact(s.phi * 2, s.xi, s.eta)
    assert not cert.verified and cert.witness["failed"]


def test_metric_validation():
    with pytest.raises(StructureError):
        c3.MetricTensor([[1, 2], [0, 1]])
    with pytest.raises(StructureError):
        c3.MetricTensor([[1, 2], [2, 1]])
    g = c3.MetricTensor([[2, 1], [1, 2]])
    fr = Frame.abelian(2)
    assert g(fr.vector(0), fr.vector(1)) == 1


def test_scaled_metric_is_not_compatible(lie7):
    assert c3.verify_compatible_metric(lie7.metric, lie7[0]).verified
    assert not c3.verify_compatible_metric(lie7.metric.scaled(2), lie7[0]).verified


def test_fundamental_form_is_g_phi(lie7):
    s = lie7[2]
    w = c3.fundamental_form(lie7.metric, s)
    n = lie7.frame.dim
    for i in range(n):
        for j in range(n):
            x, y = lie7.frame.vector(i), lie7.frame.vector(j)
            assert oracles.form_eval(w, [x, y]) == lie7.metric(x, s.phi(y))


def test_three_structure_and_metric(lie7):
    assert c3.verify_3_structure(lie7).verified


def test_three_structure_rejects_repeated_structure(lie7):
    with pytest.raises(StructureError):
        c3.AC3([lie7[0], lie7[0], lie7[2]], lie7.metric)


def test_torsion_matches_direct_formula(lie7):
    for s in lie7.structures:
        T = c3.nijenhuis_torsion(s.phi)
        P = [list(r) for r in s.phi.matrix]
        for i in range(7):
            for j in range(7):
                assert list(T(i, j)) == oracles.torsion_oracle(lie7.frame, P, i, j)


def test_concomitant_symmetry_and_identity(lie7):
    P, Q = lie7[0].phi, lie7[1].phi
    assert (c3.nijenhuis_concomitant(P, Q) - c3.nijenhuis_concomitant(Q, P)).is_zero()
    assert c3.nijenhuis_concomitant(EndoField.identity(lie7.frame), Q).is_zero()
    assert (c3.nijenhuis_concomitant(P, P) - c3.nijenhuis_torsion(P) * 2).is_zero()


def test_lie7_n_tensor_report(lie7):
    cert = c3.n_tensor_report(lie7)
    ch = cert.checks
    assert all(v for k, v in ch.items() if k.startswith(("symmetric", "hypercomplex lift", "N_aa = 2")))
    assert not ch["N_aa = (1,1/2,1/2,1/2) N_phi, a=1"]
    assert not ch["N_aa = (1,1/2,1/2,1/2) N_phi, a=2"]


def test_lie7_not_normal(lie7):
    assert not c3.hyper_normal(lie7).verified
    assert not all(c3.is_normal(s) for s in lie7.structures)


def test_su2_hyper_normal_and_closed(su2):
    assert c3.hyper_normal(su2).verified
    assert c3.n_tensor_report(su2).verified
    for s in su2.structures:
        assert c3.is_normal(s)
    g = c3.induced_generators(su2)
    for s in g:
        assert ext_d(s.omega).is_zero()


def test_su2_quasi_contact(su2):
    cert = c3.quasi_contact_report(su2, [(1, 0, 0), (Fraction(3, 5), Fraction(4, 5), 0), (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3))])
    assert cert.verified and cert.details["generic_class"] == 3


def test_lambda_structure_symbolic_and_pointwise(lie7):
    assert c3.lambda_structure(lie7).certificate.verified
    at = c3.lambda_structure(lie7, (Fraction(3, 5), Fraction(4, 5), 0))
    assert at.certificate.verified and at.point == (Fraction(3, 5), Fraction(4, 5), 0)
    with pytest.raises(NotOnSphere):
        c3.lambda_structure(lie7, (1, 1, 0))
    with pytest.raises(NotOnSphere):
        c3.lambda_structure(lie7, (1, 0))


def test_lie7_distributions(lie7):
    cd = c3.char_distributions(lie7)
    assert cd.dims == {"C": [6, 6, 2], "E": 2, "H": 4, "V": 3}
    assert cd.classes == (1, 1, 5)
    assert c3.span_equal(cd.C[2], [[0, 1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0]])
    cert = c3.char_distribution_certificate(lie7)
    assert cert.witness["failed"] == ["[xi_a, xi_b] = c xi_c"]


def test_su2_bracket_pattern(su2):
    pattern = c3.reeb_bracket_pattern(su2)
    assert pattern["holds"] and pattern["constants"] == [2, 2, 2]


def test_flat_t7_induced_sphere():
    t = builtin("t7_quaternionic").triple()
    g = c3.induced_generators(t)
    V = sp.family_volume(g)
    assert V.format() == "-6*l1^4 - 12*l1^2*l2^2 - 12*l1^2*l3^2 - 6*l2^4 - 12*l2^2*l3^2 - 6*l3^4"
    assert sp.is_taut(g).verified and sp.is_round(g).verified


@pytest.mark.parametrize("blocks, constant", [(1, -6), (2, -120)])
def test_phi_basis_constant(blocks, constant):
    t = quaternionic(blocks).triple()
    horizontal = [t.frame.vector(4 * b) for b in range(blocks)]
    _, reduced = c3.phi_basis_volume(t, horizontal)
    R = sp.family_volume(c3.induced_generators(t)).ring
    assert R.terms(reduced) == [((0, 0, 0), Fraction(constant))]
    assert constant == -oracles.n_factorial(2 * blocks + 1)


def test_phi_basis_is_a_basis():
    t = builtin("t7_quaternionic").triple()
    basis = c3.phi_basis(t, [t.frame.vector(0)])
    assert rank([list(v.coeffs) for v in basis]) == 7


def test_hyperholomorphic_product():
    forms = builtin("hyperkahler_r4").form_list()
    assert c3.musical_anticommutation(forms).verified
    g = c3.hyperholomorphic_product(forms)
    assert all(classify(s).kind is StructureKind.COSYMPLECTIC for s in g)
    assert sp.is_taut(g).verified and sp.is_round(g).verified


def test_hyperholomorphic_rejects_commuting_forms():
    forms = builtin("hyperkahler_r4").form_list()
    bad = [forms[0], forms[0], forms[1]]
    assert not c3.musical_anticommutation(bad).verified
    with pytest.raises(StructureError):
        c3.hyperholomorphic_product(bad)
    with pytest.raises(StructureError):
        c3.hyperholomorphic_product(forms[:2])
