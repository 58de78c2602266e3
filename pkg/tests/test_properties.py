"""Property-based tests of the exterior calculus kernel over random Jacobi frames."""

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

import oracles
from cosphere.corpus import random_frame
from cosphere.exterior import (
    EndoField,
    KForm,
    VectorField,
    evaluate,
    ext_d,
    interior,
    lie_derivative_form,
    wedge,
)
from cosphere.contact3 import nijenhuis_concomitant

small = st.integers(-3, 3).map(Fraction)


@lru_cache(maxsize=None)
def frame_for(dim: int, seed: int):
    return random_frame(dim, random.Random(seed))


frames = st.builds(frame_for, st.integers(3, 8), st.integers(0, 40))


@st.composite
def forms(draw, frame, degree):
    idx = list(combinations(range(frame.dim), degree))
    chosen = draw(st.lists(st.sampled_from(idx), max_size=6, unique=True)) if idx else []
    return KForm(frame, degree, {i: draw(small) for i in chosen})


@st.composite
def vectors(draw, frame):
    return VectorField(frame, draw(st.lists(small, min_size=frame.dim, max_size=frame.dim)))


@st.composite
def endos(draw, frame):
    n = frame.dim
    return EndoField(frame, [draw(st.lists(small, min_size=n, max_size=n)) for _ in range(n)])


@given(st.data())
def test_d_squared_vanishes(data):
    fr = data.draw(frames)
    a = data.draw(forms(fr, data.draw(st.integers(0, fr.dim - 2))))
    assert ext_d(ext_d(a)).is_zero()


@given(st.data())
def test_leibniz(data):
    fr = data.draw(frames)
    p = data.draw(st.integers(0, fr.dim - 1))
    q = data.draw(st.integers(0, fr.dim - 1 - p))
    a, b = data.draw(forms(fr, p)), data.draw(forms(fr, q))
    assert ext_d(wedge(a, b)) == wedge(ext_d(a), b) + wedge(a, ext_d(b)) * (-1) ** p


@given(st.data())
def test_interior_antiderivation(data):
    fr = data.draw(frames)
    p = data.draw(st.integers(1, fr.dim - 1))
    q = data.draw(st.integers(1, fr.dim - p))
    a, b, v = data.draw(forms(fr, p)), data.draw(forms(fr, q)), data.draw(vectors(fr))
    assert interior(v, wedge(a, b)) == wedge(interior(v, a), b) + wedge(a, interior(v, b)) * (-1) ** p


@given(st.data())
def test_interior_squared_vanishes(data):
    fr = data.draw(frames)
    a, v = data.draw(forms(fr, data.draw(st.integers(2, fr.dim)))), data.draw(vectors(fr))
    assert interior(v, interior(v, a)).is_zero()


@given(st.data())
def test_graded_commutativity(data):
    fr = data.draw(frames)
    p = data.draw(st.integers(0, fr.dim))
    q = data.draw(st.integers(0, fr.dim - p))
    a, b = data.draw(forms(fr, p)), data.draw(forms(fr, q))
    assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)


@given(st.data())
def test_wedge_associative(data):
    fr = data.draw(frames)
    p = data.draw(st.integers(0, 2))
    q = data.draw(st.integers(0, min(2, fr.dim - p)))
    r = data.draw(st.integers(0, fr.dim - p - q))
    a, b, c = (data.draw(forms(fr, k)) for k in (p, q, r))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.data())
def test_cartan_identity(data):
    fr = data.draw(frames)
    k = data.draw(st.integers(1, fr.dim - 1))
    a, v = data.draw(forms(fr, k)), data.draw(vectors(fr))
    assert lie_derivative_form(v, a) == interior(v, ext_d(a)) + ext_d(interior(v, a))


@given(st.data())
def test_evaluate_matches_oracles(data):
    fr = data.draw(frames)
    p = data.draw(st.integers(1, min(3, fr.dim - 1)))
    q = data.draw(st.integers(1, min(3, fr.dim - p)))
    a, b = data.draw(forms(fr, p)), data.draw(forms(fr, q))
    vs = [data.draw(vectors(fr)) for _ in range(p + q)]
    ab = wedge(a, b)
    assert evaluate(ab, vs) == oracles.form_eval(ab, vs) == oracles.shuffle_wedge_eval(a, b, vs)


@given(st.data())
def test_d_matches_koszul(data):
    fr = data.draw(frames)
    k = data.draw(st.integers(1, min(3, fr.dim - 1)))
    a = data.draw(forms(fr, k))
    vs = [data.draw(vectors(fr)) for _ in range(k + 1)]
    assert evaluate(ext_d(a), vs) == oracles.d_eval(a, vs)


@given(st.data())
def test_interior_matches_first_slot(data):
    fr = data.draw(frames)
    k = data.draw(st.integers(1, min(4, fr.dim)))
    a, v = data.draw(forms(fr, k)), data.draw(vectors(fr))
    rest = [data.draw(vectors(fr)) for _ in range(k - 1)]
    assert oracles.form_eval(interior(v, a), rest) == oracles.form_eval(a, [v] + rest)


@given(st.data())
def test_concomitant_symmetric_and_identity_trivial(data):
    fr = data.draw(frames.filter(lambda f: f.dim <= 5))
    P, Q = data.draw(endos(fr)), data.draw(endos(fr))
    assert (nijenhuis_concomitant(P, Q) - nijenhuis_concomitant(Q, P)).is_zero()
    assert nijenhuis_concomitant(EndoField.identity(fr), Q).is_zero()
