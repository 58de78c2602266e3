from fractions import Fraction

import pytest

from cosphere import corpus
from cosphere.errors import UnknownInput
from cosphere.frames_io import serialize


def test_builtin_arguments():
    assert corpus.builtin("heisenberg:2").frame.basis_bracket(0, 1) == (0, 0, 2)
    assert corpus.builtin("heisenberg:1/2").frame.basis_bracket(0, 1) == (0, 0, Fraction(1, 2))
    assert corpus.builtin("dim5_random:7") == corpus.dim5_random(7)


@pytest.mark.parametrize("source", ["nope", "t3:2", "heisenberg:x"])
def test_unknown_builtin(source):
    with pytest.raises(UnknownInput):
        corpus.builtin(source)


def test_load_order(tmp_path):
    path = tmp_path / "mine.frame"
    path.write_text(serialize(corpus.t3()), encoding="utf-8")
    assert corpus.load(str(path)) == corpus.t3()
    assert corpus.load("mine", tmp_path) == corpus.t3()
    assert corpus.load("heisenberg", tmp_path) == corpus.heisenberg()


def test_env_corpus_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(corpus.CORPUS_ENV, str(tmp_path))
    assert corpus.default_corpus_dir() == tmp_path
    monkeypatch.delenv(corpus.CORPUS_ENV)
    assert corpus.default_corpus_dir() == corpus.packaged_corpus_dir()


def test_write_corpus(tmp_path):
    paths = corpus.write_corpus(tmp_path)
    assert {p.stem for p in paths} == set(corpus.CORPUS_FILES)


def test_random_frames_are_seeded_and_checked():
    import random

    a = corpus.random_frame(6, random.Random(4))
    b = corpus.random_frame(6, random.Random(4))
    assert a == b and a.jacobi_violation() is None


@pytest.mark.parametrize("seed", range(10))
def test_random_3d_circle_valid(seed):
    g = corpus.random_3d_circle(seed).family()
    assert g.frame.is_abelian and g.frame.dim == 3 and g.p == 1
