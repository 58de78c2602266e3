"""Built-in example frames and seeded random generators.

Every builder returns a :class:`~cosphere.frames_io.FrameDocument`.  Parametric
entries are addressed as ``name:arg`` (``heisenberg:2``, ``dim5_random:7``,
``quaternionic:2``).
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .contact3 import MetricTensor
from .errors import StructureError, UnknownInput
from .exterior import EndoField, Frame, KForm, VectorField, wedge
from .frames_io import FrameDocument, parse_frame_file, serialize
from .linalg import determinant, inverse
from .scalars import QQ
from .structures import AlmostCosym, volume_form

CORPUS_ENV = "COSPHERE_CORPUS"


# --------------------------------------------------------------------------- #
# helpers


def _form1(frame: Frame, terms: dict[int, int]) -> KForm:
    return KForm(frame, 1, {(k - 1,): v for k, v in terms.items()})


def _form2(frame: Frame, terms: dict[tuple[int, int], int]) -> KForm:
    return KForm(frame, 2, {(a - 1, b - 1): v for (a, b), v in terms.items()})


def _add_pairs(doc: FrameDocument, pairs: Sequence[tuple[str, KForm, KForm]], family: str | None) -> None:
    names = []
    for name, eta, omega in pairs:
        doc.forms[f"eta_{name}"] = eta
        doc.forms[f"omega_{name}"] = omega
        doc.pairs[name] = (f"eta_{name}", f"omega_{name}")
        names.append(name)
    if family:
        doc.families[family] = tuple(names)


# --------------------------------------------------------------------------- #
# reference examples


def t3() -> FrameDocument:
    """Flat 3-torus with the triple ``(e_i, e_j ^ e_k)``."""
    fr = Frame.abelian(["x1", "x2", "x3"])
    e = [fr.coframe(i) for i in range(3)]
    doc = FrameDocument(fr, title="T3 triple")
    _add_pairs(
        doc,
        [("s1", e[0], wedge(e[1], e[2])), ("s2", e[1], wedge(e[2], e[0])), ("s3", e[2], wedge(e[0], e[1]))],
        "sphere",
    )
    return doc


def heisenberg(gamma: Fraction | int = 1) -> FrameDocument:
    """``[e1, e2] = gamma e3`` with the three pairs ``(e^i, e^j ^ e^k)``; family of the first two."""
    gamma = QQ(gamma)
    if gamma == 0:
        raise StructureError("gamma must be nonzero")
    fr = Frame.from_brackets(["e1", "e2", "e3"], {(0, 1): {2: gamma}})
    e = [fr.coframe(i) for i in range(3)]
    doc = FrameDocument(fr, title=f"Heisenberg gamma={gamma}")
    _add_pairs(
        doc,
        [("s1", e[0], wedge(e[1], e[2])), ("s2", e[1], wedge(e[2], e[0])), ("s3", e[2], wedge(e[0], e[1]))],
        None,
    )
    doc.families["circle"] = ("s1", "s2")
    return doc


def _r7() -> Frame:
    return Frame.abelian([f"x{i}" for i in range(1, 8)])


def _first_generator(fr: Frame) -> tuple[KForm, KForm]:
    return _form1(fr, {7: 1}), _form2(fr, {(1, 2): 1, (3, 4): 1, (5, 6): 1})


def r7_pair() -> FrameDocument:
    """Non-taut, non-round circle on R^7."""
    fr = _r7()
    e1, o1 = _first_generator(fr)
    e2 = _form1(fr, {6: 1})
    o2 = _form2(fr, {(1, 3): 1, (2, 3): 1, (4, 7): 1, (5, 7): 1, (2, 5): -1})
    doc = FrameDocument(fr, title="R7 pair")
    _add_pairs(doc, [("s1", e1, o1), ("s2", e2, o2)], "circle")
    return doc


def _t7_pair1(eta_sign: int, title: str) -> FrameDocument:
    fr = _r7()
    e1, o1 = _first_generator(fr)
    e2 = _form1(fr, {2: eta_sign})
    o2 = _form2(fr, {(4, 5): -1, (3, 6): -1, (1, 7): 1, (3, 7): 1})
    doc = FrameDocument(fr, title=title)
    _add_pairs(doc, [("s1", e1, o1), ("s2", e2, o2)], "circle")
    return doc


def t7_pair1() -> FrameDocument:
    """Taut, not round (second 1-form ``-dx2``)."""
    return _t7_pair1(-1, "T7 pair 1")


def t7_pair1_plus() -> FrameDocument:
    """The same data with ``+dx2``; its volume polynomial vanishes on the circle."""
    return _t7_pair1(1, "T7 pair 1 with +dx2")


def t7_pair2() -> FrameDocument:
    """Round, not taut."""
    fr = _r7()
    e1, o1 = _first_generator(fr)
    e2 = _form1(fr, {2: -1})
    o2 = _form2(fr, {(3, 5): 1, (3, 6): 2, (4, 5): 1, (1, 6): 1, (1, 7): 1})
    doc = FrameDocument(fr, title="T7 pair 2")
    _add_pairs(doc, [("s1", e1, o1), ("s2", e2, o2)], "circle")
    return doc


# quaternionic action on one block X1..X4: phi_a X_i
_BLOCK = (
    {0: (1, 1), 1: (0, -1), 2: (3, 1), 3: (2, -1)},
    {0: (2, 1), 1: (3, -1), 2: (0, -1), 3: (1, 1)},
    {0: (3, 1), 1: (2, 1), 2: (1, -1), 3: (0, -1)},
)
_EPS = {(0, 1): 2, (1, 2): 0, (2, 0): 1}


def _three_structure_doc(fr: Frame, blocks: int, title: str) -> FrameDocument:
    """phi tables on ``blocks`` quaternionic blocks followed by ``xi1 xi2 xi3``."""
    n = fr.dim
    v0 = 4 * blocks
    doc = FrameDocument(fr, title=title, metric=MetricTensor.identity(n))
    for a in range(3):
        cols = [[0] * n for _ in range(n)]
        for b in range(blocks):
            for i, (j, s) in _BLOCK[a].items():
                cols[4 * b + i][4 * b + j] = s
        for (x, y), z in _EPS.items():
            # phi_x xi_y = xi_z, phi_x xi_z = -xi_y (cyclic)
            if x == a:
                cols[v0 + y][v0 + z] = 1
                cols[v0 + z][v0 + y] = -1
        doc.endos[f"phi{a + 1}"] = EndoField.from_columns(fr, [VectorField(fr, c) for c in cols])
        doc.vectors[f"xi{a + 1}"] = fr.vector(v0 + a)
        doc.forms[f"eta{a + 1}"] = fr.coframe(v0 + a)
        doc.structures[f"a{a + 1}"] = (f"phi{a + 1}", f"xi{a + 1}", f"eta{a + 1}")
    doc.triples["q"] = ("a1", "a2", "a3")
    return doc


def _block_names(blocks: int) -> list[str]:
    if blocks == 1:
        return ["X1", "X2", "X3", "X4"]
    return [f"X{i}_{b + 1}" for b in range(blocks) for i in range(1, 5)]


def lie7() -> FrameDocument:
    """``[X1, X4] = xi3``, ``[xi1, xi2] = xi3``."""
    names = _block_names(1) + ["xi_1", "xi_2", "xi_3"]
    fr = Frame.from_brackets(names, {(0, 3): {6: 1}, (4, 5): {6: 1}})
    return _three_structure_doc(fr, 1, "7-dim Lie algebra 3-structure")


def quaternionic(blocks: int = 1) -> FrameDocument:
    """Flat 3-structure on ``T^(4 blocks + 3)``."""
    if blocks < 1:
        raise StructureError("need at least one quaternionic block")
    fr = Frame.abelian(_block_names(blocks) + ["xi_1", "xi_2", "xi_3"])
    return _three_structure_doc(fr, blocks, f"flat quaternionic T{4 * blocks + 3}")


def t7_quaternionic() -> FrameDocument:
    return quaternionic(1)


def su2_r4(c: Fraction | int = 2) -> FrameDocument:
    """``su(2) + R^4`` with ``[xi_a, xi_b] = c xi_c`` cyclically."""
    names = _block_names(1) + ["xi_1", "xi_2", "xi_3"]
    fr = Frame.from_brackets(names, {(4, 5): {6: c}, (5, 6): {4: c}, (6, 4): {5: c}})
    return _three_structure_doc(fr, 1, f"su(2) + R4, c={QQ(c)}")


def hyperkahler_r4() -> FrameDocument:
    fr = Frame.abelian(["x1", "x2", "x3", "x4"])
    doc = FrameDocument(fr, title="hyperkahler R4")
    doc.forms["w1"] = _form2(fr, {(1, 2): 1, (3, 4): 1})
    doc.forms["w2"] = _form2(fr, {(1, 3): 1, (2, 4): -1})
    doc.forms["w3"] = _form2(fr, {(1, 4): 1, (2, 3): 1})
    doc.form_lists["hk"] = ("w1", "w2", "w3")
    return doc


# --------------------------------------------------------------------------- #
# random data


_BLOCKS: dict[str, tuple[int, dict]] = {
    "abelian1": (1, {}),
    "aff": (2, {(0, 1): {1: 1}}),
    "heis": (3, {(0, 1): {2: 1}}),
    "su2": (3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}),
    "sl2": (3, {(0, 1): {2: 2}, (2, 0): {0: 2}, (2, 1): {1: -2}}),
}


def random_frame(dim: int, rng: random.Random, coeff: int = 2) -> Frame:
    """Direct sum of small Lie algebras in a random rational basis.

    The new basis is ``f_a = sum_i A[i][a] e_i`` for a random invertible
    integer matrix ``A``; a change of basis preserves the Jacobi identity,
    which the frame constructor re-checks anyway.
    """
    blocks: list[tuple[int, dict]] = []
    left = dim
    while left:
        options = [b for b in _BLOCKS.values() if b[0] <= left]
        size, br = rng.choice(options)
        blocks.append((size, br))
        left -= size
    c: dict[tuple[int, int], dict[int, Fraction]] = {}
    offset = 0
    for size, br in blocks:
        for (i, j), terms in br.items():
            c[(offset + i, offset + j)] = {offset + k: Fraction(v) for k, v in terms.items()}
        offset += size
    base = Frame.from_brackets(dim, c)
    while True:
        A = [[Fraction(rng.randint(-coeff, coeff)) for _ in range(dim)] for _ in range(dim)]
        if determinant(A) != 0:
            break
    Ainv = inverse(A)
    T = base.table
    new: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            img = [Fraction(0)] * dim
            for i in range(dim):
                if not A[i][a]:
                    continue
                for j in range(dim):
                    if not A[j][b]:
                        continue
                    w = A[i][a] * A[j][b]
                    for k, v in enumerate(T[i][j]):
                        if v:
                            img[k] += w * v
            coords = [sum(Ainv[d][k] * img[k] for k in range(dim)) for d in range(dim)]
            if any(coords):
                new[(a, b)] = {d: x for d, x in enumerate(coords) if x}
    return Frame.from_brackets(dim, new)


def random_form(frame: Frame, degree: int, rng: random.Random, coeff: int = 3, density: float = 0.6) -> KForm:
    from itertools import combinations

    coeffs = {}
    for idx in combinations(range(frame.dim), degree):
        if rng.random() < density:
            coeffs[idx] = Fraction(rng.randint(-coeff, coeff))
    return KForm(frame, degree, coeffs)


def random_pair(frame: Frame, rng: random.Random) -> AlmostCosym:
    """A random almost cosymplectic pair (volume checked)."""
    while True:
        eta = random_form(frame, 1, rng)
        omega = random_form(frame, 2, rng)
        if eta.is_zero():
            continue
        if volume_form(AlmostCosym(eta, omega, check_volume=False)).top_coefficient() != 0:
            return AlmostCosym(eta, omega)


def dim5_random(seed: int) -> FrameDocument:
    """Random generator pair on a random 5-dim frame."""
    rng = random.Random(seed)
    fr = random_frame(5, rng)
    doc = FrameDocument(fr, title=f"dim5 random seed={seed}")
    s1, s2 = random_pair(fr, rng), random_pair(fr, rng)
    _add_pairs(doc, [("s1", s1.eta, s1.omega), ("s2", s2.eta, s2.omega)], "circle")
    return doc


def random_3d_circle(seed: int) -> FrameDocument:
    """``(th1, th2 ^ th3)`` and ``(th2, c th3 ^ th1)`` for random independent ``th_i`` and ``c > 0``."""
    rng = random.Random(seed)
    fr = Frame.abelian(["x1", "x2", "x3"])
    while True:
        th = [random_form(fr, 1, rng, density=1.0) for _ in range(3)]
        if wedge(th[0], wedge(th[1], th[2])).top_coefficient() != 0:
            break
    c = Fraction(rng.randint(1, 4), rng.randint(1, 4))
    doc = FrameDocument(fr, title=f"random 3-dim circle seed={seed}")
    _add_pairs(doc, [("s1", th[0], wedge(th[1], th[2])), ("s2", th[1], wedge(th[2], th[0]) * c)], "circle")
    return doc


# --------------------------------------------------------------------------- #
# registry


BUILTINS: dict[str, Callable[..., FrameDocument]] = {
    "t3": t3,
    "heisenberg": heisenberg,
    "r7_pair": r7_pair,
    "t7_pair1": t7_pair1,
    "t7_pair1_plus": t7_pair1_plus,
    "t7_pair2": t7_pair2,
    "dim5_random": dim5_random,
    "lie7": lie7,
    "t7_quaternionic": t7_quaternionic,
    "quaternionic": quaternionic,
    "su2_r4": su2_r4,
    "hyperkahler_r4": hyperkahler_r4,
    "random_3d_circle": random_3d_circle,
}

_ARG_PARSERS: dict[str, Callable[[str], object]] = {
    "heisenberg": Fraction,
    "dim5_random": int,
    "quaternionic": int,
    "su2_r4": Fraction,
    "random_3d_circle": int,
}

# files written by ``write_corpus`` (name -> builder call)
CORPUS_FILES = {
    "t3": "t3",
    "heisenberg": "heisenberg",
    "r7_pair": "r7_pair",
    "t7_pair1": "t7_pair1",
    "t7_pair1_plus": "t7_pair1_plus",
    "t7_pair2": "t7_pair2",
    "dim5_random": "dim5_random:0",
    "lie7": "lie7",
    "t7_quaternionic": "t7_quaternionic",
    "su2_r4": "su2_r4",
    "hyperkahler_r4": "hyperkahler_r4",
}


def builtin(source: str) -> FrameDocument:
    """Build ``name`` or ``name:arg``."""
    name, _, arg = source.partition(":")
    if name.endswith(".frame"):
        name = name[: -len(".frame")]
    if name not in BUILTINS:
        raise UnknownInput(f"no file or built-in example named {name!r}")
    if arg:
        if name not in _ARG_PARSERS:
            raise UnknownInput(f"{name} takes no argument")
        try:
            value = _ARG_PARSERS[name](arg)
        except (ValueError, ZeroDivisionError):
            raise UnknownInput(f"bad argument {arg!r} for {name}") from None
        return BUILTINS[name](value)
    if name == "dim5_random" or name == "random_3d_circle":
        return BUILTINS[name](0)
    return BUILTINS[name]()


def write_corpus(directory: str | os.PathLike) -> list[Path]:
    """Write every corpus entry as ``<name>.frame``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, source in CORPUS_FILES.items():
        path = out / f"{name}.frame"
        path.write_text(serialize(builtin(source)), encoding="utf-8")
        paths.append(path)
    return paths


def packaged_corpus_dir() -> Path:
    return Path(__file__).with_name("corpus_data")


def default_corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV)
    return Path(env) if env else packaged_corpus_dir()


def load(source: str, corpus_dir: str | os.PathLike | None = None) -> FrameDocument:
    """Resolve a path, a corpus file name, or a built-in ``name[:arg]``.

    Order: an existing path; ``<corpus_dir>/<source>`` (``.frame`` optional);
    the built-in registry.
    """
    p = Path(source)
    if p.is_file():
        return parse_frame_file(p.read_text(encoding="utf-8"))
    directory = Path(corpus_dir) if corpus_dir is not None else default_corpus_dir()
    for cand in (directory / source, directory / f"{source}.frame"):
        if cand.is_file():
            return parse_frame_file(cand.read_text(encoding="utf-8"))
    return builtin(source)
