"""Plain-text frame files.

One directive per line; ``#`` starts a comment.  Rationals are ``p`` or ``p/q``.
A *term list* is a sequence of ``coefficient target`` pairs.

::

    title   Heisenberg
    ring    rational                 # or lambda:<p>
    basis   e1 e2 e3
    bracket e1 e2 = 1 e3             # [e1, e2] = e3
    form    eta1 1 = 1 e1            # name, degree, terms over e1^e2-style monomials
    form    omega1 2 = 1 e2^e3
    vector  xi1 = 1 e1
    endo    phi1                     # declares a (possibly zero) endomorphism
    map     phi1 e1 = 1 e2           # image of a basis vector
    metric  identity                 # or: metric = 1 0 0 ; 0 1 0 ; 0 0 1
    pair    s1 = eta1 omega1         # almost cosymplectic structure
    family  circle = s1 s2           # generators of a p-sphere
    structure a1 = phi1 xi1 eta1     # almost contact structure
    triple  q = a1 a2 a3             # almost contact 3-structure (uses the metric)
    forms   hk = w1 w2 w3            # a named list of forms

``basis`` must precede every other directive except ``title`` and ``ring``.
The Jacobi identity is checked once all brackets are read.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .contact3 import AC3, AlmostContact, MetricTensor
from .errors import CosphereError, JacobiError, ParseError
from .exterior import EndoField, Frame, KForm, VectorField
from .scalars import format_rational, parse_rational, parse_ring
from .sphere import Generators
from .structures import AlmostCosym

_TOKEN = re.compile(r"\S+")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.']*$")

DIRECTIVES = (
    "title", "ring", "basis", "bracket", "form", "vector", "endo", "map",
    "metric", "pair", "family", "structure", "triple", "forms",
)


@dataclass
class FrameDocument:
    """A frame together with named tensors and structures."""

    frame: Frame
    ring: str = "rational"
    title: str = ""
    forms: dict[str, KForm] = field(default_factory=dict)
    vectors: dict[str, VectorField] = field(default_factory=dict)
    endos: dict[str, EndoField] = field(default_factory=dict)
    metric: MetricTensor | None = None
    pairs: dict[str, tuple[str, str]] = field(default_factory=dict)
    families: dict[str, tuple[str, ...]] = field(default_factory=dict)
    structures: dict[str, tuple[str, str, str]] = field(default_factory=dict)
    triples: dict[str, tuple[str, str, str]] = field(default_factory=dict)
    form_lists: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def pair(self, name: str) -> AlmostCosym:
        eta, omega = self.pairs[name]
        return AlmostCosym(self.forms[eta], self.forms[omega])

    def family(self, name: str | None = None) -> Generators:
        name = name or _only(self.families, "family")
        return Generators([self.pair(p) for p in self.families[name]])

    def structure(self, name: str) -> AlmostContact:
        phi, xi, eta = self.structures[name]
        return AlmostContact(self.endos[phi], self.vectors[xi], self.forms[eta])

    def triple(self, name: str | None = None) -> AC3:
        name = name or _only(self.triples, "triple")
        return AC3([self.structure(s) for s in self.triples[name]], self.metric)

    def form_list(self, name: str | None = None) -> list[KForm]:
        name = name or _only(self.form_lists, "forms")
        return [self.forms[f] for f in self.form_lists[name]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrameDocument):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.ring == other.ring
            and self.title == other.title
            and self.forms == other.forms
            and self.vectors == other.vectors
            and self.endos == other.endos
            and self.metric == other.metric
            and self.pairs == other.pairs
            and self.families == other.families
            and self.structures == other.structures
            and self.triples == other.triples
            and self.form_lists == other.form_lists
        )


def _only(table: dict[str, Any], what: str) -> str:
    if len(table) != 1:
        raise CosphereError(f"document has {len(table)} {what} entries; name one explicitly")
    return next(iter(table))


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[list[_Tok]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            lines.append(toks)
    return lines


def _err(tok: _Tok, message: str) -> ParseError:
    return ParseError(message, tok.line, tok.col)


def _rational(tok: _Tok) -> Fraction:
    try:
        return parse_rational(tok.text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _err(tok, str(exc)) from None


def _name(tok: _Tok) -> str:
    if not _NAME.match(tok.text):
        raise _err(tok, f"invalid name {tok.text!r}")
    return tok.text


def _split_eq(toks: list[_Tok], head: int) -> tuple[list[_Tok], list[_Tok]]:
    """Tokens before and after the ``=`` following the directive."""
    for k, t in enumerate(toks):
        if t.text == "=":
            return toks[head:k], toks[k + 1:]
    raise _err(toks[-1], "expected '='")


def _terms(toks: list[_Tok]) -> list[tuple[Fraction, _Tok]]:
    if len(toks) % 2:
        raise _err(toks[-1], "term lists are 'coefficient target' pairs")
    return [(_rational(toks[k]), toks[k + 1]) for k in range(0, len(toks), 2)]


class _Parser:
    def __init__(self, text: str) -> None:
        self.lines = _tokenize(text)
        self.title = ""
        self.ring = "rational"
        self.names: tuple[str, ...] | None = None
        self.brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
        self.bracket_lines: list[_Tok] = []
        self.deferred: list[list[_Tok]] = []
        self.declared: dict[str, _Tok] = {}
        self.pending: dict[str, list[tuple[str, tuple[_Tok, ...]]]] = {
            k: [] for k in ("pair", "family", "structure", "triple", "forms")
        }

    def index(self, tok: _Tok) -> int:
        assert self.names is not None
        try:
            return self.names.index(tok.text)
        except ValueError:
            raise _err(tok, f"unknown basis element {tok.text!r}") from None

    def declare(self, tok: _Tok) -> str:
        name = _name(tok)
        if name in self.declared:
            prev = self.declared[name]
            raise _err(tok, f"name {name!r} already defined on line {prev.line}")
        self.declared[name] = tok
        return name

    def run(self) -> FrameDocument:
        for toks in self.lines:
            head = toks[0]
            kind = head.text
            if kind not in DIRECTIVES:
                raise _err(head, f"unknown directive {kind!r}")
            if kind == "title":
                self.title = " ".join(t.text for t in toks[1:])
            elif kind == "ring":
                if len(toks) != 2:
                    raise _err(head, "ring takes one selector")
                try:
                    parse_ring(toks[1].text)
                except ValueError as exc:
                    raise _err(toks[1], str(exc)) from None
                self.ring = toks[1].text
            elif kind == "basis":
                if self.names is not None:
                    raise _err(head, "basis given twice")
                if len(toks) < 2:
                    raise _err(head, "basis needs at least one name")
                names = [_name(t) for t in toks[1:]]
                for k, t in enumerate(toks[1:]):
                    if t.text in names[:k]:
                        raise _err(t, f"repeated basis name {t.text!r}")
                self.names = tuple(names)
            elif self.names is None:
                raise _err(head, "'basis' must come first")
            elif kind == "bracket":
                self.bracket(toks)
            else:
                self.deferred.append(toks)
        if self.names is None:
            raise ParseError("missing 'basis' directive", 1, 1)
        try:
            frame = Frame.from_brackets(self.names, self.brackets)
        except JacobiError as exc:
            i, j, k = exc.triple
            trip = (self.names[i], self.names[j], self.names[k])
            where = self.bracket_lines[-1] if self.bracket_lines else None
            raise JacobiError(
                exc.triple,
                f"Jacobi identity fails on {trip}" + (f" (brackets ending on line {where.line})" if where else ""),
            ) from None
        doc = FrameDocument(frame, self.ring, self.title)
        endo_cols: dict[str, list[list[Fraction]]] = {}
        for toks in self.deferred:
            getattr(self, "do_" + toks[0].text)(toks, doc, endo_cols)
        for name, cols in endo_cols.items():
            doc.endos[name] = EndoField.from_columns(frame, [VectorField(frame, c) for c in cols])
        self.resolve(doc)
        return doc

    def bracket(self, toks: list[_Tok]) -> None:
        lhs, rhs = _split_eq(toks, 1)
        if len(lhs) != 2:
            raise _err(toks[0], "bracket needs two basis names before '='")
        i, j = self.index(lhs[0]), self.index(lhs[1])
        if i == j:
            raise _err(lhs[1], "a basis element brackets to zero with itself")
        key = (min(i, j), max(i, j))
        if key in self.brackets:
            raise _err(lhs[0], "bracket given twice")
        sign = 1 if i < j else -1
        slot: dict[int, Fraction] = {}
        for c, t in _terms(rhs):
            k = self.index(t)
            slot[k] = slot.get(k, Fraction(0)) + sign * c
        self.brackets[key] = slot
        self.bracket_lines.append(toks[0])

    def do_form(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        lhs, rhs = _split_eq(toks, 1)
        if len(lhs) != 2:
            raise _err(toks[0], "form needs a name and a degree")
        name = self.declare(lhs[0])
        try:
            degree = int(lhs[1].text)
        except ValueError:
            raise _err(lhs[1], "degree must be an integer") from None
        if not 0 <= degree <= doc.frame.dim:
            raise _err(lhs[1], f"degree {degree} out of range")
        coeffs: dict[tuple[int, ...], Fraction] = {}
        for c, t in _terms(rhs):
            if t.text == "1":
                idx: tuple[int, ...] = ()
            else:
                parts = t.text.split("^")
                idx = tuple(self.index(_Tok(p, t.line, t.col)) for p in parts)
            if len(idx) != degree:
                raise _err(t, f"monomial {t.text!r} does not have degree {degree}")
            if len(set(idx)) != len(idx):
                raise _err(t, f"monomial {t.text!r} repeats a factor")
            coeffs[idx] = coeffs.get(idx, Fraction(0)) + c
        doc.forms[name] = KForm(doc.frame, degree, coeffs)

    def _vector(self, rhs: list[_Tok], frame: Frame) -> list[Fraction]:
        v = [Fraction(0)] * frame.dim
        for c, t in _terms(rhs):
            v[self.index(t)] += c
        return v

    def do_vector(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        lhs, rhs = _split_eq(toks, 1)
        if len(lhs) != 1:
            raise _err(toks[0], "vector needs one name")
        doc.vectors[self.declare(lhs[0])] = VectorField(doc.frame, self._vector(rhs, doc.frame))

    def do_endo(self, toks: list[_Tok], doc: FrameDocument, cols: dict) -> None:
        if len(toks) != 2:
            raise _err(toks[0], "endo takes one name")
        name = self.declare(toks[1])
        n = doc.frame.dim
        cols[name] = [[Fraction(0)] * n for _ in range(n)]

    def do_map(self, toks: list[_Tok], doc: FrameDocument, cols: dict) -> None:
        lhs, rhs = _split_eq(toks, 1)
        if len(lhs) != 2:
            raise _err(toks[0], "map needs an endomorphism name and a basis element")
        name = lhs[0].text
        if name not in cols:
            raise _err(lhs[0], f"endomorphism {name!r} not declared with 'endo'")
        j = self.index(lhs[1])
        cols[name][j] = self._vector(rhs, doc.frame)

    def do_metric(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        if doc.metric is not None:
            raise _err(toks[0], "metric given twice")
        n = doc.frame.dim
        if len(toks) == 2 and toks[1].text == "identity":
            doc.metric = MetricTensor.identity(n)
            return
        _, rhs = _split_eq(toks, 1)
        rows: list[list[Fraction]] = [[]]
        for t in rhs:
            if t.text == ";":
                rows.append([])
            else:
                rows[-1].append(_rational(t))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise _err(toks[0], f"metric must be {n} rows of {n} entries")
        try:
            doc.metric = MetricTensor(rows)
        except CosphereError as exc:
            raise _err(toks[0], str(exc)) from None

    def _refs(self, toks: list[_Tok], count: int | None) -> tuple[str, tuple[_Tok, ...]]:
        lhs, rhs = _split_eq(toks, 1)
        if len(lhs) != 1:
            raise _err(toks[0], f"{toks[0].text} needs one name before '='")
        if count is not None and len(rhs) != count:
            raise _err(toks[0], f"{toks[0].text} needs {count} names after '='")
        if not rhs:
            raise _err(toks[0], f"{toks[0].text} needs names after '='")
        return self.declare(lhs[0]), tuple(rhs)

    def _reference_line(self, toks: list[_Tok], count: int | None) -> None:
        self.pending[toks[0].text].append(self._refs(toks, count))

    def do_pair(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        self._reference_line(toks, 2)

    def do_family(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        self._reference_line(toks, None)

    def do_structure(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        self._reference_line(toks, 3)

    def do_triple(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        self._reference_line(toks, 3)

    def do_forms(self, toks: list[_Tok], doc: FrameDocument, _: Any) -> None:
        self._reference_line(toks, None)

    def resolve(self, doc: FrameDocument) -> None:
        def need(tok: _Tok, table: dict, what: str) -> str:
            if tok.text not in table:
                raise _err(tok, f"unknown {what} {tok.text!r}")
            return tok.text

        for name, (e, o) in self.pending["pair"]:
            pe, po = need(e, doc.forms, "form"), need(o, doc.forms, "form")
            if doc.forms[pe].degree != 1 or doc.forms[po].degree != 2:
                raise _err(e, "a pair is a 1-form and a 2-form")
            doc.pairs[name] = (pe, po)
        for name, refs in self.pending["family"]:
            doc.families[name] = tuple(need(t, doc.pairs, "pair") for t in refs)
        for name, (p, x, e) in self.pending["structure"]:
            doc.structures[name] = (need(p, doc.endos, "endomorphism"), need(x, doc.vectors, "vector"), need(e, doc.forms, "form"))
        for name, refs in self.pending["triple"]:
            doc.triples[name] = tuple(need(t, doc.structures, "structure") for t in refs)
        for name, refs in self.pending["forms"]:
            doc.form_lists[name] = tuple(need(t, doc.forms, "form") for t in refs)


def parse_frame_file(text: str) -> FrameDocument:
    """Parse a frame file; errors carry the line and column."""
    return _Parser(text).run()


def read_frame_file(path: str) -> FrameDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_frame_file(fh.read())


def _fmt_terms(pairs: list[tuple[Fraction, str]]) -> str:
    return " ".join(f"{format_rational(c)} {t}" for c, t in pairs if c)


def serialize(doc: FrameDocument) -> str:
    """Canonical text; ``parse_frame_file(serialize(d)) == d``."""
    frame = doc.frame
    names = frame.names
    out: list[str] = []
    if doc.title:
        out.append(f"title {doc.title}")
    out.append(f"ring {doc.ring}")
    out.append("basis " + " ".join(names))
    for (i, j), terms in frame.constants:
        out.append(f"bracket {names[i]} {names[j]} = " + _fmt_terms([(c, names[k]) for k, c in terms]))
    for name, form in doc.forms.items():
        monos = [(c, "^".join(names[i] for i in idx) if idx else "1") for idx, c in form.items()]
        out.append(f"form {name} {form.degree} = {_fmt_terms(monos)}".rstrip())
    for name, v in doc.vectors.items():
        out.append(f"vector {name} = {_fmt_terms([(c, names[i]) for i, c in enumerate(v.coeffs)])}".rstrip())
    for name, P in doc.endos.items():
        out.append(f"endo {name}")
        for j in range(frame.dim):
            col = P.column(j)
            if not col.is_zero():
                out.append(f"map {name} {names[j]} = {_fmt_terms([(c, names[i]) for i, c in enumerate(col.coeffs)])}")
    if doc.metric is not None:
        m = doc.metric.matrix
        if doc.metric == MetricTensor.identity(frame.dim):
            out.append("metric identity")
        else:
            out.append("metric = " + " ; ".join(" ".join(format_rational(x) for x in row) for row in m))
    for name, (e, o) in doc.pairs.items():
        out.append(f"pair {name} = {e} {o}")
    for name, refs in doc.families.items():
        out.append(f"family {name} = " + " ".join(refs))
    for name, refs in doc.structures.items():
        out.append(f"structure {name} = " + " ".join(refs))
    for name, refs in doc.triples.items():
        out.append(f"triple {name} = " + " ".join(refs))
    for name, refs in doc.form_lists.items():
        out.append(f"forms {name} = " + " ".join(refs))
    return "\n".join(out) + "\n"
