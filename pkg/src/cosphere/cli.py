"""Command-line driver: ``cosphere [options] COMMAND INPUT``.

``INPUT`` is a frame file path, a file name in the corpus directory, or a
built-in ``name[:arg]``.  Exit codes: 0 every verdict verified, 1 some verdict
not verified, 2 usage error, 3 parse error, 4 Jacobi violation, 5 dimension
precondition, 6 structure or degree error, 7 point not on the sphere,
8 unknown input, 9 other library error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import contact3 as c3
from . import sphere as sp
from . import symplectization as sy
from .certificates import Certificate, Verdict, from_checks
from .corpus import CORPUS_ENV, load
from .errors import (
    CosphereError,
    DegreeError,
    DimensionError,
    JacobiError,
    NotOnSphere,
    ParseError,
    StructureError,
    UnknownInput,
)
from .frames_io import FrameDocument, serialize
from .report import Entry, build_report, dumps, render_text
from .scalars import QQ, LambdaRing, parse_rational, parse_ring
from .exterior import interior, pair
from .structures import AlmostCosym, StructureKind, cartan_class, classify, reeb, reeb_rational, volume_form

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_JACOBI = 4
EXIT_DIMENSION = 5
EXIT_STRUCTURE = 6
EXIT_NOT_ON_SPHERE = 7
EXIT_UNKNOWN_INPUT = 8
EXIT_OTHER = 9


class Options:
    def __init__(self, ns: argparse.Namespace) -> None:
        self.ring = ns.ring
        self.max_depth = ns.max_depth
        self.name = ns.name
        self.point = ns.point

    def as_dict(self) -> dict[str, Any]:
        return {"ring": self.ring, "max_depth": self.max_depth, "name": self.name, "point": self.point}


def _info(claim: str, method: str, **data: Any) -> Certificate:
    """A verified certificate carrying computed data."""
    return from_checks(claim, method, {}, {}, **data)


def _pairs(doc: FrameDocument, opts: Options) -> list[tuple[str, AlmostCosym]]:
    names = [opts.name] if opts.name else list(doc.pairs)
    if not names:
        raise StructureError("the input defines no pairs")
    return [(n, doc.pair(n)) for n in names]


def _family(doc: FrameDocument, opts: Options) -> sp.Generators:
    g = doc.family(opts.name if opts.name in doc.families else None)
    if opts.ring != "rational":
        R = parse_ring(opts.ring)
        if R.nvars != len(g):
            raise DimensionError(f"ring {opts.ring} needs {R.nvars} generators, the family has {len(g)}")
    return g


def _triple(doc: FrameDocument, opts: Options) -> c3.AC3:
    return doc.triple(opts.name if opts.name in doc.triples else None)


def _lambda_member(doc: FrameDocument, opts: Options) -> AlmostCosym:
    eta, omega = _family(doc, opts).member
    return AlmostCosym(eta, omega, check_volume=False)


# --------------------------------------------------------------------------- #
# commands


def cmd_verify(doc: FrameDocument, opts: Options) -> list[Entry]:
    if opts.ring != "rational":
        g = _family(doc, opts)
        return [Entry("member", sp.verify_p_sphere(g, opts.max_depth), {"volume": sp.family_volume(g).format()})]
    out = []
    for name, s in _pairs(doc, opts):
        top = QQ.format(volume_form(s).top_coefficient())
        out.append(Entry(name, from_checks("almost cosymplectic", "eta ^ Omega^n", {"volume nonzero": s.volume_nonzero}), {"volume": top}))
    return out


def cmd_reeb(doc: FrameDocument, opts: Options) -> list[Entry]:
    if opts.ring != "rational":
        s = _lambda_member(doc, opts)
        xi, den = reeb_rational(s)
        return [Entry("member", _info("Reeb field of the member", "solve over the fraction field"), {"numerator": xi, "denominator": den})]
    out = []
    for name, s in _pairs(doc, opts):
        xi = reeb(s)
        checks = {"i_xi eta = 1": pair(s.eta, xi) == 1, "i_xi Omega = 0": interior(xi, s.omega).is_zero()}
        out.append(Entry(name, from_checks("Reeb field", "exact linear solve", checks), {"xi": xi}))
    return out


def cmd_classify(doc: FrameDocument, opts: Options) -> list[Entry]:
    items = [("member", _lambda_member(doc, opts))] if opts.ring != "rational" else _pairs(doc, opts)
    out = []
    for name, s in items:
        c = classify(s)
        out.append(Entry(name, _info("classification", "exact ext_d"), {"kind": c.kind.value}))
    return out


def cmd_class(doc: FrameDocument, opts: Options) -> list[Entry]:
    names = [opts.name] if opts.name else [n for n, f in doc.forms.items() if f.degree == 1]
    out = []
    for n in names:
        r = cartan_class(doc.forms[n])
        out.append(Entry(n, _info("Cartan class", "powers of d eta"), {"class": r.cartan_class}))
    return out


def cmd_sphere(doc: FrameDocument, opts: Options) -> list[Entry]:
    g = _family(doc, opts)
    return [Entry(f"{g.p}-sphere", sp.verify_p_sphere(g, opts.max_depth), {"volume": sp.family_volume(g).format()})]


def cmd_taut(doc: FrameDocument, opts: Options) -> list[Entry]:
    g = _family(doc, opts)
    taut = sp.is_taut(g)
    return [Entry("taut", taut, {"taut": taut.verified, "round": sp.is_round(g).verified})]


def cmd_round(doc: FrameDocument, opts: Options) -> list[Entry]:
    g = _family(doc, opts)
    rnd = sp.is_round(g)
    return [Entry("round", rnd, {"round": rnd.verified, "taut": sp.is_taut(g).verified})]


def cmd_distribution(doc: FrameDocument, opts: Options) -> list[Entry]:
    g = _family(doc, opts)
    d = sp.reeb_distribution(g)
    out = [Entry("rank", _info("Reeb distribution", "rank of Reeb fields"), {"rank": d.rank, "kernels_match": d.kernels_match})]
    if g.p == 1:
        out.append(Entry("nonvanishing", sp.nonvanishing_check(g)))
        if g.frame.dim == 3:
            out.append(Entry("integrable", sp.integrability(g)))
    return out


def cmd_symplectize(doc: FrameDocument, opts: Options) -> list[Entry]:
    return [Entry(n, sy.symplectic_certificate(s)) for n, s in _pairs(doc, opts)]


def _two_symplectic(doc: FrameDocument, opts: Options):
    g = _family(doc, opts)
    return sy.symplectize(g[0]), sy.symplectize(g[1])


def cmd_couple(doc: FrameDocument, opts: Options) -> list[Entry]:
    w1, w2 = _two_symplectic(doc, opts)
    r = sy.couple_check(w1, w2)
    checks = {"conformal": r.conformal}
    if r.couple is not None:
        checks["couple"] = r.couple
    data = {"w1^w2 zero": r.w12.is_zero(), "squares equal": r.squares_equal, "family": LambdaRing(2).format(r.family_polynomial)}
    return [Entry("couple", from_checks("conformal couple", "exact wedge powers", checks, r.witness), data)]


def cmd_recursion(doc: FrameDocument, opts: Options) -> list[Entry]:
    w1, w2 = _two_symplectic(doc, opts)
    cert = sy.recursion_certificate(w1, w2)
    return [Entry("J", cert, {"J": cert.witness["J"]})]


def cmd_ac_verify(doc: FrameDocument, opts: Options) -> list[Entry]:
    names = [opts.name] if opts.name in doc.structures else list(doc.structures)
    out = []
    for n in names:
        phi, xi, eta = doc.structures[n]
        cert = c3.verify_almost_contact(doc.endos[phi], doc.vectors[xi], doc.forms[eta])
        out.append(Entry(n, cert))
        if doc.metric is not None and cert.verified:
            out.append(Entry(f"{n} metric", c3.verify_compatible_metric(doc.metric, doc.structure(n))))
    return out


def cmd_ac3_verify(doc: FrameDocument, opts: Options) -> list[Entry]:
    t = _triple(doc, opts)
    return [Entry("3-structure", c3.verify_3_structure(t), {"classes": [cartan_class(e).cartan_class for e in t.etas]})]


def cmd_nijenhuis(doc: FrameDocument, opts: Options) -> list[Entry]:
    t = _triple(doc, opts)
    out = []
    for a in range(3):
        for b in range(a, 3):
            P, Q = t.phis[a], t.phis[b]
            pq, qp = c3.nijenhuis_concomitant(P, Q), c3.nijenhuis_concomitant(Q, P)
            cert = from_checks(f"[phi{a + 1}, phi{b + 1}] symmetric", "exact tensor table", {"symmetric": (pq - qp).is_zero()})
            out.append(Entry(f"[phi{a + 1},phi{b + 1}]", cert, {"zero": pq.is_zero(), "tensor": pq}))
    return out


def cmd_ntensors(doc: FrameDocument, opts: Options) -> list[Entry]:
    t = _triple(doc, opts)
    return [Entry("identities", c3.n_tensor_report(t)), Entry("vanishing", c3.hyper_normal(t))]


def _point(opts: Options) -> list[Fraction] | None:
    if not opts.point:
        return None
    try:
        return [parse_rational(x) for x in opts.point.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad --point: {exc}") from None


def cmd_lambda(doc: FrameDocument, opts: Options) -> list[Entry]:
    t = _triple(doc, opts)
    ls = c3.lambda_structure(t, _point(opts))
    data = {"phi": ls.structure.phi, "xi": ls.structure.xi, "eta": ls.structure.eta}
    return [Entry("lambda structure", ls.certificate, data)]


def cmd_chardist(doc: FrameDocument, opts: Options) -> list[Entry]:
    t = _triple(doc, opts)
    cd = c3.char_distributions(t)
    points = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (Fraction(3, 5), Fraction(4, 5), 0)]
    return [
        Entry("distributions", c3.char_distribution_certificate(t), {"dims": cd.dims, "classes": list(cd.classes), "C": list(cd.C)}),
        Entry("quasi-contact rank", c3.quasi_contact_report(t, points)),
    ]


def cmd_hyperholo(doc: FrameDocument, opts: Options) -> list[Entry]:
    forms = doc.form_list(opts.name if opts.name in doc.form_lists else None)
    mus = c3.musical_anticommutation(forms)
    out = [Entry("anticommutation", mus)]
    if mus.verified:
        g = c3.hyperholomorphic_product(forms)
        out.append(Entry("2-sphere", sp.verify_p_sphere(g, opts.max_depth), {"volume": sp.family_volume(g).format()}))
        kinds = {f"s{i + 1}": classify(m).kind is StructureKind.COSYMPLECTIC for i, m in enumerate(g.members)}
        out.append(Entry("cosymplectic generators", from_checks("generators cosymplectic", "exact ext_d", kinds)))
    return out


COMMANDS: dict[str, Callable[[FrameDocument, Options], list[Entry]]] = {
    "verify": cmd_verify,
    "reeb": cmd_reeb,
    "classify": cmd_classify,
    "class": cmd_class,
    "sphere": cmd_sphere,
    "taut": cmd_taut,
    "round": cmd_round,
    "distribution": cmd_distribution,
    "symplectize": cmd_symplectize,
    "couple": cmd_couple,
    "recursion": cmd_recursion,
    "ac-verify": cmd_ac_verify,
    "ac3-verify": cmd_ac3_verify,
    "nijenhuis": cmd_nijenhuis,
    "ntensors": cmd_ntensors,
    "lambda": cmd_lambda,
    "chardist": cmd_chardist,
    "hyperholo": cmd_hyperholo,
}


# --------------------------------------------------------------------------- #
# built-in example table


def _expect(cert: Certificate, verified: bool) -> bool:
    return cert.verified == verified


def example_checks() -> list[tuple[str, str, bool, Callable[[], Certificate]]]:
    """``(input, check, expected verified, thunk)`` for the built-in corpus."""
    from .corpus import builtin

    def fam(name: str) -> sp.Generators:
        return builtin(name).family()

    def tri(name: str) -> c3.AC3:
        return builtin(name).triple()

    def kind(name: str, pair: str, k: StructureKind) -> Callable[[], Certificate]:
        from .structures import classify_certificate

        return lambda: classify_certificate(builtin(name).pair(pair), k)

    def couple(name: str) -> Certificate:
        g = fam(name)
        r = sy.couple_check(sy.symplectize(g[0]), sy.symplectize(g[1]))
        return from_checks("conformal couple", "exact wedge powers", {"conformal": r.conformal}, r.witness)

    def recursion(name: str) -> Certificate:
        g = fam(name)
        return sy.recursion_certificate(sy.symplectize(g[0]), sy.symplectize(g[1]))

    def hyperholo() -> Certificate:
        return sp.verify_p_sphere(c3.hyperholomorphic_product(builtin("hyperkahler_r4").form_list()))

    return [
        ("t3", "sphere", True, lambda: sp.verify_p_sphere(fam("t3"))),
        ("t3", "taut", True, lambda: sp.is_taut(fam("t3"))),
        ("t3", "round", True, lambda: sp.is_round(fam("t3"))),
        ("heisenberg", "s1 cosymplectic", True, kind("heisenberg", "s1", StructureKind.COSYMPLECTIC)),
        ("heisenberg", "s2 cosymplectic", True, kind("heisenberg", "s2", StructureKind.COSYMPLECTIC)),
        ("heisenberg", "sphere", True, lambda: sp.verify_p_sphere(fam("heisenberg"))),
        ("heisenberg", "taut", True, lambda: sp.is_taut(fam("heisenberg"))),
        ("heisenberg", "round", True, lambda: sp.is_round(fam("heisenberg"))),
        ("heisenberg", "integrable", False, lambda: sp.integrability(fam("heisenberg"))),
        ("heisenberg", "conformal couple", True, lambda: couple("heisenberg")),
        ("heisenberg", "J^2 = -I", True, lambda: recursion("heisenberg")),
        ("r7_pair", "sphere", True, lambda: sp.verify_p_sphere(fam("r7_pair"))),
        ("r7_pair", "taut", False, lambda: sp.is_taut(fam("r7_pair"))),
        ("r7_pair", "round", False, lambda: sp.is_round(fam("r7_pair"))),
        ("r7_pair", "conformal couple", False, lambda: couple("r7_pair")),
        ("t7_pair1", "sphere", True, lambda: sp.verify_p_sphere(fam("t7_pair1"))),
        ("t7_pair1", "taut", True, lambda: sp.is_taut(fam("t7_pair1"))),
        ("t7_pair1", "round", False, lambda: sp.is_round(fam("t7_pair1"))),
        ("t7_pair1_plus", "sphere", False, lambda: sp.verify_p_sphere(fam("t7_pair1_plus"))),
        ("t7_pair2", "sphere", True, lambda: sp.verify_p_sphere(fam("t7_pair2"))),
        ("t7_pair2", "taut", False, lambda: sp.is_taut(fam("t7_pair2"))),
        ("t7_pair2", "round", True, lambda: sp.is_round(fam("t7_pair2"))),
        ("dim5_random:0", "sphere", False, lambda: sp.verify_p_sphere(fam("dim5_random:0"))),
        ("lie7", "3-structure", True, lambda: c3.verify_3_structure(tri("lie7"))),
        ("lie7", "lambda structure", True, lambda: c3.lambda_structure(tri("lie7")).certificate),
        ("t7_quaternionic", "N tensors vanish", True, lambda: c3.hyper_normal(tri("t7_quaternionic"))),
        ("t7_quaternionic", "sphere", True, lambda: sp.verify_p_sphere(c3.induced_generators(tri("t7_quaternionic")))),
        ("t7_quaternionic", "taut", True, lambda: sp.is_taut(c3.induced_generators(tri("t7_quaternionic")))),
        ("t7_quaternionic", "round", True, lambda: sp.is_round(c3.induced_generators(tri("t7_quaternionic")))),
        ("su2_r4", "quasi-contact rank", True, lambda: c3.quasi_contact_report(tri("su2_r4"), [(1, 0, 0), (Fraction(3, 5), Fraction(4, 5), 0)])),
        ("hyperkahler_r4", "anticommutation", True, lambda: c3.musical_anticommutation(builtin("hyperkahler_r4").form_list())),
        ("hyperkahler_r4", "product sphere", True, hyperholo),
    ]


def run_examples() -> tuple[list[tuple[str, str, str, str, bool]], list[Entry]]:
    rows = []
    entries = []
    for source, check, expected, thunk in example_checks():
        cert = thunk()
        ok = _expect(cert, expected)
        rows.append((source, check, "verified" if expected else "refuted", cert.verdict.value, ok))
        summary = from_checks(f"{source}: {check}", "expected outcome", {"matches expectation": ok}, {"verdict": cert.verdict.value})
        entries.append(Entry(f"{source}: {check}", summary))
    return rows, entries


def format_examples(rows: Sequence[tuple[str, str, str, str, bool]]) -> str:
    w1 = max(len(r[0]) for r in rows)
    w2 = max(len(r[1]) for r in rows)
    w3 = max(len(r[3]) for r in rows)
    lines = [f"{'input':<{w1}}  {'check':<{w2}}  {'expected':<8}  {'verdict':<{w3}}  result"]
    for src, check, exp, got, ok in rows:
        lines.append(f"{src:<{w1}}  {check:<{w2}}  {exp:<8}  {got:<{w3}}  {'PASS' if ok else 'FAIL'}")
    passed = sum(r[4] for r in rows)
    lines.append(f"{passed}/{len(rows)} checks pass")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- #
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosphere", description="Exact verification of almost cosymplectic spheres and almost contact 3-structures.")
    p.add_argument("--ring", default="rational", help="rational (default) or lambda:<p> for the symbolic member of a p-sphere")
    p.add_argument("--max-depth", type=int, default=sp.DEFAULT_MAX_DEPTH, help="subdivision depth for p >= 2 (default %(default)s)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    p.add_argument("--corpus", metavar="DIR", help=f"corpus directory (default: ${CORPUS_ENV} or the packaged corpus)")
    p.add_argument("--name", help="select one pair, family, structure, triple or form list by name")
    p.add_argument("--point", help="rational sphere point a,b,c for the lambda command")
    p.add_argument("command", choices=sorted(list(COMMANDS) + ["examples"]))
    p.add_argument("input", nargs="?", help="frame file, corpus file name, or built-in name[:arg]")
    return p


def _emit(report: dict[str, Any], text: str, json_path: str | None, out) -> None:
    if json_path == "-":
        out.write(dumps(report))
        return
    out.write(text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    opts = Options(ns)
    try:
        parse_ring(opts.ring)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if opts.max_depth < 0:
        print("error: --max-depth must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        if ns.command == "examples":
            rows, entries = run_examples()
            report = build_report("examples", "built-in corpus", "", opts.as_dict(), entries)
            _emit(report, format_examples(rows), ns.json, out)
            return EXIT_OK if report["all_verified"] else EXIT_REFUTED
        if not ns.input:
            print("error: this command needs an INPUT", file=sys.stderr)
            return EXIT_USAGE
        doc = load(ns.input, ns.corpus or os.environ.get(CORPUS_ENV))
        entries = COMMANDS[ns.command](doc, opts)
        report = build_report(ns.command, ns.input, serialize(doc), opts.as_dict(), entries)
        _emit(report, render_text(report), ns.json, out)
        return EXIT_OK if report["all_verified"] else EXIT_REFUTED
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except JacobiError as exc:
        print(f"Jacobi error: {exc}", file=sys.stderr)
        return EXIT_JACOBI
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (StructureError, DegreeError) as exc:
        print(f"structure error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except NotOnSphere as exc:
        print(f"not on the sphere: {exc}", file=sys.stderr)
        return EXIT_NOT_ON_SPHERE
    except (FileNotFoundError, KeyError) as exc:
        print(f"unknown input: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_INPUT
    except UnknownInput as exc:
        print(f"unknown input: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_INPUT
    except CosphereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
