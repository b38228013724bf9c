"""Command-line interface.

One invocation processes one definition document:

    colorlie check        --input doc.json [--algebra NAME]
    colorlie check-module --input doc.json [--module NAME]
    colorlie sequences    --input doc.json --algebra NAME [--depth N]
    colorlie center       --input doc.json --algebra NAME [--subspace H]
    colorlie solve        --input doc.json --algebra NAME --kind der [...]
    colorlie closure      --input doc.json --algebra NAME --property all [...]
    colorlie construct    NAME --input doc.json --algebra A [...] [--output out.json]
    colorlie report-all   --input doc.json [--figures DIR]

Reports go to stdout or ``--output``; ``--format`` picks tab-delimited text
or canonical JSON.  Exit codes: 0 all requested checks pass, 2 parse error,
3 validation error, 4 a hypothesis-gated check was skipped, 5 a property
check failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .algebra import (
    HYPOTHESIS_NOT_MET,
    PASS,
    ab_center,
    center,
    centralizer,
    central_sequence,
    check_axioms,
    check_ideal_theorem,
    check_jacobi_alternate,
    check_multiplicative,
    derived_sequence,
)
from .constructions import (
    ConstructionError,
    averaging_twist,
    direct_sum,
    lie_from_bihom_assoc,
    power_twist,
    quotient,
    reduce_arity,
    semi_morphism_twist,
    t_extension,
    tensor_with_commutative,
    yau_twist,
)
from .derivations import (
    CLOSURE_PROPERTIES,
    OperatorSolver,
    closure_check,
)
from .docio import DefinitionDocument, DocumentError, dump, load
from .modules import check_module_axioms, semidirect_algebra
from .report import (
    EXIT_PARSE,
    EXIT_VALIDATION,
    Report,
    render_operator_dims_figure,
    render_sequence_figure,
)

CONSTRUCTIONS = (
    "quotient",
    "reduce-arity",
    "yau-twist",
    "power-twist",
    "tensor",
    "direct-sum",
    "semi-twist",
    "averaging-twist",
    "t-extension",
    "semidirect",
    "lie-from-assoc",
)


def _parse_queries(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad query {chunk!r}; expected 'k,r'")
        pairs.append((int(parts[0]), int(parts[1])))
    if not pairs:
        raise ValueError("empty query set")
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colorlie", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"colorlie {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", required=True, help="definition document (JSON)")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--queries", default="0,0;0,1;1,0;1,1",
                        help="semicolon-separated k,r twist powers")
        sp.add_argument("--relaxed-slot", action="store_true",
                        help="single-slot reading of the scalar-like identities")
        sp.add_argument("--override-grading", action="store_true",
                        help="allow the semidirect sum on nontrivial gradings")
        return sp

    sp = common(sub.add_parser("check", help="axiom checks for algebras"))
    sp.add_argument("--algebra", help="check one algebra (default: all)")

    sp = common(sub.add_parser("check-module", help="module axiom checks"))
    sp.add_argument("--module", help="check one module (default: all)")

    sp = common(sub.add_parser("sequences", help="derived/central sequences"))
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--depth", type=int, default=4)

    sp = common(sub.add_parser("center", help="center, twisted center, centralizer"))
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--subspace", help="also compute the centralizer of this subspace")

    sp = common(sub.add_parser("solve", help="solve operator spaces"))
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--kind", required=True,
                    choices=("der", "c", "qc", "zder", "qder", "gder"))
    sp.add_argument("--k", type=int, help="single alpha power (else --queries)")
    sp.add_argument("--r", type=int, help="single beta power (else --queries)")
    sp.add_argument("--degree", help="comma-separated degree coordinates")

    sp = common(sub.add_parser("closure", help="closure and inclusion laws"))
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--property", default="all",
                    choices=CLOSURE_PROPERTIES + ("all",))

    sp = common(sub.add_parser("construct", help="run a construction"))
    sp.add_argument("name", choices=CONSTRUCTIONS)
    sp.add_argument("--algebra", help="primary algebra operand")
    sp.add_argument("--other", help="second algebra (direct-sum)")
    sp.add_argument("--ideal", help="subspace name (quotient)")
    sp.add_argument("--us", help="comma-separated basis indices (reduce-arity)")
    sp.add_argument("--map", dest="map_name", help="map name (twists)")
    sp.add_argument("--map2", help="second map name (yau-twist)")
    sp.add_argument("--power", type=int, help="twist power (power-twist)")
    sp.add_argument("--assoc", help="commutative algebra name (tensor)")
    sp.add_argument("--bihom-assoc", help="twisted product algebra name (lie-from-assoc)")
    sp.add_argument("--slot", type=int, help="bracket slot (semi-twist)")
    sp.add_argument("--slots", help="one or two comma-separated slots (averaging-twist)")
    sp.add_argument("--module", help="module name (semidirect)")
    sp.add_argument("--mode", choices=("split", "summed"), default="split")
    sp.add_argument("--name", dest="result_name", default="constructed",
                    help="name of the algebra in the output document")

    sp = common(sub.add_parser("report-all", help="every check on the document"))
    sp.add_argument("--figures", help="directory for PNG figures")
    sp.add_argument("--depth", type=int, default=3)
    return p


def _emit(report: Report, args) -> int:
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code()


def _check_algebra_into(report: Report, doc: DefinitionDocument, name: str):
    L = doc.algebra(name)
    report.add_axiom_report(f"check:{name}", check_axioms(L))
    report.add_axiom_report(f"check:{name}", check_jacobi_alternate(L))


def _cmd_check(args, doc: DefinitionDocument, report: Report) -> int:
    names = [args.algebra] if args.algebra else sorted(doc.algebras)
    for name in names:
        _check_algebra_into(report, doc, name)
    return _emit(report, args)


def _cmd_check_module(args, doc: DefinitionDocument, report: Report) -> int:
    names = [args.module] if args.module else sorted(doc.modules)
    for name in names:
        M = doc.module(name)
        report.add_axiom_report(f"check-module:{name}", check_module_axioms(M))
    return _emit(report, args)


def _cmd_sequences(args, doc: DefinitionDocument, report: Report) -> int:
    L = doc.algebra(args.algebra)
    der = derived_sequence(L, args.depth)
    cen = central_sequence(L, args.depth)
    section = f"sequences:{args.algebra}"
    for m, sub in enumerate(der):
        report.add(section, f"derived[{m}]", "info", f"dim={sub.dim}")
    for m, sub in enumerate(cen):
        report.add(section, f"central[{m}]", "info", f"dim={sub.dim}")
    report.add_axiom_report(section, check_ideal_theorem(L, args.depth))
    return _emit(report, args)


def _cmd_center(args, doc: DefinitionDocument, report: Report) -> int:
    L = doc.algebra(args.algebra)
    section = f"center:{args.algebra}"
    z = center(L)
    report.add(section, "center", "info", f"dim={z.dim}")
    za = ab_center(L)
    report.add(section, "twisted-center", "info", f"dim={za.dim}")
    if args.subspace:
        H = doc.subspace_for(args.subspace, args.algebra)
        zh = centralizer(L, H)
        report.add(section, f"centralizer:{args.subspace}", "info", f"dim={zh.dim}")
    return _emit(report, args)


def _matrix_text(m) -> str:
    return "[" + "; ".join(
        " ".join(str(m[i, j]) for j in range(m.cols)) for i in range(m.rows)
    ) + "]"


def _cmd_solve(args, doc: DefinitionDocument, report: Report) -> int:
    L = doc.algebra(args.algebra)
    sv = OperatorSolver(L, relaxed_slot=args.relaxed_slot)
    if args.k is not None or args.r is not None:
        if args.k is None or args.r is None:
            raise DocumentError("--k and --r must be given together", "solve")
        pairs = ((args.k, args.r),)
    else:
        pairs = _parse_queries(args.queries)
    if args.degree:
        degrees = [L.group.element([int(c) for c in args.degree.split(",")])]
    else:
        degrees = sv.degrees
    section = f"solve:{args.algebra}:{args.kind}"
    for (k, r) in pairs:
        for d in degrees:
            label = f"k={k},r={r},degree={list(d.coords)}"
            if args.kind == "qder":
                sol = sv.qder(k, r, d)
                report.add(section, label, "info",
                           f"joint-dim={sol.dim} projection-dim={sol.projection.dim}")
                for t, pair in enumerate(sol.pairs):
                    report.add(section, f"{label}:basis[{t}]", "info",
                               f"D={_matrix_text(pair.primary.matrix)} "
                               f"D'={_matrix_text(pair.associated.matrix)}")
            elif args.kind == "gder":
                sol = sv.gder(k, r, d)
                report.add(section, label, "info",
                           f"joint-dim={sol.dim} projection-dim={sol.projection.dim}")
                for t, tup in enumerate(sol.tuples):
                    report.add(section, f"{label}:basis[{t}]", "info",
                               " ".join(_matrix_text(m.matrix) for m in tup.maps))
            else:
                basis = sv.space(args.kind, k, r, d)
                report.add(section, label, "info", f"dim={basis.dim}")
                for t, hm in enumerate(basis.maps):
                    report.add(section, f"{label}:basis[{t}]", "info",
                               _matrix_text(hm.matrix))
    return _emit(report, args)


def _cmd_closure(args, doc: DefinitionDocument, report: Report) -> int:
    L = doc.algebra(args.algebra)
    pairs = _parse_queries(args.queries)
    sv = OperatorSolver(L, relaxed_slot=args.relaxed_slot)
    props = CLOSURE_PROPERTIES if args.property == "all" else (args.property,)
    for prop in props:
        rep = closure_check(L, prop, pairs, sv)
        report.add_axiom_report(f"closure:{args.algebra}", rep)
    return _emit(report, args)


def _run_construction(args, doc: DefinitionDocument):
    name = args.name

    def need(value, flag):
        if value is None:
            raise DocumentError(f"construct {name} needs {flag}", "construct")
        return value

    if name == "lie-from-assoc":
        A = doc.bihom_assoc(need(args.bihom_assoc, "--bihom-assoc"))
        return lie_from_bihom_assoc(A)
    L = doc.algebra(need(args.algebra, "--algebra"))
    if name == "quotient":
        I = doc.subspace_for(need(args.ideal, "--ideal"), args.algebra)
        return quotient(L, I)
    if name == "reduce-arity":
        idx = [int(x) for x in need(args.us, "--us").split(",")]
        us = [L.units[i] for i in idx]
        return reduce_arity(L, us)
    if name == "yau-twist":
        f = doc.map_for(need(args.map_name, "--map"), args.algebra)
        g = doc.map_for(need(args.map2, "--map2"), args.algebra)
        return yau_twist(L, f, g)
    if name == "power-twist":
        return power_twist(L, need(args.power, "--power"))
    if name == "tensor":
        A = doc.assoc(need(args.assoc, "--assoc"))
        return tensor_with_commutative(A, L)
    if name == "direct-sum":
        L2 = doc.algebra(need(args.other, "--other"))
        return direct_sum(L, L2)
    if name == "semi-twist":
        g = doc.map_for(need(args.map_name, "--map"), args.algebra)
        return semi_morphism_twist(L, g, need(args.slot, "--slot"),
                                   strict=not args.relaxed_slot)
    if name == "averaging-twist":
        g = doc.map_for(need(args.map_name, "--map"), args.algebra)
        slots = [int(x) for x in need(args.slots, "--slots").split(",")]
        return averaging_twist(L, g, slots)
    if name == "t-extension":
        return t_extension(L)
    if name == "semidirect":
        M = doc.module(need(args.module, "--module"))
        return semidirect_algebra(L, M, args.mode, args.override_grading)
    raise AssertionError("unreachable")


def _cmd_construct(args, doc: DefinitionDocument, report: Report) -> int:
    section = f"construct:{args.name}"
    try:
        result = _run_construction(args, doc)
    except ConstructionError as exc:
        report.add(section, "hypotheses", "error", str(exc))
        _emit(report, args)
        return EXIT_VALIDATION
    report.add(section, "hypotheses", PASS, "construction hypotheses hold")
    rep = check_axioms(result)
    report.add_axiom_report(section, rep)
    if args.output:
        out_doc = DefinitionDocument(result.group, result.eps,
                                     algebras={args.result_name: result})
        dump(out_doc, args.output)
        report.add(section, "written", "info", args.output)
        args = argparse.Namespace(**{**vars(args), "output": None})
    return _emit(report, args)


def _cmd_report_all(args, doc: DefinitionDocument, report: Report) -> int:
    pairs = _parse_queries(args.queries)
    solve_dims: dict[str, int] = {}
    seq_dims: dict[str, tuple[list[int], list[int]]] = {}
    for name in sorted(doc.algebras):
        L = doc.algebras[name]
        _check_algebra_into(report, doc, name)
        report.add_axiom_report(f"check:{name}", check_multiplicative(L))
        section = f"sequences:{name}"
        der = derived_sequence(L, args.depth)
        cen = central_sequence(L, args.depth)
        for m, sub in enumerate(der):
            report.add(section, f"derived[{m}]", "info", f"dim={sub.dim}")
        for m, sub in enumerate(cen):
            report.add(section, f"central[{m}]", "info", f"dim={sub.dim}")
        seq_dims[name] = ([s.dim for s in der], [s.dim for s in cen])
        report.add_axiom_report(section, check_ideal_theorem(L, args.depth))
        report.add(f"center:{name}", "center", "info", f"dim={center(L).dim}")
        report.add(f"center:{name}", "twisted-center", "info",
                   f"dim={ab_center(L).dim}")
        mult_ok = check_multiplicative(L).all_pass
        if not mult_ok:
            report.add(f"solve:{name}", "operator-spaces", HYPOTHESIS_NOT_MET,
                       "algebra is not multiplicative")
            continue
        sv = OperatorSolver(L, relaxed_slot=args.relaxed_slot)
        for kind in ("der", "c", "qc", "zder"):
            for (k, r) in pairs:
                total = sum(sv.space(kind, k, r, d).dim for d in sv.degrees)
                solve_dims[f"{name}:{kind}({k},{r})"] = total
                report.add(f"solve:{name}", f"{kind}[{k},{r}]", "info",
                           f"total-dim={total}")
        for (k, r) in pairs:
            qtotal = sum(sv.qder(k, r, d).projection.dim for d in sv.degrees)
            gtotal = sum(sv.gder(k, r, d).projection.dim for d in sv.degrees)
            solve_dims[f"{name}:qder({k},{r})"] = qtotal
            solve_dims[f"{name}:gder({k},{r})"] = gtotal
            report.add(f"solve:{name}", f"qder[{k},{r}]", "info",
                       f"projection-dim={qtotal}")
            report.add(f"solve:{name}", f"gder[{k},{r}]", "info",
                       f"projection-dim={gtotal}")
        for prop in CLOSURE_PROPERTIES:
            rep = closure_check(L, prop, pairs, sv)
            report.add_axiom_report(f"closure:{name}", rep)
    for name in sorted(doc.modules):
        report.add_axiom_report(f"check-module:{name}",
                                check_module_axioms(doc.modules[name]))
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        dims_path = os.path.join(args.figures, "operator_dims.png")
        render_operator_dims_figure(dims_path, solve_dims)
        report.add("figures", "operator_dims", "info", dims_path)
        for name, (der_d, cen_d) in sorted(seq_dims.items()):
            seq_path = os.path.join(args.figures, f"sequences_{name}.png")
            render_sequence_figure(seq_path, der_d, cen_d)
            report.add("figures", f"sequences_{name}", "info", seq_path)
    return _emit(report, args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = load(args.input)
    except DocumentError as exc:
        sys.stderr.write(f"colorlie: {exc}\n")
        return EXIT_PARSE if exc.category == "parse" else EXIT_VALIDATION
    report = Report(
        tool_version=__version__,
        command=args.command if args.command != "construct" else f"construct {args.name}",
        input_digest=doc.digest,
    )
    handlers = {
        "check": _cmd_check,
        "check-module": _cmd_check_module,
        "sequences": _cmd_sequences,
        "center": _cmd_center,
        "solve": _cmd_solve,
        "closure": _cmd_closure,
        "construct": _cmd_construct,
        "report-all": _cmd_report_all,
    }
    try:
        return handlers[args.command](args, doc, report)
    except (DocumentError, ConstructionError, ValueError) as exc:
        sys.stderr.write(f"colorlie: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
