"""Command-line front end.

Verbs: info, pci, diagram, irreps, chartable, fclasses, cyclic, abelian,
verify.  Groups come from the catalog (--catalog) or a presentation file
(--file); cyclic/abelian take --n / --invariants.  Output is text, json, or
dot; --mode modl stops after the modular phase.  Identical invocations
produce byte-identical output; SOLVAREP_PRIME or --prime pins the modular
prime for reproducibility studies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import abelian as ab
from .catalog import catalog, catalog_names
from .cyclo import CyclotomicField
from .fclass import (
    FieldDescriptor,
    f_conjugacy_classes,
    galois_orbit_sum_pcis,
    pci_from_character_row,
    reduced_f_character_table,
)
from .galg import NotProportional
from .pcgroup import ParseError, PresentationError, build_group, parse_presentation
from .pci import (
    DiagramError,
    build_exact_diagram,
    build_modular_diagram,
    gz_generators,
    select_prime,
)
from .repbuilder import all_irreps, character_of, verify_rep


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _load_group(args):
    if getattr(args, "catalog", None):
        try:
            pres = catalog(args.catalog)
        except KeyError as exc:
            raise CliError("unknown-catalog", str(exc.args[0]))
    elif getattr(args, "file", None):
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError("unreadable-file", str(exc))
        try:
            pres = parse_presentation(text)
        except ParseError as exc:
            raise CliError("parse-error", str(exc))
    else:
        raise CliError("missing-group", "give --catalog NAME or --file PATH")
    try:
        return build_group(pres)
    except PresentationError as exc:
        raise CliError("bad-presentation", str(exc))


def _prime_override(args):
    if getattr(args, "prime", None):
        return args.prime
    env = os.environ.get("SOLVAREP_PRIME")
    return int(env) if env else None


def _field(args) -> FieldDescriptor:
    try:
        return FieldDescriptor.parse(getattr(args, "field"))
    except ValueError as exc:
        raise CliError("bad-field", str(exc))


def _scalar_str(value, digits: int | None):
    if digits is None:
        return value.text() if hasattr(value, "text") else str(value)
    z = value.embed_numeric()
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


# -- verb implementations -------------------------------------------------------


def cmd_info(args):
    g = _load_group(args)
    classes = g.conjugacy_classes()
    doc = {
        "name": g.presentation.name,
        "order": g.order,
        "chain_primes": g.primes,
        "generators": g.presentation.gens,
        "exponent": g.exponent,
        "conjugacy_classes": len(classes),
        "class_sizes": sorted(len(c) for c in classes),
        "suggested_prime": select_prime(g),
    }
    if args.format == "json":
        return doc
    lines = [f"{k}: {v}" for k, v in doc.items()]
    return "\n".join(lines) + "\n"


def _diagram_for(args, g):
    prime = _prime_override(args)
    if args.mode == "modl":
        return build_modular_diagram(g, prime)
    return build_exact_diagram(g, prime=prime)


def cmd_pci(args):
    g = _load_group(args)
    diagram = _diagram_for(args, g)
    if args.format == "json":
        return {
            "group": g.presentation.name,
            "mode": args.mode,
            "pcis": [n.idempotent.to_json() for n in diagram.leaves],
            "degrees": diagram.degrees(),
        }
    lines = [f"# primitive central idempotents of {g.presentation.name}"
             f" ({args.mode} mode)"]
    if diagram.backend.kind == "cyclotomic" and diagram.backend.level > 1:
        lines.append(f"# z = zeta_{diagram.backend.level}")
    for n in diagram.leaves:
        terms = " + ".join(n.idempotent.term_strings()) or "0"
        lines.append(f"{n.node_id} (degree {n.degree}): {terms}")
    return "\n".join(lines) + "\n"


def _diagram_doc(diagram):
    return {
        "group": diagram.group.presentation.name,
        "levels": [
            [
                {
                    "id": n.node_id,
                    "degree": n.degree,
                    "parents": [f"n{n.level - 1}_{p}" for p in n.parents],
                    "trivial": n.is_trivial,
                    "idempotent": n.idempotent.to_json(),
                }
                for n in level
            ]
            for level in diagram.levels
        ],
    }


def _diagram_dot(diagram, labels=None):
    lines = ["graph pci_diagram {", "  rankdir=BT;"]
    for level in diagram.levels:
        ids = "; ".join(n.node_id for n in level)
        lines.append(f"  {{ rank=same; {ids}; }}")
    for level in diagram.levels:
        for n in level:
            label = labels[n.node_id] if labels else f"{n.node_id} (d={n.degree})"
            lines.append(f'  {n.node_id} [label="{label}"];')
            for p in n.parents:
                lines.append(f"  n{n.level - 1}_{p} -- {n.node_id};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_diagram(args):
    g = _load_group(args)
    diagram = _diagram_for(args, g)
    if args.format == "json":
        return _diagram_doc(diagram)
    if args.format == "dot":
        return _diagram_dot(diagram)
    lines = [f"PCI-diagram of {g.presentation.name}"]
    for level in diagram.levels:
        row = ", ".join(f"{n.node_id}(d={n.degree})" for n in level)
        lines.append(f"  level {level[0].level if level else '?'}: {row}")
    return "\n".join(lines) + "\n"


def cmd_irreps(args):
    g = _load_group(args)
    if args.mode == "modl":
        raise CliError("bad-mode", "representations need the cyclotomic mode")
    diagram = _diagram_for(args, g)
    reps = all_irreps(g, diagram)
    if args.format == "json":
        return {"group": g.presentation.name, "irreps": [r.to_json() for r in reps]}
    lines = [f"# irreducible representations of {g.presentation.name}"]
    level = reps[0].backend.level
    if level > 1 and args.digits is None:
        lines.append(f"# z = zeta_{level}")
    for rep in reps:
        lines.append(f"{rep.leaf.node_id}: degree {rep.degree}")
        for name in g.presentation.gens:
            m = rep.matrices[name]
            rows = [
                "[" + ", ".join(_scalar_str(v, args.digits) for v in row) + "]"
                for row in m.entries
            ]
            lines.append(f"  {name} -> " + "; ".join(rows))
    return "\n".join(lines) + "\n"


def cmd_chartable(args):
    g = _load_group(args)
    field = _field(args)
    diagram = build_exact_diagram(g, prime=_prime_override(args))
    try:
        table = reduced_f_character_table(g, field, diagram)
    except ValueError as exc:
        raise CliError("bad-field", str(exc))
    if args.format == "json":
        return table.to_json()
    return table.to_text()


def cmd_fclasses(args):
    g = _load_group(args)
    field = _field(args)
    try:
        fcl = f_conjugacy_classes(g, field)
    except ValueError as exc:
        raise CliError("bad-field", str(exc))
    if args.format == "json":
        return {
            "group": g.presentation.name,
            "field": field.label(),
            "classes": [
                {
                    "representative": g.element_name(c.representative),
                    "size": len(c),
                    "members": [g.element_name(m) for m in c.members],
                    "exponents": list(c.exponents),
                }
                for c in fcl
            ],
        }
    lines = [f"# {field.label()}-conjugacy classes of {g.presentation.name}"]
    for c in fcl:
        members = ", ".join(g.element_name(m) for m in c.members)
        lines.append(f"[{g.element_name(c.representative)}] size {len(c)}: {members}")
    return "\n".join(lines) + "\n"


def cmd_cyclic(args):
    field = _field(args)
    n = args.n
    if n < 1:
        raise CliError("bad-order", "n must be positive")
    try:
        if args.action == "factor":
            facs = ab.factor_xn_minus_1(n, field)
        elif args.action == "cyclotomic":
            facs = ab.factor_cyclotomic(n, field)
        else:
            facs = None
    except ValueError as exc:
        raise CliError("bad-field", str(exc))
    if args.action in ("factor", "cyclotomic"):
        if args.format == "json":
            return {
                "n": n,
                "field": field.label(),
                "factors": [f.to_json() for f in facs],
            }
        lines = [f"# factors over {field.label()}"]
        lines += [f.text() for f in facs]
        return "\n".join(lines) + "\n"
    if args.action == "irreps":
        reps = ab.cyclic_irreps(n, field)
        if args.format == "json":
            return {
                "n": n,
                "field": field.label(),
                "irreps": [
                    {
                        "factor": r.factor.to_json(),
                        "degree": r.degree,
                        "faithful": r.faithful,
                        "matrix": r.matrix.to_json(),
                    }
                    for r in reps
                ],
            }
        lines = [f"# irreducible representations of C_{n} over {field.label()}"]
        for r in reps:
            tag = "faithful" if r.faithful else "non-faithful"
            lines.append(f"degree {r.degree} ({tag}): {r.factor.text()}")
        return "\n".join(lines) + "\n"
    if args.action == "pci":
        es = [ab.pci_from_factor(f, n, field) for f in ab.factor_xn_minus_1(n, field)]
        if args.format == "json":
            return {"n": n, "field": field.label(),
                    "idempotents": [e.to_json() for e in es]}
        lines = [f"# primitive central idempotents of {field.label()}[C_{n}]"]
        for e in es:
            lines.append(" + ".join(e.term_strings()))
        return "\n".join(lines) + "\n"
    raise CliError("bad-action", f"unknown cyclic action {args.action!r}")


def cmd_abelian(args):
    try:
        invariants = [int(t) for t in args.invariants.split(",") if t.strip()]
    except ValueError:
        raise CliError("bad-invariants", "expected a comma-separated integer list")
    if not invariants:
        raise CliError("bad-invariants", "empty invariant list")
    shapes = ab.abelian_shapes(invariants)
    field = _field(args)
    if args.action == "wedderburn":
        if field.kind != "Q":
            raise CliError("bad-field", "wedderburn counts are rational-field data")
        counts = ab.wedderburn_counts(shapes)
        if args.format == "json":
            return [s.to_json() for s in counts]
        lines = ["# Q[G] = sum of f_d copies of Q(zeta_d)"]
        for s in counts:
            lines.append(f"d={s.d}: {s.copies} x Q(zeta_{s.d})")
        return "\n".join(lines) + "\n"
    if args.action == "quotients":
        quots = ab.cyclic_quotients(shapes)
        if args.format == "json":
            return [{"d": d, "kernel_size": len(k)} for k, d in quots]
        lines = ["# cyclic quotients (kernel size, quotient order)"]
        for k, d in quots:
            lines.append(f"|H|={len(k)} -> C_{d}")
        return "\n".join(lines) + "\n"
    if args.action == "irreps":
        reps = ab.abelian_irreps(shapes, field)
        if args.format == "json":
            return {
                "invariants": invariants,
                "field": field.label(),
                "irreps": [
                    {
                        "quotient": r.quotient_order,
                        "degree": r.degree,
                        "factor": r.factor.to_json(),
                        "matrices": [m.to_json() for m in r.matrices],
                    }
                    for r in reps
                ],
            }
        lines = [f"# irreducible representations over {field.label()}"]
        for r in reps:
            lines.append(
                f"through C_{r.quotient_order}, degree {r.degree}: {r.factor.text()}"
            )
        return "\n".join(lines) + "\n"
    if args.action == "diagram":
        if len(shapes) != 1:
            raise CliError("bad-invariants",
                           "the rational rules diagram needs a p-group")
        if field.kind != "Q":
            raise CliError("bad-field", "the rules diagram is rational-field data")
        diagram = ab.pgroup_pci_diagram_Q(shapes[0])
        if args.format == "json":
            return {
                "group": diagram.presentation.name,
                "levels": [
                    [
                        {
                            "id": f"n{n.level}_{n.index}",
                            "label": n.product.label(diagram.group),
                            "parents": [f"n{n.level - 1}_{p}" for p in n.parents],
                            "idempotent": n.element.to_json(),
                        }
                        for n in level
                    ]
                    for level in diagram.levels
                ],
            }
        if args.format == "dot":
            labels = {
                f"n{n.level}_{n.index}": n.product.label(diagram.group)
                for level in diagram.levels
                for n in level
            }
            fake = _RuleDiagramView(diagram)
            return _diagram_dot(fake, labels)
        lines = [f"# rational PCI-diagram of {diagram.presentation.name}"]
        for level in diagram.levels:
            row = ", ".join(n.product.label(diagram.group) for n in level)
            lines.append(f"  stage {level[0].level if level else 0}: {row}")
        return "\n".join(lines) + "\n"
    raise CliError("bad-action", f"unknown abelian action {args.action!r}")


class _RuleDiagramView:
    """Adapter so rule diagrams render through the shared DOT writer."""

    def __init__(self, diagram):
        self.levels = [
            [_RuleNodeView(n) for n in level] for level in diagram.levels
        ]


class _RuleNodeView:
    def __init__(self, node):
        self.level = node.level
        self.index = node.index
        self.degree = 1
        self.parents = node.parents
        self.node_id = f"n{node.level}_{node.index}"


def cmd_verify(args):
    g = _load_group(args)
    diagram = _diagram_for(args, g)
    report = {"group": g.presentation.name, "order": g.order,
              "mode": args.mode, "leaves": len(diagram.leaves),
              "degree_square_sum": sum(d * d for d in diagram.degrees())}
    checks = []
    checks.append(("leaf count equals class count",
                   len(diagram.leaves) == len(g.conjugacy_classes())))
    checks.append(("sum d^2 equals |G|", report["degree_square_sum"] == g.order))
    if args.mode != "modl":
        reps = all_irreps(g, diagram)
        for rep in reps:
            rr = verify_rep(rep, g)
            checks.append((f"{rep.leaf.node_id} degree {rep.degree} relations+diag",
                           rr.ok))
        rows = [tuple(character_of(r)) for r in reps]
        checks.append(("characters pairwise distinct", len(set(rows)) == len(rows)))
        gens = gz_generators(g, diagram.backend)
        commuting = all(
            a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:]
        )
        checks.append(("chain class sums commute", commuting))
    ok = all(flag for _, flag in checks)
    if args.format == "json":
        report["checks"] = [{"name": n, "ok": v} for n, v in checks]
        report["ok"] = ok
        return report
    lines = [f"verify {g.presentation.name} ({args.mode} mode)"]
    for name, flag in checks:
        lines.append(f"  [{'PASS' if flag else 'FAIL'}] {name}")
    lines.append("OK" if ok else "FAILED")
    if not ok:
        raise CliError("verify-failed", "\n".join(lines))
    return "\n".join(lines) + "\n"


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="solvarep",
        description="exact representations of solvable groups from long presentations",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    def common(p, mode=True, field=None):
        p.add_argument("--catalog", help="catalog name: " + ", ".join(catalog_names()))
        p.add_argument("--file", help="presentation file (DSL)")
        p.add_argument("--format", choices=("text", "json", "dot"), default="text")
        p.add_argument("--prime", type=int, help="pin the modular prime")
        p.add_argument("--digits", type=int, default=None,
                       help="render scalars numerically with this precision")
        if mode:
            p.add_argument("--mode", choices=("modl", "cyclotomic"),
                           default="cyclotomic")
        if field:
            p.add_argument("--field", default=field,
                           help="Q | R | C | F:q (default %(default)s)")

    p = sub.add_parser("info", help="group facts")
    common(p, mode=False)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("pci", help="primitive central idempotents")
    common(p, field="C")
    p.set_defaults(func=cmd_pci)

    p = sub.add_parser("diagram", help="the PCI-diagram")
    common(p, field="C")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("irreps", help="irreducible matrix representations")
    common(p, field="C")
    p.set_defaults(func=cmd_irreps)

    p = sub.add_parser("chartable", help="reduced F-character table")
    common(p, mode=False, field="Q")
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("fclasses", help="F-conjugacy classes")
    common(p, mode=False, field="Q")
    p.set_defaults(func=cmd_fclasses)

    p = sub.add_parser("cyclic", help="cyclic-group toolkit")
    p.add_argument("action", choices=("factor", "cyclotomic", "irreps", "pci"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", default="Q")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("abelian", help="abelian-group toolkit")
    p.add_argument("action", choices=("irreps", "diagram", "wedderburn", "quotients"))
    p.add_argument("--invariants", required=True,
                   help="comma-separated cyclic factor orders, e.g. 4,2")
    p.add_argument("--field", default="Q")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.set_defaults(func=cmd_abelian)

    p = sub.add_parser("verify", help="run the verification battery")
    common(p, field="C")
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
    except CliError as exc:
        _emit_error(args, exc.code, str(exc))
        return 1
    except (DiagramError, PresentationError, NotProportional, ValueError) as exc:
        _emit_error(args, "domain-error", str(exc))
        return 1
    if isinstance(doc, (dict, list)):
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(doc)
    return 0


def _emit_error(args, code: str, message: str) -> None:
    if getattr(args, "format", "text") == "json":
        sys.stdout.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")
    else:
        sys.stderr.write(f"error [{code}]: {message}\n")


if __name__ == "__main__":
    sys.exit(main())
