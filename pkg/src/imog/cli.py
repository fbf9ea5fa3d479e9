"""Command line front end.

Exit codes: 0 on success, 1 when the model has validation errors, 2 for
usage problems (unknown ids, bad filters, analysis caps), 3 when the file
cannot be read or is not a well-formed document. Output is deterministic:
the same invocation on the same file prints the same bytes.

The IMOG_CAP environment variable overrides the block cap that exhaustive
configuration analysis is willing to handle (default 64).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fp, sp, trace
from .diagnostics import (
    Diagnostic,
    InvalidModelError,
    Severity,
    diagnostic_to_obj,
    has_errors,
)
from .document import (
    DocumentSyntaxError,
    DuplicateIdError,
    SchemaError,
    canonical_json,
    emit_requirement,
    parse_document,
)
from .dot import EmptyPerspectiveError, PERSPECTIVES, export_dot
from .elements import AbstractionLevel, Model, PREDEFINED_LEVEL_NAMES, iter_elements
from .sp import IllegalSelectionError
from .trace import UnknownFieldError
from .validate import EmptyFilterError, NotFoundError, filter_by_abstraction_level, validate_model


def _block_cap() -> int:
    raw = os.environ.get("IMOG_CAP", "")
    return int(raw) if raw else fp.DEFAULT_BLOCK_CAP


def _load(path: str) -> Model:
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read())


def _project(model: Model, args) -> Model:
    """Apply any --level filters, refusing level names the model cannot match."""
    names = getattr(args, "level", None)
    if not names:
        return model
    known = set(PREDEFINED_LEVEL_NAMES)
    for _, _, _, element in iter_elements(model):
        level = getattr(element, "level", None)
        if level is not None:
            known.add(level.name)
    for name in names:
        if name not in known:
            raise ValueError(f"unknown abstraction level: {name!r}")
    return filter_by_abstraction_level(model, tuple(AbstractionLevel(n) for n in names))


def _prepare(args) -> Model:
    """Load, optionally filter by level, and refuse models with errors."""
    model = _project(_load(args.file), args)
    diags = validate_model(model)
    if has_errors(diags):
        raise InvalidModelError(diags)
    return model


def _diag_line(diag: Diagnostic) -> str:
    return f"[{diag.severity.value}] {diag.code} {diag.element_id or '-'}: {diag.message}"


def _print_json(obj) -> None:
    sys.stdout.write(canonical_json(obj))


def _print_lines(lines) -> None:
    for line in lines:
        print(line)


# ---------------------------------------------------------------------------
# Subcommand handlers

def _cmd_validate(args) -> int:
    model = _project(_load(args.file), args)
    diags = validate_model(model)
    errors = sum(1 for d in diags if d.severity is Severity.ERROR)
    warnings = sum(1 for d in diags if d.severity is Severity.WARNING)
    if args.format == "json":
        _print_json({"diagnostics": [diagnostic_to_obj(d) for d in diags],
                     "errors": errors, "warnings": warnings})
    else:
        _print_lines(_diag_line(d) for d in diags)
        print(f"{errors} errors, {warnings} warnings")
    return 1 if errors else 0


def _tree(args) -> fp.BasicFeatureTree:
    model = _prepare(args)
    return fp.normalize(model, groups_enabled=args.groups == "on")


def _cmd_fp_count(args) -> int:
    count = fp.count_configurations(_tree(args), block_cap=_block_cap())
    if args.format == "json":
        _print_json({"count": count})
    else:
        print(f"{count} configurations")
    return 0


def _cmd_fp_enumerate(args) -> int:
    result = fp.enumerate_configurations(_tree(args), cap=args.cap, block_cap=_block_cap())
    if args.format == "json":
        _print_json(fp.enumeration_to_obj(result))
    else:
        if not result.configurations:
            print("no configurations")
        for config in result.configurations:
            print(" ".join(sorted(config.selected)))
        if result.truncated:
            print("truncated")
    return 0


def _cmd_fp_dead(args) -> int:
    dead = fp.dead_blocks(_tree(args), block_cap=_block_cap())
    if args.format == "json":
        _print_json({"dead": list(dead)})
    else:
        _print_lines(dead if dead else ("none",))
    return 0


def _cmd_fp_void(args) -> int:
    void = fp.is_void(_tree(args), block_cap=_block_cap())
    if args.format == "json":
        _print_json({"void": void})
    else:
        print("void" if void else "not void")
    return 0


def _cmd_fp_propagate(args) -> int:
    decisions = {b: fp.DecisionState.IN for b in args.set_in or ()}
    decisions.update({b: fp.DecisionState.OUT for b in args.set_out or ()})
    result = fp.propagate(_tree(args), decisions, block_cap=_block_cap())
    if args.format == "json":
        _print_json(fp.propagation_to_obj(result))
    elif result.conflict is not None:
        print(f"conflict: {result.conflict.message}")
    else:
        print("forced in: " + (" ".join(sorted(result.forced_in)) or "-"))
        print("forced out: " + (" ".join(sorted(result.forced_out)) or "-"))
    return 0


def _parse_pairs(rows, flag: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for row in rows or ():
        left, sep, right = row.partition("=")
        if not sep or not left or not right:
            raise ValueError(f"{flag} expects OWNER=CHOICE, got {row!r}")
        out[left] = right
    return out


def _cmd_sp_resolve(args) -> int:
    model = _prepare(args)
    selection = sp.SelectionState(
        variant_choices=_parse_pairs(args.variant, "--variant"),
        refinement_choices=_parse_pairs(args.refine, "--refine"),
    )
    effective = sp.resolve_effective_block(model, args.block, selection)
    diags = sp.check_sp_consistency(model, selection, block_ids=frozenset({args.block}))
    if args.format == "json":
        _print_json({"block": sp.effective_block_to_obj(effective),
                     "diagnostics": [diagnostic_to_obj(d) for d in diags]})
        return 0
    print(f"{effective.name} ({effective.id}) [{effective.level.name}]")
    if effective.stereotype:
        print(f"stereotype: {effective.stereotype}")
    for prop in effective.properties:
        unit = f" {prop.unit}" if prop.unit else ""
        print(f"  {prop.name} = {prop.value}{unit} ({prop.origin.value})")
    if effective.sse is not None:
        print("  behaviour in: " + (", ".join(effective.sse.input_properties) or "-"))
        print("  behaviour out: " + (", ".join(effective.sse.output_properties) or "-"))
    if effective.decomposition.blocks:
        print("  contains: " + ", ".join(b.id for b in effective.decomposition.blocks))
    for group in effective.refinement_groups:
        chosen = group.selected_refinement or "-"
        print(f"  refinement {group.name}: {chosen}")
    if effective.internal_model_refs:
        print("  refs: " + ", ".join(effective.internal_model_refs))
    print("  provenance: " + " -> ".join(effective.provenance))
    _print_lines(_diag_line(d) for d in diags)
    return 0


def _cmd_trace_report(args) -> int:
    model = _prepare(args)
    report = trace.build_trace_report(model)
    if args.format == "json":
        _print_json(trace.trace_report_to_obj(report))
        return 0
    print("unallocated functions: " + (" ".join(report.unallocated_functions) or "-"))
    print("unallocated features: " + (" ".join(report.unallocated_features) or "-"))
    print("dangling links: " + (" ".join(report.dangling_links) or "-"))
    print("orphan requirements: " + (" ".join(report.orphan_requirements) or "-"))
    print("knowledge reuse: "
          + (" ".join(f"{b}->{e}" for b, e in report.knowledge_reuse) or "-"))
    return 0


def _cmd_qp_query(args) -> int:
    model = _prepare(args)
    predicates = [trace.parse_predicate(row) for row in args.where or ()]
    rows = trace.query_requirements(model, predicates, conjunctive=not args.any)
    if args.format == "json":
        _print_json({"requirements": [emit_requirement(r) for r in rows]})
        return 0
    for req in rows:
        print(f"{req.id}: {req.name} [sat {req.satisfiability:g}, {req.status}]")
    return 0


def _cmd_export_dot(args) -> int:
    model = _prepare(args)
    sys.stdout.write(export_dot(model, args.perspective))
    return 0


def _cmd_serve(args) -> int:
    from . import service

    service.serve(args.file, host=args.host, port=args.port,
                  groups_enabled=args.groups == "on", block_cap=_block_cap(),
                  ui_dir=args.ui, persist=not args.read_only)
    return 0


# ---------------------------------------------------------------------------
# Parser

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", help="model document to load")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--level", action="append", metavar="NAME",
                        help="keep only these abstraction levels (repeatable)")


def _add_groups(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--groups", choices=("on", "off"), default="off",
                        help="apply enabled block groups as constraints")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imog",
                                     description="Innovation Modeling Grid tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document and report findings")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    fp_parser = sub.add_parser("fp", help="feature configuration analysis")
    fp_sub = fp_parser.add_subparsers(dest="subcommand", required=True)
    for name, func in (("count", _cmd_fp_count), ("dead", _cmd_fp_dead),
                       ("void", _cmd_fp_void)):
        p = fp_sub.add_parser(name)
        _add_common(p)
        _add_groups(p)
        p.set_defaults(func=func)
    p = fp_sub.add_parser("enumerate")
    _add_common(p)
    _add_groups(p)
    p.add_argument("--cap", type=int, default=None,
                   help="truncate after this many configurations")
    p.set_defaults(func=_cmd_fp_enumerate)
    p = fp_sub.add_parser("propagate")
    _add_common(p)
    _add_groups(p)
    p.add_argument("--in", dest="set_in", action="append", metavar="ID",
                   help="decide this block in (repeatable)")
    p.add_argument("--out", dest="set_out", action="append", metavar="ID",
                   help="decide this block out (repeatable)")
    p.set_defaults(func=_cmd_fp_propagate)

    sp_parser = sub.add_parser("sp", help="structural variant resolution")
    sp_sub = sp_parser.add_subparsers(dest="subcommand", required=True)
    p = sp_sub.add_parser("resolve")
    _add_common(p)
    p.add_argument("block", help="structural block id")
    p.add_argument("--variant", action="append", metavar="BLOCK=VARIANT")
    p.add_argument("--refine", action="append", metavar="GROUP=REFINEMENT")
    p.set_defaults(func=_cmd_sp_resolve)

    trace_parser = sub.add_parser("trace", help="trace link coverage")
    trace_sub = trace_parser.add_subparsers(dest="subcommand", required=True)
    p = trace_sub.add_parser("report")
    _add_common(p)
    p.set_defaults(func=_cmd_trace_report)

    qp_parser = sub.add_parser("qp", help="requirement queries")
    qp_sub = qp_parser.add_subparsers(dest="subcommand", required=True)
    p = qp_sub.add_parser("query")
    _add_common(p)
    p.add_argument("--where", action="append", metavar="FIELD<OP>VALUE",
                   help="filter, e.g. satisfiability>=0.8 (repeatable)")
    p.add_argument("--any", action="store_true",
                   help="match any predicate instead of all")
    p.set_defaults(func=_cmd_qp_query)

    export_parser = sub.add_parser("export", help="render a perspective")
    export_sub = export_parser.add_subparsers(dest="subcommand", required=True)
    p = export_sub.add_parser("dot")
    _add_common(p)
    p.add_argument("--perspective", choices=PERSPECTIVES, required=True)
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("serve", help="serve the model over HTTP")
    p.add_argument("file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8377)
    p.add_argument("--ui", default=None, metavar="DIR",
                   help="directory with static UI files to mount at /")
    p.add_argument("--read-only", action="store_true",
                   help="do not write accepted model updates back to the file")
    _add_groups(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidModelError as exc:
        for diag in exc.diagnostics:
            print(_diag_line(diag), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DocumentSyntaxError, SchemaError, DuplicateIdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NotFoundError, EmptyFilterError, fp.CapExceededError,
            IllegalSelectionError, UnknownFieldError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2
    except (EmptyPerspectiveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
