"""Command-line interface.

Subcommands: ``check``, ``analyze``, ``flow``, ``catalog`` (list / show /
export / verify) and ``extend`` (solvable / general).  Reports print as
text by default or as JSON documents with ``--format json``.  Exit status
is 0 on success or pass, 1 on a verification failure, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


from . import catalog as _catalog
from .bracket import Bracket, check_identities
from .extensions import ExtensionError, build_general_extension, build_solvable_extension
from .fileio import (
    AlgebraFileError,
    algebra_to_dict,
    identity_report_dict,
    load_algebra,
    load_extension_spec,
    moment_report_dict,
    save_algebra,
    structure_profile_dict,
    structure_verdict_dict,
)
from .flow import FlowParams, descend, perturb_in_orbit
from .moment import (
    IrrationalTypeError,
    critical_type,
    criticality_decompose,
)
from .structure import structure_profile, verify_structure_theorem


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _yesno(b: bool) -> str:
    return "yes" if b else "no"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leibcrit",
        description="Moment-map analysis and critical points for complex Leibniz algebras.",
    )
    parser.add_argument("--tol", type=float, default=1e-8,
                        help="criticality tolerance (default 1e-8)")
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default text)")
    parser.add_argument("--max-den", type=int, default=100,
                        help="largest denominator for type reconstruction (default 100)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="identity report for an algebra file")
    p.add_argument("file")

    p = sub.add_parser("analyze", help="moment analysis of an algebra file")
    p.add_argument("file")

    p = sub.add_parser("flow", help="descend F inside the orbit of an algebra file")
    p.add_argument("file")
    p.add_argument("--step0", type=float, default=0.1)
    p.add_argument("--tol", dest="flow_tol", type=float, default=None,
                   help="flow stopping tolerance (defaults to the global --tol)")
    p.add_argument("--max-iter", type=int, default=50_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.0, metavar="M",
                   help="first move the start inside its orbit by this magnitude")

    p = sub.add_parser("catalog", help="built-in algebra catalog")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list", help="list catalog names")
    for verb in ("show", "export"):
        q = csub.add_parser(verb)
        q.add_argument("name")
        if verb == "export":
            q.add_argument("file")
        q.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                       help="family parameter, e.g. alpha=2 or beta=0.25")
        q.add_argument("--n", type=int, default=None, help="ambient dimension for families")
    q = csub.add_parser("verify", help="golden run against the classification table")
    q.add_argument("--tol", dest="verify_tol", type=float, default=None)

    p = sub.add_parser("extend", help="build a higher-dimensional critical point")
    p.add_argument("mode", choices=("solvable", "general"))
    p.add_argument("specfile")
    p.add_argument("-o", "--output", default=None,
                   help="algebra file to write (default: SPECFILE stem + .out.json)")
    return parser


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise AlgebraFileError(f"bad --param {item!r}, expected NAME=VALUE")
        try:
            v = complex(value.replace(" ", ""))
        except ValueError:
            raise AlgebraFileError(f"bad --param value {value!r}") from None
        out[name] = v if v.imag else v.real
    return out


def _analysis_document(mu: Bracket, meta: dict, tol: float, max_den: int) -> dict:
    idr = check_identities(mu)
    rep = criticality_decompose(mu, tol)
    prof = structure_profile(mu)
    doc = {
        "algebra": {"dim": mu.dim, **meta},
        "identities": identity_report_dict(idr),
        "moment": moment_report_dict(rep, max_denominator=max_den),
        "structure": structure_profile_dict(prof),
        "structure_checks": None,
    }
    if rep.is_critical and idr.is_symmetric_leibniz:
        doc["structure_checks"] = structure_verdict_dict(
            verify_structure_theorem(mu, rep, tol)
        )
    return doc


def _print_identities(idr_doc: dict) -> None:
    print(f"left Leibniz:       {_yesno(idr_doc['is_left_leibniz'])}"
          f" (residual {_fmt(idr_doc['left_residual'])})")
    print(f"right Leibniz:      {_yesno(idr_doc['is_right_leibniz'])}"
          f" (residual {_fmt(idr_doc['right_residual'])})")
    print(f"symmetric Leibniz:  {_yesno(idr_doc['is_symmetric_leibniz'])}")
    print(f"Lie:                {_yesno(idr_doc['is_lie'])}"
          f" (anticommutativity {_fmt(idr_doc['anticommutativity_residual'])},"
          f" Jacobi {_fmt(idr_doc['jacobi_residual'])})")


def _print_moment(m: dict) -> None:
    print(f"|mu|^2 = {_fmt(m['norm_sq'])}")
    print(f"F = {_fmt(m['F'])}")
    print(f"tr M = {_fmt(m['trace_M'])}")
    print(f"c = {_fmt(m['c'])}")
    print(f"critical: {_yesno(m['is_critical'])}"
          f" (tangent residual {_fmt(m['residual_tangent'])},"
          f" decomposition residual {_fmt(m['residual_decomp'])})")
    if m["critical_type"]:
        print(f"critical type = {m['critical_type']}  (scale {_fmt(m['type_scale'])})")
    print("D eigenvalues = " + " ".join(_fmt(x) for x in m["D_eigenvalues"]))


def _print_structure(s: dict) -> None:
    print(
        "structure: derived dims "
        + ",".join(str(d) for d in s["derived_dims"])
        + "; lower central "
        + ",".join(str(d) for d in s["lower_central_dims"])
        + f"; center dim {s['center_dim']}"
        + f"; solvable {_yesno(s['is_solvable'])}"
        + f"; nilpotent {_yesno(s['is_nilpotent'])}"
    )


def _print_verdict(v: dict | None) -> None:
    if v is None:
        print("structure checks: not applicable (needs a symmetric Leibniz critical point)")
        return
    print(
        "structure checks: "
        f"adjoint-closed {_yesno(v['adjoint_closed'])}; "
        f"l0 reductive {_yesno(v['l0_reductive'])}; "
        f"center normal {_yesno(v['center_normal'])}; "
        f"nilradical {_yesno(v['nilradical_ok'])}"
        + (" [degenerate: abelian nilradical]" if v["degenerate_abelian_nilradical"] else "")
    )
    if v["restricted_type"]:
        print(f"nilradical type = {v['restricted_type']} (matches {_yesno(v['type_matches'])})")


def _emit_analysis(doc: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2))
        return
    meta = doc["algebra"]
    label = meta.get("name", "algebra")
    print(f"{label} (dim {meta['dim']})")
    _print_identities(doc["identities"])
    _print_moment(doc["moment"])
    _print_structure(doc["structure"])
    _print_verdict(doc["structure_checks"])


def _cmd_check(args) -> int:
    mu, meta = load_algebra(args.file)
    idr = check_identities(mu)
    doc = identity_report_dict(idr)
    if args.format == "json":
        print(json.dumps({"algebra": {"dim": mu.dim, **meta}, "identities": doc}, indent=2))
    else:
        _print_identities(doc)
    return 0


def _cmd_analyze(args) -> int:
    mu, meta = load_algebra(args.file)
    doc = _analysis_document(mu, meta, args.tol, args.max_den)
    _emit_analysis(doc, args.format == "json")
    return 0


def _cmd_flow(args) -> int:
    mu, meta = load_algebra(args.file)
    if args.perturb:
        mu = perturb_in_orbit(mu, args.perturb, args.seed)
    params = FlowParams(
        step0=args.step0,
        max_iter=args.max_iter,
        tol=args.flow_tol if args.flow_tol is not None else args.tol,
        seed=args.seed,
    )
    trace = descend(mu, params)
    final_doc = _analysis_document(trace.final_bracket, meta, params.tol, args.max_den)
    flow_doc = {
        "iterations": trace.iterations,
        "converged": trace.converged,
        "message": trace.message,
        "F_initial": float(trace.F_history[0]),
        "F_final": float(trace.F_history[-1]),
        "residual_final": float(trace.residual_history[-1]),
    }
    if args.format == "json":
        print(json.dumps({"flow": flow_doc, "final": final_doc}, indent=2))
    else:
        print(
            f"flow: {trace.iterations} steps, converged {_yesno(trace.converged)}"
            + (f" ({trace.message})" if trace.message else "")
        )
        print(f"F: {_fmt(flow_doc['F_initial'])} -> {_fmt(flow_doc['F_final'])}"
              f" (residual {_fmt(flow_doc['residual_final'])})")
        _emit_analysis(final_doc, False)
    return 0


def _catalog_entry(args) -> _catalog.CatalogEntry:
    params = _parse_params(args.param)
    return _catalog.get(args.name, params or None, args.n)


def _cmd_catalog(args) -> int:
    if args.catalog_command == "list":
        if args.format == "json":
            print(json.dumps({"names": _catalog.names()}, indent=2))
        else:
            for name in _catalog.names():
                print(name)
        return 0
    if args.catalog_command == "show":
        entry = _catalog_entry(args)
        doc = {
            "label": entry.label,
            "class": entry.algebra_class,
            "dim": entry.dim,
            "expected_type": str(entry.expected_type) if entry.expected_type else None,
            "expected_value": entry.expected_value,
            "critical_in_given_basis": entry.critical_in_given_basis,
            "notes": entry.notes,
            "algebra": algebra_to_dict(entry.bracket, entry.label, entry.params),
        }
        if args.format == "json":
            print(json.dumps(doc, indent=2))
        else:
            print(f"{entry.label}: {entry.algebra_class}, dim {entry.dim}")
            if entry.expected_type is not None:
                print(f"expected type {entry.expected_type}, value {_fmt(entry.expected_value)}"
                      f" ({'direct' if entry.critical_in_given_basis else 'via flow'})")
            else:
                print("expected: no critical point in this orbit")
            if entry.notes:
                print(entry.notes)
            for e in doc["algebra"]["entries"]:
                z = complex(e["re"], e["im"])
                print(f"  c[{e['i']},{e['j']},{e['k']}] = {z if z.imag else _fmt(z.real)}")
        return 0
    if args.catalog_command == "export":
        entry = _catalog_entry(args)
        save_algebra(args.file, entry.bracket, entry.label, entry.params)
        print(f"wrote {args.file}")
        return 0
    # verify
    tol = args.verify_tol if args.verify_tol is not None else args.tol
    rows = _catalog.verify_catalog(tol)
    ok = all(r.passed for r in rows)
    if args.format == "json":
        print(json.dumps({
            "rows": [
                {
                    "label": r.label,
                    "strategy": r.strategy,
                    "computed_type": str(r.computed_type) if r.computed_type else None,
                    "computed_value": r.computed_value,
                    "expected_type": str(r.expected_type) if r.expected_type else None,
                    "expected_value": r.expected_value,
                    "residual": r.residual,
                    "passed": r.passed,
                    "note": r.note,
                }
                for r in rows
            ],
            "all_passed": ok,
        }, indent=2))
    else:
        for r in rows:
            ct = str(r.computed_type) if r.computed_type else "-"
            cv = _fmt(r.computed_value) if r.computed_value is not None else "-"
            et = str(r.expected_type) if r.expected_type else "-"
            ev = _fmt(r.expected_value) if r.expected_value is not None else "-"
            status = "pass" if r.passed else "FAIL"
            print(f"{r.label:16s} {r.strategy:12s} {ct:16s} {cv:>14s}"
                  f"  expected {et:16s} {ev:>14s}  {status}")
        print(f"{'all rows pass' if ok else 'FAILURES present'}")
    return 0 if ok else 1


def _cmd_extend(args) -> int:
    spec = load_extension_spec(args.specfile)
    builder = build_solvable_extension if args.mode == "solvable" else build_general_extension
    out, rep = builder(spec, args.tol)
    t = critical_type(rep.D, max_denominator=args.max_den)
    out_path = args.output
    if out_path is None:
        stem, _ = os.path.splitext(args.specfile)
        out_path = stem + ".out.json"
    save_algebra(out_path, out, name=f"{args.mode} extension")
    doc = {
        "certified": True,
        "mode": args.mode,
        "dim": out.dim,
        "type": str(t),
        "F": rep.F,
        "c": rep.c,
        "residual_tangent": rep.residual_tangent,
        "output_file": out_path,
    }
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"certified critical point: dim {out.dim}, type {t}, "
              f"F = {_fmt(rep.F)}, c = {_fmt(rep.c)}"
              f" (tangent residual {_fmt(rep.residual_tangent)})")
        print(f"wrote {out_path}")
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": _cmd_check,
        "analyze": _cmd_analyze,
        "flow": _cmd_flow,
        "catalog": _cmd_catalog,
        "extend": _cmd_extend,
    }
    try:
        return handlers[args.command](args)
    except ExtensionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (AlgebraFileError, FileNotFoundError, IsADirectoryError, KeyError,
            ValueError, IrrationalTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
