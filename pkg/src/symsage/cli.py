"""Command-line front end.

Subcommands: bound (maximize lambda with f - lambda in the SAGE cone, or
the coefficient multiplier with --maximize-coefficient), member (cone
membership test), sizes (exact program sizes without solving), bench (the
built-in family tables), symmetrize (Reynolds average over a group), export
(canonical conic data as JSON), verify (check a certificate file against a
signomial).  Exit codes: 0 success, 1 negative answer (not a member,
infeasible, failed verification), 2 usage or input error, 3 numerical
failure.
"""

import argparse
import json
import os
import sys

from .bench import render_table, rows_to_jsonl, run_benchmark
from .certificates import ReducedCertificate, extract_certificate, verify_certificate
from .errors import CertificateError, SymsageError
from .families import DEFAULT_FAMILY_CAP, FAMILY_NAMES, generate_family
from .groups import PermutationGroup, parse_group
from .programs import (
    SupportRegion,
    build_bound_program,
    build_membership_reduced,
    build_membership_standard,
    build_scale_program,
    canonicalize,
    export_program_json,
    predict_program_sizes,
)
from .signomials import Signomial, symmetrize
from .solver import SolverConfig, solve

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise UsageError("%s is not valid JSON: %s" % (path, exc)) from exc


def _load_signomial(path):
    return Signomial.from_json_dict(_read_json(path))


def _group_for(args, f):
    """The group selected by --sym/--group, or None."""
    if getattr(args, "sym", False) and getattr(args, "group", None):
        raise UsageError("--sym and --group are mutually exclusive")
    if getattr(args, "sym", False):
        return PermutationGroup.symmetric(f.dimension)
    if getattr(args, "group", None):
        group = parse_group(_read_json(args.group))
        if group.degree != f.dimension:
            raise UsageError(
                "group degree %d does not match the signomial dimension %d"
                % (group.degree, f.dimension)
            )
        return group
    return None


def _modes_for(args, group):
    """Mode list implied by --standard/--reduced/--both and the group."""
    picked = [
        name for name, on in (
            ("standard", args.standard),
            ("reduced", args.reduced),
            ("both", args.both),
        ) if on
    ]
    if len(picked) > 1:
        raise UsageError("choose at most one of --standard, --reduced, --both")
    choice = picked[0] if picked else None
    if choice is None:
        choice = "reduced" if group is not None else "standard"
    if choice in ("reduced", "both") and group is None:
        raise UsageError("%s mode needs --sym or --group" % choice)
    return ("standard", "reduced") if choice == "both" else (choice,)


def _region_for(args, f):
    box = getattr(args, "box", None)
    if box is None:
        return None
    lo, hi = box
    return SupportRegion.box([lo] * f.dimension, [hi] * f.dimension)


def _solver_config():
    """SolverConfig with SYMSAGE_FEASTOL / SYMSAGE_GAPTOL applied, if set."""
    feas = os.environ.get("SYMSAGE_FEASTOL")
    gap = os.environ.get("SYMSAGE_GAPTOL")
    if feas is None and gap is None:
        return None
    cfg = SolverConfig()
    try:
        if feas is not None:
            cfg.feasibility_tol = float(feas)
        if gap is not None:
            cfg.gap_tol = float(gap)
    except ValueError as exc:
        raise UsageError("bad solver tolerance override: %s" % exc) from exc
    return cfg


def _status_exit(statuses):
    if any(s in ("IterationLimit", "NumericalTrouble") for s in statuses):
        return EXIT_NUMERICAL
    if all(s == "Optimal" for s in statuses):
        return EXIT_OK
    return EXIT_NEGATIVE


def _write_or_print(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


# -- subcommands ---------------------------------------------------------------


def cmd_bound(args):
    f = _load_signomial(args.signomial)
    group = _group_for(args, f)
    modes = _modes_for(args, group)
    region = _region_for(args, f)
    if args.certificate_out and len(modes) > 1:
        raise UsageError("--certificate-out needs a single mode, not --both")
    config = _solver_config()

    statuses = []
    report = {}
    for mode in modes:
        build = build_scale_program if args.maximize_coefficient else build_bound_program
        prog = build(f, group=group if mode == "reduced" else None,
                     region=region, mode=mode)
        can = canonicalize(prog)
        res = solve(can, config)
        statuses.append(res.status.value)
        report[mode] = {
            "status": res.status.value,
            "objective": res.objective,
            "variables": prog.size_tuple()[0],
            "constraints": prog.size_tuple()[1],
            "iterations": res.iterations,
        }
        if res.status.value == "Optimal":
            print("%s: %s = %.10g   (V=%d, C=%d)" % (
                mode,
                "delta" if args.maximize_coefficient else "bound",
                res.objective, *prog.size_tuple(),
            ))
        else:
            print("%s: %s (%s)" % (mode, res.status.value, res.message or "no detail"))
        if args.certificate_out and res.status.value == "Optimal":
            try:
                cert = extract_certificate(res, can)
            except CertificateError as exc:
                print("certificate not written: %s" % exc, file=sys.stderr)
            else:
                _write_or_print(cert.dumps(indent=2), args.certificate_out)
    if args.json:
        print(json.dumps(report, sort_keys=True))
    return _status_exit(statuses)


def cmd_member(args):
    f = _load_signomial(args.signomial)
    if all(coeff > 0 for coeff in f.terms.values()):
        print("member: yes (no negative coefficients)")
        return EXIT_OK
    group = _group_for(args, f)
    modes = _modes_for(args, group)
    region = _region_for(args, f)
    if args.certificate_out and len(modes) > 1:
        raise UsageError("--certificate-out needs a single mode, not --both")
    config = _solver_config()

    statuses = []
    for mode in modes:
        if mode == "reduced":
            prog = build_membership_reduced(f, group, region=region)
        else:
            prog = build_membership_standard(f, region=region)
        can = canonicalize(prog)
        res = solve(can, config)
        statuses.append(res.status.value)
        if res.status.value == "Optimal":
            print("%s: member: yes" % mode)
        elif res.status.value == "Infeasible":
            print("%s: member: no" % mode)
        else:
            print("%s: %s (%s)" % (mode, res.status.value, res.message or "no detail"))
        if args.certificate_out and res.status.value == "Optimal":
            try:
                cert = extract_certificate(res, can)
            except CertificateError as exc:
                print("certificate not written: %s" % exc, file=sys.stderr)
            else:
                _write_or_print(cert.dumps(indent=2), args.certificate_out)
    if any(s == "Infeasible" for s in statuses):
        return EXIT_NEGATIVE
    return _status_exit(statuses)


def cmd_sizes(args):
    f = _load_signomial(args.signomial)
    group = _group_for(args, f)
    modes = _modes_for(args, group)
    report = {}
    for mode in modes:
        pred = predict_program_sizes(f, group=group, kind=args.kind, mode=mode)
        report[mode] = {"variables": pred.variables, "constraints": pred.constraints}
        print("%s: V=%d, C=%d" % (mode, pred.variables, pred.constraints))
    if args.json:
        print(json.dumps({"kind": args.kind, "sizes": report}, sort_keys=True))
    return EXIT_OK


def _parse_range(text):
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return range(int(lo), int(hi) + 1)
        except ValueError as exc:
            raise UsageError("bad range %r, expected a..b" % text) from exc
    try:
        value = int(text)
    except ValueError as exc:
        raise UsageError("bad range %r, expected a..b or a single n" % text) from exc
    return range(value, value + 1)


def cmd_bench(args):
    ns = _parse_range(args.n)
    if args.both:
        modes = ("reduced", "standard")
    elif args.standard:
        modes = ("standard",)
    else:
        modes = ("reduced",)
    rows = run_benchmark(
        args.family, ns, modes=modes, config=_solver_config(),
        verify=not args.no_verify, cap=args.cap,
    )
    if args.jsonl:
        print(rows_to_jsonl(rows))
    else:
        print(render_table(rows))
    results = [r for row in rows for r in row.results.values()]
    if any(r.certificate == "fail" for r in results):
        return EXIT_NEGATIVE
    return _status_exit([r.status for r in results])


def cmd_symmetrize(args):
    f = _load_signomial(args.signomial)
    group = _group_for(args, f)
    if group is None:
        raise UsageError("symmetrize needs --sym or --group")
    result = symmetrize(f, group)
    _write_or_print(result.dumps(indent=2), args.out)
    return EXIT_OK


def cmd_export(args):
    f = _load_signomial(args.signomial)
    group = _group_for(args, f)
    modes = _modes_for(args, group)
    if len(modes) > 1:
        raise UsageError("export needs a single mode, not --both")
    mode = modes[0]
    region = _region_for(args, f)
    kind = args.kind
    if kind == "membership":
        if mode == "reduced":
            prog = build_membership_reduced(f, group, region=region)
        else:
            prog = build_membership_standard(f, region=region)
    elif kind == "bound":
        prog = build_bound_program(f, group=group if mode == "reduced" else None,
                                   region=region, mode=mode)
    else:
        prog = build_scale_program(f, group=group if mode == "reduced" else None,
                                   region=region, mode=mode)
    doc = export_program_json(prog)
    _write_or_print(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return EXIT_OK


def cmd_verify(args):
    f = _load_signomial(args.signomial)
    cert = ReducedCertificate.from_json_dict(_read_json(args.certificate))
    report = verify_certificate(f, cert, tol=args.tol)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_NEGATIVE


# -- parser ---------------------------------------------------------------------


def _add_common_flags(sub, region=True, certificate=False):
    sub.add_argument("--sym", action="store_true",
                     help="use the full symmetric group on the signomial's coordinates")
    sub.add_argument("--group", metavar="G_JSON",
                     help="JSON file with permutation group generators")
    sub.add_argument("--standard", action="store_true", help="standard build only")
    sub.add_argument("--reduced", action="store_true", help="symmetry-reduced build only")
    sub.add_argument("--both", action="store_true", help="run both builds")
    if region:
        sub.add_argument("--box", nargs=2, type=float, metavar=("L", "U"),
                         help="certify over the box [L, U]^n instead of R^n")
    if certificate:
        sub.add_argument("--certificate-out", metavar="PATH",
                         help="write the extracted certificate JSON here")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="symsage",
        description="AM/GM (SAGE) lower bounds and nonnegativity certificates "
                    "for signomials, with permutation-symmetry reduction.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("bound", help="maximize lambda with f - lambda in the cone")
    p.add_argument("signomial", help="signomial JSON file")
    _add_common_flags(p, certificate=True)
    p.add_argument("--maximize-coefficient", action="store_true",
                   help="maximize the multiplier on the negative coefficients instead")
    p.add_argument("--json", action="store_true", help="also print a JSON report")
    p.set_defaults(handler=cmd_bound)

    p = subs.add_parser("member", help="decide SAGE cone membership")
    p.add_argument("signomial")
    _add_common_flags(p, certificate=True)
    p.set_defaults(handler=cmd_member)

    p = subs.add_parser("sizes", help="predict program sizes without solving")
    p.add_argument("signomial")
    _add_common_flags(p, region=False)
    p.add_argument("--kind", choices=("membership", "bound", "scale"),
                   default="membership")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_sizes)

    p = subs.add_parser("bench", help="run a built-in benchmark family")
    p.add_argument("family", choices=FAMILY_NAMES)
    p.add_argument("--n", required=True, metavar="A..B",
                   help="dimension range, e.g. 2..6 or a single value")
    p.add_argument("--standard", action="store_true")
    p.add_argument("--both", action="store_true")
    p.add_argument("--jsonl", action="store_true", help="machine-readable output")
    p.add_argument("--no-verify", action="store_true",
                   help="skip certificate verification")
    p.add_argument("--cap", type=int, default=DEFAULT_FAMILY_CAP,
                   help="dimension cap for factorial families")
    p.set_defaults(handler=cmd_bench)

    p = subs.add_parser("symmetrize", help="Reynolds average over a group")
    p.add_argument("signomial")
    p.add_argument("--sym", action="store_true")
    p.add_argument("--group", metavar="G_JSON")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(handler=cmd_symmetrize)

    p = subs.add_parser("export", help="emit canonical conic program JSON")
    p.add_argument("signomial")
    _add_common_flags(p)
    p.add_argument("--format", choices=("program-json",), default="program-json")
    p.add_argument("--kind", choices=("membership", "bound", "scale"),
                   default="bound")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(handler=cmd_export)

    p = subs.add_parser("verify", help="check a certificate against a signomial")
    p.add_argument("signomial")
    p.add_argument("certificate", help="certificate JSON file")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.handler(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except SymsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # numerical or internal failure
        print("failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
