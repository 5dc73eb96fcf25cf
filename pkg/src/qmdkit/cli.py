"""Command-line front end.

Subcommands: analyze, flatten, specseq, maslov, example.  Exit codes are
deterministic: 0 on success, 1 on a domain failure (failed
classification, broken filtration, non-regular crossing, failed
expectation), 2 on usage or I/O errors.  Output JSON is byte-stable for
identical inputs: keys are sorted and no timestamps are emitted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import catalog
from .fields import (GridMismatchError, ScalarField, c1_distance,
                     default_grad_tol)
from .maslov import LagrangianLinePath, NonRegularCrossingError, PathError, maslov
from .morse import (ChartError, NoCriticalPointsError, RegularValueError,
                    SubmanifoldChart, TauError, Tolerances, classify,
                    detect_critical_set, flatten, verify_thickening)
from .specseq import (BoundaryError, CrossTermError, FiltrationError,
                      QMDDescriptor, build_from_qmd, converge, page,
                      truncate_by_action)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

CLASSIFICATIONS = ("morse", "morse_bott", "flattened_degenerate",
                   "minimally_degenerate", "qmd")


class UsageFailure(Exception):
    pass


class DomainFailure(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageFailure(f"cannot read {path}: {exc}") from exc


def _load_field(path: str) -> ScalarField:
    data = _load_json(path)
    try:
        return ScalarField.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageFailure(f"bad field file {path}: {exc}") from exc


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_int_list(text: str, what: str) -> tuple:
    if text.strip() == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageFailure(f"bad {what}: {text!r}") from exc


def _tolerances(args, field: Optional[ScalarField] = None) -> Tolerances:
    for name in ("grad_tol", "eig_tol", "value_tol"):
        if getattr(args, name) is not None and getattr(args, name) <= 0:
            raise UsageFailure(f"--{name.replace('_', '-')} must be positive")
    kw = {}
    if args.grad_tol is not None:
        kw["grad_tol"] = args.grad_tol
    elif field is not None:
        # stencil accuracy is O(h^2); scale by the field's gradient range
        kw["grad_tol"] = default_grad_tol(field)
    if args.eig_tol is not None:
        kw["eig_tol"] = args.eig_tol
    if args.value_tol is not None:
        kw["value_tol"] = args.value_tol
    return Tolerances(**kw)


def cmd_analyze(args) -> int:
    f = _load_field(args.field)
    tau = _load_field(args.tau) if args.tau else None
    tols = _tolerances(args, field=f)
    grad_tol = tols.grad_tol
    chart = None
    if args.chart is not None:
        axes = _parse_int_list(args.chart, "chart axes")
        base = _parse_int_list(args.base, "chart base") if args.base \
            else tuple(0 for _ in f.dims)
        if len(base) != f.ndim:
            raise UsageFailure("chart base must list one index per axis")
        try:
            chart = SubmanifoldChart(axes=axes, base=base)
        except ChartError as exc:
            raise UsageFailure(str(exc)) from exc
    try:
        crit = detect_critical_set(f, grad_tol)
    except NoCriticalPointsError as exc:
        raise DomainFailure(str(exc)) from exc
    if not (0 <= args.component < len(crit.components)):
        raise UsageFailure(f"component index out of range "
                           f"(found {len(crit.components)} components)")
    try:
        report = classify(f, crit, chart=chart, tau=tau, tols=tols,
                          strict=args.strict, component=args.component)
    except (ChartError, TauError, GridMismatchError) as exc:
        raise DomainFailure(str(exc)) from exc
    payload = report.to_json()
    payload["n_components"] = len(crit.components)
    payload["component_boxes"] = _component_boxes(crit)
    _emit(payload, args.out)
    if args.expect:
        return EXIT_OK if report.details.get(args.expect) else EXIT_DOMAIN
    return EXIT_OK if report.passed else EXIT_DOMAIN


def _component_boxes(crit) -> list:
    out = []
    for comp in crit.components:
        nodes = np.argwhere(comp.cells)
        out.append({"lo": [int(v) for v in nodes.min(axis=0)],
                    "hi": [int(v) for v in nodes.max(axis=0)],
                    "size": int(comp.count())})
    return out


def cmd_flatten(args) -> int:
    if args.delta <= 0:
        raise UsageFailure("--delta must be positive")
    f = _load_field(args.field)
    tols = _tolerances(args, field=f)
    try:
        crit = detect_critical_set(f, tols.grad_tol)
        shift = float(f.values[crit.components[args.component].cells].min())
        f0 = f.shift(shift)
        result = flatten(f0, args.delta, crit, tols, component=args.component)
        thick = verify_thickening(f0, crit, result.sigma, tols,
                                  component=args.component)
    except (NoCriticalPointsError, RegularValueError, ValueError) as exc:
        raise DomainFailure(str(exc)) from exc
    if args.out:
        _emit(result.sigma.to_json(), args.out)
    if args.out_field:
        _emit(result.f_check.to_json(), args.out_field)
    payload = {
        "delta_used": result.delta_used,
        "shift": shift,
        "betti_c": list(thick.betti_c),
        "betti_sigma": list(thick.betti_sigma),
        "c1_distance": c1_distance(f0, result.f_check),
        "thickening_verified": thick.passed,
    }
    _emit(payload, None)
    return EXIT_OK if thick.passed else EXIT_DOMAIN


def cmd_specseq(args) -> int:
    data = _load_json(args.descriptor)
    try:
        desc = QMDDescriptor.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageFailure(f"bad descriptor: {exc}") from exc
    if args.cutoff is not None:
        desc = truncate_by_action(desc, args.cutoff)
    if not desc.pieces:
        _emit({"pages": [], "stable_page": 1, "total_homology": {},
               "grading": _GRADING_NOTE}, args.out)
        return EXIT_OK
    try:
        fc = build_from_qmd(desc)
    except (FiltrationError, BoundaryError, CrossTermError) as exc:
        raise DomainFailure(str(exc)) from exc
    stable, einf = converge(fc)
    if args.pages == "all":
        ks = list(range(1, fc.max_filtration + 2))
    else:
        try:
            ks = [int(args.pages)]
        except ValueError as exc:
            raise UsageFailure("--pages takes 'all' or a page number") from exc
        if ks[0] < 1:
            raise UsageFailure("--pages must be >= 1")
    homology = fc.homology_dims()
    graded = einf.total_dims()
    payload = {
        "pages": [page(fc, k).to_json() for k in ks],
        "stable_page": stable,
        "einf": einf.to_json(),
        "total_homology": {str(n): d for n, d in sorted(homology.items())},
        "graded_sum_matches_homology": all(
            graded.get(n, 0) == d for n, d in homology.items()),
        "grading": _GRADING_NOTE,
    }
    _emit(payload, args.out)
    return EXIT_OK


_GRADING_NOTE = ("p = piece rank in action order; a local degree-m class of "
                 "piece p sits in total degree n = m + iota_p, at (p, q = n - p)")


def cmd_maslov(args) -> int:
    try:
        a = LagrangianLinePath.from_json(_load_json(args.path_a))
        b = LagrangianLinePath.from_json(_load_json(args.path_b))
    except (KeyError, TypeError, PathError) as exc:
        raise UsageFailure(f"bad path file: {exc}") from exc
    try:
        idx = maslov(a, b, tol=args.tol)
    except NonRegularCrossingError as exc:
        raise DomainFailure(str(exc)) from exc
    sys.stdout.write(f"{idx}\n")
    return EXIT_OK


def cmd_example(args) -> int:
    if args.list:
        for name in catalog.list_examples():
            sys.stdout.write(name + "\n")
        return EXIT_OK
    if not args.name:
        raise UsageFailure("name an example or pass --list")
    try:
        report = catalog.run_example(args.name)
    except catalog.UnknownExampleError as exc:
        raise UsageFailure(f"unknown example: {exc}") from exc
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_DOMAIN


def _add_tol_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grad-tol", dest="grad_tol", type=float, default=None)
    p.add_argument("--eig-tol", dest="eig_tol", type=float, default=None)
    p.add_argument("--value-tol", dest="value_tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmdkit",
        description="critical-set degeneracy analysis, cubical GF(2) homology, "
                    "filtered spectral sequences, Maslov indices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a critical set's degeneracy")
    p.add_argument("--field", required=True)
    p.add_argument("--tau", default=None)
    p.add_argument("--chart", default=None,
                   help="comma-separated chart axes ('' for a point chart)")
    p.add_argument("--base", default=None,
                   help="comma-separated node index of the chart origin")
    p.add_argument("--component", type=int, default=0)
    p.add_argument("--strict", action="store_true",
                   help="require a strict minimum away from C")
    p.add_argument("--expect", choices=CLASSIFICATIONS, default=None)
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("flatten", help="flattening perturbation and thickening")
    p.add_argument("--field", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--component", type=int, default=0)
    p.add_argument("--out", default=None, help="write the thickening mask here")
    p.add_argument("--out-field", dest="out_field", default=None,
                   help="write the flattened field here")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("specseq", help="pages of a filtered complex descriptor")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--pages", default="all")
    p.add_argument("--cutoff", type=float, default=None,
                   help="keep pieces with action below this value")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_specseq)

    p = sub.add_parser("maslov", help="index of two Lagrangian line paths")
    p.add_argument("--path-a", dest="path_a", required=True)
    p.add_argument("--path-b", dest="path_b", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_maslov)

    p = sub.add_parser("example", help="run a packaged worked example")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--list", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageFailure as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except DomainFailure as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
