"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch or failed fit, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import oracle
from .combinatorics import IndexSubset
from .export import export_relations
from .model import enumerate_paths
from .polynomials import canonical_string, parse_polynomial
from .quiverfile import QuiverFileError, load
from .relations import all_relations, chart_formulas, schubert_dehomogenize
from .scalars import DomainError

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _assignment(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected <param>=<value>, got {text!r}")
    try:
        return name.strip(), Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad value in {text!r}")


def _load(path):
    try:
        qf = load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except QuiverFileError as exc:
        raise InputError("\n".join(f"{path}:{d}" for d in exc.diagnostics))
    rep = qf.representation()
    return qf, rep


def _dims(qf):
    if qf.dimvector is None:
        raise InputError("the file declares no dimvector")
    return qf.dimvector


def _params(rep, assignments) -> dict[str, Fraction]:
    values = dict(assignments or [])
    unknown = set(values) - set(rep.parameters)
    if unknown:
        raise InputError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    missing = set(rep.parameters) - set(values)
    if missing:
        raise InputError(f"set every parameter with --set, missing: {', '.join(sorted(missing))}")
    return values


def _variable(text: str, rep) -> IndexSubset:
    inside = text.strip()
    if inside.startswith("Delta["):
        inside = inside[len("Delta["):].rstrip("]")
    poly = parse_polynomial(f"Delta[{inside}]", rep.global_labels())
    (var,) = poly.variables()
    return var


def cmd_relations(args, out) -> int:
    qf, rep = _load(args.file)
    rels = all_relations(rep, _dims(qf), args.order, args.classical, args.workers)
    out.write(export_relations(rels, args.format, args.labels))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    qf, rep = _load(args.file)
    dims = _dims(qf)
    params = _params(rep, args.set)
    rels = all_relations(rep, dims, args.order, True, 1)
    status = EXIT_OK
    out.write(f"# {rep.name}: {len(rels)} relation(s), order {args.order}\n")
    for p in args.primes:
        sub = oracle.subrep_points(rep, dims, p, params, args.workers)
        var = oracle.variety_points(rels, dims, rep, p, params, args.workers)
        cmp = oracle.compare_sets(var, sub)
        out.write(
            f"p={p}: subrepresentations {len(sub)}, relation locus {len(var)}: {cmp.summary()}\n"
        )
        if not cmp.equal:
            status = EXIT_MISMATCH
    return status


def cmd_count(args, out) -> int:
    qf, rep = _load(args.file)
    dims = _dims(qf)
    params = _params(rep, args.set)
    samples = [(p, oracle.count_points(rep, dims, p, params, args.workers)) for p in args.primes]
    for p, n in samples:
        out.write(f"q={p}: {n}\n")
    if not args.fit:
        return EXIT_OK
    held = [(p, oracle.count_points(rep, dims, p, params, args.workers)) for p in args.validate]
    for p, n in held:
        out.write(f"q={p}: {n} (validation)\n")
    bound = args.degree_bound
    if bound is not None and bound < 0:
        bound = oracle.degree_bound(rep, dims)
    cp = oracle.fit_counting_polynomial(samples, held, bound)
    if isinstance(cp, oracle.FitFailure):
        out.write(f"fit failed: {cp}\n")
        return EXIT_MISMATCH
    out.write(f"counting polynomial: {cp}\n")
    out.write(f"euler characteristic: {oracle.euler_characteristic(cp)}\n")
    return EXIT_OK


def cmd_chart(args, out) -> int:
    qf, rep = _load(args.file)
    dims = _dims(qf)
    v = args.vertex
    if v not in rep.dims:
        raise InputError(f"unknown vertex {v!r}")
    labels = rep.global_labels()
    try:
        I0 = IndexSubset.of(v, args.pivot)
    except DomainError as exc:
        raise InputError(str(exc))
    if len(I0) != dims[v]:
        raise InputError(f"pivot set must have e_{v}={dims[v]} elements")
    I0.check_within(rep.dim(v))

    def name(s):
        return canonical_string(parse_polynomial(f"Delta[{v};{','.join(map(str, s.members))}]"), labels)

    base = name(I0)
    out.write(f"# chart {base} != 0 at vertex {v}\n")
    for i0, row in zip(I0, chart_formulas(v, rep.dim(v), I0)):
        entries = []
        for sign, num in row:
            if num is None:
                entries.append(str(sign))
            else:
                entries.append(f"{'-' if sign < 0 else ''}{name(num)}/{base}")
        out.write(f"n[{labels[v][i0 - 1]}] = ({', '.join(entries)})\n")
    return EXIT_OK


def cmd_schubert(args, out) -> int:
    qf, rep = _load(args.file)
    dims = _dims(qf)
    try:
        zeros = {_variable(t, rep) for t in args.zero}
        ones = {}
        for t in args.one:
            var = _variable(t, rep)
            if var.vertex in ones:
                raise InputError(f"two coordinates set to 1 at vertex {var.vertex!r}")
            ones[var.vertex] = var
    except (DomainError, ValueError) as exc:
        raise InputError(str(exc))
    rels = all_relations(rep, dims, args.order, True)
    labels = rep.global_labels()
    for poly in schubert_dehomogenize(rels, zeros, ones):
        out.write(canonical_string(poly, labels) + "\n")
    return EXIT_OK


def cmd_paths(args, out) -> int:
    qf, rep = _load(args.file)
    for path in enumerate_paths(rep.quiver, args.max_len):
        out.write(f"{len(path)} {path.source}->{path.target} {path.label()}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpluecker", description="Quiver Plücker relations and finite-field checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relations", help="print the relations cutting out the quiver Grassmannian")
    p.add_argument("file")
    p.add_argument("--order", type=int, default=1, help="maximal path length (default 1)")
    p.add_argument("--classical", action="store_true", help="include classical Plücker relations")
    p.add_argument("--labels", choices=("local", "global"), default="global")
    p.add_argument("--format", choices=("plain", "cas"), default="plain")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("verify", help="compare subrepresentations with the relation locus over F_p")
    p.add_argument("file")
    p.add_argument("--primes", type=_int_list, required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--set", type=_assignment, action="append", default=[], metavar="PARAM=VALUE")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="count F_p-points and optionally fit a counting polynomial")
    p.add_argument("file")
    p.add_argument("--primes", type=_int_list, required=True)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--validate", type=_int_list, default=[])
    p.add_argument(
        "--degree-bound", type=int, default=None,
        help="require bound+1 samples and cap the degree; -1 uses the ambient dimension",
    )
    p.add_argument("--set", type=_assignment, action="append", default=[], metavar="PARAM=VALUE")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("chart", help="spanning vectors of a subspace in a Plücker chart")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--pivot", type=_int_list, required=True, help="local indices of the chart subset")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("schubert", help="relations with coordinates forced to 0 and 1")
    p.add_argument("file")
    p.add_argument("--zero", nargs="*", default=[], help="variables such as 4 or 1,3 or p0;1,3")
    p.add_argument("--one", nargs="*", default=[])
    p.add_argument("--order", type=int, default=1)
    p.set_defaults(func=cmd_schubert)

    p = sub.add_parser("paths", help="list paths up to a given length")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_paths)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
