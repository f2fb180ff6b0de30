"""Command-line front end: build/verify encodings, cost tables, degree sweeps.

Exit codes: 0 success, 1 failed verification or infeasible sweep point,
2 invalid arguments or degenerate input.  JSON goes to machine reports, CSV
to tabular output; all floats carry 12 significant digits.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import families, sva
from .errors import BlockEncodingError, InfeasibleParameters
from .estimator import format_table, table_rows
from .schemes import (
    AmplificationParams,
    build_base,
    build_hermitian_base,
    build_preamplified,
    build_prep_unprep,
)
from .verify import _sig12, check_encoding

SCHEMES = ("base", "hermitian", "prep", "preamplified")


def _family_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=families.FAMILY_NAMES)
    parser.add_argument("--n", type=int, required=True, help="matrix dimension (power of two)")
    parser.add_argument("--values", type=str, default=None, help="comma-separated data values")
    parser.add_argument("--k", type=int, default=0, help="Toeplitz band offset")
    parser.add_argument("--circulant", action="store_true", help="wrap the Toeplitz band around")
    parser.add_argument("--zero-corners", action="store_true", help="checkerboard with deleted corners")
    parser.add_argument("--d", type=int, default=4, help="diagonal count for generated Toeplitz values")
    parser.add_argument("--seed", type=int, default=None, help="generate values from this seed instead of --values")


def _values_for(args) -> list[float]:
    if args.values is not None:
        return [float(v) for v in args.values.split(",")]
    if args.seed is None:
        raise BlockEncodingError("provide --values or --seed")
    sizes = {"checkerboard": 2, "binary-tree": 3, "tridiagonal": 2 * args.n - 1}
    size = sizes.get(args.family, args.d)
    rng = np.random.default_rng(args.seed)
    return list(rng.uniform(0.1, 1.0, size) * rng.choice([-1.0, 1.0], size))


def _spec_for(args):
    return families.spec_from_json(
        {
            "family": args.family,
            "n": args.n,
            "values": _values_for(args),
            "k": args.k,
            "circulant": args.circulant,
            "zero_corners": args.zero_corners,
        }
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    spec = _spec_for(args)
    params = AmplificationParams(delta=args.delta, epsilon=args.epsilon, p=args.p)
    if args.scheme == "base":
        enc = build_base(spec)
    elif args.scheme == "hermitian":
        enc = build_hermitian_base(spec)
    elif args.scheme == "prep":
        enc = build_prep_unprep(spec, p=args.p)
    else:
        enc = build_preamplified(spec, params)
    report = check_encoding(enc, spec)
    _emit(report.to_json(family=spec.name, figure_of_merit=enc.cost.figure_of_merit) + "\n", args.out)
    return 0 if report.passed else 1


def cmd_estimate(args) -> int:
    spec = _spec_for(args)
    rows = table_rows(spec, p=args.p, delta=args.delta, epsilon=args.epsilon)
    buf = io.StringIO()
    if args.format == "table":
        buf.write(format_table(rows))
    else:
        buf.write("scheme,data_loading,subnormalisation,flag_qubits,figure_of_merit,note\n")
        for r in rows:
            buf.write(
                f"{r.scheme},{r.data_loading:.12g},{r.subnormalisation:.12g},"
                f"{r.flag_qubits},{r.figure_of_merit:.12g},{r.note}\n"
            )
    if not any(r.scheme.startswith("prep") for r in rows):
        buf.write("# prep_unprep omitted: D exceeds a sparsity and the method does not apply\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_sva(args) -> int:
    gammas = [float(v) for v in args.gammas.split(",")]
    deltas = [float(v) for v in args.deltas.split(",")]
    epsilons = [float(v) for v in args.epsilons.split(",")]
    result = sva.degree_sweep(gammas, deltas, epsilons, max_degree=args.max_degree)
    buf = io.StringIO()
    buf.write("gamma,delta,epsilon,degree,predicted_degree\n")
    for point, pred in zip(result.points, result.fit.predicted):
        buf.write(f"{point.gamma:.12g},{point.delta:.12g},{point.epsilon:.12g},{point.degree},{pred:.12g}\n")
    fit = result.fit
    buf.write(f"# fitted prefactor c = {_sig12(fit.c)} over {fit.n_points} points")
    buf.write(" (low confidence: fewer than 12 points)\n" if fit.low_confidence else "\n")
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockenc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build an encoding and verify it against the dense matrix")
    _family_args(p_build)
    p_build.add_argument("--scheme", required=True, choices=SCHEMES)
    p_build.add_argument("--p", type=float, default=0.5)
    p_build.add_argument("--epsilon", type=float, default=1e-3)
    p_build.add_argument("--delta", type=float, default=sva.DELTA_DEFAULT)
    p_build.add_argument("--out", type=str, default=None)
    p_build.set_defaults(fn=cmd_build)

    p_est = sub.add_parser("estimate", help="emit the scheme-comparison cost table as CSV")
    _family_args(p_est)
    p_est.add_argument("--p", type=float, default=0.5)
    p_est.add_argument("--epsilon", type=float, default=1e-3)
    p_est.add_argument("--delta", type=float, default=sva.DELTA_DEFAULT)
    p_est.add_argument("--format", choices=("csv", "table"), default="csv")
    p_est.add_argument("--out", type=str, default=None)
    p_est.set_defaults(fn=cmd_estimate)

    p_sva = sub.add_parser("sva", help="amplification-degree sweep and prefactor fit")
    p_sva.add_argument("--gammas", type=str, default="2,4,8,16,32")
    p_sva.add_argument("--deltas", type=str, default=f"{sva.DELTA_DEFAULT:.12g}")
    p_sva.add_argument("--epsilons", type=str, default="1e-2,1e-3,1e-4")
    p_sva.add_argument("--max-degree", type=int, default=sva.MAX_DEGREE)
    p_sva.add_argument("--out", type=str, default=None)
    p_sva.set_defaults(fn=cmd_sva)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BlockEncodingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1 if isinstance(exc, InfeasibleParameters) else 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
