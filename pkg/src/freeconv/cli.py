"""Command-line front end.

Verbs:
  add / mul     convolve two measures; write a density CSV and a JSON sidecar
  transform     print one transform value at a point
  support       print the computed support endpoints
  sample        sample the matrix model, write eigenvalues, print KS distance
  convergence   write an (N, error) quadrature-convergence table

CSV files use 17-significant-digit decimals and LF line endings so repeated
invocations are byte-identical.  Warnings go to stderr and never change the
exit code; parse errors exit 2 and computation errors exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .convolve import ContourConfig, additive_convolve, multiplicative_convolve
from .errors import FreeConvError
from .measures import parse_measure_spec
from .spectra import free_combine_spectra, ks_distance, sample_matrix_spectrum
from .transforms import TransformKind, eval_transform, verify_exponential_convergence

_KINDS = {
    "G": TransformKind.CAUCHY,
    "Gp": TransformKind.CAUCHY_DERIV,
    "T": TransformKind.T_TRANSFORM,
    "Tp": TransformKind.T_TRANSFORM_DERIV,
}


def _parse_point(text: str) -> complex:
    re_part, _, im_part = text.partition(",")
    return complex(float(re_part), float(im_part or 0.0))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _config_from_args(args) -> ContourConfig:
    kwargs = {}
    if args.n_quad is not None:
        kwargs["n_quad"] = args.n_quad
    if args.m is not None:
        kwargs["m_coeffs"] = args.m
    if args.epsilon is not None:
        kwargs["epsilon"] = args.epsilon
    return ContourConfig(**kwargs)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-quad", type=int, default=None, help="quadrature points per measure")
    p.add_argument("--m", type=int, default=None, help="number of series coefficients")
    p.add_argument("--epsilon", type=float, default=None, help="contour safety margin")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeconv",
        description="Free additive/multiplicative convolution of compactly supported measures.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb in ("add", "mul"):
        p = sub.add_parser(verb, help=f"free {'sum' if verb == 'add' else 'product'} of two measures")
        p.add_argument("--mu1", required=True, help="first measure spec")
        p.add_argument("--mu2", required=True, help="second measure spec")
        p.add_argument("--out", default=f"{verb}_density.csv", help="density CSV path")
        _add_config_flags(p)

    p = sub.add_parser("transform", help="evaluate G, G', T or T' at one point")
    p.add_argument("--measure", required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), default="G")
    p.add_argument("--point", required=True, help="complex point as re,im")
    p.add_argument("--n-quad", type=int, default=None)

    p = sub.add_parser("support", help="print the support of a convolution")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--op", choices=("add", "mul"), default="add")
    _add_config_flags(p)

    p = sub.add_parser("sample", help="matrix-model eigenvalues and KS distance vs a density CSV")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--op", choices=("add", "mul"), default="add")
    p.add_argument("--n", type=int, default=2000, help="matrix size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", required=True, help="density CSV to compare against")
    p.add_argument("--out", default="eigenvalues.csv", help="eigenvalue CSV path")

    p = sub.add_parser("convergence", help="quadrature error vs number of points")
    p.add_argument("--measure", required=True)
    p.add_argument("--point", required=True, help="complex point as re,im")
    p.add_argument("--n-list", default="25,50,100,200,400,800,1600",
                   help="comma-separated quadrature budgets")
    p.add_argument("--out", default="convergence.csv")

    return parser


def _run_convolution(args, kind: str) -> int:
    mu1 = parse_measure_spec(args.mu1)
    mu2 = parse_measure_spec(args.mu2)
    cfg = _config_from_args(args)
    fn = additive_convolve if kind == "add" else multiplicative_convolve
    result = fn(mu1, mu2, cfg)
    for message in result.warnings:
        print(f"warning: {message}", file=sys.stderr)
    _write_csv(args.out, "x,density", result.density_grid)
    sidecar = {
        "support": [result.support.a, result.support.b],
        "xi_a": result.xi_a,
        "xi_b": result.xi_b,
        "r_B": result.r_b,
        "r_C": result.r_c,
        "coefficients": [[c.real, c.imag] for c in result.coefficients],
        "warnings": list(result.warnings),
    }
    sidecar_path = args.out.rsplit(".", 1)[0] + ".json"
    with open(sidecar_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    return 0


def _run_support(args) -> int:
    mu1 = parse_measure_spec(args.mu1)
    mu2 = parse_measure_spec(args.mu2)
    cfg = _config_from_args(args)
    fn = additive_convolve if args.op == "add" else multiplicative_convolve
    result = fn(mu1, mu2, cfg)
    for message in result.warnings:
        print(f"warning: {message}", file=sys.stderr)
    print(f"{_fmt(result.support.a)},{_fmt(result.support.b)}")
    return 0


def _run_transform(args) -> int:
    measure = parse_measure_spec(args.measure)
    value = eval_transform(measure, _KINDS[args.kind], _parse_point(args.point), args.n_quad)
    print(f"{value.real:.7f},{value.imag:.7f}")
    return 0


def _run_sample(args) -> int:
    mu1 = parse_measure_spec(args.mu1)
    mu2 = parse_measure_spec(args.mu2)
    s1 = sample_matrix_spectrum(mu1, args.n, args.seed)
    s2 = sample_matrix_spectrum(mu2, args.n, args.seed + 1)
    combined = free_combine_spectra(s1, s2, args.op, args.seed + 2)
    _write_csv(args.out, "eigenvalue", ((v,) for v in combined.eigenvalues))
    grid = np.loadtxt(args.density, delimiter=",", skiprows=1)
    print(_fmt(ks_distance(combined, grid)))
    return 0


def _run_convergence(args) -> int:
    measure = parse_measure_spec(args.measure)
    n_list = [int(t) for t in args.n_list.split(",")]
    errors = verify_exponential_convergence(measure, _parse_point(args.point), n_list)
    _write_csv(args.out, "N,error", errors)
    return 0


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb in ("add", "mul"):
            return _run_convolution(args, args.verb)
        if args.verb == "support":
            return _run_support(args)
        if args.verb == "transform":
            return _run_transform(args)
        if args.verb == "sample":
            return _run_sample(args)
        return _run_convergence(args)
    except (FreeConvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
