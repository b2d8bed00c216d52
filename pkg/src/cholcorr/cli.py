"""Command-line surface: decompose, generate, verify, test, ar1.

Data goes to stdout or the --out target; diagnostics go to stderr so
output can be piped. Exit codes are a stable contract:

    0  success
    1  a requested check failed
    2  usage or parse error
    3  input not positive-definite

Matrix files are headerless CSV (one row per line, '.' decimals) or JSON
objects {"n": <int>, "rows": [[...], ...]}. Sample files for ``test`` are
rectangular CSV/JSON blocks, one row per observation. All numbers are
printed in shortest round-trip form, so parse -> print -> parse is
lossless for 64-bit floats. Whenever a command writes files, a manifest
recording the command, flags, seed, library version and tolerances is
written alongside them.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ar1_sampling import Ar1Spec, ar1_cholesky, ar1_matrix, sample_mvn
from .dependence_test import SampleMatrix, sequential_test
from .errors import NearSingular, NegativeRadicand, NotPositiveDefinite, SchurNonPositive
from .identities import ALL_VERIFIERS, TOL_ORD, check_order_conditions
from .matrix_core import (
    TOL_PD,
    TOL_REC,
    TOL_SYM,
    CholeskyFactor,
    CorrelationMatrix,
    CovarianceMatrix,
    reference_cholesky,
    symmetry_error,
)
from .parametrizations import chol_covariance, chol_detratio, chol_semipartial, extract_signs
from .randcorr import GeneratorConfig, generate_batch


class UsageError(Exception):
    """Invalid flags or unparseable input; maps to exit code 2."""


def format_value(v: float) -> str:
    """Shortest decimal string that parses back to the same float."""
    return np.format_float_positional(float(v), unique=True, trim="-")


def render_table(a: np.ndarray, fmt: str) -> str:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if fmt == "csv":
        lines = [",".join(format_value(v) for v in row) for row in a]
        return "\n".join(lines) + "\n"
    obj = {"n": a.shape[1], "rows": [[float(v) for v in row] for row in a]}
    return json.dumps(obj, indent=2) + "\n"


def infer_format(path: str | None, flag: str | None) -> str:
    if flag:
        return flag
    if path and path.endswith(".json"):
        return "json"
    return "csv"


def load_table(path: str, fmt: str | None) -> np.ndarray:
    """Rectangular float table from a CSV or JSON file."""
    fmt = infer_format(path, fmt)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        if fmt == "json":
            obj = json.loads(text)
            if not isinstance(obj, dict) or "rows" not in obj:
                raise UsageError(f"{path}: expected an object with a 'rows' field")
            rows = [[float(v) for v in row] for row in obj["rows"]]
        else:
            rows = [
                [float(v) for v in line.split(",")]
                for line in text.splitlines()
                if line.strip()
            ]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: cannot parse as {fmt}: {exc}") from exc
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise UsageError(f"{path}: rows have inconsistent lengths")
    a = np.array(rows, dtype=float)
    if not np.all(np.isfinite(a)):
        raise UsageError(f"{path}: values must be finite")
    return a


def load_square(path: str, fmt: str | None) -> np.ndarray:
    a = load_table(path, fmt)
    if a.shape[0] != a.shape[1]:
        raise UsageError(f"{path}: expected a square matrix, got shape {a.shape}")
    return a


def write_output(a: np.ndarray, out: str | None, fmt: str) -> None:
    text = render_table(a, fmt)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def write_manifest(path: Path, command: str, options: dict, outputs: list[str]) -> None:
    payload = {
        "command": command,
        "options": options,
        "outputs": outputs,
        "version": __version__,
        "tolerances": {
            "tol_sym": TOL_SYM,
            "tol_pd": TOL_PD,
            "tol_rec": TOL_REC,
            "tol_ord": TOL_ORD,
        },
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _factor_correlation(m: CorrelationMatrix, method: str) -> CholeskyFactor:
    if method == "reference":
        return reference_cholesky(m)
    if method == "semipartial":
        return chol_semipartial(m)
    return chol_detratio(m, extract_signs(chol_semipartial(m)))


def _factor_covariance(m: CovarianceMatrix, method: str) -> CholeskyFactor:
    if method == "reference":
        return reference_cholesky(m)
    if method == "detratio":
        return chol_covariance(m)
    scaled = m.sigmas[:, None] * chol_semipartial(m.correlation()).entries
    return CholeskyFactor(scaled, "covariance")


def cmd_decompose(args) -> int:
    a = load_square(args.input, args.format)
    if args.covariance:
        m = CovarianceMatrix(a)
        factor = _factor_covariance(m, args.method)
    else:
        m = CorrelationMatrix(a)
        factor = _factor_correlation(m, args.method)
    fmt = infer_format(args.out, args.format)
    write_output(factor.entries, args.out, fmt)
    if args.out:
        write_manifest(
            Path(args.out + ".manifest.json"),
            "decompose",
            {"input": args.input, "method": args.method, "covariance": args.covariance,
             "check": args.check, "format": fmt, "tol": args.tol},
            [args.out],
        )
    if args.check:
        recon = float(np.max(np.abs(factor.reconstruct() - m.values)))
        methods = ("reference", "semipartial", "detratio")
        build = _factor_covariance if args.covariance else _factor_correlation
        factors = [build(m, name).entries for name in methods]
        cross = max(
            float(np.max(np.abs(fa - fb)))
            for x, fa in enumerate(factors)
            for fb in factors[x + 1:]
        )
        print(f"check: reconstruction-error={format_value(recon)} "
              f"cross-method-discrepancy={format_value(cross)}", file=sys.stderr)
        scale = float(np.max(m.values.diagonal())) if args.covariance else 1.0
        if recon > args.tol * scale or cross > args.tol * scale:
            return 1
    return 0


def cmd_generate(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    cfg = GeneratorConfig(n=args.n, seed=args.seed, sign_bias=args.sign_bias)
    matrices = generate_batch(cfg, args.count)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    fmt = args.format or "csv"
    ext = "json" if fmt == "json" else "csv"
    names = []
    for k, r in enumerate(matrices):
        name = f"corr_{k:04d}.{ext}"
        (outdir / name).write_text(render_table(r.values, fmt))
        names.append(name)
    write_manifest(
        outdir / "manifest.json",
        "generate",
        {"n": args.n, "count": args.count, "seed": args.seed,
         "sign_bias": args.sign_bias, "format": fmt},
        names,
    )
    return 0


def cmd_verify(args) -> int:
    a = load_square(args.input, args.format)
    if symmetry_error(a) > TOL_SYM:
        raise UsageError(f"{args.input}: matrix is not symmetric")
    if float(np.max(np.abs(np.diag(a) - 1.0))) > TOL_SYM:
        raise UsageError(f"{args.input}: matrix does not have a unit diagonal")
    det_ok, ratio_ok, _ = check_order_conditions(a)
    print(f"det-order: {'ok' if det_ok else 'violated'}")
    print(f"ratio-order: {'ok' if ratio_ok else 'violated'}")
    if not (det_ok and ratio_ok):
        which = []
        if not det_ok:
            which.append("leading-minor ordering")
        if not ratio_ok:
            which.append("ratio-ladder ordering")
        print(f"failed: {', '.join(which)}", file=sys.stderr)
        return 1
    try:
        r = CorrelationMatrix(a)
    except NotPositiveDefinite as exc:
        print(f"failed: positive-definite construction ({exc})", file=sys.stderr)
        return 1
    failed = False
    for name, fn, min_n in ALL_VERIFIERS:
        if r.n < min_n:
            print(f"{name}: n/a (needs n >= {min_n})")
            continue
        report = fn(r)
        print(f"{name}: residual={format_value(report.max_residual)}")
        if report.max_residual > args.tol:
            failed = True
            print(f"failed: {name} residual exceeds {args.tol}", file=sys.stderr)
    return 1 if failed else 0


def cmd_test(args) -> int:
    a = load_table(args.data, args.format)
    try:
        x = SampleMatrix(a)
    except ValueError as exc:
        raise UsageError(f"{args.data}: {exc}") from exc
    target = args.target if args.target is not None else x.p
    report = sequential_test(x, target, args.alpha)
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        write_manifest(
            Path(args.out + ".manifest.json"),
            "test",
            {"data": args.data, "target": target, "alpha": args.alpha},
            [args.out],
        )
    return 0


def cmd_ar1(args) -> int:
    spec = Ar1Spec(n=args.n, rho=args.rho)
    if args.emit == "matrix":
        payload = ar1_matrix(spec).values
    elif args.emit == "factor":
        payload = ar1_cholesky(spec).entries
    else:
        if args.count < 1:
            raise UsageError("--count must be at least 1")
        payload = sample_mvn(ar1_cholesky(spec), args.count, args.seed)
    fmt = infer_format(args.out, args.format)
    write_output(payload, args.out, fmt)
    if args.out:
        write_manifest(
            Path(args.out + ".manifest.json"),
            "ar1",
            {"n": args.n, "rho": args.rho, "emit": args.emit,
             "count": args.count, "seed": args.seed, "format": fmt},
            [args.out],
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cholcorr",
        description="Closed-form Cholesky factors of correlation matrices, "
                    "random correlation generation, and a sequential dependence test.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=False):
        p.add_argument("--format", choices=("csv", "json"),
                       help="file format (default: inferred from extension, csv otherwise)")
        p.add_argument("--out", help="output path (default: stdout)")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="64-bit stream seed")

    d = sub.add_parser("decompose", help="factor a correlation or covariance matrix")
    d.add_argument("input", help="matrix file")
    d.add_argument("--method", choices=("reference", "semipartial", "detratio"),
                   default="semipartial")
    d.add_argument("--covariance", action="store_true",
                   help="treat the input as a covariance matrix")
    d.add_argument("--check", action="store_true",
                   help="report reconstruction error and cross-method discrepancy on stderr")
    d.add_argument("--tol", type=float, default=TOL_REC,
                   help="threshold for --check failures")
    add_common(d)
    d.set_defaults(func=cmd_decompose)

    g = sub.add_parser("generate", help="generate random positive-definite correlation matrices")
    g.add_argument("--n", type=int, required=True, help="matrix dimension")
    g.add_argument("--count", type=int, default=1, help="number of matrices")
    g.add_argument("--sign-bias", type=float, default=0.5,
                   help="probability of a positive off-diagonal factor entry")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--seed", type=int, default=0, help="64-bit stream seed")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check order conditions and identity residuals")
    v.add_argument("input", help="matrix file")
    v.add_argument("--tol", type=float, default=1e-9,
                   help="largest acceptable identity residual")
    add_common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("test", help="sequential dependence t-test on a sample block")
    t.add_argument("data", help="N x p sample file, one row per observation")
    t.add_argument("--target", type=int, help="1-based column to test (default: last)")
    t.add_argument("--alpha", type=float, default=0.05, help="test level")
    add_common(t)
    t.set_defaults(func=cmd_test)

    r = sub.add_parser("ar1", help="AR(1) matrix, factor, or autocorrelated samples")
    r.add_argument("--n", type=int, required=True, help="dimension")
    r.add_argument("--rho", type=float, required=True, help="lag-one coefficient, |rho| < 1")
    r.add_argument("--emit", choices=("matrix", "factor", "samples"), default="matrix")
    r.add_argument("--count", type=int, default=1, help="sample rows (emit=samples)")
    add_common(r, seed=True)
    r.set_defaults(func=cmd_ar1)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotPositiveDefinite, SchurNonPositive, NegativeRadicand, NearSingular) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
