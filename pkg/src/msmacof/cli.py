"""Command line entry point: solve, diagnose, and write a report."""
import argparse
import sys
from pathlib import Path

import numpy as np

from .engine import SolverConfig, normalize, run
from .exceptions import DataError
from .io import load_dataset
from .linalg import build_laplacian_pair
from .report import build_report, diagnose, timed, write_report, write_trace

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(
        prog="msmacof",
        description="Metric MDS by SMACOF with Jacobian-based convergence diagnostics.",
    )
    ap.add_argument("--data", required=True, help="built-in name (degruijter, ekman) or lower-triangle file")
    ap.add_argument("--weights", help="lower-triangle weight file (default: unit weights)")
    ap.add_argument("--p", type=int, default=2, help="dimension (default 2)")
    ap.add_argument("--eps", type=float, default=1e-15, help="stop when the change drops below this")
    ap.add_argument("--itmax", type=int, default=10000, help="iteration cap")
    ap.add_argument("--pca", action="store_true", help="rotate every iterate to principal axes")
    ap.add_argument("--verbose", action="store_true", help="print one line per iteration")
    ap.add_argument(
        "--init",
        default="torgerson",
        help="torgerson | random:<seed> | file:<path> (whitespace n x p matrix)",
    )
    ap.add_argument("--similarity", action="store_true", help="treat a data file as similarities in [0, 1]")
    ap.add_argument("--exponent", type=float, default=3.0, help="similarity transform (1 - s) ** exponent")
    ap.add_argument("--out", help="report path (JSON)")
    ap.add_argument("--trace", help="trace CSV path (default: next to --out)")
    ap.add_argument("--no-diagnostics", action="store_true", help="skip Jacobians and spectra")
    return ap


def _parse_init(value, parser):
    if value == "torgerson":
        return "torgerson", None
    kind, _, arg = value.partition(":")
    if kind == "random":
        try:
            return "random", int(arg)
        except ValueError:
            parser.error(f"--init random needs an integer seed, got {arg!r}")
    if kind == "file" and arg:
        return np.loadtxt(arg, ndmin=2), None
    parser.error(f"bad --init value {value!r}")


def _summary(rep):
    res = rep["result"]
    lines = [
        f"itel {res['itel']}  converged {res['converged']}  stress {res['stress']:.10f}",
        f"root factor {res['r_final']:.10f}  ratio factor {res['q_final']:.10f}",
    ]
    for kind in ("dGamma", "dPiGamma"):
        spec = rep.get("spectra", {}).get(kind)
        if spec is None:
            continue
        if "error" in spec:
            lines.append(f"{kind}: {spec['error']}")
        else:
            lines.append(
                f"{kind}: kappa {spec['kappa']:.10f}  units {spec['n_unit']}  zeros {spec['n_zero']}"
                f"  {spec['classification']}"
            )
    if "certificate" in rep:
        lines.append(f"global minimum certified: {rep['certificate']['certified']}")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        init, seed = _parse_init(args.init, parser)
        config = SolverConfig(
            p=args.p, eps=args.eps, itmax=args.itmax, pca=args.pca,
            verbose=args.verbose, init=init, seed=seed,
        )
    except ValueError as exc:
        if isinstance(exc, DataError):
            print(f"msmacof: {exc}", file=sys.stderr)
            return EXIT_DATA
        parser.error(str(exc))
    except OSError as exc:
        print(f"msmacof: {exc}", file=sys.stderr)
        return EXIT_DATA

    times = {}
    try:
        data, info = load_dataset(
            args.data, weights=args.weights, similarity=args.similarity, exponent=args.exponent
        )
        data = normalize(data)
        lap = build_laplacian_pair(data)
        with timed(times, "solve_seconds"):
            result = run(data, config, lap=lap, stream=sys.stdout)
        diagnostics = None
        if not args.no_diagnostics:
            with timed(times, "diagnostics_seconds"):
                diagnostics = diagnose(data, result, lap)
    except (DataError, OSError) as exc:
        print(f"msmacof: {exc}", file=sys.stderr)
        return EXIT_DATA

    report = build_report(data, info, config, result, diagnostics=diagnostics, timing=times)
    if args.out:
        write_report(args.out, report)
    trace_path = args.trace or (str(Path(args.out).with_suffix(".trace.csv")) if args.out else None)
    if trace_path:
        write_trace(trace_path, result.trace)
    print(_summary(report))
    return EXIT_OK
