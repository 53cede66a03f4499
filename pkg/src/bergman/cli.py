"""Command-line front end for the kernel, transform, and weight routines.

Subcommands load a domain spec from JSON, run one family of computations,
and emit a CSV table (stdout or --out) together with a JSON mirror of the
same rows when writing to a file.  Exit codes: 0 success, 2 validation
failure (with line-referenced messages for malformed JSON), 3 accuracy
failure under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .domains import DomainSpec, det_lambda_prime, lambda_map
from .errors import (
    AccuracyError,
    BergmanError,
    DimensionError,
    DivergenceError,
    DomainError,
    InvalidPolynomialError,
    NotInSpaceError,
)
from .kernels import (
    bergman_fourier,
    bergman_mellin,
    bergman_series,
    kernel_transport,
)
from .polynomials import HoloPolynomial
from .transforms import T_S_inverse, SpectralElement, isometry_pair, isometry_suite
from .transforms1d import exp_profile
from .weights import lambda_weight

__all__ = ["main"]


class _CliError(Exception):
    """Validation failure carrying a user-facing message (exit 2)."""


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise _CliError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise _CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _load_spec(path: str) -> DomainSpec:
    obj = _load_json(path)
    try:
        spec, added = DomainSpec.from_json(obj)
    except (InvalidPolynomialError, ValueError, KeyError, TypeError) as exc:
        raise _CliError(f"{path}: {exc}") from exc
    if added:
        print(f"note: completed {added} conjugate partner term(s) in {path}",
              file=sys.stderr)
    return spec


def _parse_point(entry, n: int, where: str) -> tuple[complex, list[complex]]:
    if not isinstance(entry, dict) or "z" not in entry:
        raise _CliError(f'{where}: each point needs a "z": [re, im] entry')
    zr = entry["z"]
    if not isinstance(zr, (list, tuple)) or len(zr) != 2:
        raise _CliError(f'{where}: "z" must be a [re, im] pair')
    z = complex(float(zr[0]), float(zr[1]))
    raw_w = entry.get("w", [])
    if len(raw_w) != n:
        raise _CliError(f'{where}: "w" has {len(raw_w)} coordinates, spec needs {n}')
    w = [complex(float(c[0]), float(c[1])) for c in raw_w]
    return z, w


def _load_pairs(path: str, n: int) -> list[tuple]:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "pairs" not in obj:
        raise _CliError(f'{path}: points JSON must have a "pairs" list')
    pairs = []
    for idx, item in enumerate(obj["pairs"]):
        if not isinstance(item, dict) or "x" not in item or "y" not in item:
            raise _CliError(f'{path}: pair {idx} needs "x" and "y" points')
        x = _parse_point(item["x"], n, f"{path}: pair {idx} x")
        y = _parse_point(item["y"], n, f"{path}: pair {idx} y")
        pairs.append((x, y))
    if not pairs:
        raise _CliError(f"{path}: no point pairs given")
    return pairs


def _emit(header: list[str], rows: list[list[str]], out: str | None) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    mirror = out[:-4] + ".json" if out.endswith(".csv") else out + ".json"
    payload = {"header": header, "rows": rows}
    with open(mirror, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"{flag}: {exc}") from exc


def _check_tol(tol: float | None) -> None:
    if tol is not None and tol <= 0:
        raise _CliError(f"--tol must be positive, got {tol}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

_SERIES_NOTE = "series points live in the bounded model; fourier/mellin in the half-space"


def _kernel_value(spec: DomainSpec, method: str, x, y, tol: float | None):
    if method == "series":
        return bergman_series(spec, x, y, tol=tol if tol is not None else 1e-8)
    if method == "fourier":
        return bergman_fourier(spec, x, y, tol=tol if tol is not None else 1e-8)
    if method == "mellin":
        return bergman_mellin(spec, x, y, tol=tol if tol is not None else 1e-6)
    raise _CliError(f"unknown method {method!r}")


def _cmd_kernel(args) -> int:
    _check_tol(args.tol)
    spec = _load_spec(args.spec)
    pairs = _load_pairs(args.points, spec.n)
    header = ["pair", "value_re", "value_im", "method", "error_estimate"]
    rows = []
    soft_fail = False
    for idx, (x, y) in enumerate(pairs):
        est = _kernel_value(spec, args.method, x, y, args.tol)
        soft_fail = soft_fail or not est.converged
        rows.append([str(idx), _fmt(est.value.real), _fmt(est.value.imag),
                     est.method, _fmt(est.error_estimate)])
    _emit(header, rows, args.out)
    return 3 if (args.strict and soft_fail) else 0


def _transported_series(spec: DomainSpec, x, y, tol: float):
    return kernel_transport(
        lambda a, b: bergman_series(spec, a, b, degree=40, tol=tol),
        lambda z, w: lambda_map(spec, z, w),
        lambda z, w: det_lambda_prime(spec, z),
        x, y,
    )


def _cmd_compare(args) -> int:
    _check_tol(args.tol)
    tol = args.tol if args.tol is not None else 1e-4
    spec = _load_spec(args.spec)
    pairs = _load_pairs(args.points, spec.n)
    header = ["pair", "method", "value_re", "value_im", "error_estimate",
              "max_deviation"]
    rows = []
    worst = 0.0
    soft_fail = False
    for idx, (x, y) in enumerate(pairs):
        estimates = {
            "series": _transported_series(spec, x, y, 1e-8),
            "fourier": bergman_fourier(spec, x, y),
            "mellin": bergman_mellin(spec, x, y, tol=min(tol, 1e-6)),
        }
        scale = max(max(abs(e.value) for e in estimates.values()), 1e-300)
        names = list(estimates)
        deviation = max(
            abs(estimates[a].value - estimates[b].value) / scale
            for i, a in enumerate(names) for b in names[i + 1:]
        )
        worst = max(worst, deviation)
        soft_fail = soft_fail or deviation > tol
        for name in names:
            est = estimates[name]
            soft_fail = soft_fail or not est.converged
            rows.append([str(idx), name, _fmt(est.value.real), _fmt(est.value.imag),
                         _fmt(est.error_estimate), _fmt(deviation)])
    _emit(header, rows, args.out)
    print(f"max pairwise deviation {worst:.3e} over {len(pairs)} pair(s)",
          file=sys.stderr)
    return 3 if (args.strict and soft_fail) else 0


_KIND_TOLS = {"rotation": 1e-6, "translation": 1e-6, "scaling": 1e-4}


def _cmd_isometry(args) -> int:
    _check_tol(args.tol)
    if args.count < 1:
        raise _CliError(f"--count must be at least 1, got {args.count}")
    tol = args.tol if args.tol is not None else _KIND_TOLS[args.kind]
    spec = _load_spec(args.spec)
    elements = isometry_suite(args.kind, spec, count=args.count, seed=args.seed)
    header = ["test_id", "lhs_norm_sq", "rhs_norm_sq", "rel_error", "method",
              "error_estimate"]
    rows = []
    soft_fail = False
    for idx, element in enumerate(elements):
        lhs, rhs = isometry_pair(args.kind, element)
        gap = abs(lhs - rhs)
        rel = gap / max(abs(rhs), 1e-300)
        soft_fail = soft_fail or rel > tol
        rows.append([str(idx), _fmt(lhs), _fmt(rhs), _fmt(rel), args.kind,
                     _fmt(gap)])
    _emit(header, rows, args.out)
    return 3 if (args.strict and soft_fail) else 0


def _cmd_roundtrip(args) -> int:
    _check_tol(args.tol)
    tol = args.tol if args.tol is not None else 1e-6
    spec = _load_spec(args.spec)
    if spec.n:
        coeff = HoloPolynomial(spec.n, (((1,) + (0,) * (spec.n - 1), 1.0),))
        w = [0.45 + 0.15j] + [0.0] * (spec.n - 1)
    else:
        coeff = 1.0
        w = []
    element = SpectralElement(spec, ((exp_profile(1.0, 1, 1.0), coeff),))
    scale = complex(element.terms[0][1](np.asarray(w, dtype=complex)))
    grid = np.linspace(0.1, 2.0, 20)
    recovered = T_S_inverse(element, w, 0.35, grid)
    truth = grid * np.exp(-grid) * scale
    errors = np.abs(recovered.values - truth)
    header = ["t", "value_re", "value_im", "reference_re", "reference_im",
              "abs_error", "method", "error_estimate"]
    rows = []
    for tv, rec, ref, err in zip(grid, recovered.values, truth, errors):
        rows.append([_fmt(tv), _fmt(rec.real), _fmt(rec.imag), _fmt(ref.real),
                     _fmt(ref.imag), _fmt(err), "contour",
                     _fmt(recovered.error_estimate)])
    _emit(header, rows, args.out)
    sup = float(errors.max())
    print(f"round-trip sup error {sup:.3e} on [0.1, 2]", file=sys.stderr)
    return 3 if (args.strict and sup > tol) else 0


def _cmd_weights(args) -> int:
    if not args.lam:
        raise _CliError("choose a weight family: --lambda")
    s_values = _parse_floats(args.s, "--s")
    t_values = _parse_floats(args.t, "--t")
    if not s_values or not t_values:
        raise _CliError("--s and --t each need at least one value")
    header = ["s", "t", "value", "method", "error_estimate"]
    rows = []
    for s in s_values:
        for t in t_values:
            value = float(lambda_weight(s, t))
            rows.append([_fmt(s), _fmt(t), _fmt(value), "lambda", "0"])
    _emit(header, rows, args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergman",
        description="Bergman kernels, transforms, and weights on polynomial "
                    "half-spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, points: bool) -> None:
        p.add_argument("--spec", required=True, help="domain spec JSON path")
        if points:
            p.add_argument("--points", required=True,
                           help='JSON {"pairs": [{"x": {"z": [re, im], '
                                '"w": [[re, im], ...]}, "y": {...}}]}')
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--strict", action="store_true",
                       help="exit 3 when an accuracy check fails")
        p.add_argument("--out", default=None,
                       help="CSV path; a .json mirror is written beside it")

    k = sub.add_parser("kernel", help="evaluate one kernel route at point pairs")
    common(k, points=True)
    k.add_argument("--method", choices=("series", "fourier", "mellin"),
                   default="fourier", help=_SERIES_NOTE)
    k.set_defaults(fn=_cmd_kernel)

    c = sub.add_parser("compare",
                       help="run all kernel routes and report deviations")
    common(c, points=True)
    c.set_defaults(fn=_cmd_compare)

    i = sub.add_parser("isometry", help="norm comparisons over element suites")
    common(i, points=False)
    i.add_argument("--kind", choices=("rotation", "translation", "scaling"),
                   required=True)
    i.add_argument("--count", type=int, default=20)
    i.add_argument("--seed", type=int, default=7)
    i.set_defaults(fn=_cmd_isometry)

    r = sub.add_parser("roundtrip",
                       help="invert the half-line transform and compare")
    common(r, points=False)
    r.set_defaults(fn=_cmd_roundtrip)

    w = sub.add_parser("weights", help="tabulate weight functions")
    w.add_argument("--lambda", dest="lam", action="store_true",
                   help="the sector weight lambda(s, t)")
    w.add_argument("--s", default="0", help="comma-separated s values")
    w.add_argument("--t", default="0", help="comma-separated t values")
    w.add_argument("--out", default=None)
    w.set_defaults(fn=_cmd_weights, strict=False)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy: {exc}", file=sys.stderr)
        return 3 if getattr(args, "strict", False) else 2
    except (InvalidPolynomialError, DomainError, DimensionError,
            DivergenceError, NotInSpaceError, BergmanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
