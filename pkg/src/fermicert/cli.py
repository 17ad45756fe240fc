"""Command-line interface: validation, dispersion, certificates, and spectra.

Exit codes: 0 on success (including inconclusive verdicts), 1 on invalid
input, 2 when a size or resource guard rejects the computation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np
from gmpy2 import mpq

from .certify import certify
from .errors import (
    ConductorLimitExceeded,
    FermicertError,
    InvalidSpec,
    SizeLimitExceeded,
)
from .floquet import OperatorSpec, dispersion, reduce_quotient, spec_json_problems
from .models import decorated_model, lieb_model, zd_model
from .spectral import band_csv, band_functions, floquet_union, torus_spectrum


def _write_output(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fermicert-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _load_spec(path: str) -> OperatorSpec:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return OperatorSpec.from_json(data)


def cmd_validate(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    problems = spec_json_problems(data)
    if problems:
        for problem in problems:
            print(f"violation: {problem}")
        return 1
    print("OK")
    return 0


def cmd_dispersion(args) -> int:
    spec = _load_spec(args.spec)
    ptilde = dispersion(spec)
    reduced = reduce_quotient(ptilde, spec.period)
    if args.format == "json":
        text = _dump_json(
            {
                "period": list(spec.period),
                "lambda_degree": ptilde.lambda_degree(),
                "twist_invariant": True,
                "ptilde": ptilde.to_json(),
                "p": reduced.to_json(),
            }
        )
    else:
        text = (
            f"lambda degree: {ptilde.lambda_degree()}\n"
            f"twist invariant: yes (period {list(spec.period)})\n"
            f"ptilde(z, lambda) = {ptilde}\n"
            f"p(w, lambda) = {reduced}\n"
        )
    _write_output(text, args.out)
    return 0


def cmd_certify(args) -> int:
    spec = _load_spec(args.spec)
    lam = mpq(args.lam) if args.lam is not None else None
    report = certify(spec, a1_mode=args.a1, lam=lam)
    if args.format == "json":
        text = _dump_json(report.to_json())
    else:
        text = report.render_text() + "\n"
    _write_output(text, args.out)
    return 0


def cmd_spectrum(args) -> int:
    spec = _load_spec(args.spec)
    reps = tuple(int(x) for x in args.torus.split(","))
    if len(reps) != spec.dimension or any(n < 1 for n in reps):
        print("error: --torus must list one positive count per dimension", file=sys.stderr)
        return 1
    torus = torus_spectrum(spec, reps)
    union = floquet_union(spec, reps)
    deviation = float(np.max(np.abs(torus - union)))
    passed = deviation <= args.tol
    if args.format == "json":
        text = _dump_json(
            {
                "dimension": int(torus.shape[0]),
                "max_deviation": deviation,
                "tol": args.tol,
                "pass": passed,
            }
        )
    else:
        text = (
            f"matrix dimension: {torus.shape[0]}\n"
            f"max elementwise deviation: {deviation:.3e}\n"
            f"tolerance: {args.tol:.3e}\n"
            f"{'PASS' if passed else 'FAIL'}\n"
        )
    _write_output(text, args.out)
    return 0


def cmd_models_emit(args) -> int:
    period = tuple(int(x) for x in args.period.split(","))
    if args.lattice == "lieb":
        spec = lieb_model(period)
    elif args.lattice == "zd":
        spec = zd_model(len(period), period)
    elif args.lattice == "decorated":
        spec = decorated_model(len(period), args.orbits, period)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.lattice)
    _write_output(_dump_json(spec.to_json()), args.out)
    return 0


def cmd_bands(args) -> int:
    spec = _load_spec(args.spec)
    if args.path:
        points = [
            tuple(float(x) for x in chunk.split(",")) for chunk in args.path.split(";")
        ]
    else:
        end = tuple(0.5 if j == 0 else 0.0 for j in range(spec.dimension))
        points = [(0.0,) * spec.dimension, end]
    if any(len(p) != spec.dimension for p in points):
        print("error: each path point needs one entry per dimension", file=sys.stderr)
        return 1
    rows = band_functions(spec, points, samples=args.samples)
    _write_output(band_csv(rows, spec.dimension), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermicert",
        description="Exact dispersion polynomials and component-bound "
        "certificates for periodic graph operators.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("validate", help="schema-check an operator specification")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dispersion", help="compute the dispersion polynomial")
    p.add_argument("spec")
    add_io(p)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("certify", help="emit a component-bound certificate")
    p.add_argument("spec")
    p.add_argument("--a1", choices=("auto", "attested"), default="auto")
    p.add_argument("--lambda", dest="lam", default=None, metavar="P/Q")
    add_io(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("spectrum", help="compare torus and fiber-union spectra")
    p.add_argument("spec")
    p.add_argument("--torus", required=True, metavar="N1,...,Nd")
    p.add_argument("--tol", type=float, default=1e-9)
    add_io(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("models", help="catalog model utilities")
    models_sub = p.add_subparsers(dest="models_command", required=True)
    pe = models_sub.add_parser("emit", help="write a catalog specification")
    pe.add_argument("lattice", choices=("lieb", "zd", "decorated"))
    pe.add_argument("--period", required=True, metavar="q1,...,qd")
    pe.add_argument("--orbits", type=int, default=3)
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=cmd_models_emit)

    p = sub.add_parser("bands", help="band functions along a momentum path (CSV)")
    p.add_argument("spec")
    p.add_argument("--path", default=None, metavar="k1,k2;k1,k2;...")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bands)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SizeLimitExceeded, ConductorLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidSpec, FermicertError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
