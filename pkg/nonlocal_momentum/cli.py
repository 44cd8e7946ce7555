"""Command line front end: ``nonlocal-momentum <command> ...``"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from nonlocal_momentum.AxisSpectrum import AxisSpectrum
from nonlocal_momentum.Domain import Domain, Side
from nonlocal_momentum.GammaMatrix import GammaVariant
from nonlocal_momentum.GreenFunction import (
    FreeAxisGreen,
    IntervalGreen,
    PointGreen,
)
from nonlocal_momentum.IntervalSpectrum import IntervalSpectrum
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.Potential import Potential
from nonlocal_momentum.Resolvent import Resolvent
from nonlocal_momentum.SpectralPoint import SpectralPoint
from nonlocal_momentum.Verifier import SUITES, Verifier
from nonlocal_momentum.errors import NumericalError, ValidationError
from nonlocal_momentum.utility import (
    complex_to_json,
    numerical_rank,
    parse_complex,
    parse_pair,
    parse_real,
)

SCHEMA = 1
VARIANTS = {
    "axis": ["axis-single-A", "axis-single-B", "axis-two"],
    "interval": ["interval-two", "interval-single-F"],
}
VALUE_OPTIONS = {"--range", "--x", "--y", "--z", "--alpha", "--xi-range", "--V"}


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    params: Parameters
    out: str = None
    fmt: str = "json"
    overrides: dict = field(default_factory=dict)


@dataclass
class Output:
    """What a command hands back for serialisation"""

    data: dict
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nonlocal-momentum",
        description="Spectra and resolvent kernels of momentum operators "
        "with nonlocal potentials",
    )
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument(
        "--format", default="json", choices=["json", "csv"], help="output format"
    )
    parser.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a tolerance (root, rank, condition, degeneracy, pole, "
        "resonance); may repeat",
    )
    parser.add_argument("--params", help="JSON file of parameters")
    parser.add_argument(
        "--verbose", action="store_true", help="progress messages on stderr"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    eigen = commands.add_parser("eigen", help="eigenvalues in a range")
    _add_model(eigen)
    eigen.add_argument("--range", required=True, help="lo,hi")
    eigen.add_argument(
        "--step", type=float, help="lambda scan step on the axis"
    )

    greens = commands.add_parser("greens", help="unperturbed Green's functions")
    greens.add_argument("--model", required=True, choices=["axis", "interval"])
    greens.add_argument("--z", required=True)
    greens.add_argument("--alpha", default="0")
    greens.add_argument(
        "--x", required=True, help="comma separated points, -0 and +0 allowed"
    )
    greens.add_argument("--y", default="0")
    greens.add_argument(
        "--point", action="store_true", help="axis: include the point interaction"
    )

    kernel = commands.add_parser("kernel", help="resolvent kernel on a grid")
    _add_model(kernel)
    kernel.add_argument("--z", required=True)
    kernel.add_argument("--variant")
    kernel.add_argument("--grid", type=int, default=32)

    apply = commands.add_parser(
        "resolvent-apply", help="psi = (A - z)^{-1} h sampled on a grid"
    )
    _add_model(apply)
    apply.add_argument("--z", required=True)
    apply.add_argument("--variant")
    apply.add_argument("--h", default="const:1@0,1")
    apply.add_argument("--grid", type=int, default=101)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", default="all", choices=SUITES)
    verify.add_argument("--samples", type=int, default=50)
    verify.add_argument("--seed", type=int, default=20240101)

    figure = commands.add_parser("figure1", help="F(xi) against 1/S(V)")
    figure.add_argument("--V", required=True)
    figure.add_argument("--xi-range", default="-12,12")
    figure.add_argument("--samples", type=int, default=2001)
    return parser


def _add_model(sub):
    sub.add_argument("--model", required=True, choices=["axis", "interval"])
    sub.add_argument("--alpha", required=True)
    sub.add_argument("--v1", default="zero")
    sub.add_argument("--v2", default="zero")


def attach_values(argv):
    """
    Joins options with values that start with a minus sign, ``--range -1,12``
    becomes ``--range=-1,12``, so argparse does not read them as flags
    """
    out = []
    i = 0
    while i < len(argv):
        item = argv[i]
        following = argv[i + 1] if i + 1 < len(argv) else None
        if (
            item in VALUE_OPTIONS
            and following is not None
            and following.startswith("-")
            and not following.startswith("--")
        ):
            out.append(f"{item}={following}")
            i += 2
        else:
            out.append(item)
            i += 1
    return out


def make_config(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(attach_values(list(argv)))
    if args.params:
        params = Parameters.load(args.params)
    else:
        params = Parameters()
    overrides = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            params.override_tolerance(name, parse_real(value))
        except KeyError:
            raise ValidationError(
                f"unknown tolerance {name!r}, expected one of "
                f"{sorted(Parameters.tolerance_names)}"
            )
        overrides[name] = float(getattr(params, Parameters.tolerance_names[name]))
    return RunConfig(args.command, args, params, args.out, args.format, overrides)


# Commands


def _potentials(args, domain):
    v1 = Potential.from_literal(args.v1, domain)
    v2 = Potential.from_literal(args.v2, domain)
    return v1, v2


def cmd_eigen(config):
    args, params = config.args, config.params
    domain = Domain.from_name(args.model)
    alpha = parse_real(args.alpha)
    lam_range = parse_pair(args.range)
    v1, v2 = _potentials(args, domain)
    if domain is Domain.AXIS:
        if not v2.is_zero:
            raise ValidationError("the axis eigenvalue test takes --v1 only")
        results = AxisSpectrum(params).scan(v1, alpha, lam_range, args.step)
    else:
        results = IntervalSpectrum(params).eigenvalues_general(
            v1, v2, alpha, lam_range
        )
    records = [r.as_dict() for r in results]
    rows = [
        [r["lambda"], r["multiplicity"], r["residuals"][0], r["residuals"][1],
         r["method"]]
        for r in records
    ]
    return Output(
        {"model": args.model, "alpha": alpha, "eigenvalues": records},
        ["lambda", "multiplicity", "residual1", "residual2", "method"],
        rows,
    )


def _point(token):
    """A real x, with -0 and +0 selecting a one-sided limit at the origin"""
    text = token.strip()
    if text in ["-0", "+0"]:
        return 0.0, Side.MINUS if text == "-0" else Side.PLUS
    return parse_real(text), None


def cmd_greens(config):
    args, params = config.args, config.params
    zp = SpectralPoint(parse_complex(args.z))
    alpha = parse_real(args.alpha)
    y = parse_real(args.y)
    if args.model == "axis":
        base = PointGreen(zp, alpha) if args.point else FreeAxisGreen(zp)
    else:
        base = IntervalGreen(zp, alpha, params.pole_tol)
    rows = []
    for token in args.x.split(","):
        x, side = _point(token)
        value = complex(base.evaluate(x, y, side))
        rows.append([token.strip(), y, value.real, value.imag])
    return Output(
        {
            "model": args.model,
            "z": complex_to_json(zp.z),
            "values": [
                {"x": r[0], "y": r[1], "value": [r[2], r[3]]} for r in rows
            ],
        },
        ["x", "y", "re", "im"],
        rows,
    )


def _variant(args):
    variant = args.variant
    if variant is None:
        if args.model == "interval":
            variant = "interval-two"
        else:
            two = Potential.from_literal(args.v2, Domain.AXIS).is_zero
            variant = "axis-single-A" if two else "axis-two"
    if variant not in VARIANTS[args.model]:
        raise ValidationError(
            f"variant {variant!r} does not belong to the {args.model} model"
        )
    return GammaVariant(GammaVariant.names().index(variant))


def _kernel(config):
    args, params = config.args, config.params
    domain = Domain.from_name(args.model)
    zp = SpectralPoint(parse_complex(args.z))
    alpha = parse_real(args.alpha)
    v1, v2 = _potentials(args, domain)
    variant = _variant(args)
    K = Resolvent(params).kernel(variant, zp, v1, v2, alpha)
    return K, domain


def _grid(domain, n, interleave=0.0):
    if n < 2:
        raise ValidationError(f"the grid needs at least two points, got {n}")
    j = np.arange(n) + 0.5 + interleave
    if domain is Domain.INTERVAL:
        return j / (n + 1.0)
    return -3.0 + 6.0 * j / (n + 1.0)


def cmd_kernel(config):
    K, domain = _kernel(config)
    n = config.args.grid
    xs, ys = _grid(domain, n, -0.25), _grid(domain, n, 0.25)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    values = K.evaluate(X, Y)
    correction = K.perturbation(X, Y)
    rank = numerical_rank(correction, config.params.rank_tol) if n >= 8 else None
    rows = [
        [x, y, values[i, j].real, values[i, j].imag]
        for i, x in enumerate(xs)
        for j, y in enumerate(ys)
    ]
    return Output(
        {
            "provenance": K.provenance,
            "z": complex_to_json(K.zp.z),
            "gamma": K.gamma.as_dict(),
            "correction_rank": rank,
            "x": xs.tolist(),
            "y": ys.tolist(),
            "re": values.real.tolist(),
            "im": values.imag.tolist(),
        },
        ["x", "y", "re", "im"],
        rows,
        {"variant": K.provenance, "correction_rank": rank},
    )


def cmd_resolvent_apply(config):
    K, domain = _kernel(config)
    h = Potential.from_literal(config.args.h, domain)
    psi, intermediates = Resolvent(config.params).apply_resolvent(K, h)
    xs = _grid(domain, config.args.grid)
    values = psi(xs)
    rows = [[x, v.real, v.imag] for x, v in zip(xs, values)]
    return Output(
        {
            "provenance": K.provenance,
            "z": complex_to_json(K.zp.z),
            "intermediates": intermediates.as_dict(),
            "x": xs.tolist(),
            "re": values.real.tolist(),
            "im": values.imag.tolist(),
        },
        ["x", "re", "im"],
        rows,
        {"system_defect": intermediates.system_defect},
    )


def cmd_verify(config):
    args = config.args
    verifier = Verifier(config.params, args.samples, args.seed, args.verbose)
    results = verifier.run(args.suite)
    records = [r.as_dict() for r in results]
    failed = sum(not r.passed for r in results)
    output = Output(
        {"suite": args.suite, "failed": failed, "checks": records},
        ["name", "passed", "value", "bound", "seconds"],
        [[r.name, r.passed, r.value, r.bound, r.seconds] for r in results],
        {"failed": failed},
    )
    if args.suite in ["oracle", "all"]:
        output.data["oracle_table"] = verifier.oracle_table()
    return output


def cmd_figure1(config):
    args = config.args
    V = parse_complex(args.V)
    data = IntervalSpectrum(config.params).figure1_data(
        V, parse_pair(args.xi_range), args.samples
    )
    rows = [[x, f] for x, f in zip(data.xi, data.F)]
    return Output(
        {
            "V": complex_to_json(V),
            "S": data.characteristic.S,
            "inverse_S": data.inverse,
            "poles": data.poles.tolist(),
            "intersections": data.intersections.tolist(),
            "xi": data.xi.tolist(),
            "F": [None if np.isnan(f) else float(f) for f in data.F],
        },
        ["xi", "F"],
        rows,
        {
            "inverse_S": data.inverse,
            "intersections": " ".join(f"{x:.12g}" for x in data.intersections),
        },
    )


HANDLERS = {
    "eigen": cmd_eigen,
    "greens": cmd_greens,
    "kernel": cmd_kernel,
    "resolvent-apply": cmd_resolvent_apply,
    "verify": cmd_verify,
    "figure1": cmd_figure1,
}


# Serialisation


def render(config, output):
    if config.fmt == "json":
        document = {
            "schema": SCHEMA,
            "command": config.command,
            "tolerances": config.params.tolerances(),
        }
        document.update(output.data)
        return json.dumps(document, indent=2, allow_nan=False, default=_json_default) + "\n"

    buffer = io.StringIO()
    buffer.write(f"# schema: {SCHEMA}\n")
    buffer.write(f"# command: {config.command}\n")
    for name, value in config.params.tolerances().items():
        buffer.write(f"# tolerance {name}: {value}\n")
    for name, value in output.notes.items():
        buffer.write(f"# {name}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(output.header)
    for row in output.rows:
        writer.writerow([_csv_cell(c) for c in row])
    return buffer.getvalue()


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return complex_to_json(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _csv_cell(value):
    if isinstance(value, (float, np.floating)):
        return "nan" if np.isnan(value) else repr(float(value))
    return value


def run(config):
    output = HANDLERS[config.command](config)
    text = render(config, output)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    if config.command == "verify" and output.data["failed"]:
        return 3
    return 0


def main(argv=None):
    try:
        config = make_config(argv)
        if config.args.verbose:
            print(f"running {config.command}", file=sys.stderr)
        return run(config)
    except NumericalError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return ValidationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
