"""Command-line front end.

Exit codes: 0 ok, 2 scene/expression parse error, 3 divergent or singular
response, 4 usage error. Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import commands, scene_io
from .errors import DivergentLoop, SceneParseError, SingularSystem, WaveGraphError

EXIT_OK, EXIT_PARSE, EXIT_DIVERGENT, EXIT_USAGE = 0, 2, 3, 4

log = logging.getLogger("wavegraph")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _param(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {name!r} is not a number") from None


def _labels(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(x for x in v.split(",") if x)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavegraph", description="Interferometer response factors by graph reduction.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log rule applications")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, k=True):
        p.add_argument("--scene", required=True, help="scene JSON file or bundled scene name")
        p.add_argument("--param", action="append", type=_param, default=[], metavar="NAME=VALUE",
                       help="override a named length from the scene")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if k:
            p.add_argument("--k", type=float, required=True, help="wavenumber (rad per length unit)")

    p = sub.add_parser("respond", help="response factor between two states")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("sweep", help="response factor over a range of wavenumbers")
    common(p, k=False)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--k-min", type=float, required=True)
    p.add_argument("--k-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--engine", choices=commands.ENGINES, default="kernel")

    p = sub.add_parser("intermediate", help="field at an arbitrary state")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--target", "--output", dest="target", required=True)

    p = sub.add_parser("scan", help="maximise |Γ|^2 over one length parameter")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--target", "--output", dest="target", required=True)
    p.add_argument("--scan", required=True, metavar="NAME", help="length parameter to vary")
    p.add_argument("--range", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=2001)
    p.add_argument("--engine", choices=commands.ENGINES, default="kernel")

    p = sub.add_parser("quantum", help="Fock amplitudes after the mode transform")
    common(p)
    p.add_argument("--input", action="append", required=True, help="input port(s), repeat or comma-separate")
    p.add_argument("--output", action="append", required=True, help="output port(s)")
    p.add_argument("--state", required=True, help='creation-operator polynomial, e.g. "a*b"')
    return parser


def _emit(rows: list[dict], fmt: str, out, extra: dict | None = None) -> None:
    if fmt == "json":
        payload = {"rows": rows, **(extra or {})}
        json.dump(payload, out, indent=2, allow_nan=True)
        out.write("\n")
        return
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    for key, value in (extra or {}).items():
        out.write(f"# {key}={value!r}\n")


def _run(args, out) -> int:
    template = scene_io.load(args.scene)
    params = dict(args.param)
    if args.command == "respond":
        _emit([commands.respond(template, args.input, args.output, args.k, params)], args.format, out)
    elif args.command == "intermediate":
        _emit([commands.intermediate(template, args.input, args.target, args.k, params)], args.format, out)
    elif args.command == "sweep":
        config = commands.SweepConfig(args.k_min, args.k_max, args.steps, args.input, args.output)
        _emit(commands.sweep(template, config, params, args.engine), args.format, out)
    elif args.command == "scan":
        lo, hi = args.range
        res = commands.scan_length(template, args.scan, lo, hi, args.k, args.input, args.target,
                                   args.steps, params, args.engine)
        row = {"param": res.param, "argmax": res.argmax, "k": args.k, "re": res.gamma.real,
               "im": res.gamma.imag, "mag2": res.mag2, "flat": res.flat}
        _emit([row], args.format, out)
    elif args.command == "quantum":
        inputs, outputs = _labels(args.input), _labels(args.output)
        _, amps = commands.quantum(template, inputs, outputs, args.state, args.k, params)
        rows = [{"occupation": "|" + ",".join(map(str, occ)) + ">", "re": a.real, "im": a.imag,
                 "prob": abs(a) ** 2} for occ, a in amps.amplitudes.items()]
        _emit(rows, args.format, out, {"modes": ",".join(outputs), "norm": amps.norm})
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args, out)
    except SceneParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DivergentLoop, SingularSystem) as exc:
        print(f"divergent: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except (WaveGraphError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"usage error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
