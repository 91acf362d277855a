"""``rrvar`` command line: translate, run and simulate."""
import argparse
import sys

from .devices import DeviceConfig
from .errors import RRError
from .interpreter import run
from .redundancy import FaultScenario
from .runtime import DEFAULT_MAX_TICKS, simulate
from .translator import translate


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def cmd_translate(args):
    caps = DeviceConfig.load(args.devices).capabilities() if args.devices else None
    with open(args.source) as f:
        out = translate(f.read(), caps)
    _write(args.output, out)
    return 0


def cmd_run(args):
    with open(args.program) as f:
        source = f.read()
    faults = FaultScenario.load(args.faults) if args.faults else None
    result = run(source, args.devices, faults, max_ticks=args.max_ticks,
                 translate=not args.no_translate, concurrent=args.concurrent)
    sys.stdout.write(result.output)
    if args.trace:
        _write(args.trace, result.trace)
    if result.error:
        print(f"rrvar: {result.error}", file=sys.stderr)
    return result.exit_code


def cmd_simulate(args):
    faults = FaultScenario.load(args.faults) if args.faults else None
    result = simulate(args.degree, faults, args.reads, adaptive=args.adaptive)
    _write(args.trace, result.trace)
    lost = sum(not s.recovered for s in result.steps)
    print(f"rrvar: {len(result.steps)} reads, {lost} unrecovered", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="rrvar", description="Reflective and refractive variables toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="instrument an RRC program")
    p.add_argument("source")
    p.add_argument("--devices", help="device config giving each ref_t variable's capabilities")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("run", help="execute an RRC program against simulated devices")
    p.add_argument("program")
    p.add_argument("--devices")
    p.add_argument("--faults", help="fault scenario file")
    p.add_argument("--max-ticks", type=int, default=DEFAULT_MAX_TICKS)
    p.add_argument("--trace", help="write the trace log here")
    p.add_argument("--no-translate", action="store_true", help="run the program as given")
    p.add_argument("--concurrent", action="store_true", help="run the Server on its own thread")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="redundancy-only write/fault/read experiment")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--faults")
    p.add_argument("--reads", type=int, default=100)
    p.add_argument("--adaptive", action="store_true", help="let the controller change the degree")
    p.add_argument("--trace", default="-")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RRError, OSError) as exc:
        print(f"rrvar: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
