"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 malformed input,
3 dimension mismatch, 4 unsupported gate, 5 incommensurate phase,
6 point or apex on the path.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import circuit as circ
from .errors import (
    ApexOnPath,
    DimensionMismatch,
    IncommensuratePhase,
    InvalidQubit,
    PointOnPath,
    TooLarge,
    TopogatesError,
    UnsupportedGate,
)
from .gates import euler_zyz, unitary_from_json
from .geometry import ClosedPath2D, ClosedPath3D, solid_angle, winding_number
from .lattice import LatticeRegister, PhaseRule
from .monopole import MonopoleConfig, monopole_phase
from .spinline import Architecture

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_MALFORMED = 2
EXIT_DIMENSION = 3
EXIT_UNSUPPORTED = 4
EXIT_INCOMMENSURATE = 5
EXIT_ON_PATH = 6

# first match wins, so subclasses come before their bases
_EXIT_CODES = [
    (PointOnPath, EXIT_ON_PATH),
    (ApexOnPath, EXIT_ON_PATH),
    (UnsupportedGate, EXIT_UNSUPPORTED),
    (IncommensuratePhase, EXIT_INCOMMENSURATE),
    (DimensionMismatch, EXIT_DIMENSION),
    (InvalidQubit, EXIT_DIMENSION),
    (TooLarge, EXIT_DIMENSION),
    (TopogatesError, EXIT_MALFORMED),
    (json.JSONDecodeError, EXIT_MALFORMED),
    (KeyError, EXIT_MALFORMED),
    (TypeError, EXIT_MALFORMED),
    (ValueError, EXIT_MALFORMED),
    (OSError, EXIT_MALFORMED),
]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def cmd_simulate(args) -> int:
    c = circ.Circuit.from_json(_read(args.circuit))
    psi = circ.simulate(c, args.initial)
    _write(args.output, json.dumps([[z.real, z.imag] for z in psi]))
    return EXIT_OK


def _backend(args, n_qubits: int):
    if args.backend == "lattice":
        rule = PhaseRule.anyon(args.phi0) if args.anyon else PhaseRule.charge_dipole(args.phi0)
        return circ.LatticeBackend(LatticeRegister.row(n_qubits, rule), args.n_max)
    return circ.SpinBackend(args.kappa, Architecture(args.arch))


def cmd_compile(args) -> int:
    c = circ.Circuit.from_json(_read(args.circuit))
    prog = circ.compile(c, _backend(args, c.n_qubits))
    _write(args.output, prog.to_json())
    print(prog.report(c))
    return EXIT_OK


def cmd_verify(args) -> int:
    c = circ.Circuit.from_json(_read(args.circuit))
    prog = circ.CompiledProgram.from_json(_read(args.program))
    err = circ.compilation_error(c, prog)
    ok = err <= args.tol
    print(f"{'PASS' if ok else 'FAIL'} max deviation {err:.3e} (tol {args.tol:.1e})")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_decompose(args) -> int:
    u = unitary_from_json(_read(args.unitary))
    if u.shape != (2, 2):
        raise DimensionMismatch(f"decompose needs a 2x2 unitary, got {u.shape}")
    print(json.dumps(euler_zyz(u).as_dict()))
    return EXIT_OK


def _scalar(x: float) -> None:
    print(f"{x:.12g}")


def cmd_winding(args) -> int:
    path = ClosedPath2D.from_json(_read(args.path))
    print(winding_number(path, args.point, tol=args.tol))
    return EXIT_OK


def cmd_solid_angle(args) -> int:
    path = ClosedPath3D.from_json(_read(args.path))
    _scalar(solid_angle(path, args.apex, tol=args.tol))
    return EXIT_OK


def cmd_monopole_phase(args) -> int:
    path = ClosedPath3D.from_json(_read(args.path))
    if args.config:
        cfg = MonopoleConfig.from_json(_read(args.config))
    else:
        cfg = MonopoleConfig(args.position, args.n_q)
    _scalar(monopole_phase(path, cfg))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topogates", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="statevector of a circuit")
    p.add_argument("circuit")
    p.add_argument("--initial", help="basis label q_{n-1}...q_0 (default all zeros)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compile", help="compile a circuit to a backend program")
    p.add_argument("circuit")
    p.add_argument("--backend", choices=("lattice", "spin"), required=True)
    p.add_argument("--phi0", type=float, default=math.pi / 2, help="lattice base phase (rad)")
    p.add_argument("--n-max", type=int, default=16, help="largest winding multiple tried")
    p.add_argument("--anyon", action="store_true", help="identical-anyon phase rule")
    p.add_argument("--kappa", type=float, default=1.0, help="spin-orbit coupling")
    p.add_argument("--arch", choices=("flying", "static"), default="flying")
    p.add_argument("-o", "--output", required=True, help="program file")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check a program against its circuit")
    p.add_argument("circuit")
    p.add_argument("program")
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="ZYZ angles of a 2x2 unitary")
    p.add_argument("unitary")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("winding", help="winding number of a planar loop")
    p.add_argument("path")
    p.add_argument("--point", type=float, nargs=2, default=(0.0, 0.0), metavar=("X", "Y"))
    p.add_argument("--tol", type=_positive, default=1e-9)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("solid-angle", help="signed solid angle of a 3D loop")
    p.add_argument("path")
    p.add_argument("--apex", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("X", "Y", "Z"))
    p.add_argument("--tol", type=_positive, default=1e-9)
    p.set_defaults(func=cmd_solid_angle)

    p = sub.add_parser("monopole-phase", help="phase of a charge looped around a monopole")
    p.add_argument("path")
    p.add_argument("--position", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("X", "Y", "Z"))
    p.add_argument("--n-q", type=int, default=1)
    p.add_argument("--config", help="monopole config JSON instead of --position/--n-q")
    p.set_defaults(func=cmd_monopole_phase)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    np.seterr(all="ignore")
    try:
        return args.func(args)
    except Exception as exc:
        for kind, code in _EXIT_CODES:
            if isinstance(exc, kind):
                print(f"topogates {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
