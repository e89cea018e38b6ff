"""Command-line entry point.

    sphere-nse run CONFIG
    sphere-nse spectra SNAPSHOT
    sphere-nse manifold SNAPSHOT CONFIG
    sphere-nse validate [--full]

Exit status: 0 success, 1 configuration error, 2 integration failure (or a
failed validation check), 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .config import ConfigError, load_config
from .diagnostics import energy_spectrum, inertial_manifold, resize
from .operators import PhysicsParams
from .runner import forcing_factory, fmt, run, spectrum_rows
from .snapshot import SnapshotError, load_snapshot
from .time_integrator import IntegrationError

EXIT_OK, EXIT_CONFIG, EXIT_INTEGRATION, EXIT_IO = 0, 1, 2, 3


def _error(msg: str) -> None:
    print(f"sphere-nse: {msg}", file=sys.stderr)


def cmd_run(args) -> int:
    config = load_config(args.config)
    try:
        result = run(config)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    s = result.stats
    print(f"reached t={result.t:.6g}: {s['accepted']} steps, {s['rejected']} rejected, "
          f"{s['rhs_evaluations']} rhs evaluations; output in {config.output_dir}")
    return EXIT_OK


def cmd_spectra(args) -> int:
    alpha, meta = load_snapshot(args.snapshot)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["t", "L", "E", "L4E"])
    for L, e, e4 in spectrum_rows(alpha):
        out.writerow([fmt(meta.t), L, fmt(e), fmt(e4)])
    return EXIT_OK


def cmd_manifold(args) -> int:
    alpha, meta = load_snapshot(args.snapshot)
    config = load_config(args.config)
    if config.N1 > meta.N:
        raise ConfigError(f"N1={config.N1} exceeds snapshot truncation {meta.N}")
    forcing = forcing_factory(config)(2 * config.N1)
    phi = inertial_manifold(resize(alpha, meta.N), config.N1, PhysicsParams(config.nu, config.omega),
                            forcing, meta.t)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["t", "L", "E"])
    for L, e in enumerate(energy_spectrum(phi), start=1):
        if L > config.N1:
            out.writerow([fmt(meta.t), L, fmt(e)])
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import FAST_CHECKS, SLOW_CHECKS, run_checks
    checks = FAST_CHECKS + (SLOW_CHECKS if args.full else ())
    results = run_checks(checks)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTEGRATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphere-nse",
                                     description="Spectral Navier-Stokes solver on the rotating sphere")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="integrate a configured experiment")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("spectra", help="print the energy spectrum of a snapshot as CSV")
    p.add_argument("snapshot")
    p.set_defaults(func=cmd_spectra)
    p = sub.add_parser("manifold", help="print the inertial-manifold spectrum of a snapshot")
    p.add_argument("snapshot")
    p.add_argument("config")
    p.set_defaults(func=cmd_manifold)
    p = sub.add_parser("validate", help="run the invariant and oracle checks")
    p.add_argument("--full", action="store_true", help="include the long integration checks")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _error(f"configuration error: {exc}")
        return EXIT_CONFIG
    except IntegrationError as exc:
        _error(f"integration failed: {exc}")
        return EXIT_INTEGRATION
    except (SnapshotError, OSError) as exc:
        _error(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
