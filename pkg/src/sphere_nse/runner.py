"""Execute a configured simulation and write its CSV diagnostics and snapshots.

Files written to ``output_dir``:

    energy_spectrum.csv    t, L, E(L), L^4 E(L)
    timeseries.csv         t, ||u||, ||u||_V, f_{3,0}(t)
    manifold_spectrum.csv  t, L, E(Phi) for N1 < L <= 2 N1
    error.csv              t, ||u - u_exact||           (example1 only)
    snapshot_KKKK.bin      state at the K-th output time
    grid_KKKK.csv          theta, phi, u_x, u_y, u_z, psi, vorticity (if dump_grid)

Floats are written with ``%.16e``, which round-trips float64 exactly.  No
wall-clock data is recorded, so equal configurations give identical files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SimulationConfig
from .diagnostics import (energy_spectrum, field_error, inertial_manifold, l2_norm, resize,
                          stream_function, v_norm, vorticity)
from .experiments import (Example1Forcing, Example1Spec, Example2Forcing, Example2Spec,
                          example1_exact, example2_initial)
from .grid_transform import get_transform
from .harmonic_basis import ModeIndex, covariant_to_cartesian
from .operators import NavierStokesRHS, PhysicsParams
from .snapshot import load_snapshot, save_snapshot
from .time_integrator import IntegrationResult, ToleranceSpec, integrate

FLOAT = "%.16e"


def fmt(x: float) -> str:
    return FLOAT % x


@dataclass
class Problem:
    """Everything needed to integrate: initial state, start time, forcing factory."""
    alpha0: np.ndarray
    t0: float
    params: PhysicsParams
    forcing_for: object
    exact: object = None


def forcing_factory(config: SimulationConfig):
    if config.experiment == "example1":
        spec = Example1Spec(config.N0, config.nu, config.omega)
        return lambda N: Example1Forcing(spec, N)
    if config.experiment == "example2" or config.forcing == "example2":
        return Example2Forcing
    return lambda N: None


def build_problem(config: SimulationConfig) -> Problem:
    params = PhysicsParams(config.nu, config.omega)
    exact = None
    if config.experiment == "example1":
        spec = Example1Spec(config.N0, config.nu, config.omega)
        alpha0 = example1_exact(0.0, spec, config.N)
        exact = lambda t: example1_exact(t, spec)
    elif config.experiment == "example2":
        alpha0 = example2_initial(Example2Spec(config.seed, config.nu, config.omega), config.N)
    else:
        alpha0 = None
    t0 = 0.0
    if config.restart is not None:
        restored, meta = load_snapshot(config.restart)
        alpha0 = resize(restored, config.N)
        t0 = meta.t
        if not t0 < config.t_end:
            raise ValueError(f"restart time {t0} is not before t_end {config.t_end}")
    return Problem(alpha0, t0, params, forcing_factory(config), exact)


def output_schedule(config: SimulationConfig, t0: float) -> list[float]:
    if config.output_times:
        times = sorted(set(config.output_times))
    else:
        times = [t0 + k * (config.t_end - t0) / 10 for k in range(11)]
    if config.restart is not None:
        return [t for t in times if t > t0]
    return [t for t in times if t >= t0]


class OutputWriter:
    """Collects diagnostics at each output time and writes them in order."""

    def __init__(self, config: SimulationConfig, problem: Problem):
        self.config = config
        self.problem = problem
        self.dir = Path(config.output_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.modes = ModeIndex(config.N)
        self.forcing = problem.forcing_for(config.N)
        self.manifold_forcing = problem.forcing_for(2 * config.N1)
        self.index30 = self.modes.flat(3, 0) if config.N >= 3 else None
        self.count = 0
        self.digest = config.digest()
        self.files = {}
        self.writers = {}
        self._open("energy_spectrum", ["t", "L", "E", "L4E"])
        self._open("timeseries", ["t", "norm", "v_norm", "f30"])
        self._open("manifold_spectrum", ["t", "L", "E"])
        if problem.exact is not None:
            self._open("error", ["t", "error"])

    def _open(self, name, header):
        fh = open(self.dir / f"{name}.csv", "w", newline="", encoding="ascii")
        self.files[name] = fh
        self.writers[name] = csv.writer(fh, lineterminator="\n")
        self.writers[name].writerow(header)

    def __call__(self, t: float, alpha: np.ndarray) -> None:
        cfg = self.config
        E = energy_spectrum(alpha)
        for L, e in enumerate(E, start=1):
            self.writers["energy_spectrum"].writerow([fmt(t), L, fmt(e), fmt(L ** 4 * e)])
        f30 = 0.0
        if self.forcing is not None and self.index30 is not None:
            f30 = float(np.real(self.forcing(t)[self.index30]))
        self.writers["timeseries"].writerow([fmt(t), fmt(l2_norm(alpha)), fmt(v_norm(alpha)), fmt(f30)])
        phi = inertial_manifold(resize(alpha, max(cfg.N, cfg.N1)), cfg.N1, self.problem.params,
                                self.manifold_forcing, t)
        for L, e in enumerate(energy_spectrum(phi), start=1):
            if L > cfg.N1:
                self.writers["manifold_spectrum"].writerow([fmt(t), L, fmt(e)])
        if self.problem.exact is not None:
            self.writers["error"].writerow([fmt(t), fmt(field_error(alpha, self.problem.exact(t)))])
        save_snapshot(self.dir / f"snapshot_{self.count:04d}.bin", alpha, t, cfg.experiment,
                      self.digest, get_transform(cfg.N).grid.M)
        if cfg.dump_grid:
            write_grid(self.dir / f"grid_{self.count:04d}.csv", alpha)
        for fh in self.files.values():
            fh.flush()
        self.count += 1

    def close(self):
        for fh in self.files.values():
            fh.close()


def write_grid(path, alpha) -> None:
    transform = get_transform(ModeIndex.from_size(np.asarray(alpha).size).N)
    theta, phi = transform.grid.mesh()
    u = covariant_to_cartesian(np.moveaxis(transform.synthesize(alpha, "velocity"), 0, -1)).real
    psi = stream_function(alpha, transform).real
    zeta = vorticity(alpha, transform).real
    with open(path, "w", newline="", encoding="ascii") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["theta", "phi", "u_x", "u_y", "u_z", "psi", "vorticity"])
        for i, j in np.ndindex(theta.shape):
            out.writerow([fmt(theta[i, j]), fmt(phi[i, j]), *(fmt(c) for c in u[i, j]),
                          fmt(psi[i, j]), fmt(zeta[i, j])])


def run(config: SimulationConfig) -> IntegrationResult:
    """Integrate the configured problem, writing outputs as they become due.

    Raises ``IntegrationError`` if the integrator gives up and ``OSError``
    on file problems.
    """
    problem = build_problem(config)
    F = NavierStokesRHS(config.N, problem.params, problem.forcing_for(config.N))
    writer = OutputWriter(config, problem)
    try:
        return integrate(problem.alpha0, (problem.t0, config.t_end), F,
                         ToleranceSpec(config.rtol, config.atol), jac_diag=F.linear,
                         output_times=output_schedule(config, problem.t0), observer=writer)
    finally:
        writer.close()


def spectrum_rows(alpha):
    return [(L, e, L ** 4 * e) for L, e in enumerate(energy_spectrum(alpha), start=1)]

