"""Pseudospectral Navier-Stokes solver on the rotating unit sphere."""

from .config import SimulationConfig, parse_config
from .diagnostics import energy_spectrum, inertial_manifold, l2_norm, v_norm
from .grid_transform import SphereTransform, build_grid, get_transform
from .harmonic_basis import ModeIndex
from .operators import NavierStokesRHS, PhysicsParams, nonlinear_galerkin
from .snapshot import load_snapshot, save_snapshot
from .time_integrator import ToleranceSpec, integrate

__all__ = [
    "ModeIndex", "NavierStokesRHS", "PhysicsParams", "SimulationConfig", "SphereTransform",
    "ToleranceSpec", "build_grid", "energy_spectrum", "get_transform", "inertial_manifold",
    "integrate", "l2_norm", "load_snapshot", "nonlinear_galerkin", "parse_config",
    "save_snapshot", "v_norm",
]
