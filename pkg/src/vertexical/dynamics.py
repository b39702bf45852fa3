"""Mass-action differential inclusions: fibers, rate paths and trajectories."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lp import box_fit
from .network import invariant_polyhedron_contains
from .system import SubconfinedSystem

POSITIVITY_FLOOR = 1e-12
OVERFLOW_CEILING = 1e12

SCHEMES = ("midpoint", "uniform-random", "extremal-cycling")

OK = "ok"
FLOOR = "floor"
CEILING = "ceiling"


class SimulationError(RuntimeError):
    """The integrator produced a non-finite state."""

    def __init__(self, message, trajectory):
        super().__init__(message)
        self.trajectory = trajectory


def monomials(x, reactant_matrix) -> np.ndarray:
    """``x**y`` for each reactant row ``y``, with real exponents."""
    with np.errstate(over="ignore"):  # overflow surfaces as a non-finite state
        return np.exp(reactant_matrix @ np.log(x))


def vector_field(N: SubconfinedSystem, x, k) -> np.ndarray:
    """``sum_r k_r x**reactant(r) flux(r)``."""
    net = N.network
    return (np.asarray(k) * monomials(x, net.reactant_matrix)) @ net.flux_matrix


@dataclass
class FiberResult:
    contains: bool
    residual: float
    coefficients: np.ndarray

    def __bool__(self):
        return self.contains


def fiber_contains(N: SubconfinedSystem, x, v, tol: float = 1e-9) -> FiberResult:
    """Whether ``v`` lies in the mass-action fiber over ``x``.

    Outside the closed allotment hypercube the fiber is empty.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    net = N.network
    if x.shape != (net.n_species,) or v.shape != (net.n_species,):
        raise ValueError("x and v must match the species count")
    if np.any(x <= 0) or not N.in_allotment_closure(x):
        return FiberResult(False, math.inf, np.zeros(0))
    columns = monomials(x, net.reactant_matrix)[:, None] * net.flux_matrix
    boxes = [N.tempering[r] for r in net.reactions]
    k, residual = box_fit(list(columns), boxes, v)
    return FiberResult(residual <= tol, residual, k)


@dataclass(frozen=True)
class RatePath:
    """Piecewise-constant, right-continuous rate selection.

    ``breakpoints[j]`` is the start time of piece ``j``; ``values[j]`` holds
    one rate per reaction (in network order) on that piece.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    t_end: float
    seed: int = 0
    scheme: str = "midpoint"

    def value_at(self, t: float) -> np.ndarray:
        j = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.values[min(max(j, 0), len(self.values) - 1)]

    def piece_bounds(self):
        ends = np.append(self.breakpoints[1:], self.t_end)
        return list(zip(self.breakpoints, ends))

    @classmethod
    def constant(cls, rates, t_end: float) -> "RatePath":
        rates = np.asarray(rates, dtype=float).reshape(1, -1)
        return cls(np.array([0.0]), rates, float(t_end), 0, "constant")


def sample_rate_path(N: SubconfinedSystem, dt: float, t_end: float, seed: int = 0,
                     scheme: str = "midpoint") -> RatePath:
    """Realize the tempering as piecewise-constant rates on pieces of length ``dt``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < dt:
        raise ValueError("t_end must be at least dt")
    n = max(1, math.ceil(t_end / dt - 1e-9))
    starts = np.arange(n) * dt
    lo, hi = N.rate_bounds
    if scheme == "midpoint":
        values = np.tile(0.5 * (lo + hi), (n, 1))
    elif scheme == "uniform-random":
        values = np.random.default_rng(seed).uniform(lo, hi, size=(n, len(lo)))
    elif scheme == "extremal-cycling":
        values = np.where((np.arange(n) % 2 == 0)[:, None], lo, hi)
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return RatePath(starts, values, float(t_end), int(seed), scheme)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    rate_path: RatePath
    system: SubconfinedSystem
    h: float
    status: str = OK
    message: str = ""
    piece_index: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def aborted(self) -> bool:
        return self.status != OK

    def __len__(self):
        return len(self.times)

    def rates_at(self, i: int) -> np.ndarray:
        return self.rate_path.values[self.piece_index[i]]


def _rk4_step(N, x, k, step):
    k1 = vector_field(N, x, k)
    k2 = vector_field(N, x + 0.5 * step * k1, k)
    k3 = vector_field(N, x + 0.5 * step * k2, k)
    k4 = vector_field(N, x + step * k3, k)
    return x + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _piece_steps(a: float, b: float, h: float) -> int:
    ratio = (b - a) / h
    m = round(ratio)
    if m >= 1 and abs(ratio - m) <= 1e-9 * max(1.0, ratio):
        return m
    return max(1, math.ceil(ratio))


def simulate(N: SubconfinedSystem, x_init, path: RatePath, t_end: Optional[float] = None,
             h: float = 1e-3, floor: float = POSITIVITY_FLOOR,
             ceiling: float = OVERFLOW_CEILING) -> Trajectory:
    """Classical RK4 with step ``h``, restarted at every rate breakpoint.

    Stops early (``status`` ``"floor"`` or ``"ceiling"``) when a coordinate
    leaves ``(floor, ceiling)``; the offending state is not recorded.
    """
    x = np.array(x_init, dtype=float).reshape(-1)
    if x.shape != (N.network.n_species,):
        raise ValueError(f"initial state has {x.size} entries, expected {N.network.n_species}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("initial state must be strictly positive and finite")
    if h <= 0:
        raise ValueError("h must be positive")
    t_end = path.t_end if t_end is None else float(t_end)
    if not invariant_polyhedron_contains(N.network, N.base_point, x, 1e-9):
        warnings.warn("initial state is off the invariant polyhedron of the base point", stacklevel=2)

    times, states, pieces = [0.0], [x.copy()], [0]
    status, message = OK, ""
    for j, (a, b) in enumerate(path.piece_bounds()):
        if j == len(path.values) - 1:
            b = max(b, t_end)
        b = min(b, t_end)
        if b <= a:
            break
        k = path.values[j]
        m = _piece_steps(a, b, h)
        step = (b - a) / m
        for i in range(1, m + 1):
            x_new = _rk4_step(N, x, k, step)
            t = b if i == m else a + i * step
            if not np.all(np.isfinite(x_new)):
                traj = Trajectory(np.array(times), np.array(states), path, N, h,
                                  "nonfinite", f"non-finite state at t={t}", np.array(pieces))
                raise SimulationError(f"non-finite state at t={t}; last valid state {x}", traj)
            if np.any(x_new <= floor):
                status, message = FLOOR, f"coordinate fell to {x_new.min()} at t={t}"
                break
            if np.any(x_new >= ceiling):
                status, message = CEILING, f"coordinate reached {x_new.max()} at t={t}"
                break
            x = x_new
            times.append(t)
            states.append(x.copy())
            pieces.append(j)
        if status != OK:
            break
    return Trajectory(np.array(times), np.array(states), path, N, h, status, message, np.array(pieces))


def lyapunov_value(x, alpha) -> float:
    """``sum_i x_i (log(x_i / alpha_i) - 1)``."""
    x = np.asarray(x, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if x.shape != alpha.shape:
        raise ValueError("x and alpha must have the same dimension")
    if np.any(x <= 0) or np.any(alpha <= 0):
        raise ValueError("x and alpha must be strictly positive")
    return float(np.sum(x * (np.log(x / alpha) - 1.0)))
