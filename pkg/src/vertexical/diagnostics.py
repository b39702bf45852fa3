"""Numerical checks on simulated trajectories.

``verify_factorization`` tests the vertexical projection property on the
parts of a trajectory that lie inside the blocks collapsed by a projection.
The probes collect empirical evidence for persistence, repulsion and
permanence over seeded ensembles; they sample, so they never prove.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cube import Face, block_mask, boundary_distance, collapsed_faces, face_distance, to_cube
from .dynamics import SimulationError, Trajectory, fiber_contains, sample_rate_path, simulate, vector_field
from .intervals import PositiveInterval
from .network import basis_matrix
from .reduction import Projection, project_system
from .system import Allotment, SubconfinedSystem


def block_segments(traj: Trajectory, face: Face, eps: float) -> list[tuple[int, int]]:
    """Maximal runs ``(start, stop)`` (stop exclusive) of samples inside the ε-block."""
    inside = block_mask(face, eps, to_cube(traj.states)) if len(traj) else np.zeros(0, bool)
    return _runs(inside)


def _runs(mask) -> list[tuple[int, int]]:
    runs, start = [], None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


def block_allotment(N: SubconfinedSystem, U, eps: float) -> Allotment:
    """Orthant on ``U``; the preimage of ``(eps, 1 - eps)`` on the removed species."""
    band = PositiveInterval.open(eps / (1 - eps), (1 - eps) / eps)
    return Allotment({s: PositiveInterval.orthant() if s in U else band for s in N.species})


@dataclass
class FaceCheck:
    face: Face
    segments: list
    samples: list = field(default_factory=list)  # (index, fiber residual, tangent error)
    skipped: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((r for _, r, _ in self.samples), default=0.0)

    @property
    def max_tangent_error(self) -> float:
        return max((e for _, _, e in self.samples), default=0.0)

    def to_dict(self):
        return {
            "face": str(self.face),
            "segments": [list(s) for s in self.segments],
            "n_samples": len(self.samples),
            "max_residual": self.max_residual,
            "max_tangent_error": self.max_tangent_error,
            "skipped_segments": [list(s) for s in self.skipped],
        }


@dataclass
class FactorizationReport:
    """Result of checking ``pi_U ∘ f`` against the reduced inclusion.

    ``max_residual`` is the largest distance (max-norm) from an estimated
    projected tangent to the reduced fiber. ``max_tangent_error`` compares the
    same estimate with the projected velocity at the realized rates; it
    measures the finite-difference error alone.
    """

    kept: tuple
    eps: float
    tol: float
    faces: list
    reduced: SubconfinedSystem
    reparametrization: str = "identity"

    @property
    def segments(self) -> list:
        return [s for fc in self.faces for s in fc.segments]

    @property
    def n_samples(self) -> int:
        return sum(len(fc.samples) for fc in self.faces)

    @property
    def max_residual(self) -> float:
        return max((fc.max_residual for fc in self.faces), default=0.0)

    @property
    def max_tangent_error(self) -> float:
        return max((fc.max_tangent_error for fc in self.faces), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self):
        return {
            "kept": list(self.kept),
            "eps": self.eps,
            "tol": self.tol,
            "pass": self.passed,
            "n_segments": len(self.segments),
            "n_samples": self.n_samples,
            "max_residual": self.max_residual,
            "max_tangent_error": self.max_tangent_error,
            "reparametrization": self.reparametrization,
            "faces": [fc.to_dict() for fc in self.faces if fc.segments],
        }


def reduced_block_system(N: SubconfinedSystem, U, eps: float, base_point=None) -> SubconfinedSystem:
    """``p_U`` of the system re-allotted to the ε-band on the removed species."""
    mu = block_allotment(N, set(U), eps)
    x0 = np.array(N.base_point if base_point is None else base_point, dtype=float)
    lo = np.array([mu[s].lo for s in N.species])
    hi = np.array([mu[s].hi for s in N.species])
    # only the projected invariant polyhedron depends on the base point
    x0 = np.clip(x0, np.where(lo > 0, lo, x0), hi)
    return project_system(SubconfinedSystem(N.network, N.tempering, mu, x0), U)


def verify_factorization(N: SubconfinedSystem, traj: Trajectory, U: Sequence[str], eps: float,
                         tol: float = 1e-4, reduced: Optional[SubconfinedSystem] = None,
                         faces: Optional[list] = None) -> FactorizationReport:
    """Check that block segments of ``traj`` project to trajectories of the
    reduced system.

    Tangents are central differences at segment-interior samples whose stencil
    does not straddle a rate breakpoint. Segments with fewer than three
    samples are skipped. ``reduced`` overrides the projected system (used for
    negative controls).
    """
    p = Projection(N.species, tuple(U))
    if p.is_identity:
        raise ValueError("U must be a proper subset of the species")
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if reduced is None:
        reduced = reduced_block_system(N, p.kept, eps)
    faces = collapsed_faces(N.species, p.kept) if faces is None else faces
    X, T = traj.states, traj.times
    Z = to_cube(X) if len(X) else np.zeros((0, N.network.n_species))
    checks = []
    for face in faces:
        runs = _runs(block_mask(face, eps, Z)) if len(Z) else []
        check = FaceCheck(face, runs)
        for start, stop in runs:
            if stop - start < 3:
                check.skipped.append((start, stop))
                continue
            for i in range(start + 1, stop - 1):
                if traj.piece_index[i] != traj.piece_index[i + 1]:
                    continue
                v = (X[i + 1] - X[i - 1]) / (T[i + 1] - T[i - 1])
                res = fiber_contains(reduced, p(X[i]), p(v), tol)
                exact = p(vector_field(N, X[i], traj.rates_at(i + 1)))
                check.samples.append((i, res.residual, float(np.max(np.abs(p(v) - exact)))))
        checks.append(check)
    return FactorizationReport(p.kept, eps, tol, checks, reduced)


# -- ensembles ----------------------------------------------------------------

@dataclass
class Ensemble:
    """Seeded batch of simulations. Trajectory ``i`` uses seed ``seed + i``
    both for its start point and for its rate path."""

    n_traj: int = 10
    seed: int = 0
    init_box: Optional[np.ndarray] = None  # (|S|, 2) orthant box; None means the base point
    dt: float = 0.1
    t_end: float = 10.0
    h: float = 1e-2
    scheme: str = "uniform-random"
    floor: float = 1e-12
    ceiling: float = 1e12
    max_attempts: int = 1000

    def to_dict(self):
        return {
            "n_traj": self.n_traj, "seed": self.seed,
            "init_box": None if self.init_box is None else np.asarray(self.init_box).tolist(),
            "dt": self.dt, "t_end": self.t_end, "h": self.h, "scheme": self.scheme,
            "floor": self.floor, "ceiling": self.ceiling,
        }


def _affine_projector(N: SubconfinedSystem):
    B = basis_matrix(N.network)
    x0 = N.base_point
    if len(B) == N.network.n_species:
        return lambda x: x
    return lambda x: x0 + B.T @ (B @ (x - x0))


def sample_start(N: SubconfinedSystem, rng, box=None, accept=None, max_attempts: int = 1000,
                 tol: float = 1e-9):
    """Rejection-sample a start point in ``box`` on the invariant polyhedron.

    Without a box, candidates are drawn uniformly in the open cube and mapped
    back to the orthant. Returns ``None`` after ``max_attempts`` failures.
    """
    project = _affine_projector(N)
    n = N.network.n_species
    box = None if box is None else np.asarray(box, dtype=float).reshape(n, 2)
    for _ in range(max_attempts):
        if box is None:
            z = rng.uniform(0.0, 1.0, n)
            if np.any(z <= 0) or np.any(z >= 1):
                continue
            x = z / (1 - z)
        else:
            x = rng.uniform(box[:, 0], box[:, 1])
        x = project(x)
        if np.any(x <= 0) or not N.in_allotment_closure(x, tol):
            continue
        if box is not None and (np.any(x < box[:, 0] - tol) or np.any(x > box[:, 1] + tol)):
            continue
        if accept is not None and not accept(x):
            continue
        return x
    return None


def _run(N: SubconfinedSystem, x, ens: Ensemble, seed: int) -> Trajectory:
    path = sample_rate_path(N, ens.dt, ens.t_end, seed, ens.scheme)
    try:
        return simulate(N, x, path, ens.t_end, ens.h, ens.floor, ens.ceiling)
    except SimulationError as err:
        return err.trajectory


@dataclass
class TrajectorySummary:
    seed: int
    start: list
    status: str
    n_samples: int
    t_last: float
    min_boundary_distance: float
    vertex_distances: dict
    facet_distances: dict
    orthant_min: list
    orthant_max: list
    tail_mean_boundary_distance: float

    def to_dict(self):
        d = dict(self.__dict__)
        d["vertex_distances"] = {"".join(map(str, k)): v for k, v in self.vertex_distances.items()}
        d["facet_distances"] = {f"{s}={b}": v for (s, b), v in self.facet_distances.items()}
        return d


@dataclass
class PersistenceReport:
    species: tuple
    ensemble: dict
    trajectories: list

    @property
    def min_boundary_distance(self) -> float:
        return min((t.min_boundary_distance for t in self.trajectories), default=math.inf)

    @property
    def aborted(self) -> list:
        return [t.seed for t in self.trajectories if t.status != "ok"]

    def to_dict(self):
        return {
            "species": list(self.species),
            "ensemble": self.ensemble,
            "min_boundary_distance": None if not self.trajectories else self.min_boundary_distance,
            "aborted": self.aborted,
            "trajectories": [t.to_dict() for t in self.trajectories],
        }


def _summarize(traj: Trajectory, seed: int, start) -> TrajectorySummary:
    X = traj.states
    Z = to_cube(X)
    n = Z.shape[1]
    bd = boundary_distance(Z)
    vertices = {}
    for bits in np.ndindex(*(2,) * n):
        vertices[bits] = float(np.linalg.norm(Z - np.array(bits), axis=1).min())
    facets = {}
    for i, s in enumerate(traj.system.species):
        facets[(s, 0)] = float(Z[:, i].min())
        facets[(s, 1)] = float((1 - Z[:, i]).min())
    tail = bd[-max(1, len(bd) // 10):]
    return TrajectorySummary(
        seed=seed, start=[float(v) for v in start], status=traj.status, n_samples=len(traj),
        t_last=float(traj.times[-1]), min_boundary_distance=float(bd.min()),
        vertex_distances=vertices, facet_distances=facets,
        orthant_min=X.min(axis=0).tolist(), orthant_max=X.max(axis=0).tolist(),
        tail_mean_boundary_distance=float(tail.mean()),
    )


def persistence_probe(N: SubconfinedSystem, ensemble: Ensemble) -> PersistenceReport:
    summaries = []
    for i in range(ensemble.n_traj):
        seed = ensemble.seed + i
        rng = np.random.default_rng(seed)
        if ensemble.init_box is None:
            x = N.base_point.copy()
        else:
            x = sample_start(N, rng, ensemble.init_box, max_attempts=ensemble.max_attempts)
            if x is None:
                raise ValueError("could not sample a start point in the init box on the invariant polyhedron")
        summaries.append(_summarize(_run(N, x, ensemble, seed), seed, x))
    return PersistenceReport(N.species, ensemble.to_dict(), summaries)


@dataclass
class RepulsionTable:
    target: str
    d1: list
    d2: list  # None marks an unsampled column
    n_started: list
    ensemble: dict

    def to_dict(self):
        return dict(self.__dict__)


def repulsion_probe(N: SubconfinedSystem, target: Face, d1_grid: Sequence[float],
                    ensemble: Ensemble) -> RepulsionTable:
    """Empirical ``d1 -> d2`` table for repulsion from ``target``.

    For each ``d1``, trajectories start at cube distance at least ``d1`` from
    the target face; ``d2`` is the smallest distance any of them reaches.
    """
    grid = [float(d) for d in d1_grid]
    if any(d <= 0 for d in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("d1 grid must be positive and increasing")
    d2, started = [], []
    for d1 in grid:
        best, count = math.inf, 0
        accept = lambda x, d1=d1: float(face_distance(target, to_cube(x))[0]) >= d1
        for i in range(ensemble.n_traj):
            seed = ensemble.seed + i
            x = sample_start(N, np.random.default_rng(seed), ensemble.init_box, accept,
                             ensemble.max_attempts)
            if x is None:
                continue
            traj = _run(N, x, ensemble, seed)
            best = min(best, float(face_distance(target, to_cube(traj.states)).min()))
            count += 1
        d2.append(best if count else None)
        started.append(count)
    return RepulsionTable(str(target), grid, d2, started, ensemble.to_dict())


@dataclass
class PermanenceRun:
    seed: int
    start: list
    status: str
    entry_time: Optional[float]
    exit_time: Optional[float]

    @property
    def remained(self) -> bool:
        return self.entry_time is not None and self.exit_time is None and self.status == "ok"


@dataclass
class PermanenceReport:
    K: list
    Kplus: list
    runs: list

    @property
    def passed(self) -> bool:
        return all(r.remained for r in self.runs)

    def to_dict(self):
        return {
            "K": self.K, "Kplus": self.Kplus, "pass": self.passed,
            "runs": [dict(r.__dict__, remained=r.remained) for r in self.runs],
        }


def permanence_probe(N: SubconfinedSystem, K, Kplus, ensemble: Ensemble,
                     tol: float = 1e-9) -> PermanenceReport:
    """Check that trajectories starting in ``K`` stay in ``Kplus`` after first entry."""
    n = N.network.n_species
    K = np.asarray(K, dtype=float).reshape(n, 2)
    Kplus = np.asarray(Kplus, dtype=float).reshape(n, 2)
    if np.any(K[:, 0] < Kplus[:, 0]) or np.any(K[:, 1] > Kplus[:, 1]):
        raise ValueError("K must be contained in Kplus")
    if np.any(K[:, 0] <= 0):
        raise ValueError("K must lie in the positive orthant")
    runs = []
    for i in range(ensemble.n_traj):
        seed = ensemble.seed + i
        x = sample_start(N, np.random.default_rng(seed), K, max_attempts=ensemble.max_attempts, tol=tol)
        if x is None:
            raise ValueError("could not sample a start point in K on the invariant polyhedron")
        traj = _run(N, x, ensemble, seed)
        inside = np.all((traj.states >= Kplus[:, 0] - tol) & (traj.states <= Kplus[:, 1] + tol), axis=1)
        entry = exit_ = None
        hits = np.flatnonzero(inside)
        if hits.size:
            first = hits[0]
            entry = float(traj.times[first])
            out = np.flatnonzero(~inside[first:])
            if out.size:
                exit_ = float(traj.times[first + out[0]])
        runs.append(PermanenceRun(seed, x.tolist(), traj.status, entry, exit_))
    return PermanenceReport(K.tolist(), Kplus.tolist(), runs)
