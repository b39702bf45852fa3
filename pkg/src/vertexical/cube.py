"""Hypercube geometry: the orthant-to-cube map, faces, blocks and charges."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

CHARGED_VERTEX = "charged_vertex"
OPPOSITE = "opposite"
NEITHER = "neither"


def to_cube(x):
    """Order-preserving diffeomorphism ``x / (1 + x)`` of the positive orthant
    onto the open unit cube."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise ValueError("to_cube needs strictly positive finite input")
    return x / (1.0 + x)


def to_orthant(z):
    """Inverse of :func:`to_cube`."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(z >= 1):
        raise ValueError("to_orthant needs input in the open unit cube")
    return z / (1.0 - z)


def push_tangent(x, v):
    """Pushforward of a tangent vector ``v`` at ``x`` along :func:`to_cube`."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("push_tangent needs a strictly positive base point")
    return np.asarray(v, dtype=float) / (1.0 + x) ** 2


@dataclass(frozen=True)
class Face:
    """Face of ``[0,1]^S``: ``free`` species vary, the others sit at 0 or 1."""

    species: tuple
    free: frozenset
    fixed_values: tuple  # ((name, 0 or 1), ...) for every species not in free

    def __post_init__(self):
        species = tuple(self.species)
        free = frozenset(self.free)
        fixed = dict(self.fixed_values)
        if free | set(fixed) != set(species) or free & set(fixed):
            raise ValueError("free and fixed species must partition the species set")
        if any(v not in (0, 1) for v in fixed.values()):
            raise ValueError("fixed coordinates must be 0 or 1")
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "fixed_values", tuple((s, int(fixed[s])) for s in species if s in fixed))

    @classmethod
    def at_vertex(cls, species, free: Iterable, vertex) -> "Face":
        """``F_free(vertex)``; ``vertex`` maps species (or positions) to 0/1."""
        species = tuple(species)
        if not isinstance(vertex, dict):
            vertex = dict(zip(species, vertex))
        free = frozenset(free)
        return cls(species, free, tuple((s, vertex[s]) for s in species if s not in free))

    @property
    def fixed(self) -> dict:
        return dict(self.fixed_values)

    @property
    def is_vertex(self) -> bool:
        return not self.free

    @property
    def dimension(self) -> int:
        return len(self.free)

    def vertices(self) -> list["Face"]:
        free = [s for s in self.species if s in self.free]
        out = []
        for bits in itertools.product((0, 1), repeat=len(free)):
            v = {**self.fixed, **dict(zip(free, bits))}
            out.append(Face.at_vertex(self.species, (), v))
        return out

    def contains_vertex(self, vertex: "Face") -> bool:
        fixed = self.fixed
        return all(vertex.fixed[s] == b for s, b in fixed.items())

    def block_box(self, eps: float) -> np.ndarray:
        """The ε-block as per-species ``[lo, hi]`` rows in species order."""
        _check_eps(eps)
        fixed = self.fixed
        rows = []
        for s in self.species:
            if s in fixed:
                b = fixed[s]
                rows.append((max(0.0, b - eps), min(1.0, b + eps)))
            else:
                rows.append((eps, 1.0 - eps))
        return np.array(rows)

    def __str__(self):
        coords = ", ".join("*" if s in self.free else str(self.fixed[s]) for s in self.species)
        return f"({coords})"


def all_faces(species) -> list[Face]:
    species = tuple(species)
    faces = []
    for free_bits in itertools.product((False, True), repeat=len(species)):
        free = [s for s, f in zip(species, free_bits) if f]
        fixed = [s for s in species if s not in free]
        for vals in itertools.product((0, 1), repeat=len(fixed)):
            faces.append(Face(species, frozenset(free), tuple(zip(fixed, vals))))
    return faces


def collapsed_faces(species, kept) -> list[Face]:
    """Faces ``F_{S∖U}(x)``: free along the removed species, fixed along ``kept``."""
    species = tuple(species)
    kept = [s for s in species if s in set(kept)]
    free = frozenset(s for s in species if s not in set(kept))
    return [Face(species, free, tuple(zip(kept, vals)))
            for vals in itertools.product((0, 1), repeat=len(kept))]


def project_face(face: Face, kept) -> Face:
    """Image of a face under the coordinate projection onto ``kept``."""
    kept = [s for s in face.species if s in set(kept)]
    return Face(tuple(kept), face.free & set(kept), tuple((s, v) for s, v in face.fixed_values if s in kept))


def _check_eps(eps):
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")


def block_contains(face: Face, eps: float, z) -> bool:
    box = face.block_box(eps)
    z = np.asarray(z, dtype=float)
    return bool(np.all(z >= box[:, 0]) and np.all(z <= box[:, 1]))


def block_mask(face: Face, eps: float, Z) -> np.ndarray:
    """:func:`block_contains` over the rows of ``Z``."""
    box = face.block_box(eps)
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    return np.all((Z >= box[:, 0]) & (Z <= box[:, 1]), axis=1)


@dataclass(frozen=True)
class RepulsingIndexSet:
    members: frozenset

    def __init__(self, members: Iterable = ()):
        object.__setattr__(self, "members", frozenset(members))

    def __contains__(self, s):
        return s in self.members


def classify_face(face: Face, R) -> str:
    """``charged_vertex``, ``opposite`` or ``neither`` relative to the index set ``R``.

    The charged set is ``[0,1]^R x {0}^(S∖R)``. A face is opposite when it
    misses the charged set, i.e. some fixed coordinate outside ``R`` is 1.
    """
    members = R.members if isinstance(R, RepulsingIndexSet) else frozenset(R)
    outside = [(s, v) for s, v in face.fixed_values if s not in members]
    if any(v == 1 for _, v in outside):
        return OPPOSITE
    if face.is_vertex:
        return CHARGED_VERTEX
    return NEITHER


@dataclass
class DistanceReport:
    boundary: float
    vertices: dict
    facets: dict

    def to_dict(self):
        return {
            "boundary": self.boundary,
            "vertices": {str(k): v for k, v in self.vertices.items()},
            "facets": {str(k): v for k, v in self.facets.items()},
        }


def boundary_distance(Z) -> np.ndarray:
    """Euclidean distance of each row of ``Z`` to the boundary of the cube."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    return np.minimum(Z, 1.0 - Z).min(axis=1)


def face_distance(face: Face, Z) -> np.ndarray:
    """Euclidean distance of each row of ``Z`` to the closed face."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    idx = [face.species.index(s) for s, _ in face.fixed_values]
    vals = np.array([v for _, v in face.fixed_values], dtype=float)
    if not idx:
        return np.zeros(len(Z))
    return np.linalg.norm(Z[:, idx] - vals, axis=1)


def boundary_distances(z, species=None) -> DistanceReport:
    """Distances from ``z`` to every vertex, every facet and the whole boundary."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(z > 1):
        raise ValueError("z must lie in the closed unit cube")
    species = tuple(species) if species is not None else tuple(f"s{i + 1}" for i in range(z.size))
    vertices = {}
    for bits in itertools.product((0, 1), repeat=z.size):
        vertices[bits] = float(np.linalg.norm(z - np.array(bits)))
    facets = {}
    for i, s in enumerate(species):
        for b in (0, 1):
            facets[(s, b)] = float(abs(z[i] - b))
    return DistanceReport(float(boundary_distance(z)[0]), vertices, facets)
