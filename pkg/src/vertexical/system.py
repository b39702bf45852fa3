"""Tempered, allotted reaction systems."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .intervals import PositiveInterval
from .network import Reaction, ReactionNetwork


class _FrozenMap(Mapping):
    def __init__(self, data=()):
        self._data = dict(data)

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self.items()) == dict(other.items())
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self):
        return f"{type(self).__name__}({self._data!r})"


class Tempering(_FrozenMap):
    """Rate interval per reaction; every interval bounded away from 0 and inf."""

    def __init__(self, data=()):
        super().__init__(data)
        for r, k in self._data.items():
            if not isinstance(k, PositiveInterval):
                raise TypeError(f"tempering value for {r} is not a PositiveInterval")
            if not k.is_bounded:
                raise ValueError(f"tempering interval {k} is not bounded away from 0 and inf")


class Allotment(_FrozenMap):
    """Concentration interval per species."""

    def __init__(self, data=()):
        super().__init__(data)
        for s, m in self._data.items():
            if not isinstance(m, PositiveInterval):
                raise TypeError(f"allotment value for {s} is not a PositiveInterval")

    @classmethod
    def orthant(cls, species) -> "Allotment":
        return cls({s: PositiveInterval.orthant() for s in species})


@dataclass(frozen=True, eq=False)
class SubconfinedSystem:
    """Network, tempering, allotment and a base point fixing the invariant polyhedron."""

    network: ReactionNetwork
    tempering: Tempering
    allotment: Allotment
    base_point: np.ndarray

    def __post_init__(self):
        net = self.network
        tempering = self.tempering if isinstance(self.tempering, Tempering) else Tempering(self.tempering)
        allotment = self.allotment if isinstance(self.allotment, Allotment) else Allotment(self.allotment)
        if set(tempering) != set(net.reactions):
            raise ValueError("tempering must be defined on exactly the network's reactions")
        if set(allotment) != set(net.species):
            raise ValueError("allotment must be defined on exactly the network's species")
        x0 = np.array(self.base_point, dtype=float).reshape(-1)
        if x0.shape != (net.n_species,):
            raise ValueError(f"base point has {x0.size} entries, expected {net.n_species}")
        if not np.all(np.isfinite(x0)) or np.any(x0 <= 0):
            raise ValueError(f"base point must be strictly positive and finite, got {x0}")
        x0.setflags(write=False)
        object.__setattr__(self, "tempering", tempering)
        object.__setattr__(self, "allotment", allotment)
        object.__setattr__(self, "base_point", x0)
        if not self.in_allotment_closure(x0):
            raise ValueError(f"base point {x0} lies outside the allotment hypercube")

    @classmethod
    def build(cls, network: ReactionNetwork, rates=None, allotment=None, base_point=None):
        """Convenience constructor.

        ``rates`` is a single interval for every reaction, or a mapping from
        reactions (or their indices) to intervals; reactions left out, or all
        of them when ``rates`` is ``None``, get ``[1, 1]``.
        Missing allotment entries default to ``(0, inf)``, and the base point
        defaults to all ones.
        """
        if rates is None:
            rates = PositiveInterval.point(1.0)
        if isinstance(rates, PositiveInterval):
            temp = {r: rates for r in network.reactions}
        else:
            temp = {r: PositiveInterval.point(1.0) for r in network.reactions}
            for key, k in dict(rates).items():
                r = network.reactions[key] if isinstance(key, int) else key
                temp[r] = k
        mu = {s: PositiveInterval.orthant() for s in network.species}
        mu.update(allotment or {})
        if base_point is None:
            base_point = np.ones(network.n_species)
        return cls(network, Tempering(temp), Allotment(mu), np.asarray(base_point, dtype=float))

    def __eq__(self, other):
        if not isinstance(other, SubconfinedSystem):
            return NotImplemented
        return (
            self.network == other.network
            and self.tempering == other.tempering
            and self.allotment == other.allotment
            and np.array_equal(self.base_point, other.base_point)
        )

    __hash__ = None

    @property
    def species(self) -> tuple:
        return self.network.species

    @property
    def is_confined(self) -> bool:
        return all(m.lo == 0 and np.isinf(m.hi) for m in self.allotment.values())

    @cached_property
    def rate_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed-hull tempering bounds aligned with ``network.reactions``."""
        lo = np.array([self.tempering[r].lo for r in self.network.reactions], dtype=float)
        hi = np.array([self.tempering[r].hi for r in self.network.reactions], dtype=float)
        return lo, hi

    @cached_property
    def allotment_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([self.allotment[s].lo for s in self.species], dtype=float)
        hi = np.array([self.allotment[s].hi for s in self.species], dtype=float)
        return lo, hi

    def in_allotment_closure(self, x, tol: float = 0.0) -> bool:
        lo, hi = self.allotment_bounds
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= lo - tol) and np.all(x <= hi + tol))

    def with_allotment(self, allotment) -> "SubconfinedSystem":
        return SubconfinedSystem(self.network, self.tempering, Allotment(allotment), self.base_point)

    def with_tempering(self, tempering) -> "SubconfinedSystem":
        return SubconfinedSystem(self.network, Tempering(tempering), self.allotment, self.base_point)

    def kappa(self, r: Reaction | int) -> PositiveInterval:
        if isinstance(r, int):
            r = self.network.reactions[r]
        return self.tempering[r]
