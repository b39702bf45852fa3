"""Projection of networks and subconfined systems onto a subset of species."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .intervals import interval_hull, interval_mul, interval_pow
from .network import Reaction, ReactionNetwork
from .system import Allotment, SubconfinedSystem, Tempering


class NotProjectableError(ValueError):
    def __init__(self, species):
        self.species = list(species)
        names = ", ".join(self.species)
        super().__init__(f"allotment of removed species {names} is not bounded away from 0 and inf")


@dataclass(frozen=True)
class Projection:
    """Coordinate projection ``R^S -> R^U`` keeping ``kept`` in source order."""

    source_species: tuple
    kept: tuple

    def __post_init__(self):
        source = tuple(self.source_species)
        kept = set(self.kept)
        if not kept:
            raise ValueError("cannot project onto an empty species set")
        unknown = kept - set(source)
        if unknown:
            raise ValueError(f"species {sorted(unknown)} are not in {source}")
        object.__setattr__(self, "source_species", source)
        object.__setattr__(self, "kept", tuple(s for s in source if s in kept))

    @property
    def indices(self) -> list[int]:
        return [self.source_species.index(s) for s in self.kept]

    @property
    def removed(self) -> tuple:
        return tuple(s for s in self.source_species if s not in self.kept)

    @property
    def is_identity(self) -> bool:
        return self.kept == self.source_species

    def __call__(self, v):
        if isinstance(v, Reaction):
            return Reaction(self(v.reactant), self(v.product))
        if isinstance(v, tuple):
            return tuple(v[i] for i in self.indices)
        return np.asarray(v)[..., self.indices]


def reduce_network(net: ReactionNetwork, U: Iterable[str]) -> ReactionNetwork:
    """Delete every species outside ``U``; trivial reactions are kept."""
    p = Projection(net.species, tuple(U))
    return ReactionNetwork(
        p.kept,
        tuple(p(r) for r in net.reactions),
        tuple(p(y) for y in net.complexes),
    )


def is_projectable(mu, U: Iterable[str]) -> bool:
    U = set(U)
    if not U:
        raise ValueError("U must be nonempty")
    return all(m.is_bounded for s, m in mu.items() if s not in U)


def projected_rates(N: SubconfinedSystem, U: Iterable[str]) -> dict:
    """Per-source transformed rate intervals, grouped by reduced reaction.

    Each source reaction ``r`` contributes ``kappa(r) * prod_s mu(s)**reactant(r)_s``
    over the removed species ``s``.
    """
    p = Projection(N.species, tuple(U))
    removed = [(N.species.index(s), N.allotment[s]) for s in p.removed]
    groups: dict[Reaction, list] = {}
    for r in N.network.reactions:
        k = N.tempering[r]
        for i, m in removed:
            k = interval_mul(k, interval_pow(m, r.reactant[i]))
        groups.setdefault(p(r), []).append((r, k))
    return groups


def project_system(N: SubconfinedSystem, U: Iterable[str]) -> SubconfinedSystem:
    """The projection morphism ``p_U`` on subconfined systems.

    Source reactions that collapse onto the same reduced reaction get the
    hull of their transformed intervals.
    """
    U = tuple(U)
    p = Projection(N.species, U)
    bad = [s for s in p.removed if not N.allotment[s].is_bounded]
    if bad:
        raise NotProjectableError(bad)
    groups = projected_rates(N, U)
    tempering = Tempering({r: interval_hull(k for _, k in srcs) for r, srcs in groups.items()})
    return SubconfinedSystem(
        reduce_network(N.network, U),
        tempering,
        Allotment({s: N.allotment[s] for s in p.kept}),
        p(N.base_point),
    )


def merged_reactions(N: SubconfinedSystem, U: Iterable[str]) -> dict:
    """Reduced reactions that several source reactions collapse onto."""
    return {r: srcs for r, srcs in projected_rates(N, U).items() if len(srcs) > 1}
