"""Reaction networks: species, complexes, reactions and stoichiometry."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

SPECIES_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# coefficient (optional) followed by a species name; "2A", "2 A", "0.5*B", "-1 C"
_TERM = re.compile(
    r"\s*(?P<coeff>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*"
    r"(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*\Z"
)

RANK_RTOL = 1e-10

Complex = tuple  # tuple of floats indexed like the species set


def make_complex(values: Iterable[float]) -> tuple:
    out = tuple(float(v) + 0.0 for v in values)  # + 0.0 folds -0.0 into 0.0
    if not all(np.isfinite(out)):
        raise ValueError(f"complex has non-finite coefficients: {out}")
    return out


def parse_complex(text: str, species: Sequence[str]) -> tuple:
    """Parse ``"2A + B"`` (or ``"0"``) into a coefficient tuple over ``species``."""
    index = {name: i for i, name in enumerate(species)}
    coeffs = [0.0] * len(species)
    text = text.strip()
    if text == "0":
        return make_complex(coeffs)
    if not text:
        raise ValueError("empty complex")
    for term in text.split("+"):
        m = _TERM.match(term)
        if m is None:
            raise ValueError(f"cannot parse term {term.strip()!r} in complex {text!r}")
        name = m["name"]
        if name not in index:
            raise ValueError(f"undeclared species {name!r}")
        coeffs[index[name]] += float(m["coeff"]) if m["coeff"] is not None else 1.0
    return make_complex(coeffs)


def format_complex(y: Sequence[float], species: Sequence[str]) -> str:
    terms = []
    for c, name in zip(y, species):
        if c == 0:
            continue
        if c == 1:
            terms.append(name)
        elif float(c).is_integer() and abs(c) < 1e16:
            terms.append(f"{int(c)}{name}")
        else:
            terms.append(f"{float(c)!r} {name}")
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Reaction:
    reactant: tuple
    product: tuple

    def __post_init__(self):
        object.__setattr__(self, "reactant", make_complex(self.reactant))
        object.__setattr__(self, "product", make_complex(self.product))
        if len(self.reactant) != len(self.product):
            raise ValueError("reactant and product live over different species sets")

    @property
    def is_trivial(self) -> bool:
        return self.reactant == self.product

    def reversed(self) -> "Reaction":
        return Reaction(self.product, self.reactant)


def flux(r: Reaction) -> np.ndarray:
    """Reaction vector: product minus reactant."""
    return np.subtract(r.product, r.reactant)


@dataclass(frozen=True, eq=False)
class ReactionNetwork:
    """A reaction network ``(S, C, R)``.

    ``complexes`` may list complexes that no reaction touches; every reactant
    and product is added automatically. Reactions are deduplicated by exact
    coefficient equality, keeping first-occurrence order.
    """

    species: tuple
    reactions: tuple
    complexes: tuple = field(default=())

    def __post_init__(self):
        species = tuple(self.species)
        if not species:
            raise ValueError("a network needs at least one species")
        if len(set(species)) != len(species):
            raise ValueError(f"duplicate species in {species}")
        for name in species:
            if not SPECIES_NAME.match(str(name)):
                raise ValueError(f"invalid species name {name!r}")
        n = len(species)
        reactions = tuple(dict.fromkeys(
            r if isinstance(r, Reaction) else Reaction(*r) for r in self.reactions
        ))
        complexes = [make_complex(y) for y in self.complexes]
        for r in reactions:
            if len(r.reactant) != n:
                raise ValueError(f"reaction {r} does not match {n} species")
            complexes.extend((r.reactant, r.product))
        for y in complexes:
            if len(y) != n:
                raise ValueError(f"complex {y} does not match {n} species")
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "reactions", reactions)
        object.__setattr__(self, "complexes", tuple(dict.fromkeys(complexes)))

    @classmethod
    def from_strings(cls, species: Sequence[str], reactions: Iterable[str],
                     complexes: Iterable[str] = ()) -> "ReactionNetwork":
        """Build from reaction strings such as ``"A + B -> 2B"``.

        ``"<->"`` adds both directions.
        """
        species = tuple(species)
        rs = []
        for text in reactions:
            if "<->" in text:
                left, right = text.split("<->")
                a, b = parse_complex(left, species), parse_complex(right, species)
                rs += [Reaction(a, b), Reaction(b, a)]
            else:
                left, right = text.split("->")
                rs.append(Reaction(parse_complex(left, species), parse_complex(right, species)))
        return cls(species, tuple(rs), tuple(parse_complex(c, species) for c in complexes))

    def __eq__(self, other):
        if not isinstance(other, ReactionNetwork):
            return NotImplemented
        return (
            self.species == other.species
            and set(self.reactions) == set(other.reactions)
            and set(self.complexes) == set(other.complexes)
        )

    def __hash__(self):
        return hash((self.species, frozenset(self.reactions), frozenset(self.complexes)))

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @cached_property
    def reactant_matrix(self) -> np.ndarray:
        """Reactant complexes as rows, shape ``(|R|, |S|)``."""
        return np.array([r.reactant for r in self.reactions], dtype=float).reshape(-1, self.n_species)

    @cached_property
    def flux_matrix(self) -> np.ndarray:
        """Reaction vectors as rows, shape ``(|R|, |S|)``."""
        return np.array([flux(r) for r in self.reactions], dtype=float).reshape(-1, self.n_species)

    def index(self, name: str) -> int:
        return self.species.index(name)

    def format_reaction(self, r: Reaction) -> str:
        return f"{format_complex(r.reactant, self.species)} -> {format_complex(r.product, self.species)}"

    def __repr__(self):
        body = ", ".join(self.format_reaction(r) for r in self.reactions)
        return f"ReactionNetwork(species={list(self.species)}, reactions=[{body}])"


def stoichiometric_basis(net: ReactionNetwork, rtol: float = RANK_RTOL) -> list[np.ndarray]:
    """Orthonormal basis of the span of the reaction vectors."""
    F = net.flux_matrix
    if F.size == 0 or not np.any(F):
        return []
    _, s, vt = np.linalg.svd(F, full_matrices=False)
    rank = int(np.sum(s > rtol * s[0]))
    return [vt[i].copy() for i in range(rank)]


def basis_matrix(net: ReactionNetwork) -> np.ndarray:
    """Stoichiometric basis stacked as rows, shape ``(rank, |S|)``."""
    basis = stoichiometric_basis(net)
    return np.array(basis).reshape(len(basis), net.n_species)


def orthogonal_residual(net: ReactionNetwork, x0, x) -> float:
    """Norm of the part of ``x - x0`` orthogonal to the stoichiometric subspace."""
    d = np.asarray(x, dtype=float) - np.asarray(x0, dtype=float)
    B = basis_matrix(net)
    if len(B):
        d = d - B.T @ (B @ d)
    return float(np.linalg.norm(d))


def invariant_polyhedron_contains(net: ReactionNetwork, x0, x, tol: float = 1e-9) -> bool:
    """Whether ``x`` lies in ``(x0 + H) ∩ R^S_{>=0}`` up to ``tol``."""
    x0 = np.asarray(x0, dtype=float)
    x = np.asarray(x, dtype=float)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if x0.shape != (net.n_species,) or x.shape != (net.n_species,):
        raise ValueError(
            f"dimension mismatch: network has {net.n_species} species, "
            f"got x0 of shape {x0.shape} and x of shape {x.shape}"
        )
    if np.any(x < 0):
        return False
    return orthogonal_residual(net, x0, x) <= tol
