"""Structural classification of reaction networks.

Graph properties (linkage classes, reversibility, strong connectivity) come
from the reaction graph on complexes. The sweep-direction properties
(endotactic, strongly endotactic) are decided exactly by enumerating the
finitely many combinatorial types of a violating direction and solving one
small LP for each.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import lp
from .network import Reaction, ReactionNetwork, basis_matrix, flux

ORTHO_TOL = 1e-12
RECHECK_TOL = 1e-9
MAX_REACTIONS = 12


class TooLargeError(ValueError):
    pass


@dataclass
class Verdict:
    """Outcome of a yes/no structural test.

    ``value`` is ``None`` when the LP kernel could not decide. ``witness`` is
    a violating direction, ``violator`` a violating reaction when one exists.
    """

    value: Optional[bool]
    witness: Optional[np.ndarray] = None
    violator: Optional[Reaction] = None
    detail: str = ""

    def __bool__(self):
        if self.value is None:
            raise lp.IndeterminateError(self.detail or "indeterminate verdict")
        return self.value


@dataclass
class WSupportReport:
    w: np.ndarray
    essential: list
    support: list


@dataclass
class ClassificationReport:
    integer: bool
    chemical: bool
    reversible: bool
    strongly_connected: bool
    weakly_reversible: bool
    endotactic: Optional[bool]
    strongly_endotactic: Optional[bool]
    n_linkage_classes: int
    witnesses: dict = field(default_factory=dict)
    indeterminate: list = field(default_factory=list)

    FLAGS = ("integer", "chemical", "reversible", "strongly_connected",
             "weakly_reversible", "endotactic", "strongly_endotactic")

    def flags(self) -> dict:
        return {name: getattr(self, name) for name in self.FLAGS}

    def to_dict(self) -> dict:
        out = self.flags()
        out["linkage_classes"] = self.n_linkage_classes
        out["witnesses"] = {k: [float(x) for x in w] for k, w in self.witnesses.items()}
        out["indeterminate"] = list(self.indeterminate)
        return out


# -- reaction graph ---------------------------------------------------------

def _graph(net: ReactionNetwork):
    index = {y: i for i, y in enumerate(net.complexes)}
    rows = [index[r.reactant] for r in net.reactions]
    cols = [index[r.product] for r in net.reactions]
    n = len(net.complexes)
    return coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)), rows, cols


def linkage_classes(net: ReactionNetwork) -> list[list[tuple]]:
    """Weakly connected components of the reaction graph, as lists of complexes."""
    g, _, _ = _graph(net)
    _, labels = connected_components(g, directed=True, connection="weak")
    classes: dict[int, list] = {}
    for y, lab in zip(net.complexes, labels):
        classes.setdefault(lab, []).append(y)
    return list(classes.values())


def strong_components(net: ReactionNetwork) -> np.ndarray:
    g, _, _ = _graph(net)
    _, labels = connected_components(g, directed=True, connection="strong")
    return labels


def is_weakly_reversible(net: ReactionNetwork) -> bool:
    labels = strong_components(net)
    _, rows, cols = _graph(net)
    return all(labels[i] == labels[j] for i, j in zip(rows, cols))


def is_strongly_connected(net: ReactionNetwork) -> bool:
    return len(set(strong_components(net))) == 1


def is_reversible(net: ReactionNetwork) -> bool:
    reactions = set(net.reactions)
    return all(r.reversed() in reactions for r in net.reactions)


def is_integer(net: ReactionNetwork) -> bool:
    return all(float(c).is_integer() for y in net.complexes for c in y)


def is_chemical(net: ReactionNetwork) -> bool:
    return is_integer(net) and all(c >= 0 for y in net.complexes for c in y)


# -- single directions ------------------------------------------------------

def w_support(net: ReactionNetwork, w, tol: float = ORTHO_TOL) -> WSupportReport:
    """w-essential reactions and the ≤_w-maximal reactants among them."""
    w = np.asarray(w, dtype=float)
    essential = [r for r in net.reactions if abs(float(w @ flux(r))) > tol]
    if not essential:
        return WSupportReport(w, [], [])
    values = {r.reactant: float(w @ np.asarray(r.reactant)) for r in essential}
    top = max(values.values())
    support = [y for y, v in values.items() if v >= top - tol]
    return WSupportReport(w, essential, support)


def is_w_endotactic(net: ReactionNetwork, w, tol: float = ORTHO_TOL) -> Verdict:
    """Every w-essential reaction fired from the w-support points against ``w``."""
    w = np.asarray(w, dtype=float)
    report = w_support(net, w, tol)
    support = set(report.support)
    for r in report.essential:
        if r.reactant in support and float(w @ flux(r)) >= 0:
            return Verdict(False, w, r)
    return Verdict(True)


def violates_strong_condition(net: ReactionNetwork, w, tol: float = ORTHO_TOL) -> bool:
    """True when ``w`` is not orthogonal to the stoichiometric subspace and no
    reaction from a ≤_w-maximal reactant (over all reactants) points strictly
    against ``w``."""
    w = np.asarray(w, dtype=float)
    B = basis_matrix(net)
    if not len(B) or np.max(np.abs(B @ w)) <= tol:
        return False
    values = net.reactant_matrix @ w
    top = values.max()
    for r, v in zip(net.reactions, values):
        if v >= top - tol and float(w @ flux(r)) < -tol:
            return False
    return True


def w_endotactic_many(net: ReactionNetwork, W, tol: float = ORTHO_TOL) -> np.ndarray:
    """Vectorized ``is_w_endotactic`` over the rows of ``W``."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if net.n_reactions == 0:
        return np.ones(len(W), dtype=bool)
    prods = W @ net.flux_matrix.T
    values = W @ net.reactant_matrix.T
    essential = np.abs(prods) > tol
    masked = np.where(essential, values, -np.inf)
    top = masked.max(axis=1, keepdims=True)
    support = essential & (values >= top - tol)
    return ~np.any(support & (prods >= 0), axis=1)


def sphere_directions(n: int, count: int = 10_000, seed: int = 0) -> np.ndarray:
    """A deterministic near-uniform grid of unit vectors in ``R^n``."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        theta = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3:
        i = np.arange(count) + 0.5
        z = 1 - 2 * i / count
        phi = np.pi * (1 + 5**0.5) * i
        rho = np.sqrt(1 - z**2)
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    g = np.random.default_rng(seed).standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# -- exact deciders ---------------------------------------------------------

def _guard(net: ReactionNetwork, max_reactions: int):
    if net.n_reactions > max_reactions:
        raise TooLargeError(
            f"{net.n_reactions} reactions exceed the enumeration guard of {max_reactions}; "
            "pass max_reactions to override"
        )


def _in_span(v: np.ndarray, rows) -> bool:
    if not len(rows):
        return not np.any(v)
    M = np.asarray(rows, dtype=float)
    coef, *_ = np.linalg.lstsq(M.T, v, rcond=None)
    return np.linalg.norm(M.T @ coef - v) <= 1e-10 * max(1.0, np.linalg.norm(v))


def _flux_closed_sets(groups: list) -> list[tuple]:
    """Index sets closed under "all fluxes lie in the span of the chosen fluxes".

    ``groups[j]`` is the flux matrix of the ``j``-th reactant. For a
    non-closed set, its closure gives the same orthogonality constraints with
    fewer ordering constraints, so only closed sets need an LP. Every closed
    set is the closure of a closed set plus one index, so a search from the
    closure of the empty set reaches all of them.
    """
    m = len(groups)

    def closure(subset):
        rows = [v for j in subset for v in groups[j]]
        return tuple(j for j in range(m) if j in subset or all(_in_span(v, rows) for v in groups[j]))

    start = closure(())
    found, todo = {start}, [start]
    while todo:
        current = todo.pop()
        for j in range(m):
            if j not in current:
                nxt = closure(set(current) | {j})
                if nxt not in found:
                    found.add(nxt)
                    todo.append(nxt)
    return sorted(found, key=lambda c: (len(c), c))


def is_endotactic(net: ReactionNetwork, max_reactions: int = MAX_REACTIONS) -> Verdict:
    """Exact endotactic decision.

    A violating direction ``w`` has some reaction ``r`` with ``<w, flux r> > 0``
    whose reactant ``y`` is ``≤_w``-maximal among the reactants of essential
    reactions. Every other distinct reactant ``y'`` then either sits weakly
    below ``y`` or has all of its reactions orthogonal to ``w``. Enumerating
    that choice gives finitely many LPs; the network is endotactic iff all
    are infeasible.
    """
    _guard(net, max_reactions)
    active = [r for r in net.reactions if not r.is_trivial]
    by_reactant: dict[tuple, list] = {}
    for r in active:
        by_reactant.setdefault(r.reactant, []).append(r)
    reactants = list(by_reactant)
    n = net.n_species
    undecided = []
    for i, y in enumerate(reactants):
        y_vec = np.asarray(y)
        others = reactants[:i] + reactants[i + 1:]
        groups = [[flux(q) for q in by_reactant[z]] for z in others]
        closed = _flux_closed_sets(groups)
        for r in by_reactant[y]:
            f = flux(r)
            for above in closed:
                ortho = [v for j in above for v in groups[j]]
                if _in_span(f, ortho):
                    continue
                sys = lp.LinearConstraintSystem(n)
                sys.add(f, ">=", 1.0)
                for v in ortho:
                    sys.add(v, "==", 0.0)
                for j, z in enumerate(others):
                    if j not in above:
                        sys.add(np.asarray(z) - y_vec, "<=", 0.0)
                res = lp.feasible(sys)
                if res.indeterminate:
                    undecided.append(f"reaction {net.format_reaction(r)}, above={above}: {res.message}")
                    continue
                if res.feasible:
                    w = res.witness + 0.0
                    check = is_w_endotactic(net, w, RECHECK_TOL)
                    if check.value:
                        undecided.append(f"witness {w} failed direct re-check")
                        continue
                    return Verdict(False, w, check.violator)
    if undecided:
        return Verdict(None, detail="; ".join(undecided))
    return Verdict(True)


def _affinely_closed(points: np.ndarray, subset: tuple) -> bool:
    """No point outside ``subset`` lies on the affine hull of ``subset``."""
    base = points[subset[0]]
    rows = [points[j] - base for j in subset[1:]]
    for j in range(len(points)):
        if j not in subset and _in_span(points[j] - base, rows):
            return False
    return True


def is_strongly_endotactic(net: ReactionNetwork, max_reactions: int = MAX_REACTIONS,
                           endotactic: Optional[Verdict] = None) -> Verdict:
    """Exact strongly-endotactic decision.

    After the endotactic test, a violating direction is characterized by the
    set ``M`` of ``≤_w``-maximal reactants (over all reactions): ``w`` is
    constant on ``M``, strictly larger on ``M`` than on every other reactant,
    no reaction from ``M`` points strictly against ``w``, and ``w`` is not
    orthogonal to the stoichiometric subspace. ``M`` must contain every
    reactant on its own affine hull, which prunes most candidates.
    """
    endo = is_endotactic(net, max_reactions) if endotactic is None else endotactic
    if endo.value is not True:
        return endo
    n = net.n_species
    B = basis_matrix(net)
    if not len(B):
        return Verdict(True)
    reactants = list(dict.fromkeys(r.reactant for r in net.reactions))
    points = np.array(reactants, dtype=float)
    undecided = []
    for size in range(1, len(reactants) + 1):
        for M in itertools.combinations(range(len(reactants)), size):
            if not _affinely_closed(points, M):
                continue
            base = lp.LinearConstraintSystem(n)
            y0 = points[M[0]]
            for j in M[1:]:
                base.add(points[j] - y0, "==", 0.0)
            for j in range(len(reactants)):
                if j not in M:
                    base.add(y0 - points[j], ">=", 1.0)
            chosen = {reactants[j] for j in M}
            for r in net.reactions:
                if r.reactant in chosen and not r.is_trivial:
                    base.add(flux(r), ">=", 0.0)
            res = lp.feasible(base)
            if res.status == lp.INFEASIBLE:
                continue
            for h in B:
                for sign in (1.0, -1.0):
                    sys = lp.LinearConstraintSystem(n, list(base.constraints))
                    sys.add(sign * h, ">=", 1.0)
                    res = lp.feasible(sys)
                    if res.indeterminate:
                        undecided.append(f"maximal set {M}: {res.message}")
                        continue
                    if res.feasible:
                        w = res.witness + 0.0
                        if not violates_strong_condition(net, w, RECHECK_TOL):
                            undecided.append(f"witness {w} failed direct re-check")
                            continue
                        return Verdict(False, w)
    if undecided:
        return Verdict(None, detail="; ".join(undecided))
    return Verdict(True)


def classify(net: ReactionNetwork, max_reactions: int = MAX_REACTIONS) -> ClassificationReport:
    reversible = is_reversible(net)
    strongly_connected = is_strongly_connected(net)
    weakly_reversible = is_weakly_reversible(net)
    witnesses, indeterminate = {}, []
    endo = is_endotactic(net, max_reactions)
    if endo.value is True:
        strong = is_strongly_endotactic(net, max_reactions, endo)
    else:
        strong = Verdict(False if endo.value is False else None, endo.witness, detail=endo.detail)
    for name, verdict in (("endotactic", endo), ("strongly_endotactic", strong)):
        if verdict.witness is not None:
            witnesses[name] = verdict.witness
        if verdict.value is None:
            indeterminate.append(f"{name}: {verdict.detail}")
    return ClassificationReport(
        integer=is_integer(net),
        chemical=is_chemical(net),
        reversible=reversible,
        strongly_connected=strongly_connected,
        weakly_reversible=weakly_reversible,
        endotactic=endo.value,
        strongly_endotactic=strong.value,
        n_linkage_classes=len(linkage_classes(net)),
        witnesses=witnesses,
        indeterminate=indeterminate,
    )
