"""The ``.crn`` text format and JSON report documents.

Grammar, one statement per line, ``#`` starts a comment::

    species A B
    reaction 2A -> A ; k = [1, 1]
    reaction 2B -> A + B ; k = [3, 3]
    reaction 0 -> B ; k = [1, 2]
    complex C                 # optional isolated complex
    allotment B = (1, 2)      # omitted species default to (0, inf)
    x0 = [1, 1]               # defaults to all ones
    repulsing = {A}           # optional

Brackets mark closed endpoints, parentheses open ones; ``inf`` is allowed as
an upper endpoint.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .intervals import PositiveInterval, format_number
from .network import Reaction, ReactionNetwork, format_complex, parse_complex
from .system import Allotment, SubconfinedSystem, Tempering

SCHEMA = "vertexical.report/1"

_NUM = r"[+-]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
_INTERVAL = re.compile(rf"\s*([\[(])\s*({_NUM})\s*,\s*({_NUM})\s*([\])])\s*\Z")
_REACTION = re.compile(r"reaction\s+(?P<lhs>.+?)\s*->\s*(?P<rhs>.+?)\s*;\s*k\s*=\s*(?P<k>.+)\Z")
_ALLOT = re.compile(r"allotment\s+(?P<name>\S+)\s*=\s*(?P<iv>.+)\Z")
_X0 = re.compile(r"x0\s*=\s*\[(?P<vals>[^\]]*)\]\s*\Z")
_REPULSE = re.compile(r"repulsing\s*=\s*\{(?P<names>[^}]*)\}\s*\Z")


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass
class CrnDocument:
    system: SubconfinedSystem
    repulsing: Optional[frozenset] = None

    @property
    def network(self) -> ReactionNetwork:
        return self.system.network


def parse_interval(text: str) -> PositiveInterval:
    m = _INTERVAL.match(text)
    if m is None:
        raise ValueError(f"cannot parse interval {text.strip()!r}")
    left, lo, hi, right = m.groups()
    return PositiveInterval(float(lo), float(hi), left == "(", right == ")")


def parse_crn(text: str) -> CrnDocument:
    species = None
    reactions, rates, extra = [], {}, []
    allotment, x0, repulsing = {}, None, None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            keyword = line.split(None, 1)[0].split("=")[0]
            if keyword == "species":
                if species is not None:
                    raise ValueError("species declared twice")
                species = tuple(line.split()[1:])
                if not species:
                    raise ValueError("no species declared")
                continue
            if species is None:
                raise ValueError("'species' must come first")
            if keyword == "reaction":
                m = _REACTION.match(line)
                if m is None:
                    raise ValueError("expected 'reaction <complex> -> <complex> ; k = [lo, hi]'")
                r = Reaction(parse_complex(m["lhs"], species), parse_complex(m["rhs"], species))
                if r in rates:
                    raise ValueError("duplicate reaction")
                reactions.append(r)
                rates[r] = parse_interval(m["k"])
                if not rates[r].is_bounded:
                    raise ValueError("rate interval must be bounded away from 0 and inf")
            elif keyword == "complex":
                extra.append(parse_complex(line.split(None, 1)[1], species))
            elif keyword == "allotment":
                m = _ALLOT.match(line)
                if m is None:
                    raise ValueError("expected 'allotment <name> = (lo, hi)'")
                if m["name"] not in species:
                    raise ValueError(f"undeclared species {m['name']!r}")
                allotment[m["name"]] = parse_interval(m["iv"])
            elif keyword == "x0":
                m = _X0.match(line)
                if m is None:
                    raise ValueError("expected 'x0 = [v1, ..., vn]'")
                x0 = [float(v) for v in m["vals"].split(",") if v.strip()]
                if len(x0) != len(species):
                    raise ValueError(f"x0 has {len(x0)} entries for {len(species)} species")
            elif keyword == "repulsing":
                m = _REPULSE.match(line)
                if m is None:
                    raise ValueError("expected 'repulsing = {name, ...}'")
                names = [s.strip() for s in m["names"].split(",") if s.strip()]
                unknown = [s for s in names if s not in species]
                if unknown:
                    raise ValueError(f"undeclared species {unknown}")
                repulsing = frozenset(names)
            else:
                raise ValueError(f"unknown statement {keyword!r}")
        except ValueError as err:
            raise ParseError(no, str(err)) from None
    if species is None:
        raise ParseError(0, "no 'species' line")
    try:
        net = ReactionNetwork(species, tuple(reactions), tuple(extra))
        mu = {s: allotment.get(s, PositiveInterval.orthant()) for s in species}
        base = np.ones(len(species)) if x0 is None else np.array(x0)
        system = SubconfinedSystem(net, Tempering(rates), Allotment(mu), base)
    except ValueError as err:
        raise ParseError(0, str(err)) from None
    return CrnDocument(system, repulsing)


def format_crn(doc: CrnDocument | SubconfinedSystem, header: str = "") -> str:
    """Canonical text for a document; ``parse_crn`` inverts it exactly."""
    if isinstance(doc, SubconfinedSystem):
        doc = CrnDocument(doc)
    N = doc.system
    net = N.network
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines.append("species " + " ".join(net.species))
    for r in net.reactions:
        lines.append(f"reaction {format_complex(r.reactant, net.species)} -> "
                     f"{format_complex(r.product, net.species)} ; k = {N.tempering[r]}")
    touched = {y for r in net.reactions for y in (r.reactant, r.product)}
    for y in net.complexes:
        if y not in touched:
            lines.append(f"complex {format_complex(y, net.species)}")
    for s in net.species:
        m = N.allotment[s]
        if m != PositiveInterval.orthant():
            lines.append(f"allotment {s} = {m}")
    lines.append("x0 = [" + ", ".join(format_number(v) for v in N.base_point) + "]")
    if doc.repulsing is not None:
        names = [s for s in net.species if s in doc.repulsing]
        lines.append("repulsing = {" + ", ".join(names) + "}")
    return "\n".join(lines) + "\n"


def read_crn(path) -> tuple[CrnDocument, bytes]:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_crn(data.decode("utf-8")), data


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x + 0.0
    return obj


def report_document(command: str, input_digest: str, kind: str, payload, parameters=None) -> dict:
    return _clean({
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "input_digest": input_digest,
        "parameters": parameters or {},
        kind: payload,
    })


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def bundled_path(name: str):
    """Path of a shipped ``.crn`` fixture, e.g. ``bundled_path("lotka")``."""
    from importlib.resources import files

    if not name.endswith(".crn"):
        name += ".crn"
    return files("vertexical") / "data" / name


def bundled_names() -> list[str]:
    from importlib.resources import files

    return sorted(p.name[:-4] for p in (files("vertexical") / "data").iterdir() if p.name.endswith(".crn"))
