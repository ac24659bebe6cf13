"""Reading and writing assessment documents.

A document is YAML (JSON is accepted as a subset)::

    universe: [a, b, c, d]
    partition: [[a, b], [c], [d]]      # optional; defaults to singletons
    items:
      - event: [a]                     # or  gamble: {a: 1, b: -2, ...}
        given: [a, b, c]               # optional; defaults to the universe
        value: 0.2                     # decimals are read exactly
    pmfs: [{a: 0.5, b: 0.5, c: 0, d: 0}]   # optional envelope
    alphas: [0]                        # optional, one per pmf
    basis: [{a: 1, b: 1, c: 1, d: 1}]  # optional, selects subspace mode

Numbers may be written as integers, decimals or ``"p/q"`` strings.  World
names are always read as strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import yaml

from .consistency import envelope_assessment
from .core import (Assessment, ConditionalGamble, Event, Gamble, Partition,
                   PowersetLowerProbability, Universe, format_rational, to_rational)
from .extensions import SubspaceDomain
from .gn import ConditionalEvent, FullConditionalAssessment


class DocumentError(ValueError):
    """The document is malformed; ``where`` locates the offending part."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


class _ExactLoader(yaml.SafeLoader):
    pass


def _exact_float(loader, node):
    text = loader.construct_scalar(node).replace("_", "")
    try:
        return Fraction(text)
    except ValueError:
        raise yaml.constructor.ConstructorError(
            None, None, f"cannot read {text!r} as an exact number", node.start_mark) from None


_ExactLoader.add_constructor("tag:yaml.org,2002:float", _exact_float)


def load_yaml(text: str) -> Any:
    try:
        return yaml.load(text, Loader=_ExactLoader)
    except yaml.YAMLError as exc:
        raise DocumentError("document", f"not valid YAML/JSON ({exc})") from None


def _number(x, where: str) -> Fraction:
    if isinstance(x, bool) or x is None:
        raise DocumentError(where, f"expected a number, got {x!r}")
    try:
        return to_rational(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DocumentError(where, f"expected a number, got {x!r}") from None


def _worlds(u: Universe, xs, where: str) -> Event:
    if not isinstance(xs, list):
        raise DocumentError(where, "expected a list of worlds")
    names = [str(x) for x in xs]
    for n in names:
        if n not in u:
            raise DocumentError(where, f"unknown world {n!r}")
    return Event(u, names)


def _gamble(u: Universe, m, where: str, default=None) -> Gamble:
    if not isinstance(m, dict):
        raise DocumentError(where, "expected a mapping from worlds to numbers")
    values = {}
    for k, v in m.items():
        name = str(k)
        if name not in u:
            raise DocumentError(where, f"unknown world {name!r}")
        values[name] = _number(v, f"{where}.{name}")
    if default is None:
        missing = [w for w in u.worlds if w not in values]
        if missing:
            raise DocumentError(where, f"no value for worlds {missing}")
    else:
        for w in u.worlds:
            values.setdefault(w, default)
    return Gamble(u, values)


@dataclass
class Document:
    """A parsed document; ``mode`` is ``powerset``, ``conditional`` or ``general``."""

    universe: Universe
    partition: Partition
    assessment: Optional[Assessment]
    mode: str
    raw: dict
    subspace: Optional[SubspaceDomain] = None

    def powerset(self) -> PowersetLowerProbability:
        if self.mode != "powerset":
            raise DocumentError("items", "the items do not enumerate every union of atoms")
        table = {_as_event(cg.gamble): v for cg, v in self.assessment}
        return PowersetLowerProbability(self.partition, table)

    def checkable(self) -> Assessment:
        """The assessment to run consistency checks on.

        A document with pmfs but no items stands for the conditional lower
        envelope on every measurable conditional event.
        """
        if self.assessment is not None:
            return self.assessment
        if self.raw.get("pmfs") is not None:
            return self.full_conditional().to_assessment()
        raise DocumentError("items", "nothing to check")

    def full_conditional(self) -> FullConditionalAssessment:
        if self.raw.get("pmfs") is not None and not self.raw.get("items"):
            pmfs = [_gamble(self.universe, p, f"pmfs[{i}]", default=Fraction(0))
                    for i, p in enumerate(self.raw["pmfs"])]
            return FullConditionalAssessment.lower_envelope(self.partition, pmfs)
        values = {}
        for i, (cg, v) in enumerate(self.assessment):
            e = _as_event(cg.gamble)
            if e is None:
                raise DocumentError(f"items[{i}]", "a conditional-event document needs events only")
            values[(e, cg.conditioning)] = v
        try:
            return FullConditionalAssessment(self.partition, values)
        except ValueError as exc:
            raise DocumentError("items", str(exc)) from None


def _as_event(g: Gamble) -> Optional[Event]:
    if any(v not in (0, 1) for v in g.values):
        return None
    return Event(g.universe, [w for w, v in g.items() if v == 1])


def _infer_mode(a: Optional[Assessment], p: Partition) -> str:
    if a is None:
        return "general"
    events = []
    for cg, _ in a:
        e = _as_event(cg.gamble)
        if e is None or not p.is_measurable(e) or not p.is_measurable(cg.conditioning):
            return "general"
        events.append((e, cg))
    if all(cg.is_unconditional for _, cg in events):
        wanted = {e.members for e in p.events()}
        got = {e.members for e, _ in events}
        if got == wanted and len(events) == len(wanted):
            return "powerset"
        return "general"
    wanted = {ConditionalEvent(x & b, b) for b in p.events() if b for x in p.events()}
    got = {ConditionalEvent(e, cg.conditioning).canonical() for e, cg in events}
    return "conditional" if got == wanted else "general"


def parse_document(data: Any) -> Document:
    """Parse a document; a JSON report written by the CLI is accepted as well."""
    if not isinstance(data, dict):
        raise DocumentError("document", "expected a mapping at the top level")
    if "universe" not in data and isinstance(data.get("document"), dict):
        data = data["document"]
    if "universe" not in data:
        raise DocumentError("universe", "missing")
    worlds = data["universe"]
    if not isinstance(worlds, list) or not worlds:
        raise DocumentError("universe", "expected a non-empty list of world names")
    names = [str(w) for w in worlds]
    if len(set(names)) != len(names):
        raise DocumentError("universe", "duplicate world names")
    u = Universe(names)

    if data.get("partition") is None:
        p = u.singleton_partition()
    else:
        atoms = data["partition"]
        if not isinstance(atoms, list):
            raise DocumentError("partition", "expected a list of atoms")
        try:
            p = Partition(u, [[str(w) for w in atom] for atom in atoms])
        except (TypeError, ValueError) as exc:
            raise DocumentError("partition", str(exc)) from None

    pmfs = data.get("pmfs")
    pmf_gambles = None
    if pmfs is not None:
        if not isinstance(pmfs, list) or not pmfs:
            raise DocumentError("pmfs", "expected a non-empty list")
        pmf_gambles = [_gamble(u, m, f"pmfs[{i}]", default=Fraction(0)) for i, m in enumerate(pmfs)]
        for i, g in enumerate(pmf_gambles):
            if any(v < 0 for v in g.values) or sum(g.values) != 1:
                raise DocumentError(f"pmfs[{i}]", "masses must be non-negative and sum to 1")

    subspace = None
    if data.get("basis") is not None:
        if pmf_gambles is None:
            raise DocumentError("basis", "subspace mode needs pmfs")
        basis = [_gamble(u, m, f"basis[{i}]") for i, m in enumerate(data["basis"])]
        try:
            subspace = SubspaceDomain(basis, pmf_gambles)
        except ValueError as exc:
            raise DocumentError("basis", str(exc)) from None

    items = data.get("items")
    assessment = None
    if items:
        if not isinstance(items, list):
            raise DocumentError("items", "expected a list")
        parsed = []
        valueless = []
        for i, item in enumerate(items):
            where = f"items[{i}]"
            if not isinstance(item, dict):
                raise DocumentError(where, "expected a mapping")
            unknown = set(item) - {"event", "gamble", "given", "value"}
            if unknown:
                raise DocumentError(where, f"unknown keys {sorted(unknown)}")
            if ("event" in item) == ("gamble" in item):
                raise DocumentError(where, "give exactly one of 'event' or 'gamble'")
            if "event" in item:
                g = u.indicator(_worlds(u, item["event"], f"{where}.event"))
            else:
                g = _gamble(u, item["gamble"], f"{where}.gamble")
            given = u.omega if item.get("given") is None else \
                _worlds(u, item["given"], f"{where}.given")
            if not given:
                raise DocumentError(f"{where}.given", "conditioning event is empty")
            cg = ConditionalGamble(g, given)
            if "value" in item:
                parsed.append((cg, _number(item["value"], f"{where}.value")))
            else:
                valueless.append((i, cg))
        if valueless:
            if pmf_gambles is None:
                raise DocumentError(f"items[{valueless[0][0]}].value", "missing (and no pmfs given)")
            alphas = data.get("alphas") or [0] * len(pmf_gambles)
            alphas = [_number(x, f"alphas[{k}]") for k, x in enumerate(alphas)]
            if len(alphas) != len(pmf_gambles):
                raise DocumentError("alphas", "one alpha per pmf")
            try:
                env = envelope_assessment(pmf_gambles, alphas, [cg for _, cg in valueless])
            except ValueError as exc:
                raise DocumentError("items", str(exc)) from None
            parsed += list(env)
        try:
            assessment = Assessment(parsed)
        except ValueError as exc:
            raise DocumentError("items", str(exc)) from None
    elif subspace is None and pmf_gambles is None:
        raise DocumentError("items", "missing")

    return Document(u, p, assessment, _infer_mode(assessment, p), data, subspace)


def load_document(path: str | Path) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(str(path), f"cannot read ({exc.strerror})") from None
    return parse_document(load_yaml(text))


def load_gambles(path: str | Path, u: Universe) -> list[tuple[str, Gamble]]:
    """Gambles to extend: ``gamble: {...}`` or ``gambles: [{name: .., values: {..}}, ..]``."""
    try:
        data = load_yaml(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(str(path), f"cannot read ({exc.strerror})") from None
    if not isinstance(data, dict):
        raise DocumentError("gamble file", "expected a mapping")
    if "gamble" in data:
        return [("Z", _gamble(u, data["gamble"], "gamble"))]
    if isinstance(data.get("gambles"), list):
        out = []
        for i, entry in enumerate(data["gambles"]):
            where = f"gambles[{i}]"
            if not isinstance(entry, dict) or "values" not in entry:
                raise DocumentError(where, "expected {name: ..., values: {...}}")
            out.append((str(entry.get("name", f"Z{i}")), _gamble(u, entry["values"], f"{where}.values")))
        return out
    raise DocumentError("gamble file", "expected a 'gamble' or 'gambles' key")


def exact(x) -> Any:
    """JSON-friendly rendering that keeps every number exact."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return x


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(exact(payload), indent=2, ensure_ascii=False) + "\n",
                          encoding="utf-8")
