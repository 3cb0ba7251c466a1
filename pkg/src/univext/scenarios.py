"""Scenario files: a category, a torsion pair and the checks to run on it.

Scenarios are TOML documents with a versioned ``schema`` field::

    schema = 1
    name = "a3-paper"
    checks = ["torsion-pair", "equivalence"]

    [category]
    kind = "linear"          # or "tube" with rank and length_cap
    n = 3

    [pair]
    kind = "explicit"        # or "rays" / "corays" with indices and wings
    torsion = ["[2,2]"]

Member lists use the display syntax ``[a,b]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import tomli

from .category import CategorySpec, DomainError, LinearA, Tube, parse_indec
from .linalg import DEFAULT_PRIME
from .torsion import TorsionPair, TubeCase1, TubeCase2, explicit_pair

SCHEMA_VERSION = 1

CHECKS = ("torsion-pair", "equivalence", "ff-corollary", "wakamatsu", "pushout", "lwc-triple")


class ScenarioError(ValueError):
    """A scenario that does not parse; the message names the offending location."""


@dataclass(frozen=True)
class Scenario:
    name: str
    spec: CategorySpec
    pair: TorsionPair
    checks: tuple[str, ...] = ()
    cap: int | None = None
    restrict: tuple[int, int] | None = None
    output: str = "text"

    def with_overrides(self, cap: int | None = None, prime: int | None = None) -> "Scenario":
        spec, cap_ = self.spec, self.cap if cap is None else cap
        if prime is not None:
            spec = spec.with_prime(prime)
        if isinstance(spec, Tube) and cap_ is not None and cap_ > spec.length_cap:
            spec = spec.with_cap(cap_)
        pair = self.pair.with_spec(spec)
        return Scenario(self.name, spec, pair, self.checks, cap_, self.restrict, self.output)


BUILTIN = {
    "a3-paper": """
schema = 1
name = "a3-paper"
checks = ["torsion-pair", "equivalence", "ff-corollary", "wakamatsu", "pushout", "lwc-triple"]

[category]
kind = "linear"
n = 3

[pair]
kind = "explicit"
torsion = ["[2,2]"]
free = ["[1,1]", "[1,2]", "[1,3]", "[3,3]"]
""",
    "tube5-case1-paper": """
schema = 1
name = "tube5-case1-paper"
checks = ["torsion-pair", "equivalence", "ff-corollary", "wakamatsu", "pushout"]
cap = 10

[category]
kind = "tube"
rank = 5
length_cap = 10

[pair]
kind = "rays"
indices = [0, 4]
wings = [["[1,3]", "[2,3]", "[3,3]"], []]
""",
    "tube5-case2-paper": """
schema = 1
name = "tube5-case2-paper"
checks = ["torsion-pair", "equivalence", "ff-corollary", "wakamatsu", "pushout"]
cap = 10
restrict = [2, 5]

[category]
kind = "tube"
rank = 5
length_cap = 10

[pair]
kind = "corays"
indices = [0]
wings = [["[3,3]"]]
""",
}


def _need(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ScenarioError(f"{where}: missing key '{key}'")
    value = table[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ScenarioError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}, got {value!r}")
    return value


def _known(table: dict, keys: set, where: str):
    extra = sorted(set(table) - keys)
    if extra:
        raise ScenarioError(f"{where}: unknown key(s) {', '.join(extra)}")


def _members(spec: CategorySpec, values, where: str):
    if not isinstance(values, list):
        raise ScenarioError(f"{where}: expected a list of [a,b] strings")
    out = []
    for k, v in enumerate(values):
        if not isinstance(v, str):
            raise ScenarioError(f"{where}[{k}]: expected a string like \"[a,b]\", got {v!r}")
        try:
            out.append(parse_indec(spec, v))
        except DomainError as exc:
            raise ScenarioError(f"{where}[{k}]: {exc}") from None
    return out


def _category(table: dict, prime: int) -> CategorySpec:
    kind = _need(table, "kind", str, "category")
    if kind == "linear":
        _known(table, {"kind", "n"}, "category")
        n = _need(table, "n", int, "category")
        try:
            return LinearA(n, prime)
        except ValueError as exc:
            raise ScenarioError(f"category.n: {exc}") from None
    if kind == "tube":
        _known(table, {"kind", "rank", "length_cap"}, "category")
        try:
            return Tube(_need(table, "rank", int, "category"), _need(table, "length_cap", int, "category"), prime)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"category: {exc}") from None
    raise ScenarioError(f"category.kind: expected 'linear' or 'tube', got {kind!r}")


def _pair(table: dict, spec: CategorySpec) -> TorsionPair:
    kind = _need(table, "kind", str, "pair")
    try:
        if kind == "explicit":
            _known(table, {"kind", "torsion", "free"}, "pair")
            torsion = _members(spec, table.get("torsion", []), "pair.torsion")
            free = _members(spec, table["free"], "pair.free") if "free" in table else None
            return explicit_pair(spec, torsion, free)
        if kind in ("rays", "corays"):
            _known(table, {"kind", "indices", "wings"}, "pair")
            if not isinstance(spec, Tube):
                raise ScenarioError(f"pair.kind: '{kind}' needs a tube category")
            idx = _need(table, "indices", list, "pair")
            if not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
                raise ScenarioError("pair.indices: expected integers")
            wings = _need(table, "wings", list, "pair")
            sets = tuple(frozenset(_members(spec, w, f"pair.wings[{k}]")) for k, w in enumerate(wings))
            cls = TubeCase1 if kind == "rays" else TubeCase2
            return TorsionPair(spec, cls(tuple(idx), sets))
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"pair: {exc}") from None
    raise ScenarioError(f"pair.kind: expected 'explicit', 'rays' or 'corays', got {kind!r}")


def parse_scenario(text: str, source: str = "<scenario>", prime: int = DEFAULT_PRIME) -> Scenario:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError(f"{source}: {exc}") from None
    try:
        _known(doc, {"schema", "name", "checks", "cap", "restrict", "output", "category", "pair"}, "scenario")
        schema = _need(doc, "schema", int, "scenario")
        if schema != SCHEMA_VERSION:
            raise ScenarioError(f"scenario.schema: unsupported version {schema} (expected {SCHEMA_VERSION})")
        spec = _category(_need(doc, "category", dict, "scenario"), prime)
        pair = _pair(_need(doc, "pair", dict, "scenario"), spec)
        checks = doc.get("checks", [])
        if not isinstance(checks, list):
            raise ScenarioError("scenario.checks: expected a list")
        for k, c in enumerate(checks):
            if c not in CHECKS:
                raise ScenarioError(f"scenario.checks[{k}]: unknown check {c!r}; known: {', '.join(CHECKS)}")
        cap = doc.get("cap")
        if cap is not None and (not isinstance(cap, int) or isinstance(cap, bool) or cap < 1):
            raise ScenarioError(f"scenario.cap: expected a positive integer, got {cap!r}")
        restrict = doc.get("restrict")
        if restrict is not None:
            if not (isinstance(restrict, list) and len(restrict) == 2 and all(isinstance(v, int) for v in restrict)):
                raise ScenarioError("scenario.restrict: expected [lo, hi]")
            restrict = (restrict[0], restrict[1])
        output = doc.get("output", "text")
        if output not in ("text", "structured"):
            raise ScenarioError(f"scenario.output: expected 'text' or 'structured', got {output!r}")
        name = doc.get("name", source)
    except ScenarioError as exc:
        raise ScenarioError(f"{source}: {exc}") from None
    return Scenario(str(name), spec, pair, tuple(checks), cap, restrict, output)


def load_scenario(ref: str, prime: int = DEFAULT_PRIME) -> Scenario:
    """A built-in scenario by name, or a scenario file by path."""
    if ref in BUILTIN:
        return parse_scenario(BUILTIN[ref], ref, prime)
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        known = ", ".join(sorted(BUILTIN))
        raise ScenarioError(f"{ref}: cannot read scenario ({exc.strerror}); built-ins are {known}") from None
    return parse_scenario(text, ref, prime)
