"""JSON workspaces: named algebras, families and default bounds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .analysis import Bounds
from .catalog import (ApplicativeStructure, from_applicative, from_heyting, from_table, modified,
                      nested, power, relative)
from .core import ImplicativeAlgebra, check_implicative_axioms, check_separator
from .lattice import LatticeError, build_lattice

SCHEMA_VERSION = 1


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line, self.col = line, col


class ValidationError(ValueError):
    def __init__(self, invariant: str, witness=None, where: str = ""):
        msg = f"{where}: {invariant}" if where else invariant
        if witness is not None:
            msg += f" (witness: {witness})"
        super().__init__(msg)
        self.invariant, self.witness, self.where = invariant, witness, where


@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    bounds: Bounds = field(default_factory=Bounds)
    definitions: dict = field(default_factory=dict)
    path: str = ""

    def algebra(self, name: str) -> ImplicativeAlgebra:
        if name not in self.algebras:
            raise ValidationError("unknown algebra", name)
        return self.algebras[name]


def _applicative(d: dict, where: str) -> ApplicativeStructure:
    try:
        return ApplicativeStructure.from_pairs(d["carrier"], d.get("app", []))
    except (KeyError, ValueError) as e:
        raise ValidationError(f"bad applicative structure: {e}", where=where) from None


def build_algebra(name: str, d: dict, done: dict) -> ImplicativeAlgebra:
    kind = d.get("kind")
    try:
        if kind in ("heyting", "custom"):
            L = build_lattice(d["elements"], [tuple(c) for c in d.get("covers", [])])
            if kind == "heyting":
                A = from_heyting(L, name)
            else:
                idx = {e: i for i, e in enumerate(d["elements"])}
                imp = [[idx[x] for x in row] for row in d["imp"]]
                sep = d.get("separator", {})
                gens = [idx[x] for x in sep.get("generators", [])]
                mem = sep.get("members")
                A = from_table(L, imp, gens, None if mem is None else [idx[x] for x in mem], name)
        elif kind == "realizability":
            A = from_applicative(_applicative(d, name), name=name)
        elif kind == "relative":
            A = relative(_applicative(d, name), d["sharp"], name=name)
        elif kind == "nested":
            A = nested(_applicative(d, name), d["sharp"], name=name)
        elif kind == "modified":
            A = modified(_applicative(d, name), d["sharp"], d["star"], name=name)
        elif kind == "power":
            if d["base"] not in done:
                raise ValidationError("power base must be defined earlier", d["base"], name)
            A = power(done[d["base"]], d["index"], name=name)
        else:
            raise ValidationError(f"unknown algebra kind {kind!r}", where=name)
    except LatticeError as e:
        raise ValidationError(type(e).__name__, str(e), name) from None
    except KeyError as e:
        raise ValidationError(f"missing field {e}", where=name) from None
    rep = check_implicative_axioms(A.structure)
    if not rep.passed:
        raise ValidationError(rep.failed_axiom, rep.witness, name)
    A.provenance.setdefault("definition", d)
    A.provenance["separator_check"] = check_separator(A).to_json()
    return A


def parse_workspace(text: str, path: str = "<string>") -> Workspace:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", 1, 1)
    version = raw.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError("unsupported schema version", version)
    ws = Workspace(path=path, definitions=raw)
    for name, d in raw.get("algebras", {}).items():
        ws.algebras[name] = build_algebra(name, d, ws.algebras)
    for name, d in raw.get("families", {}).items():
        alg = d.get("algebra")
        if alg not in ws.algebras:
            raise ValidationError("family references an undefined algebra", alg, name)
        A = ws.algebras[alg]
        try:
            vals = tuple(A.lattice.index(v) for v in d.get("values", []))
        except KeyError as e:
            raise ValidationError("family value is not an element", str(e), name) from None
        ws.families[name] = (alg, vals)
    b = raw.get("bounds", {})
    ws.bounds = Bounds(**{k: b[k] for k in ("K", "J", "I", "budget") if k in b})
    return ws


def load_workspace(path) -> Workspace:
    p = Path(path)
    return parse_workspace(p.read_text(encoding="utf-8"), str(p))


def zoo_text() -> str:
    return resources.files("implicative").joinpath("zoo.json").read_text(encoding="utf-8")


_ZOO = None


def load_zoo() -> Workspace:
    global _ZOO
    if _ZOO is None:
        _ZOO = parse_workspace(zoo_text(), "zoo.json")
    return _ZOO
