"""System files: one JSON document holding a semiring, a CAS, SCAs,
compositions, formulas and lassos, all cross-referenced by name.

Layout::

    {
      "semiring": "weighted" | {"product": [..., ...]},
      "cas": {"actions": [...], "composable": [{"pair": [a, b], "result": c}], "closure": bool},
      "scas": {name: {"states": [...], "initial": q, "threshold": v,
                      "transitions": [{"from": q, "action": a, "pref": v, "to": q}]}},
      "compositions": {name: [sca names]},
      "formulas": {name: "formula text"},
      "lassos": {name: {"prefix": [...], "cycle": [...]}}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import logic
from .cas import Cas, cas_from_json
from .errors import (CasAxiomError, DanglingReferenceError, DomainError,
                     FormulaSyntaxError, SchemaError, SoftCompError)
from .lasso import Lasso
from .sca import Sca, compose_all, sca_from_json, sca_to_json
from .semiring import Semiring, semiring_from_spec

_SECTIONS = ("semiring", "cas", "scas", "compositions", "formulas", "lassos")


@dataclass
class SystemFile:
    semiring: Semiring
    cas: Cas
    scas: dict
    compositions: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)
    lassos: dict = field(default_factory=dict)

    def automaton(self, name) -> Sca:
        """An SCA by name; composition names are composed on demand."""
        if name in self.scas:
            return self.scas[name]
        if name in self.compositions:
            return compose_all([self.scas[n] for n in self.compositions[name]], name=name)
        raise DanglingReferenceError(f"no SCA or composition named {name!r}")

    def formula(self, name) -> logic.Formula:
        if name not in self.formulas:
            raise DanglingReferenceError(f"no formula named {name!r}")
        return logic.parse(self.formulas[name], self.cas)

    def lasso(self, name) -> Lasso:
        if name not in self.lassos:
            raise DanglingReferenceError(f"no lasso named {name!r}")
        return self.lassos[name]

    def to_json(self) -> dict:
        return {
            "semiring": self.semiring.describe(),
            "cas": self.cas.to_json(),
            "scas": {name: sca_to_json(a) for name, a in self.scas.items()},
            "compositions": {k: list(v) for k, v in self.compositions.items()},
            "formulas": dict(self.formulas),
            "lassos": {k: v.to_json() for k, v in self.lassos.items()},
        }


def _require(cond, path, message, exc=SchemaError):
    if not cond:
        raise exc(f"{path}: {message}")


def _check_sca_refs(name, spec, actions, path):
    _require(isinstance(spec, dict), path, "expected an object")
    for key in ("states", "initial"):
        _require(key in spec, path, f"missing {key!r}")
    _require(isinstance(spec["states"], list), f"{path}.states", "expected a list")
    states = set(spec["states"])
    _require(spec["initial"] in states, f"{path}.initial",
             f"unknown state {spec['initial']!r}", DanglingReferenceError)
    transitions = spec.get("transitions", [])
    _require(isinstance(transitions, list), f"{path}.transitions", "expected a list")
    for i, t in enumerate(transitions):
        where = f"{path}.transitions[{i}]"
        _require(isinstance(t, dict), where, "expected an object")
        for key in ("from", "action", "pref", "to"):
            _require(key in t, where, f"missing {key!r}")
        for key in ("from", "to"):
            _require(t[key] in states, f"{where}.{key}", f"unknown state {t[key]!r}",
                     DanglingReferenceError)
        _require(t["action"] in actions, f"{where}.action", f"unknown action {t['action']!r}",
                 DanglingReferenceError)


def from_json(data: dict) -> SystemFile:
    """Build and validate a system from its JSON document."""
    _require(isinstance(data, dict), "$", "expected an object")
    extra = sorted(set(data) - set(_SECTIONS))
    _require(not extra, "$", f"unknown sections {extra}")
    for key in ("semiring", "cas", "scas"):
        _require(key in data, "$", f"missing section {key!r}")
    try:
        sr = semiring_from_spec(data["semiring"])
    except DomainError as exc:
        raise SchemaError(f"semiring: {exc}") from None
    _require(isinstance(data["cas"], dict), "cas", "expected an object")
    try:
        cas = cas_from_json(data["cas"])
    except (SoftCompError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"cas: {exc}") from None
    report = cas.validate()
    if not report.ok:
        raise CasAxiomError(report)

    scas = {}
    _require(isinstance(data["scas"], dict), "scas", "expected an object")
    for name, spec in data["scas"].items():
        path = f"scas.{name}"
        _check_sca_refs(name, spec, cas.index, path)
        try:
            scas[name] = sca_from_json(name, spec, cas, sr)
        except DomainError as exc:
            raise SchemaError(f"{path}: {exc}") from None

    compositions = {}
    for name, members in data.get("compositions", {}).items():
        path = f"compositions.{name}"
        _require(isinstance(members, list) and members, path, "expected a nonempty list")
        _require(name not in scas, path, "name clashes with an SCA")
        for m in members:
            _require(m in scas, path, f"unknown SCA {m!r}", DanglingReferenceError)
        compositions[name] = list(members)

    formulas = {}
    for name, text in data.get("formulas", {}).items():
        _require(isinstance(text, str), f"formulas.{name}", "expected a string")
        try:
            logic.parse(text, cas)
        except FormulaSyntaxError as exc:
            raise SchemaError(f"formulas.{name}: {exc}") from None
        formulas[name] = text

    lassos = {}
    for name, spec in data.get("lassos", {}).items():
        path = f"lassos.{name}"
        _require(isinstance(spec, dict) and "cycle" in spec, path, "expected prefix/cycle")
        try:
            lasso = Lasso.from_json(spec)
        except ValueError as exc:
            raise SchemaError(f"{path}: {exc}") from None
        for a in lasso.letters():
            _require(a in cas.index, path, f"unknown action {a!r}", DanglingReferenceError)
        lassos[name] = lasso

    return SystemFile(sr, cas, scas, compositions, formulas, lassos)


def load(path) -> SystemFile:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_json(data)


def dumps(system: SystemFile) -> str:
    return json.dumps(system.to_json(), indent=2)


def fixture_path(name: str) -> Path:
    """Path of a bundled example system, e.g. ``fixture_path("drone.json")``."""
    return Path(str(resources.files("softcomp") / "fixtures" / name))


def load_fixture(name: str) -> SystemFile:
    return load(fixture_path(name))
