"""JSON scene files.

Schema::

    {"states": ["A", "B", ...],
     "edges": [{"from": "A", "to": "B", "coeff": [re, im], "pathlength": L}, ...],
     "inputs": [...], "outputs": [...],
     "params": {"d": 1.0, ...}}            # optional

``pathlength`` is a number, a parameter name, or a mapping
``{param: multiplier, ...}`` (an optional ``"const"`` key adds a fixed
offset). The wavenumber is never stored in a scene.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .elements import SceneEdge, SceneSpec, assemble_scene
from .errors import SceneParseError, UndeclaredState
from .graph import EvalContext, OpticalGraph

BUNDLED = ("michelson", "fabry_perot", "membranes_n2", "ligo", "mach_zehnder", "beam_splitter")


def _length_terms(raw, params) -> dict[str, float]:
    """Normalise a pathlength entry to {param or 'const': multiplier}."""
    if isinstance(raw, bool):
        raise SceneParseError(f"pathlength must be a number, name or mapping, got {raw!r}")
    if isinstance(raw, (int, float)):
        return {"const": float(raw)}
    if isinstance(raw, str):
        raw = {raw: 1.0}
    if isinstance(raw, Mapping):
        out = {}
        for name, mult in raw.items():
            if name != "const" and name not in params:
                raise SceneParseError(f"pathlength references unknown parameter {name!r}")
            if isinstance(mult, bool) or not isinstance(mult, (int, float)):
                raise SceneParseError(f"multiplier of {name!r} must be a number")
            out[name] = float(mult)
        return out
    raise SceneParseError(f"pathlength must be a number, name or mapping, got {raw!r}")


@dataclass
class SceneTemplate:
    states: list[str]
    edges: list[dict[str, Any]]
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    params: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping) -> SceneTemplate:
        if not isinstance(data, Mapping):
            raise SceneParseError("scene must be a JSON object")
        unknown = set(data) - {"states", "edges", "inputs", "outputs", "params"}
        if unknown:
            raise SceneParseError(f"unknown top-level keys {sorted(unknown)}")
        try:
            states = [str(s) for s in data["states"]]
            params = {str(k): float(v) for k, v in data.get("params", {}).items()}
            edges = []
            for e in data.get("edges", []):
                re_, im_ = e["coeff"]
                edge = {"from": str(e["from"]), "to": str(e["to"]), "coeff": [float(re_), float(im_)],
                        "pathlength": e.get("pathlength", 0.0)}
                _length_terms(edge["pathlength"], params)
                edges.append(edge)
            tmpl = cls(states, edges, [str(s) for s in data.get("inputs", [])],
                       [str(s) for s in data.get("outputs", [])], params)
        except SceneParseError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneParseError(f"malformed scene: {exc!r}") from exc
        try:
            tmpl.resolve().validate()
        except UndeclaredState as exc:
            raise SceneParseError(str(exc)) from exc
        if any(not math.isfinite(v) for v in params.values()):
            raise SceneParseError("parameters must be finite")
        return tmpl

    def to_dict(self) -> dict:
        out = {"states": list(self.states), "edges": [dict(e) for e in self.edges],
               "inputs": list(self.inputs), "outputs": list(self.outputs)}
        if self.params:
            out["params"] = dict(self.params)
        return out

    def _params(self, overrides: Mapping[str, float] | None) -> dict[str, float]:
        params = dict(self.params)
        for name, value in (overrides or {}).items():
            if name not in params:
                raise KeyError(f"scene has no parameter {name!r}; known: {sorted(params)}")
            params[name] = float(value)
        return params

    def pathlength(self, edge: Mapping, params: Mapping[str, float]) -> float:
        terms = _length_terms(edge["pathlength"], params)
        return sum(m * (1.0 if n == "const" else params[n]) for n, m in terms.items())

    def resolve(self, overrides: Mapping[str, float] | None = None) -> SceneSpec:
        params = self._params(overrides)
        edges = [SceneEdge(e["from"], e["to"], complex(*e["coeff"]), self.pathlength(e, params))
                 for e in self.edges]
        return SceneSpec(list(self.states), edges, list(self.inputs), list(self.outputs))

    def graph(self, k: float, overrides: Mapping[str, float] | None = None) -> OpticalGraph:
        return assemble_scene(self.resolve(overrides), EvalContext(k))

    def length_matrix(self, names: list[str]) -> tuple[np.ndarray, np.ndarray]:
        """Constant part and per-parameter multipliers of every edge length."""
        const = np.zeros(len(self.edges))
        mult = np.zeros((len(self.edges), len(names)))
        for i, e in enumerate(self.edges):
            for n, m in _length_terms(e["pathlength"], self.params).items():
                if n == "const":
                    const[i] += m
                else:
                    mult[i, names.index(n)] += m
        return const, mult


def template_from_spec(spec: SceneSpec) -> SceneTemplate:
    edges = [{"from": e.src, "to": e.dst, "coeff": [complex(e.coefficient).real, complex(e.coefficient).imag],
              "pathlength": float(e.pathlength)} for e in spec.edges]
    return SceneTemplate(list(spec.states), edges, list(spec.inputs), list(spec.outputs))


def loads(text: str) -> SceneTemplate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(f"invalid JSON: {exc}") from exc
    return SceneTemplate.from_dict(data)


def dumps(template: SceneTemplate) -> str:
    return json.dumps(template.to_dict(), indent=2)


def load(path: str | Path) -> SceneTemplate:
    """Read a scene file; bare names such as ``fabry_perot.json`` fall back to bundled scenes."""
    p = Path(path)
    if p.exists():
        return loads(p.read_text())
    name = p.name[:-5] if p.name.endswith(".json") else p.name
    if name in BUNDLED and p.parent == Path("."):
        return loads(resources.files("wavegraph.scenes").joinpath(f"{name}.json").read_text())
    raise SceneParseError(f"scene file {str(path)!r} not found")


def save(template: SceneTemplate, path: str | Path) -> None:
    Path(path).write_text(dumps(template) + "\n")
