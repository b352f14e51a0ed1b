"""Computations behind each CLI subcommand, usable directly from Python."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import sympy
from scipy.optimize import minimize_scalar

from . import kernels
from .errors import DivergentLoop, ModeMismatch, SceneParseError, UnknownState
from .quantum import FockAmplitudes, FockPolynomial, apply_transform, fock_amplitudes, mode_transform
from .reduction import elimination_order, relevant_states, response_factor
from .scene_io import SceneTemplate

log = logging.getLogger(__name__)

ENGINES = ("kernel", "rules")


@dataclass(frozen=True)
class SweepConfig:
    k_min: float
    k_max: float
    steps: int
    input: str
    output: str

    def __post_init__(self):
        if not self.k_min < self.k_max:
            raise ValueError(f"need k_min < k_max, got {self.k_min} >= {self.k_max}")
        if self.k_min <= 0:
            raise ValueError("wavenumbers must be > 0")
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")

    @property
    def ks(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.steps)


@dataclass(frozen=True)
class ScanResult:
    param: str
    argmax: float
    gamma: complex
    mag2: float
    flat: bool


def _check_labels(template: SceneTemplate, *labels: str) -> None:
    for lab in labels:
        if lab not in template.states:
            raise UnknownState(f"scene has no state {lab!r}")


def record(k: float, gamma: complex, **extra) -> dict:
    return {**extra, "k": float(k), "re": gamma.real, "im": gamma.imag, "mag2": abs(gamma) ** 2}


def respond(template: SceneTemplate, input: str, output: str, k: float,
            params: Mapping[str, float] | None = None) -> dict:
    _check_labels(template, input, output)
    gamma = response_factor(template.graph(k, params), input, output).value
    return record(k, gamma, input=input, output=output)


def intermediate(template: SceneTemplate, input: str, target: str, k: float,
                 params: Mapping[str, float] | None = None) -> dict:
    """Field at an arbitrary state (not necessarily a sink) relative to the input."""
    _check_labels(template, input, target)
    gamma = response_factor(template.graph(k, params), input, target).value
    return record(k, gamma, input=input, target=target)


class BatchEvaluator:
    """Γ_{s,t} of one scene over many (k, parameter) points via the dense kernel.

    The sparsity pattern, and therefore the pruned state set and the
    elimination order, does not depend on k or on lengths, so they are fixed
    once and only the weights vary across the batch.
    """

    def __init__(self, template: SceneTemplate, input: str, target: str,
                 params: Mapping[str, float] | None = None):
        _check_labels(template, input, target)
        self.template = template
        self.params = template._params(params)
        probe = template.graph(1.0, self.params)
        s, t = probe.state(input), probe.state(target)
        keep = relevant_states(probe, s, t)
        self.empty = not keep
        keep = sorted(keep | {s, t})
        pos = {sid: i for i, sid in enumerate(keep)}
        middle = [v for v in keep if v not in (s, t)]
        self.order = np.array([pos[v] for v in elimination_order(_subgraph(probe, keep), middle)], dtype=np.int64)
        self.s, self.t, self.n = pos[s], pos[t], len(keep)
        state_pos = {lab: pos.get(probe.state(lab)) for lab in template.states}
        edges = [(state_pos[e["from"]], state_pos[e["to"]], i) for i, e in enumerate(template.edges)]
        edges = [(a, b, i) for a, b, i in edges if a is not None and b is not None]
        self.src = np.array([a for a, _, _ in edges], dtype=np.int64)
        self.dst = np.array([b for _, b, _ in edges], dtype=np.int64)
        sel = [i for _, _, i in edges]
        self.coeff = np.array([complex(*template.edges[i]["coeff"]) for i in sel], dtype=complex)
        self.names = sorted(self.params)
        const, mult = template.length_matrix(self.names)
        self.const, self.mult = const[sel], mult[sel]

    def matrices(self, ks: np.ndarray, param: str | None = None, values: np.ndarray | None = None) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        base = np.array([self.params[n] for n in self.names])
        lengths = self.const + self.mult @ base
        if param is not None:
            j = self.names.index(param)
            values = np.atleast_1d(np.asarray(values, dtype=float))
            lengths = lengths[None, :] + np.outer(values - base[j], self.mult[:, j])
        else:
            lengths = np.broadcast_to(lengths, (len(ks), len(lengths)))
        weights = self.coeff * np.exp(1j * ks[:, None] * lengths)
        w = np.zeros((len(weights), self.n, self.n), dtype=complex)
        batch = np.repeat(np.arange(len(weights)), len(self.src))
        np.add.at(w, (batch, np.tile(self.src, len(weights)), np.tile(self.dst, len(weights))), weights.ravel())
        return w

    def evaluate(self, ks, param: str | None = None, values=None) -> np.ndarray:
        w = self.matrices(ks, param, values)
        if self.empty:
            return np.zeros(len(w), dtype=complex)
        return kernels.eliminate(w, self.order, self.s, self.t)


def _subgraph(graph, keep):
    sub = graph.copy()
    sub.set_ports([], [])
    for v in graph.states:
        if v not in keep:
            sub.remove_state(v)
    return sub


def _rules_value(template, input, target, k, params) -> complex:
    try:
        return response_factor(template.graph(k, params), input, target).value
    except DivergentLoop as exc:
        log.warning("k=%r: %s", k, exc)
        return complex(math.nan, math.nan)


def sweep(template: SceneTemplate, config: SweepConfig, params: Mapping[str, float] | None = None,
          engine: str = "kernel") -> list[dict]:
    """One record per k in ascending order; divergent points come back as NaN."""
    _check_labels(template, config.input, config.output)
    ks = config.ks
    if engine == "kernel":
        values = BatchEvaluator(template, config.input, config.output, params).evaluate(ks)
        for k, v in zip(ks, values):
            if np.isnan(v):
                log.warning("k=%r: response diverges (loop with |weight| >= 1)", k)
    elif engine == "rules":
        values = [_rules_value(template, config.input, config.output, k, params) for k in ks]
    else:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    return [record(k, complex(v)) for k, v in zip(ks, values)]


def scan_length(template: SceneTemplate, param: str, lo: float, hi: float, k: float, input: str, target: str,
                steps: int = 2001, params: Mapping[str, float] | None = None, engine: str = "kernel") -> ScanResult:
    """Maximise |Γ_{input,target}|^2 over one length parameter: grid scan, then golden-section refinement."""
    if not lo < hi:
        raise ValueError(f"empty scan range [{lo}, {hi}]")
    if steps < 3:
        raise ValueError("a scan needs at least 3 grid points")
    _check_labels(template, input, target)
    params = dict(params or {})
    if param not in template.params:
        raise KeyError(f"scene has no parameter {param!r}; known: {sorted(template.params)}")
    grid = np.linspace(lo, hi, steps)

    if engine == "kernel":
        evaluator = BatchEvaluator(template, input, target, params)

        def gamma(x):
            return complex(evaluator.evaluate([k], param, [x])[0])

        values = evaluator.evaluate(np.full(steps, k), param, grid)
    elif engine == "rules":
        def gamma(x):
            return _rules_value(template, input, target, k, {**params, param: x})

        values = np.array([gamma(x) for x in grid])
    else:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")

    mag2 = np.abs(values) ** 2
    finite = np.isfinite(mag2)
    if not finite.any():
        raise DivergentLoop(None, target, complex(math.inf))
    mag2 = np.where(finite, mag2, -np.inf)
    top = float(mag2.max())
    if top - float(mag2[finite].min()) <= 1e-12 * max(1.0, top):
        mid = 0.5 * (lo + hi)
        g = gamma(mid)
        return ScanResult(param, mid, g, abs(g) ** 2, True)

    def objective(x):
        v = abs(gamma(x)) ** 2
        return -v if math.isfinite(v) else math.inf

    i = int(np.argmax(mag2))
    if 0 < i < steps - 1:
        res = minimize_scalar(objective, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                              options={"xtol": 1e-12})
    else:
        res = minimize_scalar(objective, bounds=(grid[max(i - 1, 0)], grid[min(i + 1, steps - 1)]),
                              method="bounded", options={"xatol": 1e-12})
    x = float(res.x) if -res.fun >= top else float(grid[i])
    g = gamma(x)
    return ScanResult(param, x, g, abs(g) ** 2, False)


def parse_state(expression: str, modes: Sequence[str]) -> FockPolynomial:
    """Parse e.g. ``"a*b"`` or ``"(a**2 + I*b)/sqrt(2)"`` into a creation-operator polynomial.

    Symbols match mode labels case-insensitively.
    """
    modes = list(modes)
    lookup = {}
    for m in modes:
        for name in {m, m.lower(), m.upper()}:
            if name in lookup and lookup[name] != m:
                raise ModeMismatch(f"mode labels {lookup[name]!r} and {m!r} collide case-insensitively")
            lookup[name] = m
    syms = {m: sympy.Symbol(f"_mode_{i}") for i, m in enumerate(modes)}
    local = {name: syms[m] for name, m in lookup.items()}
    local.update({"I": sympy.I, "sqrt": sympy.sqrt, "pi": sympy.pi, "exp": sympy.exp})
    try:
        expr = sympy.parse_expr(expression.replace("^", "**"), local_dict=local, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of types on bad input
        raise SceneParseError(f"cannot parse state expression {expression!r}: {exc}") from exc
    stray = {str(s) for s in expr.free_symbols} - {str(s) for s in syms.values()}
    if stray:
        raise ModeMismatch(f"state uses unknown operators {sorted(stray)}; input modes are {modes}")
    try:
        poly = sympy.Poly(expr, *syms.values())
    except sympy.PolynomialError as exc:
        raise SceneParseError(f"state {expression!r} is not a polynomial in creation operators") from exc
    terms = {tuple(int(e) for e in monom): complex(sympy.N(coeff)) for monom, coeff in poly.terms()}
    return FockPolynomial(modes, terms)


def quantum(template: SceneTemplate, inputs: Sequence[str], outputs: Sequence[str], state: str, k: float,
            params: Mapping[str, float] | None = None) -> tuple[FockPolynomial, FockAmplitudes]:
    _check_labels(template, *inputs, *outputs)
    transform = mode_transform(template.graph(k, params), inputs, outputs)
    polynomial = apply_transform(parse_state(state, inputs), transform)
    return polynomial, fock_amplitudes(polynomial, complete=True)
