"""Optical elements, declarative scenes and graph builders for standard setups.

Phase convention: reflection contributes ``r``, transmission ``i t``,
free propagation over ``d`` contributes ``exp(i k d)`` and a phase shifter
``exp(i theta)``. Perfect end mirrors are folded into edge weights.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NonFiniteWeight, UndeclaredState
from .graph import EvalContext, OpticalGraph, WeightMonomial

LOSSLESS_TOL = 1e-12


def _unit(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class Element:
    """A mirror, beam splitter or membrane (r, t), a propagation (d) or a phase shift (theta)."""

    kind: str
    r: float = 0.0
    t: float = 0.0
    d: float = 0.0
    theta: float = 0.0

    KINDS = ("mirror", "beam_splitter", "membrane", "propagation", "phase_shift")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind in ("mirror", "beam_splitter", "membrane"):
            _unit("r", self.r)
            _unit("t", self.t)
        if self.kind == "propagation" and not self.d > 0:
            raise ValueError(f"propagation length must be > 0, got {self.d!r}")

    @classmethod
    def mirror(cls, r, t):
        return cls("mirror", r=r, t=t)

    @classmethod
    def beam_splitter(cls, r, t):
        return cls("beam_splitter", r=r, t=t)

    @classmethod
    def membrane(cls, r, t):
        return cls("membrane", r=r, t=t)

    @classmethod
    def propagation(cls, d):
        return cls("propagation", d=d)

    @classmethod
    def phase_shift(cls, theta):
        return cls("phase_shift", theta=theta)

    @property
    def lossless(self) -> bool:
        if self.kind in ("propagation", "phase_shift"):
            return True
        return abs(self.r**2 + self.t**2 - 1) <= LOSSLESS_TOL

    # amplitude factors under the fixed convention
    @property
    def reflect(self) -> WeightMonomial:
        return WeightMonomial(self.r, 0.0)

    @property
    def transmit(self) -> WeightMonomial:
        if self.kind == "propagation":
            return WeightMonomial(1.0, self.d)
        if self.kind == "phase_shift":
            return WeightMonomial(cmath.exp(1j * self.theta), 0.0)
        return WeightMonomial(1j * self.t, 0.0)


def propagate(d: float) -> WeightMonomial:
    return WeightMonomial(1.0, d)


@dataclass(frozen=True)
class SceneEdge:
    src: str
    dst: str
    coefficient: complex
    pathlength: float = 0.0

    @property
    def monomial(self) -> WeightMonomial:
        return WeightMonomial(self.coefficient, self.pathlength)


@dataclass
class SceneSpec:
    """Declarative graph: labels, symbolic edges c * exp(i k d), ports."""

    states: list[str]
    edges: list[SceneEdge] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    lossless: bool = True

    def add(self, src: str, dst: str, weight: WeightMonomial) -> None:
        self.edges.append(SceneEdge(src, dst, complex(weight.coefficient), float(weight.pathlength)))

    def validate(self) -> None:
        declared = set(self.states)
        if len(declared) != len(self.states):
            raise UndeclaredState("scene declares a state label twice")
        for e in self.edges:
            for lab in (e.src, e.dst):
                if lab not in declared:
                    raise UndeclaredState(f"edge {e.src!r} -> {e.dst!r} references undeclared state {lab!r}")
            c = complex(e.coefficient)
            if not (math.isfinite(c.real) and math.isfinite(c.imag) and math.isfinite(e.pathlength)):
                raise NonFiniteWeight(f"edge {e.src!r} -> {e.dst!r} has a non-finite coefficient or length")
        for lab in list(self.inputs) + list(self.outputs):
            if lab not in declared:
                raise UndeclaredState(f"port {lab!r} is not a declared state")


def assemble_scene(spec: SceneSpec, ctx: EvalContext) -> OpticalGraph:
    spec.validate()
    graph = OpticalGraph()
    ids = {lab: graph.add_state(lab) for lab in spec.states}
    for e in spec.edges:
        graph.add_edge(ids[e.src], ids[e.dst], e.monomial.evaluate(ctx))
    graph.set_ports(spec.inputs, spec.outputs)
    graph.meta["lossless"] = spec.lossless
    return graph


# -- named setups ---------------------------------------------------------

def michelson_scene(r, t, d1, d2) -> SceneSpec:
    bs = Element.beam_splitter(r, t)
    spec = SceneSpec(list("ABCD"), inputs=["A"], outputs=["D"], lossless=bs.lossless)
    spec.add("A", "C", bs.transmit * propagate(2 * d1))
    spec.add("A", "B", bs.reflect * propagate(2 * d2))
    spec.add("C", "D", bs.reflect)
    spec.add("B", "D", bs.transmit)
    return spec


def build_michelson(r, t, d1, d2, ctx: EvalContext) -> OpticalGraph:
    return assemble_scene(michelson_scene(r, t, d1, d2), ctx)


def fabry_perot_scene(r, t, d, reflection_port: bool = False) -> SceneSpec:
    mirror = Element.mirror(r, t)
    if mirror.r >= 1:
        raise ValueError("Fabry-Perot mirrors need r < 1 for the round-trip loop to converge")
    states = list("ABCD") if reflection_port else list("ABC")
    outputs = ["C", "D"] if reflection_port else ["C"]
    spec = SceneSpec(states, inputs=["A"], outputs=outputs, lossless=mirror.lossless)
    spec.add("A", "B", mirror.transmit)
    spec.add("B", "B", mirror.reflect * mirror.reflect * propagate(2 * d))
    spec.add("B", "C", mirror.transmit * propagate(d))
    if reflection_port:
        spec.add("A", "D", mirror.reflect)
        spec.add("B", "D", mirror.reflect * mirror.transmit * propagate(2 * d))
    return spec


def build_fabry_perot(r, t, d, ctx: EvalContext, reflection_port: bool = False) -> OpticalGraph:
    return assemble_scene(fabry_perot_scene(r, t, d, reflection_port), ctx)


def membrane_cavity_scene(
    mirror: Element, membranes: Sequence[Element], gaps: Sequence[float], labels: Sequence[str] | None = None
) -> SceneSpec:
    """Cavity of two identical mirrors with N membranes between them.

    State A_1 precedes the input mirror; A_{m+1} sits just after element m
    (input mirror = element 1, membranes 2..N+1, output mirror N+2). Gap m
    separates elements m and m+1. A backward edge A_k -> A_j (j <= k, the
    loop when j == k) reflects off element k, crosses elements k-1..j in
    transmission and reflects off element j-1.
    """
    n = len(membranes)
    if len(gaps) != n + 1:
        raise ValueError(f"{n} membranes need {n + 1} gaps, got {len(gaps)}")
    if mirror.r >= 1:
        raise ValueError("cavity mirrors need r < 1")
    labels = list(labels) if labels is not None else [f"A{i}" for i in range(1, n + 4)]
    if len(labels) != n + 3:
        raise ValueError(f"need {n + 3} labels, got {len(labels)}")
    elements = [mirror, *membranes, mirror]
    elem = lambda m: elements[m - 1]  # noqa: E731  (1-based as in the layout above)
    gap = lambda m: gaps[m - 1]  # noqa: E731
    lab = lambda k: labels[k - 1]  # noqa: E731
    spec = SceneSpec(labels, inputs=[lab(1)], outputs=[lab(n + 3)],
                     lossless=all(e.lossless for e in elements))
    spec.add(lab(1), lab(2), elem(1).transmit)
    for k in range(2, n + 3):
        spec.add(lab(k), lab(k + 1), propagate(gap(k - 1)) * elem(k).transmit)
    for k in range(2, n + 3):
        for j in range(k, 1, -1):
            w = propagate(2 * gap(k - 1)) * elem(k).reflect
            for m in range(k - 1, j - 1, -1):
                w = w * elem(m).transmit * propagate(gap(m - 1))
            spec.add(lab(k), lab(j), w * elem(j - 1).reflect)
    return spec


def build_membrane_cavity(mirror, membranes, gaps, ctx: EvalContext, labels=None) -> OpticalGraph:
    return assemble_scene(membrane_cavity_scene(mirror, membranes, gaps, labels), ctx)


def cavity_enhanced_michelson_scene(r1, t1, r2, t2, r3, t3, d0, d1, d2, d3, d4) -> SceneSpec:
    """Michelson with a Fabry-Perot cavity in each arm and a power-recycling mirror.

    PRM (r1, t1), beam splitter (r2, t2), identical cavity mirrors (r3, t3).
    """
    prm, bs, cav = Element.mirror(r1, t1), Element.beam_splitter(r2, t2), Element.mirror(r3, t3)
    R1, T1, R2, T2, R3, T3 = prm.reflect, prm.transmit, bs.reflect, bs.transmit, cav.reflect, cav.transmit
    p = propagate
    spec = SceneSpec(list("ABCDEFGHI"), inputs=["A"], outputs=["I"],
                     lossless=prm.lossless and bs.lossless and cav.lossless)
    spec.add("A", "B", T1 * p(d0))
    spec.add("B", "C", R2)
    spec.add("B", "F", T2)
    spec.add("C", "D", R3 * p(d1))
    spec.add("C", "E", T3 * R3 * p(d1 + d2))
    spec.add("E", "E", R3 * R3 * p(2 * d2))
    spec.add("E", "D", T3 * p(d2))
    spec.add("D", "I", T2 * p(d1))
    spec.add("D", "B", R1 * R2 * p(d1 + 2 * d0))
    spec.add("F", "G", R3 * p(d3))
    spec.add("F", "H", T3 * R3 * p(d3 + d4))
    spec.add("H", "H", R3 * R3 * p(2 * d4))
    spec.add("H", "G", T3 * p(d4))
    spec.add("G", "I", R2 * p(d3))
    spec.add("G", "B", T2 * R1 * p(d3 + 2 * d0))
    return spec


def build_cavity_enhanced_michelson(r1, t1, r2, t2, r3, t3, d0, d1, d2, d3, d4, ctx: EvalContext) -> OpticalGraph:
    return assemble_scene(cavity_enhanced_michelson_scene(r1, t1, r2, t2, r3, t3, d0, d1, d2, d3, d4), ctx)


def mach_zehnder_scene(r, t, theta) -> SceneSpec:
    bs, phase = Element.beam_splitter(r, t), Element.phase_shift(theta)
    spec = SceneSpec(list("ABCDEF"), inputs=["A", "B"], outputs=["E", "F"], lossless=bs.lossless)
    spec.add("A", "C", bs.transmit)
    spec.add("A", "D", bs.reflect)
    spec.add("B", "C", bs.reflect)
    spec.add("B", "D", bs.transmit)
    spec.add("C", "E", bs.reflect)
    spec.add("C", "F", bs.transmit)
    spec.add("D", "E", bs.transmit * phase.transmit)
    spec.add("D", "F", bs.reflect * phase.transmit)
    return spec


def build_mach_zehnder(r, t, theta) -> OpticalGraph:
    # no free propagation appears, so any wavenumber gives the same weights
    return assemble_scene(mach_zehnder_scene(r, t, theta), EvalContext(1.0))


def beam_splitter_scene(r, t) -> SceneSpec:
    bs = Element.beam_splitter(r, t)
    spec = SceneSpec(list("ABCD"), inputs=["A", "B"], outputs=["C", "D"], lossless=bs.lossless)
    spec.add("A", "C", bs.transmit)
    spec.add("A", "D", bs.reflect)
    spec.add("B", "C", bs.reflect)
    spec.add("B", "D", bs.transmit)
    return spec


def build_beam_splitter(r, t) -> OpticalGraph:
    return assemble_scene(beam_splitter_scene(r, t), EvalContext(1.0))
