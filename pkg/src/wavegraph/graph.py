"""Optical states, amplitude-weighted directed multigraphs and walk weights.

Edge weights are plain Python ``complex`` numbers evaluated at a fixed
wavenumber; symbolic ``c * exp(i k d)`` weights live in :class:`WeightMonomial`
and are evaluated before they enter a graph.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DisconnectedWalk,
    DuplicateLabel,
    NonFiniteWeight,
    PortError,
    UnknownState,
)

StateId = int
EdgeId = int


def _check_finite(weight: complex) -> complex:
    weight = complex(weight)
    if not (math.isfinite(weight.real) and math.isfinite(weight.imag)):
        raise NonFiniteWeight(f"edge weight {weight!r} is not finite")
    return weight


@dataclass(frozen=True)
class EvalContext:
    """Wavenumber at which symbolic weights are evaluated (radians per length)."""

    k: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"wavenumber must be finite and > 0, got {self.k!r}")


@dataclass(frozen=True)
class WeightMonomial:
    """Edge weight of the form ``coefficient * exp(i k pathlength)``."""

    coefficient: complex = 1.0
    pathlength: float = 0.0

    def __mul__(self, other: WeightMonomial) -> WeightMonomial:
        if not isinstance(other, WeightMonomial):
            return NotImplemented
        return WeightMonomial(
            self.coefficient * other.coefficient, self.pathlength + other.pathlength
        )

    def evaluate(self, ctx: EvalContext) -> complex:
        return self.coefficient * cmath.exp(1j * ctx.k * self.pathlength)


@dataclass(frozen=True)
class Edge:
    src: StateId
    dst: StateId
    weight: complex

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


class OpticalGraph:
    """Directed multigraph of optical states with complex edge weights.

    Parallel edges and self-loops are kept as separate edges; merging them is
    an explicit rewrite (see :mod:`wavegraph.reduction`). State and edge ids
    are never reused within one graph instance.
    """

    def __init__(self):
        self._labels: dict[StateId, str] = {}
        self._ids: dict[str, StateId] = {}
        self._edges: dict[EdgeId, Edge] = {}
        self._out: dict[StateId, dict[EdgeId, None]] = {}
        self._in: dict[StateId, dict[EdgeId, None]] = {}
        self._next_state = 0
        self._next_edge = 0
        self._inputs: list[StateId] = []
        self._outputs: list[StateId] = []
        self.meta: dict = {}

    # -- states -----------------------------------------------------------
    def add_state(self, label: str) -> StateId:
        label = str(label)
        if label in self._ids:
            raise DuplicateLabel(label)
        sid = self._next_state
        self._next_state += 1
        self._labels[sid] = label
        self._ids[label] = sid
        self._out[sid] = {}
        self._in[sid] = {}
        return sid

    def remove_state(self, sid: StateId) -> None:
        self._require(sid)
        if sid in self._inputs or sid in self._outputs:
            raise PortError(f"cannot remove designated port {self._labels[sid]!r}")
        for eid in list(self._out[sid]) + list(self._in[sid]):
            if eid in self._edges:
                self.remove_edge(eid)
        del self._ids[self._labels.pop(sid)]
        del self._out[sid], self._in[sid]

    def state(self, label: str) -> StateId:
        try:
            return self._ids[label]
        except KeyError:
            raise UnknownState(f"no state labelled {label!r}") from None

    def label(self, sid: StateId) -> str:
        self._require(sid)
        return self._labels[sid]

    def resolve(self, ref: StateId | str) -> StateId:
        """Accept either a state id or a label and return the id."""
        if isinstance(ref, str):
            return self.state(ref)
        self._require(ref)
        return ref

    @property
    def states(self) -> list[StateId]:
        return list(self._labels)

    @property
    def labels(self) -> list[str]:
        return list(self._labels.values())

    def __contains__(self, sid) -> bool:
        return sid in self._labels

    def __len__(self) -> int:
        return len(self._labels)

    def _require(self, sid) -> None:
        if sid not in self._labels:
            raise UnknownState(f"unknown state id {sid!r}")

    # -- ports ------------------------------------------------------------
    @property
    def inputs(self) -> list[StateId]:
        return list(self._inputs)

    @property
    def outputs(self) -> list[StateId]:
        return list(self._outputs)

    def set_ports(self, inputs: Iterable, outputs: Iterable) -> None:
        ins = [self.resolve(s) for s in inputs]
        outs = [self.resolve(s) for s in outputs]
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise PortError("port lists must not repeat a state")
        if set(ins) & set(outs):
            raise PortError("inputs and outputs must be disjoint")
        self._inputs, self._outputs = ins, outs

    def is_port(self, sid: StateId) -> bool:
        return sid in self._inputs or sid in self._outputs

    # -- edges ------------------------------------------------------------
    def add_edge(self, src: StateId, dst: StateId, weight: complex) -> EdgeId:
        self._require(src)
        self._require(dst)
        weight = _check_finite(weight)
        eid = self._next_edge
        self._next_edge += 1
        self._edges[eid] = Edge(src, dst, weight)
        self._out[src][eid] = None
        self._in[dst][eid] = None
        return eid

    def remove_edge(self, eid: EdgeId) -> Edge:
        edge = self.edge(eid)
        del self._edges[eid]
        self._out[edge.src].pop(eid, None)
        self._in[edge.dst].pop(eid, None)
        return edge

    def edge(self, eid: EdgeId) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise UnknownState(f"unknown edge id {eid!r}") from None

    @property
    def edges(self) -> dict[EdgeId, Edge]:
        return dict(self._edges)

    def edge_items(self) -> Iterator[tuple[EdgeId, Edge]]:
        return iter(self._edges.items())

    def out_edges(self, sid: StateId, loops: bool = False) -> list[EdgeId]:
        self._require(sid)
        return [e for e in self._out[sid] if loops or self._edges[e].dst != sid]

    def in_edges(self, sid: StateId, loops: bool = False) -> list[EdgeId]:
        self._require(sid)
        return [e for e in self._in[sid] if loops or self._edges[e].src != sid]

    def loops(self, sid: StateId) -> list[EdgeId]:
        self._require(sid)
        return [e for e in self._out[sid] if self._edges[e].dst == sid]

    def edges_between(self, u: StateId, v: StateId) -> list[EdgeId]:
        self._require(u)
        self._require(v)
        return [e for e in self._out[u] if self._edges[e].dst == v]

    def successors(self, sid: StateId) -> set[StateId]:
        return {self._edges[e].dst for e in self._out[sid]} - {sid}

    def predecessors(self, sid: StateId) -> set[StateId]:
        return {self._edges[e].src for e in self._in[sid]} - {sid}

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    # -- semantics --------------------------------------------------------
    def walk_weight(self, walk: Sequence[EdgeId]) -> complex:
        """Product of the edge weights along a head-to-tail walk."""
        weight = 1 + 0j
        prev = None
        for eid in walk:
            edge = self.edge(eid)
            if prev is not None and prev.dst != edge.src:
                raise DisconnectedWalk(
                    f"edge {eid} starts at {self._labels[edge.src]!r}, "
                    f"previous edge ends at {self._labels[prev.dst]!r}"
                )
            weight *= edge.weight
            prev = edge
        return weight

    def index(self) -> dict[StateId, int]:
        """Row/column position of each state in :meth:`weight_matrix`."""
        return {sid: i for i, sid in enumerate(self._labels)}

    def weight_matrix(self) -> np.ndarray:
        """Dense matrix W with W[i, j] the summed weight of all edges i -> j."""
        pos = self.index()
        w = np.zeros((len(pos), len(pos)), dtype=complex)
        for edge in self._edges.values():
            w[pos[edge.src], pos[edge.dst]] += edge.weight
        return w

    # -- misc -------------------------------------------------------------
    def copy(self) -> OpticalGraph:
        new = OpticalGraph.__new__(OpticalGraph)
        new._labels = dict(self._labels)
        new._ids = dict(self._ids)
        new._edges = dict(self._edges)
        new._out = {s: dict(d) for s, d in self._out.items()}
        new._in = {s: dict(d) for s, d in self._in.items()}
        new._next_state = self._next_state
        new._next_edge = self._next_edge
        new._inputs = list(self._inputs)
        new._outputs = list(self._outputs)
        new.meta = dict(self.meta)
        return new

    def same_as(self, other: OpticalGraph) -> bool:
        """Edge-for-edge, label-for-label identity (ids and weights bit-equal)."""
        return (
            self._labels == other._labels
            and self._edges == other._edges
            and self._inputs == other._inputs
            and self._outputs == other._outputs
        )

    def __repr__(self):
        return f"OpticalGraph(states={len(self)}, edges={self.num_edges})"


def add_state(graph: OpticalGraph, label: str) -> StateId:
    return graph.add_state(label)


def add_edge(graph: OpticalGraph, src: StateId, dst: StateId, weight: complex) -> EdgeId:
    return graph.add_edge(src, dst, weight)


def walk_weight(graph: OpticalGraph, walk: Sequence[EdgeId]) -> complex:
    return graph.walk_weight(walk)


def weight_matrix(graph: OpticalGraph) -> np.ndarray:
    return graph.weight_matrix()
