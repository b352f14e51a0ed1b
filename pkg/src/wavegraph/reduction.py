"""Local graph-simplification rules and the response-factor reduction.

Every rewrite preserves the walk-sum ``[(I - W)^-1]_{s,t}`` between all
surviving states. Rules mutate the graph in place and, when given a
:class:`ReductionTrace`, append a replayable record of what they did.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DivergentLoop, PortError, PreconditionViolated, WaveGraphError
from .graph import EdgeId, OpticalGraph, StateId

log = logging.getLogger(__name__)

#: loops with modulus at or above this are rejected as divergent
DIVERGENCE_THRESHOLD = 1.0 - 1e-12


@dataclass(frozen=True)
class TraceStep:
    rule: str
    args: tuple
    edges: tuple[EdgeId, ...]
    weight: complex | None = None
    applications: int = 1


@dataclass
class ReductionTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def record(self, rule, args, edges=(), weight=None, applications=1):
        step = TraceStep(rule, tuple(args), tuple(edges), weight, applications)
        self.steps.append(step)
        log.debug("%s%r -> edges %r", rule, step.args, step.edges)

    @property
    def rule_applications(self) -> int:
        return sum(s.applications for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class ResponseFactor:
    value: complex
    input: StateId
    output: StateId
    trace: ReductionTrace = field(default_factory=ReductionTrace, compare=False, repr=False)


def _check_loop(graph: OpticalGraph, v: StateId, weight: complex) -> None:
    if abs(weight) >= DIVERGENCE_THRESHOLD:
        raise DivergentLoop(v, graph.label(v), weight)


def _not_port(graph: OpticalGraph, v: StateId, rule: str) -> None:
    if graph.is_port(v):
        raise PortError(f"{rule}: state {graph.label(v)!r} is a designated port")


# -- atomic rules ---------------------------------------------------------

def contract_series(graph: OpticalGraph, middle: StateId, trace: ReductionTrace | None = None) -> EdgeId:
    """Replace P1 -> middle -> P3 by a single edge of the product weight."""
    _not_port(graph, middle, "contract_series")
    ins, outs = graph.in_edges(middle), graph.out_edges(middle)
    if graph.loops(middle) or len(ins) != 1 or len(outs) != 1:
        raise PreconditionViolated(
            f"contract_series needs exactly one incoming, one outgoing edge and no loop "
            f"at {graph.label(middle)!r} (in={len(ins)}, out={len(outs)}, "
            f"loops={len(graph.loops(middle))})"
        )
    a, b = graph.edge(ins[0]), graph.edge(outs[0])
    graph.remove_state(middle)
    eid = graph.add_edge(a.src, b.dst, a.weight * b.weight)
    if trace is not None:
        trace.record("contract_series", (middle,), (eid,), graph.edge(eid).weight)
    return eid


def merge_parallel(graph: OpticalGraph, u: StateId, v: StateId, trace: ReductionTrace | None = None) -> EdgeId:
    """Replace all edges u -> v (u != v) by one edge carrying their sum."""
    if u == v:
        raise PreconditionViolated("merge_parallel acts on distinct states; use merge_loops")
    eids = graph.edges_between(u, v)
    if len(eids) < 2:
        raise PreconditionViolated(
            f"merge_parallel needs >= 2 edges {graph.label(u)!r} -> {graph.label(v)!r}, found {len(eids)}"
        )
    total = sum(graph.remove_edge(e).weight for e in eids)
    eid = graph.add_edge(u, v, total)
    if trace is not None:
        trace.record("merge_parallel", (u, v), (eid,), total)
    return eid


def merge_loops(graph: OpticalGraph, v: StateId, trace: ReductionTrace | None = None) -> EdgeId:
    """Replace all self-loops at ``v`` by one loop carrying their sum."""
    eids = graph.loops(v)
    if len(eids) < 2:
        raise PreconditionViolated(
            f"merge_loops needs >= 2 loops at {graph.label(v)!r}, found {len(eids)}"
        )
    total = sum(graph.remove_edge(e).weight for e in eids)
    eid = graph.add_edge(v, v, total)
    if trace is not None:
        trace.record("merge_loops", (v,), (eid,), total)
    return eid


def contract_loop(graph: OpticalGraph, c: StateId, trace: ReductionTrace | None = None) -> EdgeId:
    """Remove B -> c -> D where c carries one loop; new weight Φ_Bc Φ_cD / (1 - Φ_cc)."""
    _not_port(graph, c, "contract_loop")
    loops, ins, outs = graph.loops(c), graph.in_edges(c), graph.out_edges(c)
    if len(loops) != 1 or len(ins) != 1 or len(outs) != 1:
        raise PreconditionViolated(
            f"contract_loop needs one loop, one incoming and one outgoing edge at "
            f"{graph.label(c)!r} (loops={len(loops)}, in={len(ins)}, out={len(outs)})"
        )
    loop = graph.edge(loops[0]).weight
    _check_loop(graph, c, loop)
    a, b = graph.edge(ins[0]), graph.edge(outs[0])
    graph.remove_state(c)
    eid = graph.add_edge(a.src, b.dst, a.weight * b.weight / (1 - loop))
    if trace is not None:
        trace.record("contract_loop", (c,), (eid,), graph.edge(eid).weight)
    return eid


def _fresh_label(graph: OpticalGraph, base: str) -> str:
    taken = set(graph.labels)
    label, n = base, 1
    while label in taken:
        label = f"{base}~{n}"
        n += 1
    return label


def detach_vertex(graph: OpticalGraph, d: StateId, trace: ReductionTrace | None = None) -> list[StateId]:
    """Split ``d`` into one copy per (incoming, outgoing) edge pair.

    Each copy D[m,n] receives the m-th incoming edge, the n-th outgoing edge
    and a copy of the loop at ``d`` (if any). Copies are returned m-major.
    """
    _not_port(graph, d, "detach_vertex")
    loops, ins, outs = graph.loops(d), graph.in_edges(d), graph.out_edges(d)
    if not ins or not outs:
        raise PreconditionViolated(
            f"detach_vertex needs incoming and outgoing edges at {graph.label(d)!r} "
            f"(in={len(ins)}, out={len(outs)})"
        )
    if len(loops) > 1:
        raise PreconditionViolated(
            f"detach_vertex allows at most one loop at {graph.label(d)!r}; call merge_loops first"
        )
    loop = graph.edge(loops[0]).weight if loops else None
    in_edges = [graph.edge(e) for e in ins]
    out_edges = [graph.edge(e) for e in outs]
    base = graph.label(d)
    graph.remove_state(d)
    copies, new_edges = [], []
    for m, a in enumerate(in_edges, 1):
        for n, b in enumerate(out_edges, 1):
            sid = graph.add_state(_fresh_label(graph, f"{base}[{m},{n}]"))
            new_edges.append(graph.add_edge(a.src, sid, a.weight))
            new_edges.append(graph.add_edge(sid, b.dst, b.weight))
            if loop is not None:
                new_edges.append(graph.add_edge(sid, sid, loop))
            copies.append(sid)
    if trace is not None:
        trace.record("detach_vertex", (d,), tuple(new_edges), None, len(copies))
    return copies


# -- composite step -------------------------------------------------------

def eliminate_state(graph: OpticalGraph, v: StateId, trace: ReductionTrace | None = None) -> None:
    """Remove ``v``, rerouting every (in, out) pair through the loop factor 1/(1 - ℓ).

    Algebraically this is detach -> contract_loop on each copy -> merge, done
    in one pass. Parallel edges created at each affected pair are merged.
    """
    _not_port(graph, v, "eliminate_state")
    loop = sum(graph.edge(e).weight for e in graph.loops(v))
    _check_loop(graph, v, loop)
    factor = 1 / (1 - loop)
    ins = [graph.edge(e) for e in graph.in_edges(v)]
    outs = [graph.edge(e) for e in graph.out_edges(v)]
    graph.remove_state(v)
    touched = {}
    for a in ins:
        for b in outs:
            graph.add_edge(a.src, b.dst, a.weight * b.weight * factor)
            touched[(a.src, b.dst)] = None
    merges = 0
    for u, x in touched:
        if u == x:
            if len(graph.loops(u)) > 1:
                merge_loops(graph, u)
                merges += 1
        elif len(graph.edges_between(u, x)) > 1:
            merge_parallel(graph, u, x)
            merges += 1
    if trace is not None:
        trace.record("eliminate_state", (v,), (), loop, max(1, len(ins) * len(outs) + merges))


def merge_all(graph: OpticalGraph, trace: ReductionTrace | None = None) -> int:
    """Merge every group of parallel edges and loops; returns the number of merges."""
    groups = {}
    for eid, edge in graph.edge_items():
        groups.setdefault((edge.src, edge.dst), []).append(eid)
    count = 0
    for (u, x), eids in groups.items():
        if len(eids) > 1:
            (merge_loops(graph, u, trace) if u == x else merge_parallel(graph, u, x, trace))
            count += 1
    return count


def prune(graph: OpticalGraph, v: StateId, trace: ReductionTrace | None = None) -> None:
    """Drop a state that lies on no walk of interest, with all its edges."""
    graph.remove_state(v)
    if trace is not None:
        trace.record("prune", (v,), ())


def set_ports(graph: OpticalGraph, inputs, outputs, trace: ReductionTrace | None = None) -> None:
    graph.set_ports(inputs, outputs)
    if trace is not None:
        trace.record("set_ports", (tuple(graph.inputs), tuple(graph.outputs)), (), None, 0)


_REPLAY = {
    "contract_series": contract_series,
    "merge_parallel": merge_parallel,
    "merge_loops": merge_loops,
    "contract_loop": contract_loop,
    "detach_vertex": detach_vertex,
    "eliminate_state": eliminate_state,
    "prune": prune,
    "set_ports": set_ports,
    "close": lambda graph, s, t: None,
}


def replay(trace: ReductionTrace, graph: OpticalGraph) -> OpticalGraph:
    """Re-apply every recorded step to ``graph`` (mutated and returned)."""
    for step in trace:
        _REPLAY[step.rule](graph, *step.args)
    return graph


# -- ordering and end-to-end reduction --------------------------------------

def relevant_states(graph: OpticalGraph, s: StateId, t: StateId) -> set[StateId]:
    """States lying on at least one walk from ``s`` to ``t``."""

    def reach(start, step):
        seen, queue = {start}, deque([start])
        while queue:
            for nxt in step(queue.popleft()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    forward = reach(s, graph.successors)
    if t not in forward:
        return set()
    return forward & reach(t, graph.predecessors)


def elimination_order(graph: OpticalGraph, candidates: Iterable[StateId]) -> list[StateId]:
    """Greedy minimum (in-degree x out-degree) order, ties to the smallest id.

    Degrees count distinct neighbours, so the order is a function of the
    sparsity pattern only; it is simulated symbolically including fill-in.
    """
    succ = {v: set(graph.successors(v)) for v in graph.states}
    pred = {v: set(graph.predecessors(v)) for v in graph.states}
    remaining = set(candidates)
    order = []
    while remaining:
        v = min(remaining, key=lambda x: (len(pred[x]) * len(succ[x]), x))
        remaining.discard(v)
        order.append(v)
        for u in pred[v]:
            succ[u].discard(v)
        for x in succ[v]:
            pred[x].discard(v)
        for u in pred[v]:
            for x in succ[v]:
                if u != x:
                    succ[u].add(x)
                    pred[x].add(u)
        del succ[v], pred[v]
    return order


def reduce_to_pair(
    graph: OpticalGraph,
    s: StateId,
    t: StateId,
    trace: ReductionTrace | None = None,
    order: Sequence[StateId] | None = None,
) -> complex:
    """Reduce ``graph`` in place to the two states ``s`` and ``t`` and return Γ_{s,t}."""
    if s == t:
        raise WaveGraphError("response factor needs distinct input and output states")
    set_ports(graph, [s], [t], trace)
    keep = relevant_states(graph, s, t)
    for v in graph.states:
        if v not in keep and v not in (s, t):
            prune(graph, v, trace)
    if not keep:
        return 0j
    middle = [v for v in graph.states if v not in (s, t)]
    if order is None:
        order = elimination_order(graph, middle)
    else:
        order = [v for v in order if v in graph]
        if sorted(order) != sorted(middle):
            raise WaveGraphError("explicit elimination order must cover every intermediate state")
    for v in order:
        eliminate_state(graph, v, trace)
    merge_all(graph, trace)

    def total(u, x):
        return sum(graph.edge(e).weight for e in graph.edges_between(u, x))

    through, back = total(s, t), total(t, s)
    loop_in, loop_out = total(s, s), total(t, t)
    _check_loop(graph, s, loop_in)
    # walks that return to s from t fold into the loop at t
    loop_out += back * through / (1 - loop_in)
    _check_loop(graph, t, loop_out)
    value = through / (1 - loop_in) / (1 - loop_out)
    if trace is not None:
        trace.record("close", (s, t), (), value, 0)
    return value


def response_factor(
    graph: OpticalGraph,
    input: StateId | str,
    output: StateId | str,
    order: Sequence[StateId] | None = None,
) -> ResponseFactor:
    """Γ such that E_output = Γ E_input, by repeated local simplification.

    ``output`` need not be a sink: any residual loop left at it is divided out.
    The caller's graph is not modified.
    """
    s, t = graph.resolve(input), graph.resolve(output)
    trace = ReductionTrace()
    value = reduce_to_pair(graph.copy(), s, t, trace, order)
    return ResponseFactor(value, s, t, trace)


def response_matrix(graph: OpticalGraph, inputs: Sequence, outputs: Sequence):
    """Matrix with entry (m, n) the response factor inputs[n] -> outputs[m]."""
    out = np.zeros((len(outputs), len(inputs)), dtype=complex)
    for n, s in enumerate(inputs):
        for m, t in enumerate(outputs):
            out[m, n] = response_factor(graph, s, t).value
    return out
