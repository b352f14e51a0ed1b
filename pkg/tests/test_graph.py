import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavegraph.errors import DisconnectedWalk, DuplicateLabel, NonFiniteWeight, PortError, UnknownState
from wavegraph.graph import EvalContext, OpticalGraph, WeightMonomial, add_edge, add_state, walk_weight, weight_matrix
from wavegraph.elements import build_fabry_perot


def test_add_state_ids():
    g = OpticalGraph()
    assert add_state(g, "A") == 0
    assert len(g) == 1
    assert add_state(g, "B") == 1
    assert len(g) == 2


def test_duplicate_label_names_it():
    g = OpticalGraph()
    g.add_state("A")
    with pytest.raises(DuplicateLabel, match="'A'"):
        g.add_state("A")


def test_state_ids_never_reused():
    g = OpticalGraph()
    a = g.add_state("A")
    g.remove_state(a)
    assert g.add_state("A") == 1


def test_add_edge_and_multiedges():
    g = OpticalGraph()
    a, b = g.add_state("A"), g.add_state("B")
    add_edge(g, a, b, 0.5j)
    assert g.num_edges == 1
    g.add_edge(a, b, 0.5j)
    assert g.num_edges == 2
    assert len(g.edges_between(a, b)) == 2


def test_self_loop_allowed():
    r, d, k = 0.9, 1.0, 2.0
    g = OpticalGraph()
    b = g.add_state("B")
    g.add_edge(b, b, r**2 * cmath.exp(2j * k * d))
    assert g.loops(b) and not g.in_edges(b) and not g.out_edges(b)


@pytest.mark.parametrize("bad", [complex(math.nan, 0), complex(0, math.inf), math.inf])
def test_non_finite_weight_rejected(bad):
    g = OpticalGraph()
    a = g.add_state("A")
    with pytest.raises(NonFiniteWeight):
        g.add_edge(a, a, bad)


def test_unknown_endpoint():
    g = OpticalGraph()
    a = g.add_state("A")
    with pytest.raises(UnknownState):
        g.add_edge(a, 7, 1.0)


def test_michelson_walk_weight():
    r, t, d2, k = 0.6, 0.8, 0.37, 3.1
    g = OpticalGraph()
    a, b, d = (g.add_state(x) for x in "ABD")
    e1 = g.add_edge(a, b, r * cmath.exp(2j * k * d2))
    e2 = g.add_edge(b, d, 1j * t)
    assert walk_weight(g, [e1, e2]) == pytest.approx(1j * r * t * cmath.exp(2j * k * d2), abs=1e-15)


def test_walk_weight_trivial_cases():
    g = OpticalGraph()
    a, b = g.add_state("A"), g.add_state("B")
    e = g.add_edge(a, b, 0.3 - 0.2j)
    assert g.walk_weight([]) == 1 + 0j
    assert g.walk_weight([e]) == 0.3 - 0.2j


def test_disconnected_walk():
    g = OpticalGraph()
    a, b, c = (g.add_state(x) for x in "ABC")
    e1 = g.add_edge(a, b, 1)
    e2 = g.add_edge(a, c, 1)
    with pytest.raises(DisconnectedWalk):
        g.walk_weight([e1, e2])


def test_weight_matrix_fabry_perot():
    r, t, d, k = 0.9, math.sqrt(0.19), 1.0, 1.7
    w = weight_matrix(build_fabry_perot(r, t, d, EvalContext(k)))
    assert w.shape == (3, 3)
    assert w[1, 1] == pytest.approx(r**2 * cmath.exp(2j * k * d), abs=1e-15)


def test_weight_matrix_edgeless_and_parallel():
    g = OpticalGraph()
    a, b = g.add_state("A"), g.add_state("B")
    assert np.array_equal(g.weight_matrix(), np.zeros((2, 2)))
    g.add_edge(a, b, 0.25)
    g.add_edge(a, b, 0.5j)
    assert g.weight_matrix()[0, 1] == 0.25 + 0.5j
    assert g.num_edges == 2  # matrix export never merges


def test_weight_matrix_deterministic():
    def build():
        g = OpticalGraph()
        ids = [g.add_state(x) for x in "ABCD"]
        for i, u in enumerate(ids):
            for v in ids[i:]:
                g.add_edge(u, v, complex(i + 1, v) / 10)
        return g

    assert np.array_equal(build().weight_matrix(), build().weight_matrix())


def test_ports_disjoint():
    g = OpticalGraph()
    a, b = g.add_state("A"), g.add_state("B")
    with pytest.raises(PortError):
        g.set_ports([a], [a])
    g.set_ports(["A"], ["B"])
    assert g.inputs == [a] and g.outputs == [b]


def test_eval_context_positive():
    with pytest.raises(ValueError):
        EvalContext(0.0)
    with pytest.raises(ValueError):
        EvalContext(-1.0)


def test_monomial_product_and_evaluation():
    m = WeightMonomial(0.5j, 1.25) * WeightMonomial(2.0, 0.75)
    assert m == WeightMonomial(1j, 2.0)
    assert m.evaluate(EvalContext(math.pi / 2)) == pytest.approx(1j * cmath.exp(1j * math.pi), abs=1e-15)


weights = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@given(st.lists(weights, min_size=0, max_size=6), st.lists(weights, min_size=0, max_size=6))
def test_walk_weight_concatenation(first, second):
    g = OpticalGraph()
    v = g.add_state("v")
    walk1 = [g.add_edge(v, v, w) for w in first]
    walk2 = [g.add_edge(v, v, w) for w in second]
    whole = g.walk_weight(walk1 + walk2)
    assert whole == pytest.approx(g.walk_weight(walk1) * g.walk_weight(walk2), rel=1e-12, abs=1e-12)
