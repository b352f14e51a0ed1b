import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from wavegraph.elements import build_beam_splitter, build_fabry_perot, build_mach_zehnder
from wavegraph.errors import DegreeCapExceeded, ModeMismatch
from wavegraph.graph import EvalContext, OpticalGraph
from wavegraph.quantum import (
    FockPolynomial,
    ModeTransform,
    apply_transform,
    check_unitary,
    fock_amplitudes,
    mode_transform,
)
import formulas

S = 1 / math.sqrt(2)


@pytest.fixture
def bs():
    return mode_transform(build_beam_splitter(S, S), ["A", "B"], ["C", "D"])


def test_beam_splitter_matrix(bs):
    assert np.allclose(bs.matrix, [[1j * S, S], [S, 1j * S]], atol=1e-15)
    assert check_unitary(bs, 1e-12) and bs.unitary


def test_mach_zehnder_transform():
    r, t, theta = 0.6, 0.8, 2.1
    m = mode_transform(build_mach_zehnder(r, t, theta), ["A", "B"], ["E", "F"])
    f = formulas.mach_zehnder(r, t, theta)
    assert np.allclose(m.matrix, [[f["AE"], f["BE"]], [f["AF"], f["BF"]]], atol=1e-15)


def test_identity_scene():
    g = OpticalGraph()
    a, b, c, d = (g.add_state(x) for x in "ABCD")
    g.add_edge(a, c, 1)
    g.add_edge(b, d, 1)
    m = mode_transform(g, [a, b], [c, d])
    assert np.array_equal(m.matrix, np.eye(2))


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 13))
def test_lossless_mach_zehnder_unitary(theta):
    r = 0.35
    m = mode_transform(build_mach_zehnder(r, math.sqrt(1 - r * r), theta), ["A", "B"], ["E", "F"])
    assert check_unitary(m, 1e-12)


def test_transmission_only_fabry_perot_not_unitary():
    g = build_fabry_perot(0.9, math.sqrt(0.19), 1.0, EvalContext(1.0))
    m = mode_transform(g, ["A"], ["C"])
    assert not check_unitary(m)


def test_check_unitary_needs_square():
    with pytest.raises(ModeMismatch):
        check_unitary(ModeTransform(np.ones((2, 1)), ["A"], ["C", "D"]))


def test_hom(bs):
    out = apply_transform(FockPolynomial.creation("AB", "A") * FockPolynomial.creation("AB", "B"), bs)
    assert out.modes == ("C", "D")
    assert out.coefficient((2, 0)) == pytest.approx(0.5j, abs=1e-15)
    assert out.coefficient((0, 2)) == pytest.approx(0.5j, abs=1e-15)
    assert abs(out.coefficient((1, 1))) <= 1e-15


def test_identity_relabels():
    m = ModeTransform(np.eye(2), ["A", "B"], ["C", "D"])
    out = apply_transform(FockPolynomial.creation("AB", "A"), m)
    assert out.terms == {(1, 0): 1}


def test_two_photons_same_port(bs):
    out = apply_transform(FockPolynomial.creation("AB", "A", 2), bs)
    c, d = sympy.symbols("c d")
    expected = sympy.Poly(sympy.expand((sympy.I * c / sympy.sqrt(2) + d / sympy.sqrt(2)) ** 2), c, d)
    for monom, coeff in expected.terms():
        assert out.coefficient(monom) == pytest.approx(complex(coeff), abs=1e-15)
    assert len(out.terms) == len(expected.terms())


def test_fock_amplitudes_hom(bs):
    out = apply_transform(FockPolynomial.creation("AB", "A") * FockPolynomial.creation("AB", "B"), bs)
    amps = fock_amplitudes(out, complete=True)
    assert amps[(2, 0)] == pytest.approx(1j * S, abs=1e-15)
    assert amps[(0, 2)] == pytest.approx(1j * S, abs=1e-15)
    assert amps[(1, 1)] == 0
    assert amps.norm == pytest.approx(1, abs=1e-15)


def test_fock_amplitudes_trivial():
    assert fock_amplitudes(FockPolynomial.creation("A", "A")).amplitudes == {(1,): 1}
    assert fock_amplitudes(FockPolynomial.vacuum("AB")).amplitudes == {(0, 0): 1}


def test_fock_amplitudes_renormalise():
    state = FockPolynomial.creation("AB", "A") * 3
    amps = fock_amplitudes(state, normalize=True)
    assert amps.norm == 3 and amps[(1, 0)] == 1


def test_degree_cap():
    a = FockPolynomial.creation("A", "A")
    FockPolynomial.creation("A", "A", 16)
    with pytest.raises(DegreeCapExceeded):
        a**17


def test_mode_mismatch(bs):
    with pytest.raises(ModeMismatch):
        apply_transform(FockPolynomial.creation("AX", "A"), bs)


def _random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


exps = st.lists(st.integers(0, 2), min_size=3, max_size=3).filter(lambda e: sum(e) <= 4)
coeffs = st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False)
polys = st.dictionaries(st.tuples(*(st.integers(0, 2),) * 3).filter(lambda e: sum(e) <= 4), coeffs, max_size=5)


@settings(max_examples=60, deadline=None)
@given(polys, st.integers(0, 2**32 - 1))
def test_norm_preserved_under_unitary(terms, seed):
    state = FockPolynomial("abc", terms)
    m = ModeTransform(_random_unitary(np.random.default_rng(seed), 3), "abc", "xyz")
    before = fock_amplitudes(state).norm
    after = fock_amplitudes(apply_transform(state, m)).norm
    assert after == pytest.approx(before, rel=1e-10, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(polys, polys, coeffs, st.integers(0, 2**32 - 1))
def test_linearity(p1, p2, c, seed):
    m = ModeTransform(np.random.default_rng(seed).normal(size=(3, 3)), "abc", "xyz")
    s1, s2 = FockPolynomial("abc", p1), FockPolynomial("abc", p2)
    lhs = apply_transform(s1 * c + s2, m)
    rhs = apply_transform(s1, m) * c + apply_transform(s2, m)
    assert lhs.allclose(rhs, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(polys, st.integers(0, 2**32 - 1))
def test_composition(terms, seed):
    rng = np.random.default_rng(seed)
    m1 = ModeTransform(_random_unitary(rng, 3), "abc", "pqr")
    m2 = ModeTransform(_random_unitary(rng, 3), "pqr", "xyz")
    state = FockPolynomial("abc", terms)
    stepwise = apply_transform(apply_transform(state, m1), m2)
    assert stepwise.allclose(apply_transform(state, m2.compose(m1)), atol=1e-10)
