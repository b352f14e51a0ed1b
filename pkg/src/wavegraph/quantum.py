"""Passive mode transforms acting on creation-operator polynomials.

A state is a polynomial in commuting creation operators applied to vacuum.
A mode transform substitutes each input creation operator by a linear
combination of output creation operators, with response factors as
coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

import numpy as np

from .errors import DegreeCapExceeded, ModeMismatch
from .graph import OpticalGraph
from .reduction import response_factor

MAX_DEGREE = 16
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class ModeTransform:
    """matrix[m, n] is the response factor from input n to output m."""

    matrix: np.ndarray
    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "input_labels", tuple(self.input_labels))
        object.__setattr__(self, "output_labels", tuple(self.output_labels))
        if m.shape != (len(self.output_labels), len(self.input_labels)):
            raise ModeMismatch(
                f"matrix shape {m.shape} does not match {len(self.output_labels)} outputs "
                f"x {len(self.input_labels)} inputs"
            )

    @property
    def unitary(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1] and check_unitary(self, UNITARY_TOL)

    def compose(self, first: ModeTransform) -> ModeTransform:
        """Transform equal to applying ``first`` and then ``self``."""
        if tuple(first.output_labels) != tuple(self.input_labels):
            raise ModeMismatch("output modes of the first transform must feed this one's inputs")
        return ModeTransform(self.matrix @ first.matrix, first.input_labels, self.output_labels)


def mode_transform(graph: OpticalGraph, inputs: Sequence, outputs: Sequence) -> ModeTransform:
    ins = [graph.resolve(s) for s in inputs]
    outs = [graph.resolve(s) for s in outputs]
    if not ins or not outs:
        raise ModeMismatch("mode transform needs at least one input and one output")
    if set(ins) & set(outs):
        raise ModeMismatch("input and output ports must be disjoint")
    m = np.zeros((len(outs), len(ins)), dtype=complex)
    for n, s in enumerate(ins):
        for j, t in enumerate(outs):
            m[j, n] = response_factor(graph, s, t).value
    return ModeTransform(m, [graph.label(s) for s in ins], [graph.label(t) for t in outs])


def check_unitary(m: ModeTransform, tol: float = UNITARY_TOL) -> bool:
    mat = m.matrix
    if mat.shape[0] != mat.shape[1]:
        raise ModeMismatch(f"unitarity needs a square transform, got shape {mat.shape}")
    gram = mat.conj().T @ mat
    return bool(np.max(np.abs(gram - np.eye(mat.shape[0]))) <= tol)


class FockPolynomial:
    """Polynomial in commuting creation operators of named modes.

    ``terms`` maps exponent vectors (one entry per mode, in ``modes`` order) to
    complex coefficients. Exact zeros are dropped.
    """

    def __init__(self, modes: Sequence[str], terms: Mapping[tuple[int, ...], complex] | None = None):
        self.modes = tuple(modes)
        if len(set(self.modes)) != len(self.modes):
            raise ModeMismatch(f"repeated mode label in {self.modes}")
        self.terms: dict[tuple[int, ...], complex] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.modes) or min(exps, default=0) < 0:
                raise ModeMismatch(f"exponent vector {exps} does not fit modes {self.modes}")
            coeff = complex(coeff)
            if coeff != 0:
                self.terms[exps] = self.terms.get(exps, 0) + coeff
        self.terms = {e: c for e, c in self.terms.items() if c != 0}
        if self.degree > MAX_DEGREE:
            raise DegreeCapExceeded(f"total photon number {self.degree} exceeds the cap of {MAX_DEGREE}")

    @classmethod
    def vacuum(cls, modes):
        return cls(modes, {(0,) * len(modes): 1})

    @classmethod
    def creation(cls, modes, mode: str, power: int = 1):
        modes = tuple(modes)
        if mode not in modes:
            raise ModeMismatch(f"unknown mode {mode!r}; modes are {modes}")
        exps = [0] * len(modes)
        exps[modes.index(mode)] = power
        return cls(modes, {tuple(exps): 1})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _same_modes(self, other):
        if self.modes != other.modes:
            raise ModeMismatch(f"mode sets differ: {self.modes} vs {other.modes}")

    def __add__(self, other):
        if not isinstance(other, FockPolynomial):
            return NotImplemented
        self._same_modes(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return FockPolynomial(self.modes, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, FockPolynomial):
            self._same_modes(other)
            if self.degree + other.degree > MAX_DEGREE:
                raise DegreeCapExceeded(
                    f"product degree {self.degree + other.degree} exceeds the cap of {MAX_DEGREE}"
                )
            terms: dict = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, 0) + c1 * c2
            return FockPolynomial(self.modes, terms)
        if isinstance(other, (int, float, complex, np.number)):
            return FockPolynomial(self.modes, {e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = FockPolynomial.vacuum(self.modes)
        for _ in range(n):
            out = out * self
        return out

    def coefficient(self, exps) -> complex:
        return self.terms.get(tuple(exps), 0j)

    def allclose(self, other, atol=1e-12) -> bool:
        self._same_modes(other)
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(m if p == 1 else f"{m}^{p}" for m, p in zip(self.modes, e) if p)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def apply_transform(state: FockPolynomial, m: ModeTransform) -> FockPolynomial:
    """Substitute each input creation operator by its output combination and expand."""
    if set(state.modes) != set(m.input_labels):
        raise ModeMismatch(f"state modes {state.modes} do not match transform inputs {m.input_labels}")
    if state.degree > MAX_DEGREE:
        raise DegreeCapExceeded(f"total photon number {state.degree} exceeds the cap of {MAX_DEGREE}")
    outs = m.output_labels
    images = {}
    for n, label in enumerate(m.input_labels):
        images[label] = FockPolynomial(
            outs, {tuple(int(j == i) for j in range(len(outs))): m.matrix[i, n] for i in range(len(outs))}
        )
    result = FockPolynomial(outs)
    for exps, coeff in state.terms.items():
        term = FockPolynomial.vacuum(outs) * coeff
        for mode, power in zip(state.modes, exps):
            if power:
                term = term * images[mode] ** power
        result = result + term
    return result


@dataclass
class FockAmplitudes:
    modes: tuple[str, ...]
    amplitudes: dict[tuple[int, ...], complex] = field(default_factory=dict)
    norm: float = 0.0

    def __getitem__(self, occupation) -> complex:
        return self.amplitudes.get(tuple(occupation), 0j)


def occupations(n_photons: int, n_modes: int) -> list[tuple[int, ...]]:
    """All occupation vectors with the given total, in descending lexicographic order."""
    out = []
    for combo in combinations_with_replacement(range(n_modes), n_photons):
        occ = [0] * n_modes
        for i in combo:
            occ[i] += 1
        out.append(tuple(occ))
    return sorted(out, reverse=True)


def fock_amplitudes(state: FockPolynomial, normalize: bool = False, complete: bool = False) -> FockAmplitudes:
    """<n|psi> for each occupation vector, using (a^dag)^n |0> = sqrt(n!) |n>.

    ``norm`` is the norm before any renormalisation. With ``complete`` every
    occupation vector sharing a photon number with the state is listed,
    zeros included.
    """
    amps = {
        exps: coeff * math.sqrt(math.prod(math.factorial(n) for n in exps))
        for exps, coeff in state.terms.items()
    }
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    if normalize and norm > 0:
        amps = {e: a / norm for e, a in amps.items()}
    if complete:
        totals = sorted({sum(e) for e in amps}) or [0]
        full = {}
        for n in totals:
            for occ in occupations(n, len(state.modes)):
                full[occ] = amps.get(occ, 0j)
        amps = full
    return FockAmplitudes(state.modes, amps, norm)
