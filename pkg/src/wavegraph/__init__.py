"""Interferometers as weighted directed graphs.

Build a graph of optical states, reduce it with local rewrite rules and read
off response factors; lift those to creation-operator transforms for
quantum states of light.
"""
from .errors import (
    DegreeCapExceeded,
    DivergentLoop,
    DuplicateLabel,
    ModeMismatch,
    PreconditionViolated,
    SceneParseError,
    SingularSystem,
    UndeclaredState,
    WaveGraphError,
)
from .elements import (
    Element,
    build_beam_splitter,
    build_cavity_enhanced_michelson,
    build_fabry_perot,
    build_mach_zehnder,
    build_membrane_cavity,
    build_michelson,
)
from .graph import EvalContext, OpticalGraph, WeightMonomial
from .oracle import response_factor_dense, walk_sum_truncated
from .reduction import ReductionTrace, ResponseFactor, response_factor, response_matrix
from .quantum import FockPolynomial, ModeTransform, apply_transform, fock_amplitudes, mode_transform

__all__ = [
    "DegreeCapExceeded",
    "DivergentLoop",
    "DuplicateLabel",
    "Element",
    "EvalContext",
    "FockPolynomial",
    "ModeMismatch",
    "ModeTransform",
    "OpticalGraph",
    "PreconditionViolated",
    "ReductionTrace",
    "ResponseFactor",
    "SceneParseError",
    "SingularSystem",
    "UndeclaredState",
    "WaveGraphError",
    "WeightMonomial",
    "apply_transform",
    "build_beam_splitter",
    "build_cavity_enhanced_michelson",
    "build_fabry_perot",
    "build_mach_zehnder",
    "build_membrane_cavity",
    "build_michelson",
    "fock_amplitudes",
    "mode_transform",
    "response_factor",
    "response_factor_dense",
    "response_matrix",
    "walk_sum_truncated",
]

__version__ = "0.1.0"
