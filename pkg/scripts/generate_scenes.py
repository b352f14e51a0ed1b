"""Regenerate the bundled scene files in src/wavegraph/scenes/.

Coefficients come from the element builders. Lengths are written as named
parameters so that ``--param`` and ``scan`` can vary them; the per-edge
multipliers are recovered by building each scene with parameter j set to
10**j and reading the decimal digits of every edge length.
"""
import math
from pathlib import Path

from wavegraph import elements, scene_io

OUT = Path(__file__).resolve().parents[1] / "src" / "wavegraph" / "scenes"
S = 1 / math.sqrt(2)


def templated(build, params):
    """Template of ``build(**lengths)`` with every length expressed in ``params``."""
    names = list(params)
    probe = build(**{n: 10.0**j for j, n in enumerate(names)})
    tmpl = scene_io.template_from_spec(build(**params))
    for edge, probed in zip(tmpl.edges, probe.edges):
        digits = int(round(probed.pathlength))
        assert abs(probed.pathlength - digits) < 1e-9
        terms = {}
        for n in names:
            digits, mult = divmod(digits, 10)
            if mult:
                terms[n] = mult
        assert digits == 0, "multiplier above 9"
        if not terms:
            edge["pathlength"] = 0.0
        elif len(terms) == 1 and next(iter(terms.values())) == 1:
            edge["pathlength"] = next(iter(terms))
        else:
            edge["pathlength"] = terms
    tmpl.params = dict(params)
    scene_io.SceneTemplate.from_dict(tmpl.to_dict())
    return tmpl


def main():
    scenes = {}
    # wavelength 1 (k = 2 pi) is the reference unit for every default length
    scenes["michelson"] = templated(lambda d1, d2: elements.michelson_scene(S, S, d1, d2), {"d1": 1.0, "d2": 1.0})
    r = 0.9
    scenes["fabry_perot"] = templated(
        lambda d: elements.fabry_perot_scene(r, math.sqrt(1 - r * r), d, reflection_port=True), {"d": 1.0})
    mirror = elements.Element.mirror(0.9, math.sqrt(1 - 0.81))
    membranes = [elements.Element.membrane(0.5, math.sqrt(0.75)), elements.Element.membrane(0.6, 0.8)]
    scenes["membranes_n2"] = templated(
        lambda d1, d2, d3: elements.membrane_cavity_scene(mirror, membranes, [d1, d2, d3], labels="ABCDE"),
        {"d1": 1.0, "d2": 1.0, "d3": 1.0})
    # resonant arms (d2, d4 multiples of lambda/2), dark port d1 = d3 + lambda/4, lossy arm mirrors
    scenes["ligo"] = templated(
        lambda **d: elements.cavity_enhanced_michelson_scene(0.9, math.sqrt(0.19), S, S, 0.9, 0.3, **d),
        {"d0": 0.3, "d1": 2.25, "d2": 1.0, "d3": 2.0, "d4": 1.5})
    # the arm phase theta = k * delta; delta = 0 gives theta = 0 at every k
    mz = scene_io.template_from_spec(elements.mach_zehnder_scene(S, S, 0.0))
    for edge in mz.edges:
        if edge["from"] == "D":
            edge["pathlength"] = "delta"
    mz.params = {"delta": 0.0}
    scenes["mach_zehnder"] = mz
    scenes["beam_splitter"] = scene_io.template_from_spec(elements.beam_splitter_scene(S, S))
    for name, tmpl in scenes.items():
        scene_io.save(tmpl, OUT / f"{name}.json")
        print("wrote", OUT / f"{name}.json")


if __name__ == "__main__":
    main()
