"""Time the batched elimination kernels against each other and the rules engine.

    python3 benchmarks/bench_kernels.py --membranes 8 --points 20000

The numba column is skipped when numba is missing or WAVEGRAPH_DISABLE_NUMBA
is set. Every backend is checked against the numpy result before timing.
"""
import argparse
import math
import time

import numpy as np

from wavegraph import commands, kernels, scene_io
from wavegraph.elements import Element, membrane_cavity_scene
from wavegraph.reduction import response_factor


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--membranes", type=int, default=8)
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--rules-points", type=int, default=200, help="points timed for the pure-Python engine")
    args = parser.parse_args(argv)

    n = args.membranes
    spec = membrane_cavity_scene(Element.mirror(0.9, math.sqrt(0.19)), [Element.membrane(0.4, math.sqrt(0.84))] * n,
                                 np.linspace(0.8, 1.2, n + 1))
    tmpl = scene_io.template_from_spec(spec)
    source, target = spec.inputs[0], spec.outputs[0]
    evaluator = commands.BatchEvaluator(tmpl, source, target)
    ks = np.linspace(1.0, 10.0, args.points)
    w = evaluator.matrices(ks)
    order, s, t = evaluator.order, evaluator.s, evaluator.t

    reference = kernels.eliminate_numpy(w, order, s, t)
    rows = [("numpy", best_of(lambda: kernels.eliminate_numpy(w, order, s, t), args.repeat), args.points)]
    if kernels.HAVE_NUMBA:
        got = kernels.eliminate_numba(w, order, s, t)  # first call compiles (or loads the cache)
        np.testing.assert_allclose(got, reference, rtol=1e-10, atol=1e-14)
        rows.append(("numba", best_of(lambda: kernels.eliminate_numba(w, order, s, t), args.repeat), args.points))
    few = ks[: args.rules_points]
    slow = [response_factor(tmpl.graph(k), source, target).value for k in few]
    np.testing.assert_allclose(slow, reference[: len(few)], rtol=1e-10, atol=1e-14)
    rows.append(("rules", best_of(lambda: [response_factor(tmpl.graph(k), source, target) for k in few], 1),
                 len(few)))

    print(f"{n} membranes, {evaluator.n} states after pruning, {args.points} wavenumbers")
    print(f"{'backend':<8}{'points':>8}{'seconds':>12}{'us/point':>12}")
    for name, seconds, points in rows:
        print(f"{name:<8}{points:>8}{seconds:>12.4f}{1e6 * seconds / points:>12.2f}")


if __name__ == "__main__":
    main()
