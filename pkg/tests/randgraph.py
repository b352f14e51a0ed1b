"""Random weighted multigraphs for property tests."""
import numpy as np

from wavegraph.graph import OpticalGraph


def random_graph(rng, n=None, density=0.4, radius=0.9, norm="spectral", loops=True, parallel=True, ports=True):
    """Random graph whose entrywise-magnitude matrix has spectral radius (or max row sum) < ``radius``.

    Bounding |W| rather than W keeps every intermediate loop weight below 1 in
    modulus, so elimination never hits a divergent loop.
    """
    n = int(rng.integers(3, 11)) if n is None else n
    g = OpticalGraph()
    ids = [g.add_state(f"S{i}") for i in range(n)]
    edges = []
    for u in ids:
        for v in ids:
            if u == v and not loops:
                continue
            if rng.random() < density:
                copies = int(rng.integers(1, 3)) if parallel else 1
                for _ in range(copies):
                    edges.append((u, v, complex(rng.normal(), rng.normal())))
    mag = np.zeros((n, n))
    for u, v, w in edges:
        mag[u, v] += abs(w)
    if norm == "spectral":
        # a nilpotent |W| has spectral radius 0; the row-sum floor keeps weights O(1)
        size = max(abs(np.linalg.eigvals(mag)).max(), 0.1 * mag.sum(axis=1).max(), 1e-300)
    else:
        size = max(mag.sum(axis=1).max(), 1e-300)
    scale = radius * rng.uniform(0.3, 1.0) / size
    for u, v, w in edges:
        g.add_edge(u, v, w * scale)
    if ports:
        picks = rng.permutation(ids)
        g.set_ports([int(picks[0])], [int(picks[1])])
    return g


def dense_resolvent(g):
    """(I - W)^-1 keyed by (label, label)."""
    w = g.weight_matrix()
    inv = np.linalg.inv(np.eye(len(w)) - w)
    labels = g.labels
    return {(a, b): inv[i, j] for i, a in enumerate(labels) for j, b in enumerate(labels)}


def phi(g, src, dst):
    """Summed weight of all edges src -> dst, by label."""
    return sum((g.edge(e).weight for e in g.edges_between(g.state(src), g.state(dst))), 0j)


def enumerate_walks(g, s, t, max_len):
    """Weights of every walk s -> t with 1..max_len edges (brute force over edge ids)."""
    out = []

    def dfs(v, weight, depth):
        for eid in g.out_edges(v, loops=True):
            edge = g.edge(eid)
            w = weight * edge.weight
            if edge.dst == t:
                out.append(w)
            if depth + 1 < max_len:
                dfs(edge.dst, w, depth + 1)

    dfs(s, 1 + 0j, 0)
    return out
