"""Structural measures: clustering, k-cores, hop lengths, bridges."""

import csv
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse.csgraph import shortest_path

SCHEMA_VERSION = 1

# exact all-pairs hop counting up to this many nodes; sampled above
EXACT_HOP_LIMIT = 20000
DEFAULT_HOP_SOURCES = 256

DISTRIBUTIONS = ("degree_histogram", "cc_by_degree", "hop_histogram",
                 "kcore_nodes", "kcore_edges")


class ReportFormatError(ValueError):
    pass


def triangles_per_node(g):
    """Triangle count at every node.

    Edges are oriented from lower to higher (degree, id) rank and each
    triangle is found once, as the intersection of two out-neighbour sets.
    """
    n = g.node_count
    adj = g.adjacency
    deg = [len(a) for a in adj]
    rank = sorted(range(n), key=lambda v: (deg[v], v))
    pos = [0] * n
    for i, v in enumerate(rank):
        pos[v] = i
    out = [set(w for w in adj[v] if pos[w] > pos[v]) for v in range(n)]
    tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        ou = out[u]
        if len(ou) < 2:
            continue
        for v in ou:
            common = ou & out[v]
            if common:
                c = len(common)
                tri[u] += c
                tri[v] += c
                for w in common:
                    tri[w] += 1
    return tri


def triangles_at(g, v):
    """Number of adjacent neighbour pairs of ``v``."""
    nbrs = g.adjacency[v]
    s = set(nbrs)
    return sum(1 for u in nbrs for w in g.adjacency[u] if w in s) // 2


def triples_at(g, v):
    d = g.degree(v)
    return d * (d - 1) // 2


def local_cc(g, v):
    """Triangles over triples at ``v``; 0 when ``degree(v) < 2``."""
    t = triples_at(g, v)
    return triangles_at(g, v) / t if t else 0.0


def local_cc_all(g, tri=None):
    if tri is None:
        tri = triangles_per_node(g)
    d = g.degrees()
    triples = d * (d - 1) // 2
    cc = np.zeros(g.node_count, dtype=float)
    mask = triples > 0
    cc[mask] = tri[mask] / triples[mask]
    return cc


def avg_cc(g, tri=None):
    """Mean local clustering over all nodes, degree<2 nodes counting as 0."""
    if g.node_count == 0:
        return 0.0
    return float(local_cc_all(g, tri).mean())


def triangle_total(g, tri=None):
    if tri is None:
        tri = triangles_per_node(g)
    total = int(tri.sum())
    assert total % 3 == 0
    return total // 3


def triple_total(g):
    d = g.degrees()
    return int((d * (d - 1) // 2).sum())


def global_cc(g, tri=None):
    """Three times the triangle count over the triple count (0 if no triples)."""
    t = triple_total(g)
    if t == 0:
        return 0.0
    return 3 * triangle_total(g, tri) / t


def core_numbers(g):
    """Core number of every node by bucket-queue peeling.

    Nodes are kept sorted by current degree in one array with bucket start
    offsets, so each removal and neighbour update is O(1).
    """
    n = g.node_count
    adj = g.adjacency
    deg = [len(a) for a in adj]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    md = max(deg)
    bin_ = [0] * (md + 1)
    for d in deg:
        bin_[d] += 1
    start = 0
    for d in range(md + 1):
        bin_[d], start = start, start + bin_[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bin_[deg[v]]
        vert[pos[v]] = v
        bin_[deg[v]] += 1
    for d in range(md, 0, -1):
        bin_[d] = bin_[d - 1]
    bin_[0] = 0
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for u in adj[v]:
            du = deg[u]
            if du > dv:
                pu = pos[u]
                pw = bin_[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bin_[du] += 1
                deg[u] = du - 1
    return np.array(deg, dtype=np.int64)


def kcore(g):
    """Core numbers plus per-k node and edge counts.

    Returns
    -------
    core : numpy.ndarray
    kcore_nodes : dict
        ``k -> number of nodes with core number >= k`` for ``k = 1..kmax``.
    kcore_edges : dict
        ``k -> number of edges whose endpoints both have core number >= k``.
    """
    core = core_numbers(g)
    if core.size == 0 or core.max() == 0:
        return core, {}, {}
    kmax = int(core.max())
    node_counts = np.bincount(core, minlength=kmax + 1)
    ge_nodes = np.cumsum(node_counts[::-1])[::-1]
    e = g.sorted_edges()
    emin = np.minimum(core[e[:, 0]], core[e[:, 1]])
    edge_counts = np.bincount(emin, minlength=kmax + 1)
    ge_edges = np.cumsum(edge_counts[::-1])[::-1]
    ks = range(1, kmax + 1)
    return (core, {k: int(ge_nodes[k]) for k in ks},
            {k: int(ge_edges[k]) for k in ks})


def hop_histogram(g, sources="all", seed=None):
    """Histogram of shortest-path hop lengths.

    Parameters
    ----------
    g : Graph
    sources : "all" or int
        ``"all"`` counts every connected unordered pair once. An integer
        runs BFS from that many uniformly chosen sources and counts
        ``(source, target)`` pairs; only the shape is comparable then.
    seed : int or numpy.random.Generator, optional
        Used to pick sources when sampling.

    Returns
    -------
    hist : dict
        ``hop -> pair count``.
    used : int
        Number of BFS sources, 0 for the exact count.
    """
    n = g.node_count
    if n == 0:
        return {}, 0
    csr = g.to_csr()
    exact = sources == "all"
    if exact:
        src = np.arange(n)
    else:
        k = int(sources)
        if k < 1:
            raise ValueError("sources must be 'all' or a positive count")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        src = np.sort(rng.choice(n, size=min(k, n), replace=False))
    counts = np.zeros(1, dtype=np.int64)
    chunk = max(1, (1 << 22) // n)
    for lo in range(0, src.size, chunk):
        idx = src[lo:lo + chunk]
        dist = shortest_path(csr, unweighted=True, directed=False, indices=idx)
        if exact:
            # keep j > i so each unordered pair is counted once
            dist[np.arange(n)[None, :] <= idx[:, None]] = np.inf
        else:
            dist[np.arange(idx.size), idx] = np.inf
        finite = dist[np.isfinite(dist)].astype(np.int64)
        c = np.bincount(finite)
        if c.size > counts.size:
            c[:counts.size] += counts
            counts = c
        else:
            counts[:c.size] += c
    hist = {int(h): int(c) for h, c in enumerate(counts) if h > 0 and c > 0}
    return hist, (0 if exact else int(src.size))


def bridges(g):
    """All cut edges as ``(u, v)`` pairs, via one iterative low-link DFS."""
    n = g.node_count
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    out = []
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        # frames: (node, parent, next neighbour index); parent edge skipped once
        stack = [[root, -1, 0]]
        while stack:
            frame = stack[-1]
            v, parent, i = frame
            nbrs = adj[v]
            if i < len(nbrs):
                frame[2] = i + 1
                w = nbrs[i]
                if w == parent:
                    # simple graph: the single tree edge back to the parent
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append([w, v, 0])
                elif disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                stack.pop()
                if parent >= 0:
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                    if low[v] > disc[parent]:
                        out.append((parent, v) if parent < v else (v, parent))
    return out


def bridge_count(g):
    return len(bridges(g))


def degree_histogram(g):
    d = g.degrees()
    if d.size == 0:
        return {}
    c = np.bincount(d)
    return {int(k): int(x) for k, x in enumerate(c) if x}


def cc_by_degree(g, cc=None):
    """Mean, min and max local clustering per degree, for degrees >= 2."""
    d = g.degrees()
    if cc is None:
        cc = local_cc_all(g)
    out = {}
    for k in np.unique(d):
        if k < 2:
            continue
        vals = cc[d == k]
        out[int(k)] = {"mean": float(vals.mean()), "min": float(vals.min()),
                       "max": float(vals.max())}
    return out


@dataclass
class MetricReport:
    name: str
    n: int
    m: int
    degree_histogram: dict
    cc_by_degree: dict
    avg_cc: float
    global_cc: float
    triangle_total: int
    triple_total: int
    kcore_nodes: dict
    kcore_edges: dict
    hop_histogram: dict
    bridge_count: int
    sampled_sources: int
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        return d

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ReportFormatError(
                f"report schema_version {d.get('schema_version')!r}, expected {SCHEMA_VERSION}")
        d = dict(d)
        d.pop("schema_version")
        for name in DISTRIBUTIONS:
            if name not in d:
                raise ReportFormatError(f"report is missing field {name!r}")
            d[name] = {int(k): v for k, v in d[name].items()}
        try:
            return cls(**d)
        except TypeError as exc:
            raise ReportFormatError(str(exc)) from None

    def save_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def write_csvs(self, directory):
        """One ``<distribution>.csv`` per distribution; returns the paths."""
        os.makedirs(directory, exist_ok=True)
        paths = []
        for name in DISTRIBUTIONS:
            path = os.path.join(directory, f"{name}.csv")
            table = getattr(self, name)
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                if name == "cc_by_degree":
                    w.writerow(["key", "mean", "min", "max"])
                    for k in sorted(table):
                        r = table[k]
                        w.writerow([k, repr(r["mean"]), repr(r["min"]), repr(r["max"])])
                else:
                    w.writerow(["key", "count"])
                    for k in sorted(table):
                        w.writerow([k, table[k]])
            paths.append(path)
        return paths


def measure(g, name="graph", sources=None, seed=None):
    """Compute every metric of :class:`MetricReport` for ``g``.

    ``sources=None`` picks exact hop counting up to ``EXACT_HOP_LIMIT`` nodes
    and ``DEFAULT_HOP_SOURCES`` sampled BFS sources beyond.
    """
    tri = triangles_per_node(g)
    cc = local_cc_all(g, tri)
    d = g.degrees()
    if sources is None:
        sources = "all" if g.node_count <= EXACT_HOP_LIMIT else DEFAULT_HOP_SOURCES
    hops, used = hop_histogram(g, sources, seed)
    _, kn, ke = kcore(g)
    eligible = d >= 2
    return MetricReport(
        name=name,
        n=g.node_count,
        m=g.edge_count,
        degree_histogram=degree_histogram(g),
        cc_by_degree=cc_by_degree(g, cc),
        avg_cc=float(cc.mean()) if cc.size else 0.0,
        global_cc=global_cc(g, tri),
        triangle_total=triangle_total(g, tri),
        triple_total=triple_total(g),
        kcore_nodes=kn,
        kcore_edges=ke,
        hop_histogram=hops,
        bridge_count=bridge_count(g),
        sampled_sources=used,
        meta={
            "local_cc_convention": "degree<2 counts as 0 in avg_cc",
            "avg_cc_degree_ge2": float(cc[eligible].mean()) if eligible.any() else 0.0,
            "hop_sources": sources,
        },
    )
