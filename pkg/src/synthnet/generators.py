"""Residual-degree driven topology generators.

Three generators share one skeleton: a triangle phase that closes triads
among nodes drawn by residual degree until the triangle target or the edge
budget runs out, followed by a single-edge phase.

* ``synth`` spends the remaining edge budget on single edges; residual
  degrees are decremented normally throughout.
* ``sage`` floors residual degrees at 1 during the triangle phase, so nodes
  stay sampleable after exhausting their nominal degree.
* ``siege`` runs the ``sage`` triangle phase, then discards the leftover
  budget and adds ``eb_count`` single edges instead.

Before a closure, the residual degrees of the three drawn nodes are checked.
Under ``rd_check="cover"`` (the default) each node must have at least as much
residual degree as the closure would add edges at it, so no node overshoots
its target degree by way of a triangle. Under ``rd_check="positive"`` a node
only needs residual degree 1; a closure can then add two edges to a node with
one stub left, which rounds odd target degrees up and leaves more of the
budget inside triangles.
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph
from .sampler import ExhaustedDistribution, ResidualDistribution

ALGORITHMS = ("synth", "sage", "siege")
RD_CHECKS = ("cover", "positive")

# consecutive zero-edge attempts tolerated per phase, in units of step
STALL_FACTOR = 50

# edges between progress callbacks
PROGRESS_EVERY = 1_000_000


class GeneratorInputError(ValueError):
    pass


@dataclass
class GenParams:
    """Generator input.

    Attributes
    ----------
    n : int
        Number of nodes.
    degrees : numpy.ndarray
        Target degree sequence, one entry per node.
    cg_target : float
        Target global clustering coefficient in ``[0, 1]``.
    step : int
        Samples served by one residual-degree snapshot.
    eb_count : int or None
        Single-edge budget for ``siege`` (bridge count of the source graph).
    rd_check : {"cover", "positive"}
        Residual-degree test applied before closing a triangle.
    """

    n: int
    degrees: np.ndarray
    cg_target: float
    step: int = 1
    eb_count: int | None = None
    rd_check: str = "cover"

    def __post_init__(self):
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        self.n = int(self.n)
        if self.degrees.ndim != 1 or self.degrees.size != self.n:
            raise GeneratorInputError(
                f"degree sequence has length {self.degrees.size}, expected n={self.n}")
        if (self.degrees < 0).any():
            raise GeneratorInputError("degrees must be non-negative")
        if not 0.0 <= self.cg_target <= 1.0:
            raise GeneratorInputError(f"cg_target must lie in [0, 1], got {self.cg_target}")
        if int(self.step) < 1:
            raise GeneratorInputError(f"step must be >= 1, got {self.step}")
        self.step = int(self.step)
        if self.eb_count is not None:
            if int(self.eb_count) < 0:
                raise GeneratorInputError("eb_count must be non-negative")
            self.eb_count = int(self.eb_count)
        if self.rd_check not in RD_CHECKS:
            raise GeneratorInputError(
                f"rd_check must be one of {', '.join(RD_CHECKS)}, got {self.rd_check!r}")


@dataclass
class GenOutcome:
    graph: Graph
    algorithm: str
    triangles_attempted: int
    triangles_remaining: int
    edges_budget: int
    edges_remaining: int
    phase_log: dict = field(default_factory=dict)

    def summary(self):
        """JSON-friendly record of everything except the graph."""
        return {
            "algorithm": self.algorithm,
            "n": self.graph.node_count,
            "m": self.graph.edge_count,
            "triangles_attempted": self.triangles_attempted,
            "triangles_remaining": self.triangles_remaining,
            "edges_budget": self.edges_budget,
            "edges_remaining": self.edges_remaining,
            "phase_log": self.phase_log,
        }


def edge_budget(degrees):
    """Number of edges the degree sequence can fund: ``floor(sum(d) / 2)``."""
    return int(np.asarray(degrees, dtype=np.int64).sum()) // 2


def triangle_target(degrees, cg_target):
    """Triangles needed to reach ``cg_target`` given the sequence's triples."""
    d = np.asarray(degrees, dtype=np.int64)
    triples = int((d * (d - 1) // 2).sum())
    # decimal value of cg_target, so 0.3 * 10 / 3 floors to 1, not 0
    return int(Fraction(repr(float(cg_target))) * triples // 3)


def close_triangle(g, u, v, w, rdist=None, attenuated=False):
    """Add whichever of ``uv, vw, uw`` are missing and return how many were added.

    When ``rdist`` is given, both endpoints of every new edge lose one unit of
    residual degree: saturating at 0, or floored at 1 if ``attenuated``.
    """
    if u == v or v == w or u == w:
        raise GeneratorInputError("triangle endpoints must be distinct")
    if rdist is None:
        dec = None
    elif attenuated:
        dec = rdist.decrement_attenuated
    else:
        dec = rdist.decrement_saturating
    added = 0
    for a, b in ((u, v), (v, w), (u, w)):
        if g.add_edge(a, b):
            added += 1
            if dec is not None:
                dec(a)
                dec(b)
    return added


class _KeyFilter:
    """Bitset over hashed edge keys; a clear bit proves the key absent.

    Lets a whole window of candidate pairs be screened in numpy, with the
    exact set lookup reserved for the few keys whose bit is set.
    """

    _MUL = 0x9E3779B97F4A7C15
    _MASK = (1 << 64) - 1

    def __init__(self, capacity, keys=()):
        bits = min(max(16, (16 * max(int(capacity), 1)).bit_length()), 34)
        self.shift = 64 - bits
        self.table = np.zeros(1 << (bits - 3), dtype=np.uint8)
        if keys:
            h = self._hash(np.fromiter(keys, dtype=np.int64, count=len(keys)))
            np.bitwise_or.at(self.table, (h >> np.uint64(3)).astype(np.intp),
                             np.left_shift(1, (h & np.uint64(7)).astype(np.uint8)))

    def _hash(self, k):
        return (k.astype(np.uint64) * np.uint64(self._MUL)) >> np.uint64(self.shift)

    def add(self, key):
        h = ((key * self._MUL) & self._MASK) >> self.shift
        self.table[h >> 3] |= 1 << (h & 7)

    def maybe(self, k):
        """Boolean array: True where ``k`` may be present."""
        h = self._hash(k)
        byte = self.table[(h >> np.uint64(3)).astype(np.intp)]
        return ((byte >> (h & np.uint64(7)).astype(np.uint8)) & 1).astype(bool)


class _TriangleRun:
    """Mutable state of one triangle phase, advanced window by window.

    Every window is a batch of candidate triples drawn from one snapshot and
    evaluated in order, exactly as if they had been drawn one at a time.
    """

    def __init__(self, g, rdist, T, M, attenuated, cover, progress):
        self.g = g
        self.n = g.node_count
        self.keys = g._keys
        self.rd = rdist.rd
        # scalar reads from a list are far cheaper than from numpy
        self.rdl = rdist.rd.tolist()
        self.floor = 1 if attenuated else 0
        self.cover = cover
        self.T = T
        self.M = M
        self.stall = 0
        self.stall_limit = STALL_FACTOR * rdist.step
        self.attempts = 0
        self.edges = 0
        self.closures = 0
        self.stop = None
        self.progress = progress
        self.next_report = PROGRESS_EVERY
        self.filter = _KeyFilter(g.edge_count + M, self.keys)

    def check_stop(self):
        if self.T <= 0:
            self.stop = "target"
        elif self.M <= 0:
            self.stop = "budget"
        elif self.stall >= self.stall_limit:
            self.stop = "stall"
        return self.stop

    def _close(self, u, v, w, missing):
        """Add the ``missing`` pairs of triangle ``u, v, w``; rd drops per edge."""
        adj = self.g.adjacency
        rdl = self.rdl
        floor = self.floor
        n = self.n
        for a, b in missing:
            key = a * n + b if a < b else b * n + a
            self.keys.add(key)
            self.filter.add(key)
            adj[a].append(b)
            adj[b].append(a)
            if rdl[a] > floor:
                rdl[a] -= 1
            if rdl[b] > floor:
                rdl[b] -= 1
        self.g.edge_count += len(missing)
        rd = self.rd
        rd[u] = rdl[u]
        rd[v] = rdl[v]
        rd[w] = rdl[w]
        new = len(missing)
        self.M -= new
        self.T -= 1
        self.edges += new
        self.closures += 1
        self.stall = 0
        if self.progress is not None and self.edges >= self.next_report:
            self.progress("triangle", self.g.edge_count)
            self.next_report += PROGRESS_EVERY

    def attempt(self, u, v, w):
        """One exact attempt; returns the keys it added (empty on rejection)."""
        keys = self.keys
        n = self.n
        rdl = self.rdl
        self.attempts += 1
        kuv = u * n + v if u < v else v * n + u
        kvw = v * n + w if v < w else w * n + v
        kuw = u * n + w if u < w else w * n + u
        uv = kuv not in keys
        vw = kvw not in keys
        uw = kuw not in keys
        new = uv + vw + uw
        if self.cover:
            bad = rdl[u] < uv + uw or rdl[v] < uv + vw or rdl[w] < vw + uw
        else:
            bad = rdl[u] < 1 or rdl[v] < 1 or rdl[w] < 1
        if new == 0 or new > self.M or bad:
            self.stall += 1
            return ()
        missing = []
        added = []
        if uv:
            missing.append((u, v))
            added.append(kuv)
        if vw:
            missing.append((v, w))
            added.append(kvw)
        if uw:
            missing.append((u, w))
            added.append(kuw)
        self._close(u, v, w, missing)
        return added

    def scan_dense(self, rows):
        """Evaluate candidate rows one by one; returns rows consumed."""
        attempt = self.attempt
        for i, (u, v, w) in enumerate(rows):
            if self.stall >= self.stall_limit:
                self.stop = "stall"
                return i
            if attempt(u, v, w) and (self.T <= 0 or self.M <= 0):
                self.check_stop()
                return i + 1
        return len(rows)

    def _skip(self, gap):
        """Count ``gap`` rows known to be rejected, stopping at the stall
        limit; returns how many rows were consumed."""
        room = self.stall_limit - self.stall
        if gap >= room:
            self.attempts += room
            self.stall = self.stall_limit
            self.stop = "stall"
            return room
        self.attempts += gap
        self.stall += gap
        return gap

    def scan(self, cand):
        """Evaluate a ``(rows, 3)`` window of candidates; returns rows consumed.

        Residual degrees and ``M`` only fall and edges are only added, so a
        candidate that fails against the window-start state keeps failing
        unless an earlier acceptance in the same window adds one of its
        pairs. Only start-state survivors, plus candidates sharing a pair
        with an accepted closure, need the exact sequential check; the rest
        are counted as rejections in bulk.
        """
        rows = len(cand)
        if rows < 256:
            return self.scan_dense(cand.tolist())
        n = self.n
        u, v, w = cand[:, 0], cand[:, 1], cand[:, 2]
        K = np.empty((rows, 3), dtype=np.int64)
        K[:, 0] = np.minimum(u, v) * n + np.maximum(u, v)
        K[:, 1] = np.minimum(v, w) * n + np.maximum(v, w)
        K[:, 2] = np.minimum(u, w) * n + np.maximum(u, w)
        flat = K.ravel()
        miss = ~self.filter.maybe(flat)
        check = np.flatnonzero(~miss)
        if check.size:
            keys = self.keys
            miss[check] = [k not in keys for k in flat[check].tolist()]
        miss = miss.reshape(rows, 3).astype(np.int64)
        new = miss.sum(axis=1)
        rd = self.rd
        if self.cover:
            ok = ((rd[u] >= miss[:, 0] + miss[:, 2]) & (rd[v] >= miss[:, 0] + miss[:, 1])
                  & (rd[w] >= miss[:, 1] + miss[:, 2]))
        else:
            ok = (rd[u] >= 1) & (rd[v] >= 1) & (rd[w] >= 1)
        live = ok & (new > 0) & (new <= self.M)
        heap = np.flatnonzero(live).tolist()
        if 4 * len(heap) > rows:
            return self.scan_dense(cand.tolist())
        order = sorted_keys = None
        pos = 0
        while heap:
            j = heapq.heappop(heap)
            took = self._skip(j - pos)
            if self.stop is not None:
                return pos + took
            a, b, c = (int(x) for x in cand[j])
            added = self.attempt(a, b, c)
            pos = j + 1
            if not added:
                continue
            if self.T <= 0 or self.M <= 0:
                self.check_stop()
                return pos
            if order is None:
                order = np.argsort(flat, kind="stable")
                sorted_keys = flat[order]
            for key in added:
                lo = np.searchsorted(sorted_keys, key, side="left")
                hi = np.searchsorted(sorted_keys, key, side="right")
                for r in (order[lo:hi] // 3).tolist():
                    if r > j and not live[r]:
                        live[r] = True
                        heapq.heappush(heap, r)
        return pos + self._skip(rows - pos)


def _triangle_phase(g, rdist, T, M, attenuated, cover=True, progress=None):
    """Close triads until ``T`` or ``M`` hits zero, the sampler runs dry, or
    ``STALL_FACTOR * step`` consecutive attempts add nothing.

    A drawn triple is rejected when it already forms a triangle, when closing
    it would overdraw ``M``, or when a node's residual degree fails the check:
    with ``cover`` it must be at least the number of new edges at that node,
    otherwise merely positive (a stale snapshot can still yield zeros).
    """
    log = {"edges": 0, "closures": 0, "attempts": 0, "stop": None}
    if T <= 0 or M <= 0:
        log["stop"] = "target" if T <= 0 else "budget"
        return T, M, log
    run = _TriangleRun(g, rdist, T, M, attenuated, cover, progress)
    used = 0
    while run.check_stop() is None:
        try:
            rdist.snapshot()
        except ExhaustedDistribution:
            run.stop = "exhausted"
            break
        cand = rdist.draw_rows(3, rdist.step) if rdist._positive >= 3 else ()
        if len(cand) == 0:
            run.stop = "exhausted"
            break
        used = run.scan(cand)
    # the single-edge phase continues on the last snapshot
    rdist.samples_since_snapshot = used
    rdist._buf = []
    rdist._pos = 0
    log.update(edges=run.edges, closures=run.closures, attempts=run.attempts, stop=run.stop)
    return run.T, run.M, log


def _single_phase(g, rdist, budget, mode, progress=None, phase="single"):
    """Add single edges between distinct sampled nodes until ``budget`` is spent.

    ``mode`` is ``"plain"`` (both endpoints need residual degree left and are
    decremented) or ``"floor0"`` (decrement whichever endpoints are still
    positive).
    """
    log = {"edges": 0, "attempts": 0, "stop": None}
    if budget <= 0:
        log["stop"] = "budget"
        return budget, log
    stall_limit = STALL_FACTOR * rdist.step
    rd = rdist.rd
    keys = g._keys
    adj = g.adjacency
    n = g.node_count
    sample = rdist.sample_distinct
    plain = mode == "plain"
    stall = 0
    attempts = 0
    edges = 0
    stop = None
    next_report = PROGRESS_EVERY
    while True:
        if budget <= 0:
            stop = "budget"
            break
        if stall >= stall_limit:
            stop = "stall"
            break
        try:
            u, v = sample(2)
        except ExhaustedDistribution:
            stop = "exhausted"
            break
        attempts += 1
        key = u * n + v if u < v else v * n + u
        if key in keys or (plain and (rd[u] < 1 or rd[v] < 1)):
            stall += 1
            continue
        keys.add(key)
        adj[u].append(v)
        adj[v].append(u)
        g.edge_count += 1
        if rd[u] >= 1:
            rd[u] -= 1
        if rd[v] >= 1:
            rd[v] -= 1
        budget -= 1
        edges += 1
        stall = 0
        if progress is not None and edges >= next_report:
            progress(phase, g.edge_count)
            next_report += PROGRESS_EVERY
    log.update(edges=edges, attempts=attempts, stop=stop)
    return budget, log


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _start(params, seed):
    g = Graph(params.n)
    rdist = ResidualDistribution(params.degrees, params.step, _rng(seed))
    M = edge_budget(params.degrees)
    T = triangle_target(params.degrees, params.cg_target)
    return g, rdist, T, M


def generate_synth(params, seed=None, progress=None):
    """Generate a topology with plain residual-degree bookkeeping.

    Parameters
    ----------
    params : GenParams
    seed : int, numpy.random.Generator or None
    progress : callable, optional
        Called as ``progress(phase, edge_count)`` every ``PROGRESS_EVERY``
        edges a phase adds.

    Returns
    -------
    GenOutcome
    """
    g, rdist, T0, M0 = _start(params, seed)
    T, M, tri = _triangle_phase(g, rdist, T0, M0, attenuated=False,
                                cover=params.rd_check == "cover", progress=progress)
    M_after, single = _single_phase(g, rdist, M, "plain", progress)
    return GenOutcome(g, "synth", T0, T, M0, M_after,
                      {"triangle": tri, "single": single})


def generate_sage(params, seed=None, progress=None):
    """Like :func:`generate_synth`, but residual degrees stop at 1 while
    closing triangles and may reach 0 in the single-edge phase."""
    g, rdist, T0, M0 = _start(params, seed)
    T, M, tri = _triangle_phase(g, rdist, T0, M0, attenuated=True,
                                cover=params.rd_check == "cover", progress=progress)
    M_after, single = _single_phase(g, rdist, M, "floor0", progress)
    return GenOutcome(g, "sage", T0, T, M0, M_after,
                      {"triangle": tri, "single": single})


def generate_siege(params, seed=None, progress=None):
    """SAGE triangle phase followed by ``params.eb_count`` single edges.

    Whatever edge budget the triangle phase leaves is dropped; the second
    phase is funded by the bridge count alone, so the output may carry more
    edges than the degree sequence implies.
    """
    if params.eb_count is None:
        raise GeneratorInputError("siege requires eb_count")
    g, rdist, T0, M0 = _start(params, seed)
    T, M, tri = _triangle_phase(g, rdist, T0, M0, attenuated=True,
                                cover=params.rd_check == "cover", progress=progress)
    eb_left, bridge = _single_phase(g, rdist, params.eb_count, "floor0",
                                    progress, "bridge")
    bridge["budget"] = params.eb_count
    bridge["remaining"] = eb_left
    return GenOutcome(g, "siege", T0, T, M0, M,
                      {"triangle": tri, "bridge": bridge})


GENERATORS = {
    "synth": generate_synth,
    "sage": generate_sage,
    "siege": generate_siege,
}


def generate(algorithm, params, seed=None, progress=None):
    try:
        fn = GENERATORS[algorithm]
    except KeyError:
        raise GeneratorInputError(
            f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}") from None
    return fn(params, seed, progress)


def powerlaw_degree_sequence(n, exponent=2.5, min_degree=1, max_degree=None, seed=None):
    """Sample ``n`` integer degrees from a discretised Pareto tail.

    Degrees are ``floor(min_degree * U**(-1/(exponent-1)))`` clipped to
    ``max_degree`` (default ``n - 1``). An odd total is fixed by bumping one
    minimum-degree node.
    """
    if exponent <= 1:
        raise ValueError("exponent must exceed 1")
    rng = _rng(seed)
    if max_degree is None:
        max_degree = max(n - 1, 0)
    u = 1.0 - rng.random(n)
    d = np.floor(min_degree * u ** (-1.0 / (exponent - 1.0)))
    d = np.minimum(d, max_degree).astype(np.int64)
    if n and d.sum() % 2:
        i = int(np.argmin(d))
        d[i] += 1 if d[i] < max_degree else -1
    return d
